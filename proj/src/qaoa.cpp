#include "cqaoa/qaoa.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cqaoa {

PreparedModel prepare(const ConstrainedProblem& problem, CompiledModel model, const PrepareOptions& options) {
  PreparedModel pm;
  pm.problem = problem;
  pm.model = std::move(model);
  const auto& layout = pm.model.layout;

  if (options.optimum) {
    pm.optimum = *options.optimum;
  } else {
    const auto sol = solve_exhaustive(problem);
    if (!sol) throw std::runtime_error("instance has no feasible solution");
    pm.optimum = sol->optimum;
  }

  const auto bits = layout.bits();
  pm.phase = bruteforce(compile_terms(pm.model.effective_cost, bits), bits, options.workers);
  pm.phase = apply_step_penalties(std::move(pm.phase), pm.model.if_constraints, pm.model.rho, layout);
  if (options.scaling == PhaseScaling::spread) {
    const double spread = pm.phase.max() - pm.phase.min();
    if (spread > 0.0) {
      pm.phase_scale = 1.0 / spread;
      for (auto& v : pm.phase.values()) v *= pm.phase_scale;
    }
  }

  pm.evaluation = evaluation_cost(problem, pm.model.eta, layout);
  const LinearFunction f[] = {problem.objective()};
  pm.objective = std::move(bruteforce_linear(f, layout).front());
  pm.violations = violation_counts(problem, layout);
  pm.random_avg = random_average(problem, pm.model.eta);
  const double spread = pm.evaluation.max() - pm.evaluation.min();
  pm.energy_scale = spread > 0.0 ? spread : 1.0;
  pm.layers = circuit_layers(pm.model);
  pm.search_space = pm.model.search_space();
  return pm;
}

namespace {

struct MixerAxes {
  std::size_t qubits = 0;
  std::vector<std::pair<std::size_t, std::size_t>> qudits;  // (axis, dim)
};

MixerAxes mixer_axes(const Layout& layout) {
  MixerAxes m;
  m.qubits = layout.binary_axes();
  for (std::size_t a = m.qubits; a < layout.sites.size(); ++a) m.qudits.emplace_back(a, layout.sites[a].dim);
  return m;
}

void apply_mixer(StateTensor& state, const MixerAxes& axes, double beta, bool inverse) {
  if (axes.qubits > 0) apply_x_mixer(state, axes.qubits, inverse ? -beta : beta);
  std::map<std::size_t, SquareMatrix> cache;
  for (const auto& [axis, d] : axes.qudits) {
    auto it = cache.find(d);
    if (it == cache.end()) {
      auto u = build_ring_mixer(d, beta);
      it = cache.emplace(d, inverse ? u.adjoint() : u).first;
    }
    apply_qudit_mixer(state, axis, it->second);
  }
}

// H psi for the mixer generator at beta (sum of X over qubits plus the
// effective ring generator on each qudit).
StateTensor apply_generator(const StateTensor& psi, const MixerAxes& axes, double beta) {
  StateTensor out(psi.shape());
  auto dst = out.amplitudes();
  const auto src = psi.amplitudes();
  const std::size_t n = src.size();
  std::size_t stride = n;
  for (std::size_t axis = 0; axis < axes.qubits; ++axis) {
    stride /= 2;
    for (std::size_t block = 0; block < n; block += 2 * stride) {
      for (std::size_t i = 0; i < stride; ++i) {
        dst[block + i] += src[block + stride + i];
        dst[block + stride + i] += src[block + i];
      }
    }
  }
  std::map<std::size_t, SquareMatrix> cache;
  StateTensor tmp;
  for (const auto& [axis, d] : axes.qudits) {
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, ring_mixer_generator(d, beta)).first;
    tmp = psi;
    apply_qudit_mixer(tmp, axis, it->second);
    const auto t = tmp.amplitudes();
    for (std::size_t i = 0; i < n; ++i) dst[i] += t[i];
  }
  return out;
}

void check_schedule(const Schedule& s) {
  if (s.gammas.size() != s.betas.size()) throw std::invalid_argument("gamma and beta lengths differ");
}

}  // namespace

StateTensor evolve(const PreparedModel& pm, const Schedule& schedule) {
  check_schedule(schedule);
  const auto shape = pm.model.layout.shape();
  auto state = init_state(shape, std::numeric_limits<std::uint64_t>::max());
  const auto axes = mixer_axes(pm.model.layout);
  for (std::size_t k = 0; k < schedule.depth(); ++k) {
    apply_phase(state, pm.phase, schedule.gammas[k]);
    apply_mixer(state, axes, schedule.betas[k], false);
  }
  return state;
}

double qaoa_energy(const PreparedModel& pm, const Schedule& schedule) {
  return expectation(evolve(pm, schedule), pm.evaluation);
}

std::vector<double> adjoint_gradient(const PreparedModel& pm, const Schedule& schedule, double* energy) {
  auto phi = evolve(pm, schedule);
  const auto axes = mixer_axes(pm.model.layout);
  const auto F = pm.evaluation.values();
  const auto C = pm.phase.values();

  StateTensor lambda = phi;
  {
    auto l = lambda.amplitudes();
    for (std::size_t i = 0; i < l.size(); ++i) l[i] *= F[i];
  }
  if (energy) *energy = inner_product(phi.amplitudes(), lambda.amplitudes()).real();

  const std::size_t p = schedule.depth();
  std::vector<double> grad(2 * p, 0.0);
  for (std::size_t k = p; k-- > 0;) {
    const auto h_phi = apply_generator(phi, axes, schedule.betas[k]);
    grad[p + k] = 2.0 * inner_product(lambda.amplitudes(), h_phi.amplitudes()).imag();
    apply_mixer(phi, axes, schedule.betas[k], true);
    apply_mixer(lambda, axes, schedule.betas[k], true);

    double g = 0.0;
    const auto a = phi.amplitudes();
    const auto l = lambda.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i) g += C[i] * (std::conj(l[i]) * a[i]).imag();
    grad[k] = 2.0 * g;
    if (k > 0) {
      apply_phase(phi, pm.phase, -schedule.gammas[k]);
      apply_phase(lambda, pm.phase, -schedule.gammas[k]);
    }
  }
  return grad;
}

std::vector<double> central_gradient(const PreparedModel& pm, const Schedule& schedule, double h) {
  check_schedule(schedule);
  const std::size_t p = schedule.depth();
  std::vector<double> grad(2 * p);
  for (std::size_t i = 0; i < 2 * p; ++i) {
    Schedule plus = schedule, minus = schedule;
    auto& a = i < p ? plus.gammas[i] : plus.betas[i - p];
    auto& b = i < p ? minus.gammas[i] : minus.betas[i - p];
    a += h;
    b -= h;
    grad[i] = (qaoa_energy(pm, plus) - qaoa_energy(pm, minus)) / (2.0 * h);
  }
  return grad;
}

namespace {

std::vector<double> flatten(const Schedule& s) {
  std::vector<double> x = s.gammas;
  x.insert(x.end(), s.betas.begin(), s.betas.end());
  return x;
}

Schedule unflatten(const std::vector<double>& x) {
  const std::size_t p = x.size() / 2;
  return Schedule{{x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p)},
                  {x.begin() + static_cast<std::ptrdiff_t>(p), x.end()}};
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Normalized objective and gradient.
struct Objective {
  const PreparedModel& pm;
  const OptimizerSettings& settings;
  int evaluations = 0;

  double value(const std::vector<double>& x) {
    ++evaluations;
    return qaoa_energy(pm, unflatten(x)) / pm.energy_scale;
  }

  std::vector<double> gradient(const std::vector<double>& x, double& fx) {
    ++evaluations;
    const auto s = unflatten(x);
    std::vector<double> g;
    if (settings.gradient == GradientMethod::adjoint) {
      g = adjoint_gradient(pm, s, &fx);
    } else {
      fx = qaoa_energy(pm, s);
      g = central_gradient(pm, s, settings.fd_step);
    }
    fx /= pm.energy_scale;
    for (auto& v : g) v /= pm.energy_scale;
    return g;
  }
};

}  // namespace

OptimizeResult optimize_at_depth(const PreparedModel& pm, const Schedule& start, const OptimizerSettings& settings) {
  check_schedule(start);
  if (settings.max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
  Objective obj{pm, settings};
  const std::size_t n = 2 * start.depth();

  OptimizeResult result;
  result.schedule = start;
  if (n == 0) {
    result.energy = qaoa_energy(pm, start);
    result.evaluations = 1;
    return result;
  }

  std::vector<double> x = flatten(start);
  double fx = 0.0;
  auto g = obj.gradient(x, fx);
  std::vector<double> best_x = x;
  double best_f = fx;

  // Inverse Hessian approximation, row-major.
  std::vector<double> H(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;
  bool scaled = false;

  int it = 0;
  for (; it < settings.max_iterations; ++it) {
    if (std::sqrt(dot(g, g)) < settings.gradient_tolerance) break;
    std::vector<double> d(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) d[r] -= H[r * n + c] * g[c];
    }
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      std::fill(H.begin(), H.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      slope = dot(g, d);
    }

    double t = 1.0;
    std::vector<double> xn(n);
    double fn = 0.0;
    bool accepted = false;
    for (int b = 0; b <= settings.max_backtracks; ++b) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + t * d[i];
      fn = obj.value(xn);
      if (fn <= fx + settings.armijo * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;

    double fnew = 0.0;
    auto gn = obj.gradient(xn, fnew);
    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
    }
    x = std::move(xn);
    fx = fnew;
    g = std::move(gn);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }

    const double ys = dot(y, s);
    if (ys > 1e-14) {
      if (!scaled) {
        const double gamma = ys / dot(y, y);
        for (auto& v : H) v *= gamma;
        scaled = true;
      }
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / ys;
      std::vector<double> hy(n, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) hy[r] += H[r * n + c] * y[c];
      }
      const double yhy = dot(y, hy);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
          H[r * n + c] += rho * ((1.0 + rho * yhy) * s[r] * s[c] - hy[r] * s[c] - s[r] * hy[c]);
        }
      }
    }
  }

  result.schedule = unflatten(best_x);
  result.energy = best_f * pm.energy_scale;
  result.iterations = it;
  result.evaluations = obj.evaluations;
  return result;
}

Schedule interp_extend(const Schedule& s) {
  check_schedule(s);
  const std::size_t p = s.depth();
  if (p == 0) throw std::invalid_argument("interpolation needs p >= 1");
  auto extend = [p](const std::vector<double>& v) {
    std::vector<double> out(p + 1);
    const double pd = static_cast<double>(p);
    for (std::size_t i = 1; i <= p + 1; ++i) {
      const double prev = i >= 2 ? v[i - 2] : 0.0;
      const double cur = i <= p ? v[i - 1] : 0.0;
      out[i - 1] = static_cast<double>(i - 1) / pd * prev + static_cast<double>(p - i + 1) / pd * cur;
    }
    return out;
  };
  return Schedule{extend(s.gammas), extend(s.betas)};
}

Schedule tae_schedule(int p, double delta) {
  if (p < 1) throw std::invalid_argument("TAE schedule needs p >= 1");
  Schedule s;
  for (int i = 1; i <= p; ++i) {
    const double inner = std::sin(std::numbers::pi * i / (2.0 * p));
    const double outer = std::sin(std::numbers::pi / 2.0 * inner * inner);
    const double si = outer * outer;
    s.gammas.push_back(delta * si);
    s.betas.push_back(delta * (1.0 - si));
  }
  return s;
}

RunReport evaluate_schedule(const PreparedModel& pm, const Schedule& schedule) {
  const auto state = evolve(pm, schedule);
  RunReport r;
  r.p = static_cast<int>(schedule.depth());
  r.schedule = schedule;
  r.expectation = expectation(state, pm.evaluation);
  try {
    r.raar = raar(r.expectation, pm.random_avg, pm.optimum);
  } catch (const std::domain_error&) {
    r.raar = std::numeric_limits<double>::quiet_NaN();
  }
  const auto stats = measurement_stats(state, pm.objective, pm.violations, pm.model.layout, pm.optimum);
  r.p_star = stats.p_star;
  r.p90 = stats.p90;
  r.feasible_probability = stats.feasible_probability;
  r.layers = pm.layers.total(r.p);
  r.tts = tts(r.p_star, r.layers);
  return r;
}

std::vector<RunReport> run_ladder(const PreparedModel& pm, int p_max, const OptimizerSettings& settings) {
  using clock = std::chrono::steady_clock;
  std::vector<RunReport> reports;
  Schedule start{{settings.start_gamma}, {settings.start_beta}};

  for (int p = 1; p <= p_max; ++p) {
    const auto t0 = clock::now();
    if (p == 1 && settings.restarts > 0) {
      const auto g = adjoint_gradient(pm, start);
      if (std::sqrt(dot(g, g)) / pm.energy_scale < settings.gradient_tolerance) {
        std::mt19937_64 rng(settings.seed);
        std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
        double best = qaoa_energy(pm, start);
        Schedule pick = start;
        for (int k = 0; k < settings.restarts; ++k) {
          Schedule c{{angle(rng)}, {angle(rng)}};
          const double e = qaoa_energy(pm, c);
          if (e < best) {
            best = e;
            pick = c;
          }
        }
        start = pick;
      }
    }
    const auto opt = optimize_at_depth(pm, start, settings);
    auto report = evaluate_schedule(pm, opt.schedule);
    report.iterations = opt.iterations;
    report.evaluations = opt.evaluations;
    report.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    reports.push_back(std::move(report));
    if (p < p_max) start = interp_extend(opt.schedule);
  }
  return reports;
}

}  // namespace cqaoa
