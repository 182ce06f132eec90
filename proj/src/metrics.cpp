#include "cqaoa/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace cqaoa {

double raar(double expectation, double random_avg, double optimum) {
  const double denom = random_avg - optimum;
  if (std::abs(denom) <= 1e-12 * std::max(1.0, std::abs(optimum))) {
    throw std::domain_error("random average equals the optimum");
  }
  return (random_avg - expectation) / denom;
}

namespace {

// P(g(x) < 0) for x uniform over {0,1}^N, by convolution over the integer
// value range.
double violation_probability_exact(const LinearFunction& g, const ConstraintBounds& b) {
  const auto lo = static_cast<std::int64_t>(std::llround(b.lower));
  const auto width = static_cast<std::size_t>(std::llround(b.upper) - lo + 1);
  std::vector<double> dist(width, 0.0);
  // Start with every coefficient at its minimizing choice; flipping a
  // variable away from it adds |c|.
  dist[0] = 1.0;
  std::size_t reach = 0;
  for (const auto& t : g.terms()) {
    const auto step = static_cast<std::size_t>(std::llround(std::abs(t.coeff)));
    for (std::size_t v = reach + 1; v-- > 0;) {
      const double half = 0.5 * dist[v];
      dist[v] = half;
      dist[v + step] += half;
    }
    reach += step;
  }
  double p = 0.0;
  for (std::size_t v = 0; v < width && lo + static_cast<std::int64_t>(v) < 0; ++v) p += dist[v];
  return p;
}

double violation_probability_sampled(const LinearFunction& g, std::uint64_t samples) {
  std::mt19937_64 rng(0x5eed);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    double v = g.constant();
    std::uint64_t bits = 0;
    int left = 0;
    for (const auto& t : g.terms()) {
      if (left == 0) {
        bits = rng();
        left = 64;
      }
      if (bits & 1u) v += t.coeff;
      bits >>= 1;
      --left;
    }
    if (v < 0.0) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace

double random_average(const ConstrainedProblem& problem, double eta, std::uint64_t max_range,
                      std::uint64_t samples) {
  const auto& f = problem.objective();
  double mean = f.constant();
  for (const auto& t : f.terms()) mean += 0.5 * t.coeff;

  double violations = 0.0;
  for (const auto& g : problem.inequalities()) {
    const auto b = bounds(g);
    if (b.upper < 0.0) {
      violations += 1.0;
    } else if (b.lower >= 0.0) {
      continue;
    } else if (b.upper - b.lower + 1.0 <= static_cast<double>(max_range)) {
      violations += violation_probability_exact(g, b);
    } else {
      violations += violation_probability_sampled(g, samples);
    }
  }
  for (const auto& grp : problem.groups()) {
    const double d = static_cast<double>(grp.size());
    violations += 1.0 - d * std::exp2(-d);
  }
  return mean + eta * violations;
}

std::vector<std::pair<Edge, int>> greedy_edge_colors(std::vector<Edge> edges) {
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::erase_if(edges, [](const Edge& e) { return e.first == e.second; });

  std::unordered_map<std::size_t, std::vector<bool>> used;
  std::vector<std::pair<Edge, int>> out;
  out.reserve(edges.size());
  for (const auto& e : edges) {
    auto& a = used[e.first];
    auto& b = used[e.second];
    std::size_t c = 0;
    while ((c < a.size() && a[c]) || (c < b.size() && b[c])) ++c;
    if (a.size() <= c) a.resize(c + 1, false);
    if (b.size() <= c) b.resize(c + 1, false);
    a[c] = true;
    b[c] = true;
    out.emplace_back(e, static_cast<int>(c));
  }
  return out;
}

int greedy_edge_coloring(std::vector<Edge> edges) {
  int colors = 0;
  for (const auto& [e, c] : greedy_edge_colors(std::move(edges))) colors = std::max(colors, c + 1);
  return colors;
}

int register_size(double lower, double upper) {
  const auto m = static_cast<std::uint64_t>(std::llround(std::max(std::abs(lower), std::abs(upper))));
  if (m <= 1) return 1;
  return 1 + static_cast<int>(std::bit_width(m - 1));  // 1 + ceil(log2 m)
}

LayerCounts circuit_layers(const CompiledModel& model) {
  const auto& sites = model.layout.sites;
  std::vector<std::size_t> base(sites.size());
  std::size_t hw = 0;
  bool has_qubits = false;
  std::size_t d_max = 0;
  bool odd = false;
  for (std::size_t s = 0; s < sites.size(); ++s) {
    base[s] = hw;
    if (sites[s].kind == SiteKind::qudit) {
      hw += sites[s].dim;
      d_max = std::max(d_max, sites[s].dim);
      odd = odd || sites[s].dim % 2 == 1;
    } else {
      hw += 1;
      has_qubits = true;
    }
  }
  auto qubit_of = [&](const Literal& l) {
    return base[l.site] + (sites[l.site].kind == SiteKind::qudit ? l.level : 0);
  };

  LayerCounts c;
  if (has_qubits) {
    c.init = 1;
    c.mixer = 1;
  }
  if (d_max > 0) {
    c.init = std::max(c.init, 2 * static_cast<int>(std::bit_width(d_max - 1)));
    c.mixer = std::max(c.mixer, odd ? 6 : 4);
  }

  std::vector<Edge> edges;
  bool linear = false;
  for (const auto& [mono, v] : model.effective_cost.terms()) {
    if (mono.empty() || v == 0.0) continue;
    if (mono.size() == 1) linear = true;
    for (std::size_t a = 0; a < mono.size(); ++a) {
      for (std::size_t b = a + 1; b < mono.size(); ++b) edges.emplace_back(qubit_of(mono[a]), qubit_of(mono[b]));
    }
  }
  int l_f = greedy_edge_coloring(std::move(edges));
  if (l_f == 0 && linear) l_f = 1;

  if (!model.if_constraints.empty()) {
    std::vector<Edge> phase;
    int m_max = 0;
    std::size_t reg = hw;
    for (const auto& g : model.if_constraints) {
      const auto b = bounds(g);
      const int m = register_size(b.lower, b.upper);
      m_max = std::max(m_max, m);
      for (int q = 0; q < m; ++q, ++reg) {
        for (const auto& t : g.terms()) phase.emplace_back(reg, qubit_of(model.layout.var_literal[t.var]));
      }
    }
    const int l_phase = greedy_edge_coloring(std::move(phase));
    c.indicator = 2 * l_phase + 2 * (2 * m_max - 1) + 1;
  }
  c.cost = l_f + c.indicator;
  return c;
}

double tts(double p_star, std::int64_t layers) {
  if (!(p_star > 0.0)) return kUnreachable;
  const double l = static_cast<double>(layers);
  if (p_star >= 1.0) return l;
  const double shots = std::log(0.01) / std::log1p(-p_star);
  // Absorb rounding so that e.g. P* = 0.99 needs exactly one shot.
  return l * std::max(1.0, std::ceil(shots - 1e-9 * shots));
}

std::optional<double> tts_star(std::span<const double> tts_values) {
  std::optional<double> best;
  for (double v : tts_values) {
    if (!std::isfinite(v)) continue;
    if (!best || v < *best) best = v;
  }
  return best;
}

double ScalingFit::extrapolate(double search_space) const {
  return std::exp2(intercept + slope * std::log2(search_space));
}

ScalingFit scaling_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("scaling fit needs at least 3 points");
  double sx = 0, sy = 0;
  std::vector<double> xs, ys;
  for (const auto& [s, t] : points) {
    if (!(s > 0.0) || !(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("scaling fit needs positive values");
    xs.push_back(std::log2(s));
    ys.push_back(std::log2(t));
    sx += xs.back();
    sy += ys.back();
  }
  const double n = static_cast<double>(xs.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("scaling fit needs at least two distinct search-space sizes");
  ScalingFit fit;
  fit.points = xs.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res <= 1e-24 ? 1.0 : 0.0);
  return fit;
}

}  // namespace cqaoa
