#include "cqaoa/instances.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <random>
#include <stdexcept>

#include "cqaoa/pipeline.hpp"

namespace cqaoa {

void check_spec(const MksSpec& spec) {
  const auto n = spec.items();
  const auto m = spec.knapsacks();
  if (n == 0 || m == 0) throw std::invalid_argument("MKS needs at least one item and one knapsack");
  if (spec.weights.size() != n) throw std::invalid_argument("MKS weights need one row per item");
  for (std::size_t i = 0; i < n; ++i) {
    if (spec.values[i] <= 0) throw std::invalid_argument("MKS values must be positive");
    if (spec.weights[i].size() != m) throw std::invalid_argument("MKS weights need one column per knapsack");
    for (auto w : spec.weights[i]) {
      if (w <= 0) throw std::invalid_argument("MKS weights must be positive");
    }
  }
  for (auto c : spec.capacities) {
    if (c <= 0) throw std::invalid_argument("MKS capacities must be positive");
  }
}

ConstrainedProblem mks_formulation(const MksSpec& spec) {
  check_spec(spec);
  const auto n = spec.items();
  const auto m = spec.knapsacks();
  const auto stride = m + 1;
  LinearFunction value;
  std::vector<OneHotGroup> groups(n);
  std::vector<LinearFunction> capacity(m);
  for (std::size_t j = 0; j < m; ++j) capacity[j].add_constant(static_cast<double>(spec.capacities[j]));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) groups[i].members.push_back(i * stride + j);
    for (std::size_t j = 0; j < m; ++j) {
      value.add(i * stride + j, static_cast<double>(spec.values[i]));
      capacity[j].add(i * stride + j, -static_cast<double>(spec.weights[i][j]));
    }
  }
  return ConstrainedProblem(n * stride, value, Sense::maximize, std::move(groups), std::move(capacity));
}

NormalizedProblem build_mks(const MksSpec& spec) { return reduce_small_groups(mks_formulation(spec)); }

double uniform01(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

namespace {

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<double>(hi - lo + 1);
  const auto v = lo + static_cast<std::int64_t>(uniform01(rng()) * span);
  return std::min(v, hi);
}

}  // namespace

MksSpec random_mks(std::size_t items, std::size_t knapsacks, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  MksSpec spec;
  spec.weights.assign(items, std::vector<std::int64_t>(knapsacks));
  for (std::size_t i = 0; i < items; ++i) {
    spec.values.push_back(uniform_int(rng, 1, 10));
    for (auto& w : spec.weights[i]) w = uniform_int(rng, 1, 10);
  }
  for (std::size_t j = 0; j < knapsacks; ++j) {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < items; ++i) total += spec.weights[i][j];
    spec.capacities.push_back(std::max<std::int64_t>(1, total / 2));
  }
  return spec;
}

void check_spec(const PpSpec& spec) {
  const auto m = spec.horizon;
  if (m == 0) throw std::invalid_argument("PP horizon must be positive");
  if (spec.loads.empty()) throw std::invalid_argument("PP needs at least one load");
  for (std::size_t i = 0; i < spec.loads.size(); ++i) {
    const auto& l = spec.loads[i];
    if (l.empty()) throw std::invalid_argument("PP load profile must be nonempty");
    if (l.size() > m) {
      throw std::invalid_argument("load " + std::to_string(i) + " has tau = " + std::to_string(l.size()) +
                                  " > m = " + std::to_string(m));
    }
    for (auto v : l) {
      if (v <= 0) throw std::invalid_argument("PP load entries must be positive");
    }
  }
  if (spec.rates.size() != m) throw std::invalid_argument("PP needs one rate per time step");
  if (spec.capacity <= 0) throw std::invalid_argument("PP capacity must be positive");
}

std::size_t pp_variable(const PpSpec& spec, std::size_t load, std::size_t start) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < load; ++i) idx += spec.horizon - spec.loads[i].size() + 1;
  return idx + start;
}

ConstrainedProblem build_pp(const PpSpec& spec) {
  check_spec(spec);
  const auto m = spec.horizon;
  std::size_t n = 0;
  std::vector<OneHotGroup> groups;
  LinearFunction cost;
  std::vector<LinearFunction> capacity(m, LinearFunction(static_cast<double>(spec.capacity)));
  for (std::size_t i = 0; i < spec.loads.size(); ++i) {
    const auto& l = spec.loads[i];
    const auto starts = m - l.size() + 1;
    OneHotGroup g;
    for (std::size_t s = 0; s < starts; ++s, ++n) {
      g.members.push_back(n);
      double c = 0.0;
      for (std::size_t k = 0; k < l.size(); ++k) {
        c += spec.rates[s + k] * static_cast<double>(l[k]);
        capacity[s + k].add(n, -static_cast<double>(l[k]));
      }
      cost.add(n, c);
    }
    groups.push_back(std::move(g));
  }
  return ConstrainedProblem(n, cost, Sense::minimize, std::move(groups), std::move(capacity));
}

std::vector<std::int64_t> peak_consumption(const PpSpec& spec) {
  check_spec(spec);
  const auto m = spec.horizon;
  std::vector<std::int64_t> peak(m, 0);
  for (const auto& l : spec.loads) {
    for (std::size_t t = 0; t < m; ++t) {
      // Largest profile entry that can land on step t.
      std::int64_t best = 0;
      for (std::size_t k = 0; k < l.size(); ++k) {
        if (k <= t && t - k + l.size() <= m) best = std::max(best, l[k]);
      }
      peak[t] += best;
    }
  }
  return peak;
}

bool all_constraints_binding(const PpSpec& spec) {
  const auto peak = peak_consumption(spec);
  return std::all_of(peak.begin(), peak.end(), [&](std::int64_t p) { return p > spec.capacity; });
}

std::string_view price_kind_name(PriceKind k) {
  switch (k) {
    case PriceKind::increasing: return "increasing";
    case PriceKind::decreasing: return "decreasing";
    case PriceKind::up_quadratic: return "up-quadratic";
    case PriceKind::down_quadratic: return "down-quadratic";
  }
  return "?";
}

PriceKind parse_price_kind(std::string_view s) {
  std::string k;
  for (char c : s) k.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (auto kind : {PriceKind::increasing, PriceKind::decreasing, PriceKind::up_quadratic, PriceKind::down_quadratic}) {
    if (k == price_kind_name(kind)) return kind;
  }
  throw std::invalid_argument("unknown price pattern '" + std::string(s) + "'");
}

std::vector<double> generate_prices(const PricePattern& pattern, std::size_t m) {
  if (m == 0) throw std::invalid_argument("price horizon must be positive");
  const double md = static_cast<double>(m);
  std::vector<double> r(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double t = static_cast<double>(i);
    switch (pattern.kind) {
      case PriceKind::increasing: r[i] = 1.0 + t; break;
      case PriceKind::decreasing: r[i] = md - t; break;
      case PriceKind::up_quadratic: r[i] = 1.0 + t * t / md; break;
      case PriceKind::down_quadratic: r[i] = 1.0 + (md * md - t * t) / md; break;
    }
  }
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / md;
  const double a = pattern.noise.value_or(0.1 * mean);
  if (a < 0.0) throw std::invalid_argument("noise amplitude must be nonnegative");
  if (a > 0.0) {
    std::mt19937_64 rng(pattern.seed);
    for (auto& v : r) v += a * (2.0 * uniform01(rng()) - 1.0);
  }
  return r;
}

PpSpec generate_pp(const PpGeneratorSpec& gen, std::uint64_t seed) {
  if (gen.capacity_min < 1 || gen.capacity_max < gen.capacity_min) {
    throw std::invalid_argument("capacity range must satisfy 1 <= min <= max");
  }
  std::mt19937_64 rng(seed);
  PpSpec spec;
  spec.horizon = gen.horizon;
  spec.loads = gen.loads;
  auto pattern = gen.prices;
  pattern.seed = seed ^ gen.prices.seed;
  spec.rates = generate_prices(pattern, gen.horizon);

  for (int attempt = 0; attempt < gen.max_attempts; ++attempt) {
    spec.capacity = uniform_int(rng, gen.capacity_min, gen.capacity_max);
    check_spec(spec);
    if (!all_constraints_binding(spec)) continue;
    if (greedy_feasible(build_pp(spec))) return spec;
  }
  throw std::runtime_error("binding-constraint regeneration exhausted after " + std::to_string(gen.max_attempts) +
                           " attempts");
}

}  // namespace cqaoa
