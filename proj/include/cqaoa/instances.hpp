#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cqaoa/problem.hpp"

namespace cqaoa {

/// Multi-knapsack: maximize sum of values of packed items, each item in at
/// most one knapsack, weights[i][j] of item i in knapsack j.
struct MksSpec {
  std::vector<std::int64_t> values;
  std::vector<std::vector<std::int64_t>> weights;
  std::vector<std::int64_t> capacities;

  std::size_t items() const { return values.size(); }
  std::size_t knapsacks() const { return capacities.size(); }
};

/// Throws std::invalid_argument unless sizes agree and every entry is positive.
void check_spec(const MksSpec& spec);

/// Dummy-knapsack form: variable i*(m+1)+j places item i in knapsack j, and
/// i*(m+1)+m is the dummy. One group per item, one capacity inequality per
/// knapsack. Groups have d = m + 1, so m = 1 yields d = 2 groups.
ConstrainedProblem mks_formulation(const MksSpec& spec);

/// mks_formulation followed by reduce_small_groups.
NormalizedProblem build_mks(const MksSpec& spec);

/// Values and weights uniform in [1, 10], capacities half the total weight
/// per knapsack (at least 1).
MksSpec random_mks(std::size_t items, std::size_t knapsacks, std::uint64_t seed);

/// Prosumer scheduling: each load runs once, starting at some step, and the
/// per-step consumption must stay within the capacity.
struct PpSpec {
  std::size_t horizon = 0;                       // m
  std::vector<std::vector<std::int64_t>> loads;  // profile of load i, length tau_i
  std::vector<double> rates;                     // r_t, length m
  std::int64_t capacity = 0;                     // W
};

/// Throws std::invalid_argument for tau_i > m, empty or non-positive
/// profiles, a rate vector of the wrong length, or W <= 0.
void check_spec(const PpSpec& spec);

/// Index of the variable "load i starts at step s".
std::size_t pp_variable(const PpSpec& spec, std::size_t load, std::size_t start);

/// One group per load over its m - tau_i + 1 start steps, one capacity
/// inequality W - (consumption at t) >= 0 per step t, and start cost
/// sum_t' r_{s+t'} l_{i,t'}.
ConstrainedProblem build_pp(const PpSpec& spec);

/// Largest consumption at each step over one-hot-feasible schedules.
std::vector<std::int64_t> peak_consumption(const PpSpec& spec);

/// True when every capacity inequality is violated by some schedule.
bool all_constraints_binding(const PpSpec& spec);

enum class PriceKind { increasing, decreasing, up_quadratic, down_quadratic };

std::string_view price_kind_name(PriceKind k);
PriceKind parse_price_kind(std::string_view s);

struct PricePattern {
  PriceKind kind = PriceKind::increasing;
  std::optional<double> noise;  // amplitude a; defaults to 0.1 * mean of the base shape
  std::uint64_t seed = 0;
};

/// Base shape r_t (t = 0..m-1) plus noise uniform in [-a, a]:
///   increasing      1 + t
///   decreasing      m - t
///   up-quadratic    1 + t^2 / m
///   down-quadratic  1 + (m^2 - t^2) / m
std::vector<double> generate_prices(const PricePattern& pattern, std::size_t m);

struct PpGeneratorSpec {
  std::size_t horizon = 0;
  std::vector<std::vector<std::int64_t>> loads;
  PricePattern prices;
  std::int64_t capacity_min = 1;
  std::int64_t capacity_max = 1;
  int max_attempts = 100;
};

/// Draws capacities from [capacity_min, capacity_max] until every
/// constraint is binding and a feasible schedule exists. Throws
/// std::runtime_error after max_attempts draws.
PpSpec generate_pp(const PpGeneratorSpec& spec, std::uint64_t seed);

/// Portable uniform double in [0, 1) from 53 random bits.
double uniform01(std::uint64_t bits);

}  // namespace cqaoa
