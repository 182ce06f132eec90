#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cqaoa/bitcost.hpp"
#include "cqaoa/errors.hpp"
#include "cqaoa/problem.hpp"

namespace cqaoa {

/// QUBO: quadratic penalties only. XY: one-hot groups as qudits, slack
/// penalties for inequalities. IF: indicator penalties for inequalities,
/// quadratic one-hot penalties. IFXY: qudits plus indicator penalties.
enum class Method { qubo, xy, indicator, indicator_xy };

std::string_view method_name(Method m);
/// Accepts "qubo", "xy", "if", "ifxy" (case-insensitive, "if+xy" too).
Method parse_method(std::string_view name);
inline bool uses_qudits(Method m) { return m == Method::xy || m == Method::indicator_xy; }
inline bool uses_indicator(Method m) { return m == Method::indicator || m == Method::indicator_xy; }

inline constexpr double kMinimumRho = 1.0;

struct PipelineConfig {
  Method method = Method::indicator_xy;
  double eta = 1.0;                      // evaluation penalty per violated constraint
  std::optional<double> rho;             // indicator penalty; computed when unset
  std::optional<double> qubo_penalty;    // quadratic-penalty weight; defaults to rho
  std::vector<std::size_t> demote_groups;  // groups forced to quadratic penalties
  std::uint64_t memory_cap = kDefaultMemoryCap;  // max tensor entries
};

/// Binary slack spanning [0, upper]: weights 1, 2, ..., 2^(bits-2), then
/// last_coeff = upper - 2^(bits-1) + 1.
struct SlackEncoding {
  std::int64_t upper = 0;
  int bits = 0;
  std::int64_t last_coeff = 0;
  std::size_t first_site = 0;

  std::vector<std::int64_t> weights() const;
};

SlackEncoding make_slack(std::int64_t upper, std::size_t first_site = 0);

/// Every value sum_l w_l y_l over the 2^bits slack assignments.
std::set<std::int64_t> slack_values(const SlackEncoding& enc);

struct CompiledModel {
  Method method = Method::indicator_xy;
  Layout layout;
  SitePolynomial effective_cost;
  std::vector<LinearFunction> if_constraints;
  std::vector<SlackEncoding> slack;  // one per inequality (XY and QUBO)
  double rho = 0.0;
  double qubo_penalty = 0.0;
  double eta = 0.0;

  /// Tensor entries, including slack axes.
  std::uint64_t tensor_entries() const { return layout.entries(); }
  /// Candidate solutions over the problem variables (slack excluded).
  std::uint64_t search_space() const;
  std::size_t slack_bits() const;
  std::size_t qudit_count() const;
};

/// Feasible point via depth-first search: groups first, then free variables,
/// cheapest objective choice first, pruning branches that can no longer
/// satisfy some inequality. Returns nullopt when the search space is
/// exhausted or `node_limit` is hit.
std::optional<Bits> greedy_feasible(const ConstrainedProblem& problem, std::uint64_t node_limit = 1ULL << 22);

/// min f over the relaxation that keeps one-hot equalities, drops
/// inequalities, and allows 0 <= x <= 1.
double relaxed_minimum(const ConstrainedProblem& problem);

/// rho = f(x1) - relaxed minimum, clamped below by kMinimumRho. Throws
/// std::runtime_error("instance infeasible for heuristic") without x1.
double compute_rho(const ConstrainedProblem& problem);

/// Builds the layout and effective cost for `config.method`. Throws
/// MemoryCapExceeded before allocating anything beyond the cap, and
/// std::invalid_argument for invalid problems.
CompiledModel compile(const ConstrainedProblem& problem, const PipelineConfig& config);

/// Phase-operator tensor: effective cost plus indicator step penalties.
CostTensor phase_cost(const CompiledModel& model);

}  // namespace cqaoa
