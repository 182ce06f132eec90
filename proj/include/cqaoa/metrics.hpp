#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cqaoa/pipeline.hpp"
#include "cqaoa/problem.hpp"

namespace cqaoa {

/// (random_avg - expectation) / (random_avg - optimum). Throws
/// std::domain_error when random_avg and optimum coincide.
double raar(double expectation, double random_avg, double optimum);

/// Mean of f + eta * (violated inequalities + violated groups) over all 2^N
/// assignments. The objective part is exact by linearity; each inequality's
/// violation probability comes from the exact distribution of its integer
/// value, and a d-member group is violated with probability 1 - d / 2^d.
/// Inequalities whose value range exceeds `max_range` are estimated from
/// `samples` seeded draws instead.
double random_average(const ConstrainedProblem& problem, double eta, std::uint64_t max_range = 1ULL << 24,
                      std::uint64_t samples = 1ULL << 20);

using Edge = std::pair<std::size_t, std::size_t>;

/// Greedy proper edge coloring over edges sorted lexicographically (after
/// orienting each as (min, max)); duplicate edges and self-loops are
/// dropped. Returns the number of colors used.
int greedy_edge_coloring(std::vector<Edge> edges);

/// Coloring produced by the same greedy rule, one color per surviving edge
/// in sorted order.
std::vector<std::pair<Edge, int>> greedy_edge_colors(std::vector<Edge> edges);

struct LayerCounts {
  int init = 0;
  int cost = 0;       // includes indicator layers
  int mixer = 0;
  int indicator = 0;  // 0 when the method has no indicator penalties

  std::int64_t total(int p) const { return init + static_cast<std::int64_t>(p) * (cost + mixer); }
};

/// QPE register size for an inequality with bounds (lower, upper):
/// 1 + ceil(log2 max(|lower|, |upper|)), and 1 when that maximum is <= 1.
int register_size(double lower, double upper);

/// Layer counts for a compiled model under all-to-all connectivity.
/// Hardware qubits are the compute and slack qubits plus one qubit per qudit
/// level; qubit and qudit layers run in parallel, so the larger count wins.
LayerCounts circuit_layers(const CompiledModel& model);

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// L * ceil(ln 0.01 / ln(1 - P*)); L for P* >= 1; kUnreachable for P* <= 0.
double tts(double p_star, std::int64_t layers);

/// Smallest finite value, or nullopt when every depth is unreachable.
std::optional<double> tts_star(std::span<const double> tts_values);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;

  /// 2^(intercept + slope log2 S)
  double extrapolate(double search_space) const;
};

/// Least squares of log2 TTS* against log2 S. Throws std::invalid_argument
/// for fewer than 3 points, non-positive values, or a single distinct S.
ScalingFit scaling_fit(std::span<const std::pair<double, double>> points);

}  // namespace cqaoa
