#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cqaoa {

/// Assignment of binary variables, one byte per variable (0 or 1).
using Bits = std::vector<std::uint8_t>;

struct LinearTerm {
  std::size_t var = 0;
  double coeff = 0.0;

  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

/// constant + sum_i coeff_i * x_i over binary variables.
///
/// Terms are kept sorted by variable index with duplicates merged and zero
/// coefficients dropped, so two functions compare equal iff they agree on
/// every assignment.
class LinearFunction {
 public:
  LinearFunction() = default;
  explicit LinearFunction(double constant, std::vector<LinearTerm> terms = {});

  double constant() const { return constant_; }
  std::span<const LinearTerm> terms() const { return terms_; }

  void add(std::size_t var, double coeff);
  void add_constant(double c) { constant_ += c; }

  /// Coefficient of `var` (0 if absent).
  double coeff(std::size_t var) const;

  /// Throws std::out_of_range if a term references a variable >= x.size().
  double evaluate(std::span<const std::uint8_t> x) const;

  /// True when the constant and every coefficient are integers.
  bool is_integral() const;

  /// One past the largest referenced variable index (0 if no terms).
  std::size_t extent() const;

  LinearFunction negated() const;

  friend bool operator==(const LinearFunction&, const LinearFunction&) = default;

 private:
  double constant_ = 0.0;
  std::vector<LinearTerm> terms_;
};

struct ConstraintBounds {
  double lower = 0.0;  // g^-
  double upper = 0.0;  // g^+
};

/// Exact extrema of a linear function over {0,1}^N.
ConstraintBounds bounds(const LinearFunction& g);

inline double evaluate(const LinearFunction& f, std::span<const std::uint8_t> x) {
  return f.evaluate(x);
}

enum class Sense { minimize, maximize };

struct OneHotGroup {
  std::vector<std::size_t> members;

  std::size_t size() const { return members.size(); }
  friend bool operator==(const OneHotGroup&, const OneHotGroup&) = default;
};

/// min f(x) s.t. g_j(x) >= 0 for every inequality and exactly one member of
/// every one-hot group set.
///
/// A maximization objective is negated on construction, so `objective()`
/// is always in minimization form; `sense()` remembers the original
/// direction for reporting.
class ConstrainedProblem {
 public:
  ConstrainedProblem() = default;
  ConstrainedProblem(std::size_t n_vars, LinearFunction objective, Sense sense,
                     std::vector<OneHotGroup> groups,
                     std::vector<LinearFunction> inequalities);

  std::size_t n_vars() const { return n_vars_; }
  Sense sense() const { return sense_; }
  const LinearFunction& objective() const { return objective_; }
  /// Objective in the caller's original sense.
  LinearFunction original_objective() const;
  const std::vector<OneHotGroup>& groups() const { return groups_; }
  const std::vector<LinearFunction>& inequalities() const { return inequalities_; }

  /// Variables not covered by any one-hot group, in increasing order.
  const std::vector<std::size_t>& free_vars() const { return free_vars_; }

  /// Group index of each variable, or -1 for free variables.
  const std::vector<int>& group_of() const { return group_of_; }

 private:
  std::size_t n_vars_ = 0;
  LinearFunction objective_;
  Sense sense_ = Sense::minimize;
  std::vector<OneHotGroup> groups_;
  std::vector<LinearFunction> inequalities_;
  std::vector<std::size_t> free_vars_;
  std::vector<int> group_of_;
};

/// Diagnostics for a malformed problem; empty means valid.
std::vector<std::string> validate(const ConstrainedProblem& problem);

bool is_feasible(const ConstrainedProblem& problem, std::span<const std::uint8_t> x);

/// Number of violated inequalities plus violated one-hot groups.
std::size_t count_violations(const ConstrainedProblem& problem,
                             std::span<const std::uint8_t> x);

/// How one variable of an original problem is recovered from a reduced one.
struct VariableSource {
  enum class Kind { variable, complement, constant } kind = Kind::variable;
  std::size_t index = 0;  // reduced index for variable/complement
  std::uint8_t value = 0; // for constant
};

struct NormalizedProblem {
  ConstrainedProblem problem;
  std::vector<VariableSource> sources;  // one entry per original variable

  Bits expand(std::span<const std::uint8_t> reduced) const;
};

/// Rewrites one-hot groups of size 1 and 2: a d=1 member is fixed to 1, a d=2
/// group keeps its first member as a free variable and substitutes the second
/// by its complement. Remaining variables are renumbered compactly.
NormalizedProblem reduce_small_groups(const ConstrainedProblem& problem);

/// Result of an exhaustive scan of the one-hot-feasible assignments.
struct ExhaustiveSolution {
  double optimum = 0.0;            // minimization form
  Bits argmin;
  std::uint64_t feasible_count = 0;
  std::uint64_t candidates = 0;    // 2^K * prod d_i
};

/// Enumerates 2^K * prod d_i one-hot assignments. Returns nullopt when no
/// assignment satisfies the inequalities. Throws std::length_error when the
/// candidate count exceeds `max_candidates`.
std::optional<ExhaustiveSolution> solve_exhaustive(const ConstrainedProblem& problem,
                                                   std::uint64_t max_candidates = 1ULL << 32);

}  // namespace cqaoa
