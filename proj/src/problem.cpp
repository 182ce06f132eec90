#include "cqaoa/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace cqaoa {

namespace {

bool is_integer(double v) {
  return std::isfinite(v) && std::nearbyint(v) == v && std::abs(v) <= 9007199254740992.0;
}

}  // namespace

LinearFunction::LinearFunction(double constant, std::vector<LinearTerm> terms)
    : constant_(constant) {
  for (const auto& t : terms) add(t.var, t.coeff);
}

void LinearFunction::add(std::size_t var, double coeff) {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), var,
                             [](const LinearTerm& t, std::size_t v) { return t.var < v; });
  if (it != terms_.end() && it->var == var) {
    it->coeff += coeff;
    if (it->coeff == 0.0) terms_.erase(it);
  } else if (coeff != 0.0) {
    terms_.insert(it, LinearTerm{var, coeff});
  }
}

double LinearFunction::coeff(std::size_t var) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), var,
                             [](const LinearTerm& t, std::size_t v) { return t.var < v; });
  return (it != terms_.end() && it->var == var) ? it->coeff : 0.0;
}

double LinearFunction::evaluate(std::span<const std::uint8_t> x) const {
  double value = constant_;
  for (const auto& t : terms_) {
    if (t.var >= x.size()) throw std::out_of_range("linear function references variable beyond assignment");
    if (x[t.var]) value += t.coeff;
  }
  return value;
}

bool LinearFunction::is_integral() const {
  if (!is_integer(constant_)) return false;
  return std::all_of(terms_.begin(), terms_.end(), [](const LinearTerm& t) { return is_integer(t.coeff); });
}

std::size_t LinearFunction::extent() const { return terms_.empty() ? 0 : terms_.back().var + 1; }

LinearFunction LinearFunction::negated() const {
  LinearFunction out;
  out.constant_ = -constant_;
  out.terms_ = terms_;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

ConstraintBounds bounds(const LinearFunction& g) {
  ConstraintBounds b{g.constant(), g.constant()};
  for (const auto& t : g.terms()) {
    b.lower += std::min(0.0, t.coeff);
    b.upper += std::max(0.0, t.coeff);
  }
  return b;
}

ConstrainedProblem::ConstrainedProblem(std::size_t n_vars, LinearFunction objective, Sense sense,
                                       std::vector<OneHotGroup> groups,
                                       std::vector<LinearFunction> inequalities)
    : n_vars_(n_vars),
      objective_(sense == Sense::maximize ? objective.negated() : std::move(objective)),
      sense_(sense),
      groups_(std::move(groups)),
      inequalities_(std::move(inequalities)),
      group_of_(n_vars, -1) {
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    for (auto v : groups_[gi].members) {
      if (v < n_vars_ && group_of_[v] < 0) group_of_[v] = static_cast<int>(gi);
    }
  }
  for (std::size_t v = 0; v < n_vars_; ++v) {
    if (group_of_[v] < 0) free_vars_.push_back(v);
  }
}

LinearFunction ConstrainedProblem::original_objective() const {
  return sense_ == Sense::maximize ? objective_.negated() : objective_;
}

std::vector<std::string> validate(const ConstrainedProblem& problem) {
  std::vector<std::string> issues;
  const auto n = problem.n_vars();

  if (problem.objective().extent() > n) {
    issues.push_back("objective references variable " + std::to_string(problem.objective().extent() - 1) +
                     " >= n_vars");
  }

  std::vector<int> owner(n, -1);
  for (std::size_t gi = 0; gi < problem.groups().size(); ++gi) {
    const auto& g = problem.groups()[gi];
    if (g.size() <= 2) {
      issues.push_back("group " + std::to_string(gi) + ": d_i must exceed 2 (got " + std::to_string(g.size()) + ")");
    }
    for (auto v : g.members) {
      if (v >= n) {
        issues.push_back("group " + std::to_string(gi) + " references variable " + std::to_string(v) + " >= n_vars");
        continue;
      }
      if (owner[v] >= 0) {
        issues.push_back("overlap at var " + std::to_string(v) + " (groups " + std::to_string(owner[v]) + " and " +
                         std::to_string(gi) + ")");
      } else {
        owner[v] = static_cast<int>(gi);
      }
    }
  }

  for (std::size_t j = 0; j < problem.inequalities().size(); ++j) {
    const auto& g = problem.inequalities()[j];
    if (g.extent() > n) {
      issues.push_back("inequality " + std::to_string(j) + " references variable " + std::to_string(g.extent() - 1) +
                       " >= n_vars");
    }
    if (!g.is_integral()) {
      issues.push_back("inequality " + std::to_string(j) + " has non-integer coefficients");
    }
  }
  return issues;
}

bool is_feasible(const ConstrainedProblem& problem, std::span<const std::uint8_t> x) {
  return count_violations(problem, x) == 0;
}

std::size_t count_violations(const ConstrainedProblem& problem, std::span<const std::uint8_t> x) {
  if (x.size() != problem.n_vars()) throw std::invalid_argument("assignment size does not match n_vars");
  std::size_t violated = 0;
  for (const auto& g : problem.inequalities()) {
    if (g.evaluate(x) < 0.0) ++violated;
  }
  for (const auto& group : problem.groups()) {
    std::size_t set = 0;
    for (auto v : group.members) set += x[v];
    if (set != 1) ++violated;
  }
  return violated;
}

Bits NormalizedProblem::expand(std::span<const std::uint8_t> reduced) const {
  Bits out(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const auto& s = sources[i];
    switch (s.kind) {
      case VariableSource::Kind::variable: out[i] = reduced[s.index]; break;
      case VariableSource::Kind::complement: out[i] = 1 - reduced[s.index]; break;
      case VariableSource::Kind::constant: out[i] = s.value; break;
    }
  }
  return out;
}

NormalizedProblem reduce_small_groups(const ConstrainedProblem& problem) {
  const auto n = problem.n_vars();
  // Pass 1: decide the fate of each original variable.
  enum class Fate { keep, fix_one, complement_of };
  std::vector<Fate> fate(n, Fate::keep);
  std::vector<std::size_t> partner(n, 0);
  std::vector<OneHotGroup> kept_groups;
  for (const auto& g : problem.groups()) {
    if (g.size() == 1) {
      fate[g.members[0]] = Fate::fix_one;
    } else if (g.size() == 2) {
      fate[g.members[1]] = Fate::complement_of;
      partner[g.members[1]] = g.members[0];
    } else {
      kept_groups.push_back(g);
    }
  }

  NormalizedProblem out;
  out.sources.resize(n);
  std::vector<std::size_t> new_index(n, 0);
  std::size_t next = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (fate[v] == Fate::keep) {
      new_index[v] = next;
      out.sources[v] = {VariableSource::Kind::variable, next, 0};
      ++next;
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (fate[v] == Fate::fix_one) out.sources[v] = {VariableSource::Kind::constant, 0, 1};
    if (fate[v] == Fate::complement_of) {
      out.sources[v] = {VariableSource::Kind::complement, new_index[partner[v]], 0};
    }
  }

  auto rewrite = [&](const LinearFunction& f) {
    LinearFunction r(f.constant());
    for (const auto& t : f.terms()) {
      const auto& s = out.sources[t.var];
      switch (s.kind) {
        case VariableSource::Kind::variable: r.add(s.index, t.coeff); break;
        case VariableSource::Kind::complement:
          r.add_constant(t.coeff);
          r.add(s.index, -t.coeff);
          break;
        case VariableSource::Kind::constant: r.add_constant(t.coeff * s.value); break;
      }
    }
    return r;
  };

  for (auto& g : kept_groups) {
    for (auto& v : g.members) v = new_index[v];
  }
  std::vector<LinearFunction> ineqs;
  for (const auto& g : problem.inequalities()) ineqs.push_back(rewrite(g));

  // Build in minimization form, then restore the original sense label.
  auto objective = rewrite(problem.objective());
  if (problem.sense() == Sense::maximize) objective = objective.negated();
  out.problem = ConstrainedProblem(next, std::move(objective), problem.sense(), std::move(kept_groups), std::move(ineqs));
  return out;
}

std::optional<ExhaustiveSolution> solve_exhaustive(const ConstrainedProblem& problem, std::uint64_t max_candidates) {
  const auto& groups = problem.groups();
  const auto& free_vars = problem.free_vars();

  std::uint64_t candidates = 1;
  for (const auto& g : groups) {
    if (g.size() == 0) return std::nullopt;
    if (candidates > max_candidates / g.size()) throw std::length_error("exhaustive scan exceeds candidate cap");
    candidates *= g.size();
  }
  if (free_vars.size() >= 63 || candidates > (max_candidates >> free_vars.size())) {
    throw std::length_error("exhaustive scan exceeds candidate cap");
  }
  candidates <<= free_vars.size();

  const auto& ineqs = problem.inequalities();
  const auto& f = problem.objective();

  // Mixed-radix counter: free vars (radix 2) first, then groups.
  Bits x(problem.n_vars(), 0);
  std::vector<std::size_t> level(groups.size(), 0);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) x[groups[gi].members[0]] = 1;

  ExhaustiveSolution best;
  best.optimum = std::numeric_limits<double>::infinity();
  best.candidates = candidates;

  for (std::uint64_t c = 0; c < candidates; ++c) {
    bool ok = true;
    for (const auto& g : ineqs) {
      if (g.evaluate(x) < 0.0) {
        ok = false;
        break;
      }
    }
    if (ok) {
      ++best.feasible_count;
      const double value = f.evaluate(x);
      if (value < best.optimum) {
        best.optimum = value;
        best.argmin = x;
      }
    }
    // advance
    std::size_t pos = 0;
    for (; pos < free_vars.size(); ++pos) {
      auto& bit = x[free_vars[pos]];
      bit ^= 1;
      if (bit) break;
    }
    if (pos < free_vars.size()) continue;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const auto& m = groups[gi].members;
      x[m[level[gi]]] = 0;
      level[gi] = (level[gi] + 1) % m.size();
      x[m[level[gi]]] = 1;
      if (level[gi] != 0) break;
    }
  }
  if (best.feasible_count == 0) return std::nullopt;
  return best;
}

}  // namespace cqaoa
