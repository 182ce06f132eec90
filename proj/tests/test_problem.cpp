#include <doctest.h>

#include <random>

#include "cqaoa/problem.hpp"
#include "support/fullspace.hpp"
#include "support/random_problems.hpp"

using namespace cqaoa;

namespace {

bool contains(const std::vector<std::string>& issues, const std::string& needle) {
  for (const auto& s : issues) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

// Independent check of the constrained format: every g >= 0, every group one-hot.
bool feasible_reference(const ConstrainedProblem& p, const Bits& x) {
  for (const auto& g : p.inequalities()) {
    double v = g.constant();
    for (const auto& t : g.terms()) v += t.coeff * x[t.var];
    if (v < 0) return false;
  }
  for (const auto& g : p.groups()) {
    int c = 0;
    for (auto v : g.members) c += x[v];
    if (c != 1) return false;
  }
  return true;
}

ConstrainedProblem pp_shaped() {
  LinearFunction cap(3.0, {{0, -1}, {1, -2}, {3, -1}, {4, -2}});
  return ConstrainedProblem(6, LinearFunction(0.0, {{0, 1}, {1, 2}, {2, 3}, {3, 3}, {4, 2}, {5, 1}}), Sense::minimize,
                            {OneHotGroup{{0, 1, 2}}, OneHotGroup{{3, 4, 5}}}, {cap});
}

}  // namespace

TEST_CASE("linear function keeps merged, sorted, nonzero terms") {
  LinearFunction f(1.0, {{3, 2.0}, {1, 1.0}, {3, -2.0}, {0, 0.0}, {1, 4.0}});
  REQUIRE(f.terms().size() == 1);
  CHECK(f.terms()[0] == LinearTerm{1, 5.0});
  CHECK(f.coeff(3) == 0.0);
  CHECK(f.extent() == 2);
  CHECK(f == LinearFunction(1.0, {{1, 5.0}}));
}

TEST_CASE("evaluate") {
  const LinearFunction f(0.0, {{0, 2}, {1, 3}});
  CHECK(f.evaluate(Bits{1, 0}) == 2);
  CHECK(f.evaluate(Bits{1, 1}) == 5);
  CHECK(evaluate(LinearFunction(7.0, {{0, 1}}), Bits{0, 0}) == 7);
  CHECK_THROWS_AS(f.evaluate(Bits{1}), std::out_of_range);
}

TEST_CASE("bounds examples") {
  auto b = bounds(LinearFunction(5, {{0, -3}, {1, -2}}));
  CHECK(b.lower == 0);
  CHECK(b.upper == 5);
  b = bounds(LinearFunction(-1, {{0, 1}}));
  CHECK(b.lower == -1);
  CHECK(b.upper == 0);
}

TEST_CASE("bounds match exhaustive extrema") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = testing_support::random_problem(rng, 14);
    for (const auto& g : p.inequalities()) {
      const auto b = bounds(g);
      double lo = 1e300, hi = -1e300;
      for (std::uint64_t x = 0; x < (1ULL << p.n_vars()); ++x) {
        const double v = g.evaluate(oracle::bits_of(x, p.n_vars()));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      CHECK(b.lower == lo);
      CHECK(b.upper == hi);
    }
  }
}

TEST_CASE("validate diagnostics") {
  ConstrainedProblem overlap(5, {}, Sense::minimize, {OneHotGroup{{0, 1, 2}}, OneHotGroup{{2, 3, 4}}}, {});
  CHECK(contains(validate(overlap), "overlap at var 2"));

  CHECK(validate(pp_shaped()).empty());

  ConstrainedProblem small(2, {}, Sense::minimize, {OneHotGroup{{0, 1}}}, {});
  CHECK(contains(validate(small), "d_i must exceed 2"));

  ConstrainedProblem range(3, LinearFunction(0, {{5, 1}}), Sense::minimize, {}, {LinearFunction(0, {{4, 1}})});
  const auto issues = validate(range);
  CHECK(contains(issues, "objective references variable 5"));
  CHECK(contains(issues, "inequality 0 references variable 4"));

  ConstrainedProblem frac(3, {}, Sense::minimize, {}, {LinearFunction(0.5, {{0, 1}})});
  CHECK(contains(validate(frac), "non-integer"));
}

TEST_CASE("maximization is stored negated") {
  ConstrainedProblem p(2, LinearFunction(1, {{0, 2}}), Sense::maximize, {}, {});
  CHECK(p.objective() == LinearFunction(-1, {{0, -2}}));
  CHECK(p.original_objective() == LinearFunction(1, {{0, 2}}));
}

TEST_CASE("is_feasible examples") {
  const auto p = pp_shaped();
  CHECK_FALSE(is_feasible(p, Bits{1, 1, 0, 0, 0, 1}));
  CHECK(is_feasible(p, Bits{0, 0, 1, 0, 0, 1}));
  CHECK_FALSE(is_feasible(p, Bits{0, 1, 0, 0, 1, 0}));  // 3 - 2 - 2 < 0
  CHECK(count_violations(p, Bits{1, 1, 0, 0, 1, 0}) == 2);
  CHECK_THROWS(is_feasible(p, Bits{1}));
}

TEST_CASE("is_feasible agrees with an independent checker") {
  std::mt19937_64 rng(5);
  const auto p = testing_support::random_problem(rng, 12);
  std::uniform_int_distribution<std::uint64_t> pick(0, (1ULL << p.n_vars()) - 1);
  int hits = 0;
  for (int k = 0; k < 10000; ++k) {
    const auto x = oracle::bits_of(pick(rng), p.n_vars());
    const bool ref = feasible_reference(p, x);
    hits += ref;
    REQUIRE(is_feasible(p, x) == ref);
  }
  // Also all one-hot points, which random bit strings rarely hit.
  for (std::uint64_t i = 0; i < (1ULL << p.n_vars()); ++i) {
    if (!oracle::one_hot_ok(p, i)) continue;
    const auto x = oracle::bits_of(i, p.n_vars());
    REQUIRE(is_feasible(p, x) == feasible_reference(p, x));
  }
}

TEST_CASE("dropping a constraint never shrinks the feasible set") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = testing_support::random_problem(rng, 10);
    auto fewer = p.inequalities();
    fewer.pop_back();
    ConstrainedProblem q(p.n_vars(), p.objective(), Sense::minimize, p.groups(), fewer);
    for (std::uint64_t i = 0; i < (1ULL << p.n_vars()); ++i) {
      const auto x = oracle::bits_of(i, p.n_vars());
      if (is_feasible(p, x)) REQUIRE(is_feasible(q, x));
    }
  }
}

TEST_CASE("small groups are rewritten") {
  // groups {0} (d=1), {1,2} (d=2), {3,4,5} (d=3); variable 6 free
  LinearFunction f(0, {{0, 1}, {1, 2}, {2, 5}, {3, 1}, {6, -1}});
  LinearFunction g(4, {{0, -1}, {2, -3}, {4, -1}});
  ConstrainedProblem p(7, f, Sense::minimize, {OneHotGroup{{0}}, OneHotGroup{{1, 2}}, OneHotGroup{{3, 4, 5}}}, {g});
  const auto norm = reduce_small_groups(p);
  CHECK(validate(norm.problem).empty());
  CHECK(norm.problem.n_vars() == 5);
  CHECK(norm.problem.groups().size() == 1);
  CHECK(norm.sources[0].kind == VariableSource::Kind::constant);
  CHECK(norm.sources[0].value == 1);
  CHECK(norm.sources[2].kind == VariableSource::Kind::complement);

  // Every reduced assignment maps to a group-respecting original one with
  // the same objective and constraint values.
  for (std::uint64_t i = 0; i < (1ULL << norm.problem.n_vars()); ++i) {
    const auto y = oracle::bits_of(i, norm.problem.n_vars());
    const auto x = norm.expand(y);
    CHECK(norm.problem.objective().evaluate(y) == p.objective().evaluate(x));
    CHECK(norm.problem.inequalities()[0].evaluate(y) == g.evaluate(x));
    CHECK(is_feasible(norm.problem, y) == is_feasible(p, x));
  }
}

TEST_CASE("exhaustive solver matches brute force over all bit strings") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing_support::random_problem(rng, 12, trial % 2 == 1);
    const auto sol = solve_exhaustive(p);
    double best = 1e300;
    std::uint64_t feasible = 0;
    for (std::uint64_t i = 0; i < (1ULL << p.n_vars()); ++i) {
      const auto x = oracle::bits_of(i, p.n_vars());
      if (!feasible_reference(p, x)) continue;
      ++feasible;
      best = std::min(best, p.objective().evaluate(x));
    }
    REQUIRE(sol.has_value());
    CHECK(sol->optimum == doctest::Approx(best).epsilon(1e-12));
    CHECK(sol->feasible_count == feasible);
    CHECK(is_feasible(p, sol->argmin));
    CHECK(p.objective().evaluate(sol->argmin) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("exhaustive solver reports infeasibility and the cap") {
  ConstrainedProblem p(3, {}, Sense::minimize, {OneHotGroup{{0, 1, 2}}}, {LinearFunction(-1, {})});
  CHECK_FALSE(solve_exhaustive(p).has_value());
  CHECK_THROWS_AS(solve_exhaustive(pp_shaped(), 8), std::length_error);
}
