#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "cqaoa/metrics.hpp"
#include "support/fullspace.hpp"
#include "support/random_problems.hpp"

using namespace cqaoa;

TEST_CASE("raar") {
  CHECK(raar(5.0, 5.0, 1.0) == 0.0);
  CHECK(raar(1.0, 5.0, 1.0) == 1.0);
  CHECK(raar(3.0, 5.0, 1.0) == 0.5);
  CHECK_THROWS_AS(raar(1.0, 2.0, 2.0), std::domain_error);
}

TEST_CASE("random average examples") {
  ConstrainedProblem free(3, LinearFunction(1.0, {{0, 2}, {1, -4}, {2, 3}}), Sense::minimize, {}, {});
  CHECK(random_average(free, 1.0) == doctest::Approx(1.0 + 0.5));
  ConstrainedProblem never(1, LinearFunction(0.0, {{0, 2}}), Sense::minimize, {}, {LinearFunction(-1, {})});
  CHECK(random_average(never, 3.0) == doctest::Approx(1.0 + 3.0));
}

TEST_CASE("random average matches enumeration") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 15; ++trial) {
    const auto p = testing_support::random_problem(rng, 14, true);
    const double eta = 1.7;
    double sum = 0;
    const std::uint64_t n = 1ULL << p.n_vars();
    for (std::uint64_t x = 0; x < n; ++x) {
      const auto b = oracle::bits_of(x, p.n_vars());
      sum += p.objective().evaluate(b) + eta * static_cast<double>(count_violations(p, b));
    }
    CHECK(random_average(p, eta) == doctest::Approx(sum / static_cast<double>(n)).epsilon(1e-12));
  }
}

TEST_CASE("sampled random average is close") {
  std::mt19937_64 rng(6);
  const auto p = testing_support::random_problem(rng, 12);
  CHECK(random_average(p, 2.0, 1, 1 << 18) == doctest::Approx(random_average(p, 2.0)).epsilon(0.01));
}

TEST_CASE("edge coloring examples") {
  CHECK(greedy_edge_coloring({{0, 1}, {1, 2}, {2, 0}}) == 3);
  std::vector<Edge> star;
  for (std::size_t k = 1; k <= 6; ++k) star.emplace_back(0, k);
  CHECK(greedy_edge_coloring(star) == 6);
  CHECK(greedy_edge_coloring({}) == 0);
  CHECK(greedy_edge_coloring({{1, 0}, {0, 1}, {2, 2}}) == 1);
}

TEST_CASE("greedy coloring is proper and within 2 maxdeg - 1") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Edge> edges;
    const std::size_t n = 3 + rng() % 15;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (rng() % 3 == 0) edges.emplace_back(a, b);
      }
    }
    const auto colored = greedy_edge_colors(edges);
    std::vector<std::size_t> deg(n, 0);
    std::vector<std::set<int>> seen(n);
    int colors = 0;
    for (const auto& [e, c] : colored) {
      REQUIRE(seen[e.first].insert(c).second);
      REQUIRE(seen[e.second].insert(c).second);
      ++deg[e.first];
      ++deg[e.second];
      colors = std::max(colors, c + 1);
    }
    const int maxdeg = static_cast<int>(*std::max_element(deg.begin(), deg.end()));
    CHECK(colors == greedy_edge_coloring(edges));
    CHECK(colors >= maxdeg);
    CHECK(colors <= std::max(0, 2 * maxdeg - 1));
  }
}

TEST_CASE("register size") {
  CHECK(register_size(-3, 5) == 4);
  CHECK(register_size(0, 1) == 1);
  CHECK(register_size(0, 0) == 1);
  CHECK(register_size(-2, 1) == 2);
  CHECK(register_size(-8, 8) == 4);
  CHECK(register_size(-9, 0) == 5);
}

TEST_CASE("layer counts") {
  // five-level qudit and linear cost
  CompiledModel m;
  m.layout.sites.push_back(Site{SiteKind::qudit, 5, {0, 1, 2, 3, 4}});
  for (std::uint32_t l = 0; l < 5; ++l) m.layout.var_literal.push_back(Literal{0, l});
  m.effective_cost.add({Literal{0, 2}}, 1.0);
  auto c = circuit_layers(m);
  CHECK(c.init == 6);
  CHECK(c.mixer == 6);
  CHECK(c.cost == 1);
  CHECK(c.total(3) == 6 + 3 * 7);

  // even qudit plus a qubit: maxima
  CompiledModel q;
  q.layout.sites.push_back(Site{SiteKind::qubit, 2, {0}});
  q.layout.sites.push_back(Site{SiteKind::qudit, 4, {1, 2, 3, 4}});
  q.layout.var_literal = {Literal{0, 1}, Literal{1, 0}, Literal{1, 1}, Literal{1, 2}, Literal{1, 3}};
  c = circuit_layers(q);
  CHECK(c.init == 4);
  CHECK(c.mixer == 4);
  CHECK(c.cost == 0);

  // qubits only with a triangle of couplings
  CompiledModel t;
  for (std::size_t v = 0; v < 3; ++v) {
    t.layout.sites.push_back(Site{SiteKind::qubit, 2, {v}});
    t.layout.var_literal.push_back(Literal{static_cast<std::uint32_t>(v), 1});
  }
  t.effective_cost.add({Literal{0, 1}, Literal{1, 1}}, 1.0);
  t.effective_cost.add({Literal{1, 1}, Literal{2, 1}}, 1.0);
  t.effective_cost.add({Literal{0, 1}, Literal{2, 1}}, 1.0);
  c = circuit_layers(t);
  CHECK(c.init == 1);
  CHECK(c.mixer == 1);
  CHECK(c.cost == 3);

  // indicator on one constraint over two variables with bounds (-3, 5)
  t.if_constraints.push_back(LinearFunction(5, {{0, -4}, {1, -4}}));
  c = circuit_layers(t);
  // M = 4 register qubits, each tied to 2 variables: L_phase = 4
  CHECK(c.indicator == 2 * 4 + 2 * (2 * 4 - 1) + 1);
  CHECK(c.cost == 3 + c.indicator);
}

TEST_CASE("tts") {
  CHECK(tts(0.99, 10) == 10);
  CHECK(tts(0.5, 7) == 49);
  CHECK(tts(1.0, 5) == 5);
  CHECK(std::isinf(tts(0.0, 5)));
  double prev = kUnreachable;
  for (double p = 0.001; p < 1.0; p += 0.007) {
    const double v = tts(p, 9);
    CHECK(v <= prev);
    prev = v;
  }
  const double vals[] = {kUnreachable, 40, 12, 30};
  CHECK(tts_star(vals) == 12.0);
  const double none[] = {kUnreachable, kUnreachable};
  CHECK_FALSE(tts_star(none).has_value());
}

TEST_CASE("scaling fit") {
  std::vector<std::pair<double, double>> pts;
  for (double s : {8.0, 32.0, 100.0, 1000.0}) pts.emplace_back(s, 4.0 * std::pow(s, 1.5));
  auto fit = scaling_fit(pts);
  CHECK(fit.slope == doctest::Approx(1.5));
  CHECK(fit.intercept == doctest::Approx(2.0));
  CHECK(fit.r2 == doctest::Approx(1.0));
  CHECK(fit.extrapolate(64.0) == doctest::Approx(4.0 * 512.0));

  for (auto& p : pts) p.second = 7.0;
  fit = scaling_fit(pts);
  CHECK(fit.slope == doctest::Approx(0.0));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> noise(0.95, 1.05);
  pts.clear();
  for (int k = 3; k <= 20; ++k) {
    const double s = std::exp2(k);
    pts.emplace_back(s, 3.0 * std::pow(s, 0.9) * noise(rng));
  }
  CHECK(std::abs(scaling_fit(pts).slope - 0.9) < 0.05);

  pts.resize(2);
  CHECK_THROWS_AS(scaling_fit(pts), std::invalid_argument);
  const std::pair<double, double> same[] = {{4, 1}, {4, 2}, {4, 3}};
  CHECK_THROWS_AS(scaling_fit(same), std::invalid_argument);
}
