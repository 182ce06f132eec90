#include <doctest.h>

#include <random>
#include <sstream>

#include "cqaoa/bitcost.hpp"
#include "cqaoa/pipeline.hpp"
#include "support/random_problems.hpp"

using namespace cqaoa;

namespace {

Layout qubit_qudit_layout() {
  Layout l;
  l.sites.push_back(Site{SiteKind::qubit, 2, {0}});
  l.sites.push_back(Site{SiteKind::qudit, 3, {1, 2, 3}});
  l.var_literal = {Literal{0, 1}, Literal{1, 0}, Literal{1, 1}, Literal{1, 2}};
  return l;
}

}  // namespace

// f(w,x,y,z) = wx + 2wy + 3wz - w with (x,y,z) one-hot
TEST_CASE("worked example tensor") {
  const auto layout = qubit_qudit_layout();
  SitePolynomial f;
  const Literal w{0, 1};
  f.add({w, Literal{1, 0}}, 1.0);
  f.add({w, Literal{1, 1}}, 2.0);
  f.add({w, Literal{1, 2}}, 3.0);
  f.add({w}, -1.0);
  const auto bits = layout.bits();
  CHECK(bits.width == std::vector<unsigned>{1, 2});
  const auto t = bruteforce(compile_terms(f, bits), bits);
  CHECK(t.shape() == std::vector<std::size_t>{2, 3});
  const std::vector<double> expect{0, 0, 0, 0, 1, 2};
  CHECK(std::vector<double>(t.values().begin(), t.values().end()) == expect);
}

TEST_CASE("polynomial simplification") {
  SitePolynomial p;
  p.add({Literal{0, 1}, Literal{0, 1}}, 2.0);  // z^2 = z
  CHECK(p.terms().size() == 1);
  CHECK(p.terms().begin()->first == Monomial{Literal{0, 1}});
  p.add({Literal{1, 0}, Literal{1, 2}}, 5.0);  // two levels of one qudit
  CHECK(p.terms().size() == 1);
  Monomial out;
  CHECK_FALSE(SitePolynomial::multiply({Literal{1, 0}}, {Literal{1, 1}}, out));
  CHECK(SitePolynomial::multiply({Literal{2, 1}}, {Literal{0, 1}}, out));
  CHECK(out == Monomial{Literal{0, 1}, Literal{2, 1}});
}

TEST_CASE("add_square expands exactly") {
  // (x0 + 2 x1 - 1)^2 on binary sites
  SitePolynomial p;
  std::vector<std::pair<Literal, double>> lin{{Literal{0, 1}, 1.0}, {Literal{1, 1}, 2.0}};
  p.add_square(lin, -1.0, 3.0);
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      const double v = static_cast<double>(a) + 2.0 * static_cast<double>(b) - 1.0;
      const std::size_t levels[] = {a, b};
      CHECK(p.evaluate(levels) == doctest::Approx(3.0 * v * v));
    }
  }
}

TEST_CASE("key packing uses ceil(log2 d) bits per qudit") {
  const std::size_t dims[] = {2, 5, 3, 2, 4};
  const auto b = BitLayout::from_dims(dims);
  CHECK(b.width == std::vector<unsigned>{1, 3, 2, 1, 2});
  CHECK(b.start == std::vector<unsigned>{0, 1, 4, 6, 7});
  CHECK(b.total_bits == 9);
  const std::size_t levels[] = {1, 4, 2, 0, 3};
  CHECK(b.pack(levels) == (1u | (4u << 1) | (2u << 4) | (3u << 7)));
  CHECK(b.field_mask(1) == 0b1110u);
  std::vector<std::size_t> huge(65, 2);
  CHECK_THROWS_AS(BitLayout::from_dims(huge), std::length_error);
}

TEST_CASE("compile_terms rejects levels outside the site") {
  SitePolynomial p;
  p.add({Literal{0, 3}}, 1.0);
  const std::size_t dims[] = {3};
  CHECK_THROWS_AS(compile_terms(p, BitLayout::from_dims(dims)), std::invalid_argument);
}

TEST_CASE("brute force equals direct polynomial evaluation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coef(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::size_t> dims;
    const int k = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) dims.push_back(2);
    const int q = static_cast<int>(rng() % 3);
    for (int i = 0; i < q; ++i) dims.push_back(3 + rng() % 4);
    SitePolynomial p;
    p.add_constant(coef(rng));
    for (int t = 0; t < 12; ++t) {
      Monomial m;
      for (std::uint32_t s = 0; s < dims.size(); ++s) {
        if (rng() % 3 == 0) m.push_back(Literal{s, static_cast<std::uint32_t>(dims[s] == 2 ? 1 : rng() % dims[s])});
      }
      p.add(m, coef(rng));
    }
    const auto bits = BitLayout::from_dims(dims);
    const auto t = bruteforce(compile_terms(p, bits), bits);
    Layout layout;
    for (auto d : dims) layout.sites.push_back(Site{d == 2 ? SiteKind::qubit : SiteKind::qudit, d, {}});
    for (std::uint64_t i = 0; i < t.size(); ++i) {
      const auto levels = layout.unravel(i);
      // Independent evaluation: product of indicators per monomial.
      double v = 0.0;
      for (const auto& [m, c] : p.terms()) {
        bool on = true;
        for (const auto& l : m) on = on && levels[l.site] == l.level;
        if (on) v += c;
      }
      REQUIRE(t[i] == doctest::Approx(v).epsilon(1e-12));
    }
  }
}

TEST_CASE("threaded brute force matches the single-thread result") {
  std::vector<std::size_t> dims(15, 2);
  dims.push_back(5);
  SitePolynomial p;
  for (std::uint32_t s = 0; s + 1 < 15; ++s) p.add({Literal{s, 1}, Literal{s + 1, 1}}, 1.0 + s);
  p.add({Literal{3, 1}, Literal{15, 4}}, -7.0);
  const auto bits = BitLayout::from_dims(dims);
  const auto terms = compile_terms(p, bits);
  const auto a = bruteforce(terms, bits, 1);
  const auto b = bruteforce(terms, bits, 3);
  CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
}

TEST_CASE("tensor dump round trip") {
  CostTensor t({2, 3});
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.5 * static_cast<double>(i) - 1.0;
  std::stringstream ss;
  write_tensor(ss, t, 42);
  std::uint64_t hash = 0;
  const auto back = read_tensor(ss, &hash);
  CHECK(hash == 42);
  CHECK(back.shape() == t.shape());
  CHECK(std::equal(back.values().begin(), back.values().end(), t.values().begin()));

  std::stringstream bad("XXXXnot a tensor");
  CHECK_THROWS(read_tensor(bad));
}

TEST_CASE("layout hash separates different layouts") {
  const std::size_t a[] = {2, 3};
  const std::size_t b[] = {2, 4};
  const std::size_t c[] = {3, 2};
  CHECK(layout_hash(BitLayout::from_dims(a)) != layout_hash(BitLayout::from_dims(b)));
  CHECK(layout_hash(BitLayout::from_dims(a)) != layout_hash(BitLayout::from_dims(c)));
  CHECK(layout_hash(BitLayout::from_dims(a)) == layout_hash(BitLayout::from_dims(a)));
}

TEST_CASE("violation counts and evaluation cost against direct evaluation") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = testing_support::random_problem(rng, 10);
    for (auto m : {Method::qubo, Method::indicator_xy}) {
      PipelineConfig cfg;
      cfg.method = m;
      cfg.rho = 1.0;
      const auto model = compile(p, cfg);
      const auto counts = violation_counts(p, model.layout);
      const auto F = evaluation_cost(p, 2.5, model.layout);
      for (std::uint64_t i = 0; i < F.size(); ++i) {
        const auto x = model.layout.decode(i, p.n_vars());
        REQUIRE(counts[i] == count_violations(p, x));
        REQUIRE(F[i] == doctest::Approx(p.objective().evaluate(x) + 2.5 * count_violations(p, x)));
      }
    }
  }
}
