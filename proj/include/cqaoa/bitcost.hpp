#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cqaoa/problem.hpp"

namespace cqaoa {

enum class SiteKind { qubit, qudit, slack };

/// One tensor axis. Qubits carry a single problem variable, qudits carry the
/// members of a one-hot group (level l <-> members[l] set), slack sites carry
/// no problem variable.
struct Site {
  SiteKind kind = SiteKind::qubit;
  std::size_t dim = 2;
  std::vector<std::size_t> vars;
  int constraint = -1;       // owning inequality for slack sites
  std::int64_t weight = 0;   // slack coefficient

  bool is_binary() const { return kind != SiteKind::qudit; }
};

/// Indicator [site == level]. For binary sites the only literal used is level 1.
struct Literal {
  std::uint32_t site = 0;
  std::uint32_t level = 1;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// Product of literals over distinct sites, sorted by site.
using Monomial = std::vector<Literal>;

/// Polynomial in site literals. Products are simplified on insertion:
/// repeated literals collapse (idempotence) and two different levels of the
/// same site annihilate.
class SitePolynomial {
 public:
  void add(Monomial m, double value);
  void add_constant(double value) { add({}, value); }

  /// Adds scale * (sum_k c_k z_k + c0)^2.
  void add_square(std::span<const std::pair<Literal, double>> linear, double constant, double scale);

  /// Product of two monomials; returns false when it vanishes.
  static bool multiply(const Monomial& a, const Monomial& b, Monomial& out);

  const std::map<Monomial, double>& terms() const { return terms_; }
  std::size_t degree() const;

  /// Value at a configuration (one level per site).
  double evaluate(std::span<const std::size_t> levels) const;

 private:
  std::map<Monomial, double> terms_;
};

/// Bit fields of the packed configuration key. Qubits use one bit, qudits
/// ceil(log2 d) bits; level l is stored as plain binary at its start bit.
struct BitLayout {
  std::vector<std::size_t> dims;
  std::vector<unsigned> start;
  std::vector<unsigned> width;
  unsigned total_bits = 0;

  static BitLayout from_dims(std::span<const std::size_t> dims);
  std::uint64_t field_mask(std::size_t site) const;
  std::uint64_t pack(std::span<const std::size_t> levels) const;
};

/// Sites in axis order plus the literal that represents each problem
/// variable.
struct Layout {
  std::vector<Site> sites;
  std::vector<Literal> var_literal;  // indexed by problem variable

  std::vector<std::size_t> shape() const;
  /// Product of dimensions; throws std::overflow_error past 2^63.
  std::uint64_t entries() const;
  BitLayout bits() const { auto s = shape(); return BitLayout::from_dims(s); }
  /// Number of leading qubit-like axes (compute qubits and slack).
  std::size_t binary_axes() const;

  /// Per-site levels of a flat (C-order) index.
  std::vector<std::size_t> unravel(std::uint64_t flat) const;
  /// Problem-variable assignment encoded by a flat index.
  Bits decode(std::uint64_t flat, std::size_t n_vars) const;

  SitePolynomial to_polynomial(const LinearFunction& f) const;
};

struct Term {
  std::uint64_t key = 0;
  std::uint64_t mask = 0;
  double value = 0.0;

  friend bool operator==(const Term&, const Term&) = default;
};

using TermSet = std::vector<Term>;

/// Real tensor over the layout shape, C-order (last axis fastest).
class CostTensor {
 public:
  CostTensor() = default;
  explicit CostTensor(std::vector<std::size_t> shape, double fill = 0.0);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double min() const;
  double max() const;
  double mean() const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> values_;
};

/// Key/mask terms whose matching sum reproduces the polynomial.
/// Throws std::invalid_argument for levels outside a site's dimension.
TermSet compile_terms(const SitePolynomial& cost, const BitLayout& layout);

/// For every configuration I: sum of term values with key == mask & pack(I).
/// Entries are independent; the index range is split across `workers` threads.
CostTensor bruteforce(const TermSet& terms, const BitLayout& layout, unsigned workers = 0);

/// Brute-forced value of each linear function over the layout.
std::vector<CostTensor> bruteforce_linear(std::span<const LinearFunction> functions, const Layout& layout);

/// cost + rho * (#constraints with g < 0).
CostTensor apply_step_penalties(CostTensor cost, std::span<const LinearFunction> constraints, double rho,
                                const Layout& layout);

/// Count of violated inequalities and violated one-hot groups per entry.
/// Groups mapped to qudits never contribute.
std::vector<std::uint32_t> violation_counts(const ConstrainedProblem& problem, const Layout& layout);

/// F = f + eta * (violated inequalities + violated one-hot groups).
CostTensor evaluation_cost(const ConstrainedProblem& problem, double eta, const Layout& layout);

/// Binary tensor dump: "CQTN" magic, version, entry kind, rank, dims, layout
/// hash, then little-endian float64 payload.
std::uint64_t layout_hash(const BitLayout& layout);
void write_tensor(std::ostream& out, const CostTensor& tensor, std::uint64_t hash);
CostTensor read_tensor(std::istream& in, std::uint64_t* hash = nullptr);

}  // namespace cqaoa
