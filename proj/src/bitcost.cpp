#include "cqaoa/bitcost.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "tensor_format.hpp"

namespace cqaoa {

// ---------------------------------------------------------------- polynomial

bool SitePolynomial::multiply(const Monomial& a, const Monomial& b, Monomial& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  Monomial simplified;
  simplified.reserve(out.size());
  for (const auto& lit : out) {
    if (!simplified.empty() && simplified.back().site == lit.site) {
      if (simplified.back().level != lit.level) return false;
      continue;
    }
    simplified.push_back(lit);
  }
  out = std::move(simplified);
  return true;
}

void SitePolynomial::add(Monomial m, double value) {
  if (value == 0.0) return;
  std::sort(m.begin(), m.end());
  Monomial normal;
  if (!multiply(m, {}, normal)) return;
  auto [it, inserted] = terms_.try_emplace(std::move(normal), value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0.0) terms_.erase(it);
  }
}

void SitePolynomial::add_square(std::span<const std::pair<Literal, double>> linear, double constant, double scale) {
  add_constant(scale * constant * constant);
  Monomial prod;
  for (std::size_t k = 0; k < linear.size(); ++k) {
    const auto& [zk, ck] = linear[k];
    add({zk}, scale * (2.0 * constant * ck + ck * ck));
    for (std::size_t l = k + 1; l < linear.size(); ++l) {
      const auto& [zl, cl] = linear[l];
      Monomial a{zk};
      Monomial b{zl};
      if (zl < zk) std::swap(a, b);
      if (multiply(a, b, prod)) add(prod, scale * 2.0 * ck * cl);
    }
  }
}

std::size_t SitePolynomial::degree() const {
  std::size_t d = 0;
  for (const auto& [m, v] : terms_) d = std::max(d, m.size());
  return d;
}

double SitePolynomial::evaluate(std::span<const std::size_t> levels) const {
  double total = 0.0;
  for (const auto& [m, v] : terms_) {
    bool match = true;
    for (const auto& lit : m) {
      if (levels[lit.site] != lit.level) {
        match = false;
        break;
      }
    }
    if (match) total += v;
  }
  return total;
}

// ---------------------------------------------------------------- layouts

BitLayout BitLayout::from_dims(std::span<const std::size_t> dims) {
  BitLayout out;
  out.dims.assign(dims.begin(), dims.end());
  unsigned pos = 0;
  for (auto d : dims) {
    if (d == 0) throw std::invalid_argument("site dimension must be positive");
    const unsigned w = d <= 1 ? 0u : static_cast<unsigned>(std::bit_width(d - 1));
    out.start.push_back(pos);
    out.width.push_back(w);
    pos += w;
  }
  if (pos > 64) throw std::length_error("layout needs more than 64 key bits");
  out.total_bits = pos;
  return out;
}

std::uint64_t BitLayout::field_mask(std::size_t site) const {
  const auto w = width[site];
  if (w == 0) return 0;
  const std::uint64_t ones = w >= 64 ? ~0ULL : ((1ULL << w) - 1);
  return ones << start[site];
}

std::uint64_t BitLayout::pack(std::span<const std::size_t> levels) const {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) key |= static_cast<std::uint64_t>(levels[i]) << start[i];
  return key;
}

std::vector<std::size_t> Layout::shape() const {
  std::vector<std::size_t> s;
  s.reserve(sites.size());
  for (const auto& site : sites) s.push_back(site.dim);
  return s;
}

std::uint64_t Layout::entries() const {
  std::uint64_t n = 1;
  for (const auto& site : sites) {
    if (n > (std::numeric_limits<std::uint64_t>::max() >> 1) / site.dim) throw std::overflow_error("layout too large");
    n *= site.dim;
  }
  return n;
}

std::size_t Layout::binary_axes() const {
  std::size_t k = 0;
  while (k < sites.size() && sites[k].is_binary()) ++k;
  return k;
}

std::vector<std::size_t> Layout::unravel(std::uint64_t flat) const {
  std::vector<std::size_t> levels(sites.size());
  for (std::size_t i = sites.size(); i-- > 0;) {
    levels[i] = flat % sites[i].dim;
    flat /= sites[i].dim;
  }
  return levels;
}

Bits Layout::decode(std::uint64_t flat, std::size_t n_vars) const {
  Bits x(n_vars, 0);
  const auto levels = unravel(flat);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto& s = sites[i];
    if (s.kind == SiteKind::qubit) x[s.vars.at(0)] = static_cast<std::uint8_t>(levels[i]);
    if (s.kind == SiteKind::qudit) x[s.vars.at(levels[i])] = 1;
  }
  return x;
}

SitePolynomial Layout::to_polynomial(const LinearFunction& f) const {
  SitePolynomial p;
  p.add_constant(f.constant());
  for (const auto& t : f.terms()) p.add({var_literal.at(t.var)}, t.coeff);
  return p;
}

// ---------------------------------------------------------------- tensors

CostTensor::CostTensor(std::vector<std::size_t> shape, double fill) : shape_(std::move(shape)) {
  std::size_t n = 1;
  for (auto d : shape_) n *= d;
  values_.assign(n, fill);
}

double CostTensor::min() const { return *std::min_element(values_.begin(), values_.end()); }
double CostTensor::max() const { return *std::max_element(values_.begin(), values_.end()); }
double CostTensor::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

TermSet compile_terms(const SitePolynomial& cost, const BitLayout& layout) {
  TermSet terms;
  terms.reserve(cost.terms().size());
  for (const auto& [mono, value] : cost.terms()) {
    Term t{0, 0, value};
    for (const auto& lit : mono) {
      if (lit.site >= layout.dims.size()) throw std::invalid_argument("term references unknown site");
      if (lit.level >= layout.dims[lit.site]) {
        throw std::invalid_argument("term level " + std::to_string(lit.level) + " outside site dimension " +
                                    std::to_string(layout.dims[lit.site]));
      }
      t.key |= static_cast<std::uint64_t>(lit.level) << layout.start[lit.site];
      t.mask |= layout.field_mask(lit.site);
    }
    terms.push_back(t);
  }
  return terms;
}

namespace {

void bruteforce_range(const TermSet& terms, const BitLayout& layout, std::uint64_t begin, std::uint64_t end,
                      std::span<double> out) {
  const auto rank = layout.dims.size();
  std::vector<std::size_t> levels(rank);
  std::uint64_t rest = begin;
  for (std::size_t i = rank; i-- > 0;) {
    levels[i] = rest % layout.dims[i];
    rest /= layout.dims[i];
  }
  std::uint64_t key = layout.pack(levels);

  for (std::uint64_t flat = begin; flat < end; ++flat) {
    double sum = 0.0;
    for (const auto& t : terms) {
      if ((key & t.mask) == t.key) sum += t.value;
    }
    out[flat] = sum;

    for (std::size_t pos = rank; pos-- > 0;) {
      const auto fm = layout.field_mask(pos);
      if (++levels[pos] < layout.dims[pos]) {
        key = (key & ~fm) | (static_cast<std::uint64_t>(levels[pos]) << layout.start[pos]);
        break;
      }
      levels[pos] = 0;
      key &= ~fm;
    }
  }
}

}  // namespace

CostTensor bruteforce(const TermSet& terms, const BitLayout& layout, unsigned workers) {
  CostTensor tensor(layout.dims);
  const std::uint64_t n = tensor.size();
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  constexpr std::uint64_t kMinChunk = 1 << 14;
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(n / kMinChunk, 1, workers));

  if (workers == 1) {
    bruteforce_range(terms, layout, 0, n, tensor.values());
    return tensor;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t b = n * w / workers;
    const std::uint64_t e = n * (w + 1) / workers;
    pool.emplace_back([&, b, e] { bruteforce_range(terms, layout, b, e, tensor.values()); });
  }
  return tensor;
}

std::vector<CostTensor> bruteforce_linear(std::span<const LinearFunction> functions, const Layout& layout) {
  const auto bits = layout.bits();
  std::vector<CostTensor> out;
  out.reserve(functions.size());
  for (const auto& f : functions) out.push_back(bruteforce(compile_terms(layout.to_polynomial(f), bits), bits));
  return out;
}

CostTensor apply_step_penalties(CostTensor cost, std::span<const LinearFunction> constraints, double rho,
                                const Layout& layout) {
  if (constraints.empty()) return cost;
  const auto gs = bruteforce_linear(constraints, layout);
  for (const auto& g : gs) {
    if (g.size() != cost.size()) throw std::invalid_argument("constraint tensor does not match cost shape");
    for (std::size_t i = 0; i < cost.size(); ++i) {
      if (g[i] < 0.0) cost[i] += rho;
    }
  }
  return cost;
}

std::vector<std::uint32_t> violation_counts(const ConstrainedProblem& problem, const Layout& layout) {
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(layout.entries()), 0);
  for (const auto& g : bruteforce_linear(problem.inequalities(), layout)) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += g[i] < 0.0 ? 1 : 0;
  }
  std::vector<LinearFunction> group_sums;
  for (const auto& group : problem.groups()) {
    const auto site = layout.var_literal.at(group.members.front()).site;
    const bool on_qudit = layout.sites[site].kind == SiteKind::qudit &&
                          std::all_of(group.members.begin(), group.members.end(),
                                      [&](std::size_t v) { return layout.var_literal.at(v).site == site; });
    if (on_qudit) continue;
    LinearFunction s;
    for (auto v : group.members) s.add(v, 1.0);
    group_sums.push_back(std::move(s));
  }
  for (const auto& s : bruteforce_linear(group_sums, layout)) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += s[i] != 1.0 ? 1 : 0;
  }
  return counts;
}

CostTensor evaluation_cost(const ConstrainedProblem& problem, double eta, const Layout& layout) {
  const auto bits = layout.bits();
  auto f = bruteforce(compile_terms(layout.to_polynomial(problem.objective()), bits), bits);
  const auto counts = violation_counts(problem, layout);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] += eta * static_cast<double>(counts[i]);
  return f;
}

// ---------------------------------------------------------------- dumps

std::uint64_t layout_hash(const BitLayout& layout) {
  std::uint64_t h = 14695981039346656037ULL;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFFu;
      h *= 1099511628211ULL;
    }
  };
  for (std::size_t i = 0; i < layout.dims.size(); ++i) {
    mix(layout.dims[i]);
    mix(layout.start[i]);
  }
  return h;
}

void write_tensor(std::ostream& out, const CostTensor& tensor, std::uint64_t hash) {
  detail::TensorHeader h;
  h.kind = detail::EntryKind::real64;
  h.dims.assign(tensor.shape().begin(), tensor.shape().end());
  h.hash = hash;
  detail::write_header(out, h);
  for (double v : tensor.values()) detail::put_f64(out, v);
}

CostTensor read_tensor(std::istream& in, std::uint64_t* hash) {
  const auto h = detail::read_header(in);
  if (h.kind != detail::EntryKind::real64) throw std::runtime_error("tensor file does not hold real entries");
  CostTensor t(std::vector<std::size_t>(h.dims.begin(), h.dims.end()));
  for (auto& v : t.values()) v = detail::get_f64(in);
  if (hash) *hash = h.hash;
  return t;
}

}  // namespace cqaoa
