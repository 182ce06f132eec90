#include "cqaoa/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tensor_format.hpp"

namespace cqaoa {

namespace {

constexpr Amplitude kI{0.0, 1.0};

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void check_shape(const StateTensor& state, std::size_t n) {
  if (state.size() != n) throw std::invalid_argument("state and cost tensor sizes differ");
}

void check_shape(const StateTensor& state, const CostTensor& cost) {
  if (state.shape() != cost.shape()) throw std::invalid_argument("state and cost tensor shapes differ");
}

// Walks every entry of `layout` in C-order, reporting the flat index and
// the index over the non-slack axes.
template <typename Fn>
void for_each_compute_entry(const Layout& layout, Fn&& fn) {
  const auto rank = layout.sites.size();
  std::vector<std::uint64_t> cstride(rank, 0);
  std::uint64_t s = 1;
  for (std::size_t i = rank; i-- > 0;) {
    if (layout.sites[i].kind == SiteKind::slack) continue;
    cstride[i] = s;
    s *= layout.sites[i].dim;
  }
  std::vector<std::size_t> levels(rank, 0);
  const auto total = layout.entries();
  std::uint64_t cidx = 0;
  for (std::uint64_t flat = 0; flat < total; ++flat) {
    fn(flat, cidx);
    for (std::size_t pos = rank; pos-- > 0;) {
      if (++levels[pos] < layout.sites[pos].dim) {
        cidx += cstride[pos];
        break;
      }
      cidx -= (layout.sites[pos].dim - 1) * cstride[pos];
      levels[pos] = 0;
    }
  }
}

}  // namespace

StateTensor::StateTensor(std::vector<std::size_t> shape) : shape_(std::move(shape)), amps_(product(shape_)) {}

double StateTensor::norm_squared() const {
  double n = 0.0;
  for (const auto& a : amps_) n += std::norm(a);
  return n;
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SquareMatrix SquareMatrix::adjoint() const {
  SquareMatrix out(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t c = 0; c < n_; ++c) out(c, r) = std::conj((*this)(r, c));
  }
  return out;
}

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("matrix dimensions differ");
  SquareMatrix out(a.n_);
  for (std::size_t r = 0; r < a.n_; ++r) {
    for (std::size_t k = 0; k < a.n_; ++k) {
      const auto ark = a(r, k);
      if (ark == Amplitude{}) continue;
      for (std::size_t c = 0; c < a.n_; ++c) out(r, c) += ark * b(k, c);
    }
  }
  return out;
}

SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("matrix dimensions differ");
  SquareMatrix out(a.n_);
  for (std::size_t i = 0; i < a.a_.size(); ++i) out.a_[i] = a.a_[i] + b.a_[i];
  return out;
}

double SquareMatrix::unitarity_error() const {
  return (adjoint() * *this).max_abs_diff(identity(n_));
}

double SquareMatrix::max_abs_diff(const SquareMatrix& other) const {
  if (n_ != other.n_) throw std::invalid_argument("matrix dimensions differ");
  double e = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) e = std::max(e, std::abs(a_[i] - other.a_[i]));
  return e;
}

StateTensor init_state(std::span<const std::size_t> shape, std::uint64_t memory_cap) {
  std::uint64_t entries = 1;
  for (auto d : shape) {
    if (d == 0) throw std::invalid_argument("zero-sized axis");
    if (entries > memory_cap) break;
    entries *= d;
  }
  if (entries > memory_cap) throw MemoryCapExceeded(entries, memory_cap);
  StateTensor state(std::vector<std::size_t>(shape.begin(), shape.end()));
  const double a = 1.0 / std::sqrt(static_cast<double>(state.size()));
  std::fill(state.amplitudes().begin(), state.amplitudes().end(), Amplitude{a, 0.0});
  return state;
}

void apply_phase(StateTensor& state, const CostTensor& cost, double gamma) {
  check_shape(state, cost);
  auto amps = state.amplitudes();
  const auto vals = cost.values();
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] *= std::polar(1.0, -gamma * vals[i]);
}

SquareMatrix rx_matrix(double beta) {
  SquareMatrix m(2);
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  m(0, 0) = c;
  m(1, 1) = c;
  m(0, 1) = Amplitude{0.0, -s};
  m(1, 0) = Amplitude{0.0, -s};
  return m;
}

RingLayers ring_layers(std::size_t d) {
  if (d < 3) throw std::invalid_argument("ring mixer needs d >= 3");
  RingLayers layers;
  for (std::size_t k = 0; k + 1 < d; k += 2) layers.even.emplace_back(k, k + 1);
  for (std::size_t k = 1; k + 1 < d; k += 2) layers.odd.emplace_back(k, k + 1);
  if (d % 2 == 0) {
    layers.odd.emplace_back(d - 1, 0);
  } else {
    layers.last.emplace_back(0, d - 1);
  }
  return layers;
}

namespace {

SquareMatrix layer_matrix(std::size_t d, std::span<const std::pair<std::size_t, std::size_t>> pairs, double beta) {
  auto m = SquareMatrix::identity(d);
  const auto r = rx_matrix(beta);
  for (const auto& [a, b] : pairs) {
    m(a, a) = r(0, 0);
    m(a, b) = r(0, 1);
    m(b, a) = r(1, 0);
    m(b, b) = r(1, 1);
  }
  return m;
}

SquareMatrix layer_generator(std::size_t d, std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  SquareMatrix g(d);
  for (const auto& [a, b] : pairs) {
    g(a, b) = 1.0;
    g(b, a) = 1.0;
  }
  return g;
}

}  // namespace

SquareMatrix build_ring_mixer(std::size_t d, double beta) {
  const auto layers = ring_layers(d);
  auto u = layer_matrix(d, layers.odd, beta) * layer_matrix(d, layers.even, beta);
  if (!layers.last.empty()) u = layer_matrix(d, layers.last, beta) * u;
  return u;
}

SquareMatrix ring_mixer_generator(std::size_t d, double beta) {
  const auto layers = ring_layers(d);
  const auto last = layer_matrix(d, layers.last, beta);
  const auto lo = last * layer_matrix(d, layers.odd, beta);
  return layer_generator(d, layers.last) + last * layer_generator(d, layers.odd) * last.adjoint() +
         lo * layer_generator(d, layers.even) * lo.adjoint();
}

void apply_x_mixer(StateTensor& state, std::size_t qubit_axes, double beta) {
  const auto& shape = state.shape();
  if (qubit_axes > shape.size()) throw std::invalid_argument("more qubit axes than tensor axes");
  const double c = std::cos(beta);
  const Amplitude mis{0.0, -std::sin(beta)};
  auto amps = state.amplitudes();
  const std::size_t n = amps.size();
  std::size_t stride = n;
  for (std::size_t axis = 0; axis < qubit_axes; ++axis) {
    if (shape[axis] != 2) throw std::invalid_argument("qubit axis must have dimension 2");
    stride /= 2;
    for (std::size_t block = 0; block < n; block += 2 * stride) {
      Amplitude* lo = amps.data() + block;
      Amplitude* hi = lo + stride;
      for (std::size_t i = 0; i < stride; ++i) {
        const Amplitude a = lo[i];
        const Amplitude b = hi[i];
        lo[i] = c * a + mis * b;
        hi[i] = mis * a + c * b;
      }
    }
  }
}

void apply_qudit_mixer(StateTensor& state, std::size_t axis, const SquareMatrix& matrix) {
  const auto& shape = state.shape();
  if (axis >= shape.size()) throw std::invalid_argument("axis out of range");
  const std::size_t d = shape[axis];
  if (matrix.dim() != d) throw std::invalid_argument("matrix dimension does not match axis dimension");
  std::size_t inner = 1;
  for (std::size_t i = axis + 1; i < shape.size(); ++i) inner *= shape[i];
  const std::size_t outer = state.size() / (inner * d);

  auto amps = state.amplitudes();
  std::vector<Amplitude> fiber(d);
  for (std::size_t o = 0; o < outer; ++o) {
    Amplitude* base = amps.data() + o * d * inner;
    for (std::size_t i = 0; i < inner; ++i) {
      for (std::size_t k = 0; k < d; ++k) fiber[k] = base[k * inner + i];
      for (std::size_t r = 0; r < d; ++r) {
        Amplitude acc{};
        for (std::size_t k = 0; k < d; ++k) acc += matrix(r, k) * fiber[k];
        base[r * inner + i] = acc;
      }
    }
  }
}

double expectation(const StateTensor& state, const CostTensor& cost) {
  check_shape(state, cost);
  double e = 0.0;
  const auto amps = state.amplitudes();
  const auto vals = cost.values();
  for (std::size_t i = 0; i < amps.size(); ++i) e += std::norm(amps[i]) * vals[i];
  return e;
}

Amplitude inner_product(std::span<const Amplitude> a, std::span<const Amplitude> b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector sizes differ");
  Amplitude acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

std::vector<double> marginal_distribution(const StateTensor& state, const Layout& layout) {
  check_shape(state, static_cast<std::size_t>(layout.entries()));
  std::uint64_t compute = 1;
  for (const auto& s : layout.sites) {
    if (s.kind != SiteKind::slack) compute *= s.dim;
  }
  std::vector<double> probs(compute, 0.0);
  for_each_compute_entry(layout, [&](std::uint64_t flat, std::uint64_t cidx) { probs[cidx] += std::norm(state[flat]); });
  return probs;
}

MeasurementStats measurement_stats(const StateTensor& state, const CostTensor& objective,
                                   std::span<const std::uint32_t> violations, const Layout& layout,
                                   double optimum) {
  check_shape(state, objective);
  if (violations.size() != objective.size()) throw std::invalid_argument("violation count size mismatch");

  const auto probs = marginal_distribution(state, layout);
  std::vector<double> f(probs.size(), 0.0);
  std::vector<std::uint8_t> feasible(probs.size(), 0);
  for_each_compute_entry(layout, [&](std::uint64_t flat, std::uint64_t cidx) {
    f[cidx] = objective[flat];
    feasible[cidx] = violations[flat] == 0;
  });

  const double tol = 1e-9 * std::max(1.0, std::abs(optimum));
  const double p90_limit = optimum + 0.1 * std::abs(optimum) + tol;
  MeasurementStats stats;
  stats.optimum = optimum;
  for (std::size_t c = 0; c < probs.size(); ++c) {
    if (!feasible[c]) continue;
    stats.feasible_probability += probs[c];
    if (f[c] <= optimum + tol) stats.p_star += probs[c];
    if (f[c] <= p90_limit) stats.p90 += probs[c];
  }
  return stats;
}

void write_state(std::ostream& out, const StateTensor& state, std::uint64_t hash) {
  detail::TensorHeader h;
  h.kind = detail::EntryKind::complex128;
  h.dims.assign(state.shape().begin(), state.shape().end());
  h.hash = hash;
  detail::write_header(out, h);
  for (const auto& a : state.amplitudes()) {
    detail::put_f64(out, a.real());
    detail::put_f64(out, a.imag());
  }
}

StateTensor read_state(std::istream& in, std::uint64_t* hash) {
  const auto h = detail::read_header(in);
  if (h.kind != detail::EntryKind::complex128) throw std::runtime_error("tensor file does not hold complex entries");
  StateTensor s(std::vector<std::size_t>(h.dims.begin(), h.dims.end()));
  for (auto& a : s.amplitudes()) {
    const double re = detail::get_f64(in);
    const double im = detail::get_f64(in);
    a = {re, im};
  }
  if (hash) *hash = h.hash;
  return s;
}

}  // namespace cqaoa
