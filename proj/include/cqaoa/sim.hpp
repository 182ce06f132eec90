#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cqaoa/bitcost.hpp"
#include "cqaoa/errors.hpp"

namespace cqaoa {

using Amplitude = std::complex<double>;

/// Dense complex amplitudes over a mixed qubit/qudit shape, C-order.
class StateTensor {
 public:
  StateTensor() = default;
  explicit StateTensor(std::vector<std::size_t> shape);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return amps_.size(); }
  std::size_t bytes() const { return amps_.size() * sizeof(Amplitude); }
  Amplitude& operator[](std::size_t i) { return amps_[i]; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }
  std::span<Amplitude> amplitudes() { return amps_; }
  std::span<const Amplitude> amplitudes() const { return amps_; }

  double norm_squared() const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<Amplitude> amps_;
};

/// Dense row-major n x n complex matrix.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), a_(n * n) {}

  static SquareMatrix identity(std::size_t n);

  std::size_t dim() const { return n_; }
  Amplitude& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  const Amplitude& operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }

  SquareMatrix adjoint() const;
  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b);
  friend SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b);

  /// max |(A^dagger A - I)_{rc}|
  double unitarity_error() const;
  double max_abs_diff(const SquareMatrix& other) const;

 private:
  std::size_t n_ = 0;
  std::vector<Amplitude> a_;
};

/// Uniform superposition: the product of |+> states and W states is uniform
/// over the reduced tensor. Throws MemoryCapExceeded past `memory_cap`.
StateTensor init_state(std::span<const std::size_t> shape, std::uint64_t memory_cap = kDefaultMemoryCap);

/// psi_I <- psi_I * exp(-i gamma cost_I)
void apply_phase(StateTensor& state, const CostTensor& cost, double gamma);

/// R_X(2 beta) = [[cos b, -i sin b], [-i sin b, cos b]]
SquareMatrix rx_matrix(double beta);

/// Level pairs touched by each brick-wall layer of the ring mixer.
struct RingLayers {
  std::vector<std::pair<std::size_t, std::size_t>> even, odd, last;
};
RingLayers ring_layers(std::size_t d);

/// Feasible-subspace ring mixer U_last * U_odd * U_even for a d-level qudit.
/// Throws std::invalid_argument for d < 3.
SquareMatrix build_ring_mixer(std::size_t d, double beta);

/// Hermitian H with dU/dbeta = -i H U for U = build_ring_mixer(d, beta).
SquareMatrix ring_mixer_generator(std::size_t d, double beta);

/// R_X(2 beta) along each of the first `qubit_axes` axes (all dimension 2).
void apply_x_mixer(StateTensor& state, std::size_t qubit_axes, double beta);

/// Mode product of `matrix` with the state along `axis`. Throws
/// std::invalid_argument on a dimension mismatch.
void apply_qudit_mixer(StateTensor& state, std::size_t axis, const SquareMatrix& matrix);

/// sum_I |psi_I|^2 cost_I
double expectation(const StateTensor& state, const CostTensor& cost);

/// sum_I conj(a_I) b_I
Amplitude inner_product(std::span<const Amplitude> a, std::span<const Amplitude> b);

struct MeasurementStats {
  double p_star = 0.0;
  double p90 = 0.0;
  double optimum = 0.0;
  double feasible_probability = 0.0;
};

/// Probability mass over the non-slack axes (slack axes summed out),
/// C-order over the remaining sites.
std::vector<double> marginal_distribution(const StateTensor& state, const Layout& layout);

/// P* and P90 from the slack-marginal distribution. `objective` and
/// `violations` are per tensor entry over `layout`; entries are optimal when
/// feasible with objective within 1e-9 relative of `optimum`. D_90 holds the
/// feasible x with f(x) <= optimum + 0.1 |optimum|.
MeasurementStats measurement_stats(const StateTensor& state, const CostTensor& objective,
                                   std::span<const std::uint32_t> violations, const Layout& layout,
                                   double optimum);

/// Complex snapshot in the cost-tensor dump format.
void write_state(std::ostream& out, const StateTensor& state, std::uint64_t hash);
StateTensor read_state(std::istream& in, std::uint64_t* hash = nullptr);

}  // namespace cqaoa
