#include "fullspace.hpp"

#include <cmath>

namespace oracle {

FullState::FullState(std::size_t qubits) : n(qubits), amp(std::size_t{1} << qubits) {}

void apply_1q(FullState& s, std::size_t q, const std::array<std::array<C, 2>, 2>& m) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < s.amp.size(); ++i) {
    if (i & bit) continue;
    const C a0 = s.amp[i], a1 = s.amp[i | bit];
    s.amp[i] = m[0][0] * a0 + m[0][1] * a1;
    s.amp[i | bit] = m[1][0] * a0 + m[1][1] * a1;
  }
}

void apply_2q(FullState& s, std::size_t a, std::size_t b, const Gate2& m) {
  const std::size_t ba = std::size_t{1} << a, bb = std::size_t{1} << b;
  for (std::size_t i = 0; i < s.amp.size(); ++i) {
    if (i & (ba | bb)) continue;
    const std::size_t idx[4] = {i, i | bb, i | ba, i | ba | bb};
    C in[4], out[4] = {};
    for (int k = 0; k < 4; ++k) in[k] = s.amp[idx[k]];
    for (int r = 0; r < 4; ++r) {
      for (int k = 0; k < 4; ++k) {
        if (m[r][k] != C{}) out[r] += m[r][k] * in[k];
      }
    }
    for (int k = 0; k < 4; ++k) s.amp[idx[k]] = out[k];
  }
}

void apply_diagonal(FullState& s, const std::vector<double>& values, double gamma) {
  for (std::size_t i = 0; i < s.amp.size(); ++i) s.amp[i] *= std::exp(C{0.0, -gamma * values[i]});
}

Gate2 multiply(const Gate2& a, const Gate2& b) {
  Gate2 out{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      for (int k = 0; k < 4; ++k) out[r][c] += a[r][k] * b[k][c];
    }
  }
  return out;
}

Gate2 pauli_pair_rotation(char pauli, double theta) {
  const std::array<std::array<C, 2>, 2> X{{{0, 1}, {1, 0}}};
  const std::array<std::array<C, 2>, 2> Y{{{0, C{0, -1}}, {C{0, 1}, 0}}};
  const auto& P = pauli == 'X' ? X : Y;
  Gate2 pp{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) pp[r][c] = P[r >> 1][c >> 1] * P[r & 1][c & 1];
  }
  const double co = std::cos(theta / 2), si = std::sin(theta / 2);
  Gate2 g{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) g[r][c] = (r == c ? C{co} : C{}) + C{0, -si} * pp[r][c];
  }
  return g;
}

Gate2 xy_gate(double beta) { return multiply(pauli_pair_rotation('X', beta), pauli_pair_rotation('Y', beta)); }

Gate2 partial_swap(double cos_theta) {
  const double s = std::sqrt(1.0 - cos_theta * cos_theta);
  Gate2 g{};
  g[0][0] = 1;
  g[3][3] = 1;
  // columns: |01> (index 1), |10> (index 2); qubit a is the high bit
  g[2][2] = cos_theta;
  g[1][2] = s;
  g[1][1] = cos_theta;
  g[2][1] = -s;
  return g;
}

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> brick_layers(std::size_t d) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> layers(3);
  for (std::size_t k = 0; k + 1 < d; k += 2) layers[0].emplace_back(k, k + 1);
  for (std::size_t k = 1; k + 1 < d; k += 2) layers[1].emplace_back(k, k + 1);
  if (d % 2 == 0) {
    layers[1].emplace_back(d - 1, 0);
  } else {
    layers[2].emplace_back(d - 1, 0);
  }
  return layers;
}

FullState prepare_initial(const cqaoa::ConstrainedProblem& p) {
  FullState s(p.n_vars());
  s.amp[0] = 1.0;
  const double h = 1.0 / std::sqrt(2.0);
  for (auto v : p.free_vars()) apply_1q(s, v, {{{h, h}, {h, -h}}});
  for (const auto& g : p.groups()) {
    const auto& m = g.members;
    apply_1q(s, m[0], {{{0, 1}, {1, 0}}});
    for (std::size_t k = 0; k + 1 < m.size(); ++k) {
      apply_2q(s, m[k], m[k + 1], partial_swap(std::sqrt(1.0 / static_cast<double>(m.size() - k))));
    }
  }
  return s;
}

void apply_mixer(FullState& s, const cqaoa::ConstrainedProblem& p, double beta) {
  const C c{std::cos(beta)}, mis{0, -std::sin(beta)};
  for (auto v : p.free_vars()) apply_1q(s, v, {{{c, mis}, {mis, c}}});
  const auto gate = xy_gate(beta);
  for (const auto& g : p.groups()) {
    for (const auto& layer : brick_layers(g.size())) {
      for (const auto& [a, b] : layer) apply_2q(s, g.members[a], g.members[b], gate);
    }
  }
}

cqaoa::Bits bits_of(std::uint64_t x, std::size_t n) {
  cqaoa::Bits b(n);
  for (std::size_t v = 0; v < n; ++v) b[v] = (x >> v) & 1u;
  return b;
}

std::uint64_t index_of(const cqaoa::Bits& x) {
  std::uint64_t i = 0;
  for (std::size_t v = 0; v < x.size(); ++v) i |= std::uint64_t{x[v]} << v;
  return i;
}

std::vector<double> indicator_cost(const cqaoa::ConstrainedProblem& p, double rho) {
  std::vector<double> out(std::size_t{1} << p.n_vars());
  for (std::uint64_t x = 0; x < out.size(); ++x) {
    const auto b = bits_of(x, p.n_vars());
    double v = p.objective().evaluate(b);
    for (const auto& g : p.inequalities()) {
      if (g.evaluate(b) < 0) v += rho;
    }
    out[x] = v;
  }
  return out;
}

bool one_hot_ok(const cqaoa::ConstrainedProblem& p, std::uint64_t x) {
  for (const auto& g : p.groups()) {
    int set = 0;
    for (auto v : g.members) set += (x >> v) & 1u;
    if (set != 1) return false;
  }
  return true;
}

std::vector<std::vector<C>> ring_restriction(std::size_t d, double beta) {
  std::vector<std::vector<C>> u(d, std::vector<C>(d));
  const auto gate = xy_gate(beta);
  for (std::size_t col = 0; col < d; ++col) {
    FullState s(d);
    s.amp[std::size_t{1} << col] = 1.0;
    for (const auto& layer : brick_layers(d)) {
      for (const auto& [a, b] : layer) apply_2q(s, a, b, gate);
    }
    for (std::size_t row = 0; row < d; ++row) u[row][col] = s.amp[std::size_t{1} << row];
  }
  return u;
}

}  // namespace oracle
