#pragma once

#include <algorithm>
#include <numeric>
#include <random>

#include "cqaoa/problem.hpp"

namespace testing_support {

/// Random instance with disjoint groups of size 3..5, a few free variables
/// and 1-2 integer inequalities that a planted one-hot point satisfies.
/// Variable indices are shuffled so groups are not contiguous.
inline cqaoa::ConstrainedProblem random_problem(std::mt19937_64& rng, std::size_t max_vars = 12,
                                                bool real_objective = false) {
  std::uniform_int_distribution<int> dsize(3, 5), nfree(0, 3), coef(-3, 3), obj(-5, 5), slack(0, 2), ncon(1, 2);
  std::vector<std::size_t> sizes;
  std::size_t n = static_cast<std::size_t>(nfree(rng));
  for (;;) {
    const auto d = static_cast<std::size_t>(dsize(rng));
    if (n + d > max_vars) break;
    sizes.push_back(d);
    n += d;
    if (sizes.size() == 3) break;
  }
  if (sizes.empty()) {
    sizes.push_back(3);
    n += 3;
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<cqaoa::OneHotGroup> groups;
  std::size_t pos = 0;
  cqaoa::Bits planted(n, 0);
  for (auto d : sizes) {
    cqaoa::OneHotGroup g;
    for (std::size_t k = 0; k < d; ++k) g.members.push_back(perm[pos++]);
    planted[g.members[std::uniform_int_distribution<std::size_t>(0, d - 1)(rng)]] = 1;
    groups.push_back(std::move(g));
  }
  for (; pos < n; ++pos) planted[perm[pos]] = static_cast<std::uint8_t>(rng() & 1u);

  std::uniform_real_distribution<double> real(-5.0, 5.0);
  cqaoa::LinearFunction f(static_cast<double>(obj(rng)));
  for (std::size_t v = 0; v < n; ++v) f.add(v, real_objective ? real(rng) : static_cast<double>(obj(rng)));

  std::vector<cqaoa::LinearFunction> ineqs;
  const int m = ncon(rng);
  for (int j = 0; j < m; ++j) {
    cqaoa::LinearFunction g;
    for (std::size_t v = 0; v < n; ++v) {
      if (rng() % 3 == 0) continue;
      g.add(v, static_cast<double>(coef(rng)));
    }
    g.add_constant(-g.evaluate(planted) + slack(rng));
    ineqs.push_back(std::move(g));
  }
  return cqaoa::ConstrainedProblem(n, f, cqaoa::Sense::minimize, std::move(groups), std::move(ineqs));
}

}  // namespace testing_support
