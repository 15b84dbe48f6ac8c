// enumeration.hpp
// Test-only reference computations by brute force. Nothing here calls into
// the analytic distribution code.

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "hqaoa/problem_classes.hpp"
#include "hqaoa/schedule.hpp"

namespace oracle {

using Complex = std::complex<double>;

/// Clause-pair frequencies at Hamming distance d, averaged over every
/// possible clause of the class and every ordered pair (y, z) at distance d.
struct PairFrequencies {
  double both = 0.0, one = 0.0, neither = 0.0;
};

inline PairFrequencies enumerate_pair_frequencies(const hqaoa::ClassSpec& spec, int d) {
  const int n = spec.n;
  const int k = spec.k;
  const bool sat = spec.kind == hqaoa::ClassKind::RandKSat;
  double both = 0, one = 0, neither = 0, total = 0;
  const std::uint64_t dim = std::uint64_t{1} << n;
  for (std::uint64_t vars = 0; vars < dim; ++vars) {
    if (std::popcount(vars) != k) continue;
    // parity classes: both parities; SAT: all 2^k negation patterns
    const bool fixed_parity =
        spec.kind == hqaoa::ClassKind::MaxCutER || spec.kind == hqaoa::ClassKind::HammingWeight;
    const int variants = sat ? (1 << k) : (fixed_parity ? 1 : 2);
    for (int v = 0; v < variants; ++v) {
      std::uint64_t target = 0;
      if (sat) {
        int j = 0;
        for (int b = 0; b < n; ++b)
          if ((vars >> b) & 1) {
            if ((v >> j) & 1) target |= std::uint64_t{1} << b;
            ++j;
          }
      }
      auto counts = [&](std::uint64_t x) {
        if (sat) return (x & vars) == target;
        return ((std::popcount(x & vars) & 1) ^ v) != 0;
      };
      for (std::uint64_t y = 0; y < dim; ++y)
        for (std::uint64_t flip = 0; flip < dim; ++flip) {
          if (std::popcount(flip) != d) continue;
          const bool a = counts(y), b = counts(y ^ flip);
          total += 1;
          if (a && b) both += 1;
          else if (a && !b) one += 1;
          else if (!a && !b) neither += 1;
        }
    }
  }
  return {both / total, one / total, neither / total};
}

/// ⟨x|e^{−iβB}|y⟩ by direct complex powers.
inline Complex mixer_power(int n, int d, double beta) {
  return std::pow(Complex(std::cos(beta), 0.0), n - d) * std::pow(Complex(0.0, -std::sin(beta)), d);
}

/// One layer of the path sum, grouped by distance and cost:
///   q'(x) = Σ_{d,c} M_d e^{−iγc} Σ_{y: d_xy=d, c_y=c} q(y).
/// Exact for any input state; O(4^n).
inline std::vector<Complex> path_sum_layer(int n, const std::vector<int>& costs, const std::vector<Complex>& q,
                                           double gamma, double beta) {
  int c_max = 0;
  for (int c : costs) c_max = std::max(c_max, c);
  const std::uint64_t dim = costs.size();
  std::vector<Complex> out(dim);
  std::vector<Complex> bucket(static_cast<std::size_t>(n + 1) * (c_max + 1));
  for (std::uint64_t x = 0; x < dim; ++x) {
    std::fill(bucket.begin(), bucket.end(), Complex{});
    for (std::uint64_t y = 0; y < dim; ++y)
      bucket[static_cast<std::size_t>(std::popcount(x ^ y)) * (c_max + 1) + costs[y]] += q[y];
    Complex acc{};
    for (int d = 0; d <= n; ++d) {
      const Complex md = mixer_power(n, d, beta);
      for (int c = 0; c <= c_max; ++c)
        acc += md * std::polar(1.0, -gamma * c) * bucket[static_cast<std::size_t>(d) * (c_max + 1) + c];
    }
    out[x] = acc;
  }
  return out;
}

inline std::vector<Complex> path_sum_state(int n, const std::vector<int>& costs, const hqaoa::Schedule& s) {
  std::vector<Complex> q(costs.size(), Complex(std::exp2(-0.5 * n), 0.0));
  for (int l = 0; l < s.depth(); ++l) q = path_sum_layer(n, costs, q, s.gammas[l], s.betas[l]);
  return q;
}

/// Layer on a homogeneous input Q(c) using per-bitstring counts n(x;d,c):
///   q'(x) = Σ_{d,c} M_d e^{−iγc} Q(c) n(x;d,c).
/// Equals path_sum_layer only when the input amplitudes depend on cost alone.
inline std::vector<Complex> homogeneous_count_layer(int n, const std::vector<int>& costs,
                                                    const std::vector<Complex>& q_of_cost, double gamma,
                                                    double beta) {
  const int width = static_cast<int>(q_of_cost.size());
  const std::uint64_t dim = costs.size();
  std::vector<Complex> out(dim);
  std::vector<double> counts(static_cast<std::size_t>(n + 1) * width);
  for (std::uint64_t x = 0; x < dim; ++x) {
    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::uint64_t y = 0; y < dim; ++y) counts[static_cast<std::size_t>(std::popcount(x ^ y)) * width + costs[y]] += 1;
    Complex acc{};
    for (int d = 0; d <= n; ++d)
      for (int c = 0; c < width; ++c)
        acc += mixer_power(n, d, beta) * std::polar(1.0, -gamma * c) * q_of_cost[c] * counts[static_cast<std::size_t>(d) * width + c];
    out[x] = acc;
  }
  return out;
}

inline double overlap2(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex ip{};
  double na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ip += std::conj(a[i]) * b[i];
    na += std::norm(a[i]);
    nb += std::norm(b[i]);
  }
  return std::norm(ip) / (na * nb);
}

}  // namespace oracle

namespace oracle {

/// Every clause a class can draw, as (variable mask, parity or violating
/// assignment). Edges get both parities: the class formulas treat each
/// clause as satisfied with probability 1/2 independently of x, which holds
/// for signed edges and only on average for plain cuts.
struct UniverseClause {
  std::uint64_t mask;
  std::uint64_t target;  // SAT: violating assignment; parity: parity bit
};

inline std::vector<UniverseClause> clause_universe(const hqaoa::ClassSpec& spec) {
  std::vector<UniverseClause> u;
  const bool sat = spec.kind == hqaoa::ClassKind::RandKSat;
  for (std::uint64_t vars = 0; vars < (std::uint64_t{1} << spec.n); ++vars) {
    if (std::popcount(vars) != spec.k) continue;
    if (sat) {
      // every subset of the clause's variables can be the violating assignment
      for (std::uint64_t t = vars;; t = (t - 1) & vars) {
        u.push_back({vars, t});
        if (t == 0) break;
      }
    } else {
      u.push_back({vars, 0});
      u.push_back({vars, 1});
    }
  }
  return u;
}

/// P(c′, c | d) by enumerating every ordered m-tuple of universe clauses and
/// every pair of bitstrings. Result indexed [d][c′][c], each slice summing to 1.
inline std::vector<std::vector<std::vector<double>>> enumerate_joint(const hqaoa::ClassSpec& spec) {
  const auto u = clause_universe(spec);
  const bool sat = spec.kind == hqaoa::ClassKind::RandKSat;
  const int n = spec.n, m = spec.m;
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<std::vector<std::vector<double>>> joint(
      n + 1, std::vector<std::vector<double>>(m + 1, std::vector<double>(m + 1, 0.0)));
  std::vector<double> pairs_at(n + 1, 0.0);
  std::vector<std::size_t> idx(m, 0);
  std::vector<int> costs(dim);
  for (;;) {
    for (std::uint64_t x = 0; x < dim; ++x) {
      int c = 0;
      for (int j = 0; j < m; ++j) {
        const auto& cl = u[idx[j]];
        c += sat ? (x & cl.mask) == cl.target : ((std::popcount(x & cl.mask) & 1) ^ static_cast<int>(cl.target));
      }
      costs[x] = c;
    }
    for (std::uint64_t x = 0; x < dim; ++x)
      for (std::uint64_t y = 0; y < dim; ++y) {
        const int d = std::popcount(x ^ y);
        joint[d][costs[x]][costs[y]] += 1;
        pairs_at[d] += 1;
      }
    int j = 0;
    while (j < m && ++idx[j] == u.size()) idx[j++] = 0;
    if (j == m) break;
  }
  for (int d = 0; d <= n; ++d)
    for (auto& row : joint[d])
      for (auto& v : row) v /= pairs_at[d];
  return joint;
}

}  // namespace oracle
