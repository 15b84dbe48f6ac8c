// experiments.hpp
// Drivers shared by the command-line tool and the acceptance checks:
// landscapes, overlap sweeps, cohort comparisons and instance evaluation.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <vector>

#include "hqaoa/distributions.hpp"
#include "hqaoa/optimizer.hpp"
#include "hqaoa/parallel.hpp"
#include "hqaoa/proxy.hpp"
#include "hqaoa/statevector.hpp"

namespace hqaoa {

/// Rectangular (γ, β) grid. Points sit at lo + (hi − lo)·i/steps, so the
/// upper edge is excluded and periodic ranges are not double counted.
struct Grid {
  Interval gamma{0.0, 2.0 * std::numbers::pi};
  Interval beta{0.0, std::numbers::pi};
  int gamma_steps = 30;
  int beta_steps = 30;

  double gamma_at(int i) const { return gamma.lo + (gamma.hi - gamma.lo) * i / gamma_steps; }
  double beta_at(int j) const { return beta.lo + (beta.hi - beta.lo) * j / beta_steps; }
};

inline void validate(const Grid& g) {
  require(g.gamma_steps >= 1 && g.beta_steps >= 1, "grid: steps must be >= 1");
  require(std::isfinite(g.gamma.lo) && std::isfinite(g.gamma.hi) && std::isfinite(g.beta.lo) &&
              std::isfinite(g.beta.hi),
          "grid: non-finite range");
}

/// values(i, j) is the objective at (gamma_at(i), beta_at(j)) appended as
/// the last layer after a fixed prefix.
struct Landscape {
  Grid grid;
  Array2D values;
  double seconds = 0.0;
};

struct GridCell {
  int i = 0;
  int j = 0;
};

/// Best cell among rows [row_lo, row_hi); ties keep the first in row-major order.
inline GridCell argmax_cell(const Landscape& l, bool maximize, int row_lo = 0, int row_hi = -1) {
  if (row_hi < 0) row_hi = l.values.rows;
  require(row_lo >= 0 && row_lo < row_hi && row_hi <= l.values.rows, "argmax_cell: bad row range");
  GridCell best{row_lo, 0};
  for (int i = row_lo; i < row_hi; ++i)
    for (int j = 0; j < l.values.cols; ++j) {
      const double v = l.values(i, j), b = l.values(best.i, best.j);
      if (maximize ? v > b : v < b) best = {i, j};
    }
  return best;
}

/// Exact ⟨C⟩ landscape; the prefix state is prepared once.
inline Landscape typical_landscape(int n, std::span<const int> costs, const Schedule& prefix, const Grid& grid) {
  validate(grid);
  const auto t0 = std::chrono::steady_clock::now();
  const Statevector base = qaoa_state(n, costs, prefix);
  Landscape l{grid, Array2D(grid.gamma_steps, grid.beta_steps)};
  Statevector s;
  for (int i = 0; i < grid.gamma_steps; ++i)
    for (int j = 0; j < grid.beta_steps; ++j) {
      s = base;
      apply_phase_layer(s, costs, grid.gamma_at(i));
      apply_mixer_layer(s, grid.beta_at(j));
      l.values(i, j) = expectation(costs, s);
    }
  l.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return l;
}

/// Proxy estimate landscape. With the prefix state Q fixed, the estimate
/// after one more layer is a trigonometric polynomial in γ,
///
///   E(γ, β) = Σ_Δ e^{−iγΔ} S_β(Δ),   S_β(Δ) = Σ_{c₂−c=Δ} Q̄(c) A_β(c,c₂) Q(c₂),
///
/// with A_β = K_β† W K_β and W = diag(2^n P(c′) c′). Each β column costs
/// O(|C|³) once and each cell O(|C|).
inline Landscape homogeneous_landscape(const DistributionTable& table, const Schedule& prefix, const Grid& grid) {
  validate(grid);
  const auto t0 = std::chrono::steady_clock::now();
  const HomogState base = evolve(table, prefix);
  const int w = table.size();
  std::vector<double> weight(static_cast<std::size_t>(w));
  for (int c = 0; c < w; ++c) weight[static_cast<std::size_t>(c)] = std::exp2(table.n()) * table.p(c) * c;

  // coefficients per β: S(0) real, then S(Δ) for Δ = 1..w−1
  std::vector<std::vector<Complex>> coeff(static_cast<std::size_t>(grid.beta_steps));
  std::vector<Complex> a(static_cast<std::size_t>(w) * w);
  for (int j = 0; j < grid.beta_steps; ++j) {
    const MixingKernel k = mixing_kernel(table, grid.beta_at(j));
    std::fill(a.begin(), a.end(), Complex{});
    for (int cp = 0; cp < w; ++cp) {
      const double wc = weight[static_cast<std::size_t>(cp)];
      if (wc == 0.0) continue;
      const Complex* row = k.k.data() + static_cast<std::size_t>(cp) * w;
      for (int c = 0; c < w; ++c) {
        const Complex lhs = std::conj(row[c]) * wc;
        for (int c2 = c; c2 < w; ++c2) a[static_cast<std::size_t>(c) * w + c2] += cmul(lhs, row[c2]);
      }
    }
    auto& s = coeff[static_cast<std::size_t>(j)];
    s.assign(static_cast<std::size_t>(w), Complex{});
    for (int c = 0; c < w; ++c)
      for (int c2 = c; c2 < w; ++c2)
        s[static_cast<std::size_t>(c2 - c)] += cmul(cmul(std::conj(base.q[static_cast<std::size_t>(c)]),
                                                         a[static_cast<std::size_t>(c) * w + c2]),
                                                    base.q[static_cast<std::size_t>(c2)]);
  }

  Landscape l{grid, Array2D(grid.gamma_steps, grid.beta_steps)};
  std::vector<Complex> phase(static_cast<std::size_t>(w));
  for (int i = 0; i < grid.gamma_steps; ++i) {
    for (int d = 0; d < w; ++d) phase[static_cast<std::size_t>(d)] = std::polar(1.0, -grid.gamma_at(i) * d);
    for (int j = 0; j < grid.beta_steps; ++j) {
      const auto& s = coeff[static_cast<std::size_t>(j)];
      double e = s[0].real();
      for (int d = 1; d < w; ++d) {
        const Complex t = phase[static_cast<std::size_t>(d)];
        const Complex v = s[static_cast<std::size_t>(d)];
        e += 2.0 * (t.real() * v.real() - t.imag() * v.imag());
      }
      l.values(i, j) = e;
    }
  }
  l.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return l;
}

/// Squared overlap between the proxy pseudostate and the exact state after
/// each layer 0..p of one schedule. Entry 0 is the uniform state (overlap 1).
inline std::vector<double> overlap_by_layer(int n, std::span<const int> costs, const DistributionTable& table,
                                            const Schedule& schedule) {
  validate(schedule);
  require(table.n() == n, "overlap_by_layer: table and instance differ in n");
  Statevector exact = Statevector::uniform(n);
  HomogState proxy = initial_state(table);
  std::vector<double> out;
  out.push_back(squared_overlap(scatter_to_bitstrings(costs, proxy), exact.amplitudes));
  for (int l = 0; l < schedule.depth(); ++l) {
    const double g = schedule.gammas[static_cast<std::size_t>(l)];
    const double b = schedule.betas[static_cast<std::size_t>(l)];
    apply_phase_layer(exact, costs, g);
    apply_mixer_layer(exact, b);
    proxy = evolve_step(proxy, table, g, b);
    out.push_back(squared_overlap(scatter_to_bitstrings(costs, proxy), exact.amplitudes));
  }
  return out;
}

/// Cohort statistics at one c′ next to the analytic table, both padded with
/// zeros to a common width.
struct EmpiricalComparison {
  int cost = 0;
  std::int64_t cohort_size = 0;
  Array2D analytic;
  Array2D mean;
  Array2D stddev;
  double pearson = 0.0;
};

inline EmpiricalComparison empirical_compare(const DistributionTable& table,
                                             std::span<const ProblemInstance> instances, int cp,
                                             int limit = kDefaultExhaustiveLimit) {
  require(cp >= 0 && cp < table.size(), "empirical_compare: cost outside the cost set");
  const auto stats = empirical_stats(instances, cp, limit);
  const int rows = table.n() + 1;
  const int width = std::max(table.size(), stats.mean.cols);
  EmpiricalComparison r{cp, stats.cohort_size, Array2D(rows, width), Array2D(rows, width), Array2D(rows, width)};
  for (int d = 0; d < rows; ++d)
    for (int c = 0; c < width; ++c) {
      if (c < table.size()) r.analytic(d, c) = table.N(cp, d, c);
      if (c < stats.mean.cols) {
        r.mean(d, c) = stats.mean(d, c);
        r.stddev(d, c) = stats.stddev(d, c);
      }
    }
  r.pearson = pearson_correlation(r.analytic, r.mean);
  return r;
}

/// The cost with the largest P(c′); ties (to rounding) keep the smaller cost.
inline int modal_cost(const DistributionTable& table) {
  int best = 0;
  for (int c = 1; c < table.size(); ++c)
    if (table.p(c) > table.p(best) * (1.0 + 1e-12)) best = c;
  return best;
}

struct InstanceEvaluation {
  std::uint64_t seed = 0;
  int clauses = 0;
  int c_opt = 0;
  double expected = 0.0;
  double ratio = 0.0;
};

/// Exact ⟨C⟩, optimum and approximation ratio of one schedule on seeded
/// instances of a class. Instances run on up to `workers` threads.
inline std::vector<InstanceEvaluation> evaluate_instances(const ClassSpec& spec, std::span<const std::uint64_t> seeds,
                                                          const Schedule& schedule, unsigned workers = 1,
                                                          int limit = kDefaultExhaustiveLimit) {
  std::vector<InstanceEvaluation> rows(seeds.size());
  parallel_for(seeds.size(), workers, [&](std::size_t i) {
    const auto inst = generate_instance(spec, seeds[i]);
    const auto costs = cost_vector(inst, limit);
    const auto opt = brute_force_optimum(inst, limit);
    const double e = expectation(costs, qaoa_state(inst.n, costs, schedule));
    rows[i] = {seeds[i], inst.clause_count(), opt.c_opt, e,
               approximation_ratio(e, opt.c_opt, inst.clause_count(), spec.direction)};
  });
  return rows;
}

}  // namespace hqaoa
