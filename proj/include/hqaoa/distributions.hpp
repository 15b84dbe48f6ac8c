// distributions.hpp
// Class-level replacement distributions N(c′;d,c) and P(c′), built from the
// per-clause pair probabilities through a multinomial over shared satisfied
// clauses, plus the exhaustive per-bitstring counts n(x;d,c) they stand in
// for.

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "hqaoa/combinatorics.hpp"
#include "hqaoa/error.hpp"
#include "hqaoa/hash.hpp"
#include "hqaoa/parallel.hpp"
#include "hqaoa/problem_classes.hpp"

namespace hqaoa {

/// Costs whose class probability falls below this are unreachable.
inline constexpr double kUnreachableProbability = 1e-300;

/// Dense row-major 2-D array of doubles.
struct Array2D {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Array2D() = default;
  Array2D(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

namespace detail {

/// Logs of the pair probabilities at one distance.
struct LogPairProbabilities {
  double both;
  double one;
  double neither;
};

inline LogPairProbabilities log_pair(const ClassSpec& spec, int d) {
  const auto p = pair_probabilities(spec, d);
  // rounding can leave tiny negatives where the exact value is zero
  auto clean = [](double v) { return v > 0.0 ? std::log(v) : kNegInf; };
  return {clean(p.both), clean(p.one), clean(p.neither)};
}

/// log of Σ_b m!/(b!(c′−b)!(c−b)!(m+b−c′−c)!) both^b one^(c′+c−2b) neither^(m+b−c′−c)
inline double log_joint_multinomial(int m, const LogFactorialTable& lf, const LogPairProbabilities& lp,
                                    int cp, int c) {
  if (cp > m || c > m) return kNegInf;
  const int lo = std::max(0, cp + c - m);
  const int hi = std::min(cp, c);
  LogSumExp acc;
  for (int b = lo; b <= hi; ++b) {
    const int ones = cp + c - 2 * b;
    const int none = m + b - cp - c;
    const double t = lf(m) - lf(b) - lf(cp - b) - lf(c - b) - lf(none) + pow_log(b, lp.both) +
                     pow_log(ones, lp.one) + pow_log(none, lp.neither);
    acc.add(t);
  }
  return acc.value();
}

/// Weight-class closed form: flipping d bits of a weight-c′ string gives
/// weight c when j = (c′ − c + d)/2 of its ones are among the flips.
inline double log_hamming_count(int n, int cp, int d, int c) {
  const int twice_j = cp - c + d;
  if (twice_j < 0 || twice_j % 2 != 0) return kNegInf;
  const int j = twice_j / 2;
  return log_binomial(cp, j) + log_binomial(n - cp, d - j);
}

}  // namespace detail

/// P(c′, c | d): probability that two random bitstrings at distance d have
/// costs c′ and c.
inline double joint_cost_probability(const ClassSpec& spec, int cp, int c, int d) {
  const CostSet cs = cost_set(spec);
  require(cs.contains(cp) && cs.contains(c), "joint_cost_probability: cost outside the cost set");
  require(d >= 0 && d <= spec.n, "joint_cost_probability: distance outside [0, n]");
  if (spec.kind == ClassKind::HammingWeight) {
    return std::exp(log_cost_probability(spec, cp) + detail::log_hamming_count(spec.n, cp, d, c) -
                    log_binomial(spec.n, d));
  }
  const LogFactorialTable lf(spec.m);
  return std::exp(detail::log_joint_multinomial(spec.m, lf, detail::log_pair(spec, d), cp, c));
}

/// N(c′;d,c) = C(n,d) P(c′,c|d) / P(c′) for every d in [0,n], c in the cost set.
inline Array2D replacement_distribution(const ClassSpec& spec, int cp) {
  const CostSet cs = cost_set(spec);
  const double log_p = log_cost_probability(spec, cp);
  if (!(log_p >= std::log(kUnreachableProbability)))
    fail(ErrorKind::Unreachable, "replacement_distribution: cost " + std::to_string(cp) + " is unreachable");
  Array2D out(spec.n + 1, cs.size());
  if (spec.kind == ClassKind::HammingWeight) {
    for (int d = 0; d <= spec.n; ++d)
      for (int c = 0; c < cs.size(); ++c) out(d, c) = std::exp(detail::log_hamming_count(spec.n, cp, d, c));
    return out;
  }
  const LogFactorialTable lf(spec.m);
  for (int d = 0; d <= spec.n; ++d) {
    const auto lp = detail::log_pair(spec, d);
    const double lnd = log_binomial(spec.n, d);
    for (int c = 0; c < cs.size(); ++c)
      out(d, c) = std::exp(lnd + detail::log_joint_multinomial(spec.m, lf, lp, cp, c) - log_p);
  }
  return out;
}

/// Precomputed C, P(c′) and N(c′;d,c) for a class. N is stored as
/// [c′][d][c] so the proxy contraction runs over contiguous c.
class DistributionTable {
 public:
  DistributionTable() = default;
  DistributionTable(ClassSpec spec, CostSet costs, std::vector<double> p_of_c, std::vector<double> n_table)
      : spec_(spec), costs_(costs), p_of_c_(std::move(p_of_c)), n_table_(std::move(n_table)) {
    require(static_cast<int>(p_of_c_.size()) == costs_.size(), "table: P vector size mismatch");
    require(n_table_.size() == static_cast<std::size_t>(costs_.size()) * (spec_.n + 1) * costs_.size(),
            "table: N array size mismatch");
    fingerprint_ = fnv1a(hex64(spec_hash(spec_)) + "/" + std::to_string(costs_.c_max));
  }

  const ClassSpec& spec() const { return spec_; }
  const CostSet& costs() const { return costs_; }
  int n() const { return spec_.n; }
  int size() const { return costs_.size(); }
  std::uint64_t fingerprint() const { return fingerprint_; }

  std::span<const double> p_of_c() const { return p_of_c_; }
  double p(int cp) const { return p_of_c_[static_cast<std::size_t>(cp)]; }
  bool reachable(int cp) const { return p(cp) >= kUnreachableProbability; }

  /// N(c′; d, ·) over the cost set.
  std::span<const double> row(int cp, int d) const {
    const std::size_t w = static_cast<std::size_t>(size());
    return {n_table_.data() + (static_cast<std::size_t>(cp) * (n() + 1) + d) * w, w};
  }
  double N(int cp, int d, int c) const { return row(cp, d)[static_cast<std::size_t>(c)]; }
  std::span<const double> raw() const { return n_table_; }

 private:
  ClassSpec spec_{};
  CostSet costs_{};
  std::vector<double> p_of_c_;
  std::vector<double> n_table_;
  std::uint64_t fingerprint_ = 0;
};

/// Full pre-computation for a class. Unreachable costs get zero rows.
inline DistributionTable precompute_all(const ClassSpec& spec, unsigned workers = 1) {
  validate(spec);
  const CostSet cs = cost_set(spec);
  const int w = cs.size();
  const int n = spec.n;
  std::vector<double> log_p(static_cast<std::size_t>(w));
  std::vector<double> p(static_cast<std::size_t>(w));
  for (int c = 0; c < w; ++c) {
    log_p[static_cast<std::size_t>(c)] = log_cost_probability(spec, c);
    p[static_cast<std::size_t>(c)] = std::exp(log_p[static_cast<std::size_t>(c)]);
  }
  const double log_threshold = std::log(kUnreachableProbability);
  std::vector<double> table(static_cast<std::size_t>(w) * (n + 1) * w, 0.0);
  const LogFactorialTable lf(std::max(spec.m, 1));
  const bool hamming = spec.kind == ClassKind::HammingWeight;

  parallel_for(static_cast<std::size_t>(n + 1), workers, [&](std::size_t di) {
    const int d = static_cast<int>(di);
    const auto lp = hamming ? detail::LogPairProbabilities{} : detail::log_pair(spec, d);
    const double lnd = log_binomial(n, d);
    for (int cp = 0; cp < w; ++cp) {
      if (!(log_p[static_cast<std::size_t>(cp)] >= log_threshold)) continue;
      double* out = table.data() + (static_cast<std::size_t>(cp) * (n + 1) + d) * w;
      for (int c = 0; c < w; ++c) {
        const double log_count = hamming ? detail::log_hamming_count(n, cp, d, c)
                                         : lnd + detail::log_joint_multinomial(spec.m, lf, lp, cp, c) -
                                               log_p[static_cast<std::size_t>(cp)];
        out[c] = std::exp(log_count);
      }
    }
  });
  for (int c = 0; c < w; ++c)
    if (!(log_p[static_cast<std::size_t>(c)] >= log_threshold)) p[static_cast<std::size_t>(c)] = 0.0;
  return DistributionTable(spec, cs, std::move(p), std::move(table));
}

/// Worst relative deviations from the table's structural identities.
struct SumRuleResiduals {
  double row_sum = 0.0;           // Σ_c N(c′;d,c) vs C(n,d)
  double total = 0.0;             // Σ_{d,c} N(c′;d,c) vs 2^n
  double detailed_balance = 0.0;  // P(c′)N(c′;d,c) vs P(c)N(c;d,c′)
  double probability_sum = 0.0;   // Σ P(c′) vs 1
};

inline SumRuleResiduals sum_rule_residuals(const DistributionTable& t) {
  SumRuleResiduals r;
  const int n = t.n();
  const double total_expected = std::exp2(n);
  double psum = 0.0;
  for (int cp = 0; cp < t.size(); ++cp) {
    psum += t.p(cp);
    if (!t.reachable(cp)) continue;
    double total = 0.0;
    for (int d = 0; d <= n; ++d) {
      double s = 0.0;
      for (double v : t.row(cp, d)) s += v;
      total += s;
      const double expect = binomial(n, d);
      r.row_sum = std::max(r.row_sum, std::abs(s - expect) / expect);
      for (int c = 0; c < t.size(); ++c) {
        if (!t.reachable(c)) continue;
        const double a = t.p(cp) * t.N(cp, d, c);
        const double b = t.p(c) * t.N(c, d, cp);
        const double scale = std::max(std::abs(a), std::abs(b));
        if (scale > 0.0) r.detailed_balance = std::max(r.detailed_balance, std::abs(a - b) / scale);
      }
    }
    r.total = std::max(r.total, std::abs(total - total_expected) / total_expected);
  }
  r.probability_sum = std::abs(psum - 1.0);
  return r;
}

/// n(x;d,c): how many bitstrings at distance d from x have cost c.
struct EmpiricalDistribution {
  int n = 0;
  int c_max = 0;
  int anchor_cost = 0;
  std::vector<std::int64_t> counts;  // (n+1) × (c_max+1), row-major by d

  std::int64_t count(int d, int c) const {
    return counts[static_cast<std::size_t>(d) * (c_max + 1) + c];
  }
};

/// Enumeration over a precomputed cost vector (index = bitstring).
inline EmpiricalDistribution empirical_distribution(std::span<const int> costs, int n, int c_max,
                                                    std::uint64_t x) {
  EmpiricalDistribution e;
  e.n = n;
  e.c_max = c_max;
  e.anchor_cost = costs[x];
  e.counts.assign(static_cast<std::size_t>(n + 1) * (c_max + 1), 0);
  const std::uint64_t dim = costs.size();
  for (std::uint64_t y = 0; y < dim; ++y) {
    const int d = std::popcount(x ^ y);
    e.counts[static_cast<std::size_t>(d) * (c_max + 1) + costs[y]] += 1;
  }
  return e;
}

inline EmpiricalDistribution empirical_distribution(const ProblemInstance& inst, std::uint64_t x,
                                                    int limit = kDefaultExhaustiveLimit) {
  const auto costs = cost_vector(inst, limit);
  require(x < costs.size(), "empirical_distribution: bitstring index out of range");
  return empirical_distribution(costs, inst.n, inst.clause_count(), x);
}

/// Element-wise cohort statistics of n(x;d,c) over all x with c(x) = c′.
struct EmpiricalStats {
  Array2D mean;       // (n+1) × width
  Array2D stddev;     // population standard deviation
  std::int64_t cohort_size = 0;

  /// Cells whose mean is zero (no bitstring ever reaches them).
  bool zero_mean(int d, int c) const { return mean(d, c) == 0.0; }
};

inline EmpiricalStats empirical_stats(std::span<const ProblemInstance> instances, int cp,
                                      int limit = kDefaultExhaustiveLimit) {
  require(!instances.empty(), "empirical_stats: no instances");
  const int n = instances.front().n;
  int width = 0;
  for (const auto& inst : instances) {
    require(inst.n == n, "empirical_stats: instances differ in n");
    width = std::max(width, inst.clause_count() + 1);
  }
  EmpiricalStats s;
  s.mean = Array2D(n + 1, width);
  Array2D m2(n + 1, width);
  std::int64_t count = 0;
  for (const auto& inst : instances) {
    const auto costs = cost_vector(inst, limit);
    for (std::uint64_t x = 0; x < costs.size(); ++x) {
      if (costs[x] != cp) continue;
      const auto e = empirical_distribution(costs, n, width - 1, x);
      ++count;
      for (std::size_t i = 0; i < s.mean.data.size(); ++i) {
        // Welford update
        const double v = static_cast<double>(e.counts[i]);
        const double delta = v - s.mean.data[i];
        s.mean.data[i] += delta / static_cast<double>(count);
        m2.data[i] += delta * (v - s.mean.data[i]);
      }
    }
  }
  if (count == 0)
    fail(ErrorKind::Numerical, "empirical_stats: no bitstring has cost " + std::to_string(cp));
  s.cohort_size = count;
  s.stddev = Array2D(n + 1, width);
  for (std::size_t i = 0; i < m2.data.size(); ++i)
    s.stddev.data[i] = std::sqrt(std::max(0.0, m2.data[i] / static_cast<double>(count)));
  return s;
}

/// Pearson r over flattened entries.
inline double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size() && !a.empty(), "pearson_correlation: shape mismatch");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) fail(ErrorKind::Numerical, "pearson_correlation: constant input");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

inline double pearson_correlation(const Array2D& a, const Array2D& b) {
  require(a.rows == b.rows && a.cols == b.cols, "pearson_correlation: shape mismatch");
  return pearson_correlation(std::span<const double>(a.data), std::span<const double>(b.data));
}

}  // namespace hqaoa
