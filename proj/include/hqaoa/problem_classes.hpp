// problem_classes.hpp
// Random constraint-satisfaction classes: class descriptors, instance
// sampling, cost evaluation and the per-clause probabilities that feed the
// class-level cost distributions.
//
// Bitstrings are stored as integers with variable i in bit i (least
// significant first). The same convention indexes statevector amplitudes.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hqaoa/combinatorics.hpp"
#include "hqaoa/error.hpp"
#include "hqaoa/random.hpp"

namespace hqaoa {

enum class ClassKind { MaxCutER, MaxE3Lin2, MaxKXor, RandKSat, HammingWeight };

/// Which way the cost is optimized. Rand-k-SAT costs count violated clauses,
/// so that class is minimized; every other class counts satisfied clauses.
enum class Direction { MaximizeSatisfied, MinimizeConflicts };

inline constexpr int kDefaultExhaustiveLimit = 24;

std::string_view to_string(ClassKind kind);
std::string_view to_string(Direction dir);

/// A random CSP class. For MaxCutER the clause count `m` is the rounded-up
/// expected edge count; drawn instances carry their own edge count.
struct ClassSpec {
  ClassKind kind = ClassKind::MaxCutER;
  int n = 0;
  double edge_probability = 0.0;  // MaxCutER only
  int m = 0;
  int k = 2;
  double margin = 0.0;  // MaxCutER cost-set widening, in binomial std devs
  Direction direction = Direction::MaximizeSatisfied;

  static ClassSpec maxcut_er(int n, double edge_probability, double margin = 0.0);
  static ClassSpec max_e3lin2(int n, int m);
  static ClassSpec max_kxor(int n, int m, int k);
  static ClassSpec rand_ksat(int n, int m, int k);
  static ClassSpec hamming_weight(int n);

  bool maximize() const { return direction == Direction::MaximizeSatisfied; }

  friend bool operator==(const ClassSpec&, const ClassSpec&) = default;
};

/// ⌈p_e · n(n−1)/2⌉, guarded against representation error in the product.
inline int expected_edge_count(int n, double edge_probability) {
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return static_cast<int>(std::ceil(edge_probability * pairs - 1e-9));
}

inline void validate(const ClassSpec& spec) {
  require(spec.n >= 1 && spec.n <= 64, "class spec: n must be in [1, 64]");
  require(spec.k >= 1, "class spec: k must be >= 1");
  require(spec.k <= spec.n, "class spec: k (" + std::to_string(spec.k) + ") exceeds n (" +
                                std::to_string(spec.n) + ")");
  require(spec.m >= 1, "class spec: m must be >= 1");
  require(std::isfinite(spec.margin) && spec.margin >= 0.0, "class spec: margin must be >= 0");
  switch (spec.kind) {
    case ClassKind::MaxCutER:
      require(spec.n >= 2, "class spec: MaxCutER needs n >= 2");
      require(spec.edge_probability >= 0.0 && spec.edge_probability <= 1.0,
              "class spec: edge probability must lie in [0, 1]");
      require(spec.k == 2, "class spec: MaxCutER has k = 2");
      require(spec.m == expected_edge_count(spec.n, spec.edge_probability),
              "class spec: MaxCutER m must equal ceil(p_e * n(n-1)/2)");
      require(spec.direction == Direction::MaximizeSatisfied, "class spec: MaxCutER maximizes");
      break;
    case ClassKind::MaxE3Lin2:
      require(spec.k == 3, "class spec: MaxE3Lin2 has k = 3");
      [[fallthrough]];
    case ClassKind::MaxKXor:
      require(spec.direction == Direction::MaximizeSatisfied, "class spec: parity classes maximize");
      break;
    case ClassKind::RandKSat:
      require(spec.k <= 30, "class spec: RandKSat k must be <= 30");
      require(spec.direction == Direction::MinimizeConflicts,
              "class spec: RandKSat minimizes conflicts");
      break;
    case ClassKind::HammingWeight:
      require(spec.k == 1 && spec.m == spec.n, "class spec: HammingWeight has k = 1, m = n");
      require(spec.direction == Direction::MaximizeSatisfied, "class spec: HammingWeight maximizes");
      break;
  }
}

inline ClassSpec ClassSpec::maxcut_er(int n, double edge_probability, double margin) {
  ClassSpec s;
  s.kind = ClassKind::MaxCutER;
  s.n = n;
  s.edge_probability = edge_probability;
  s.m = expected_edge_count(n, edge_probability);
  s.k = 2;
  s.margin = margin;
  validate(s);
  return s;
}

inline ClassSpec ClassSpec::max_e3lin2(int n, int m) {
  ClassSpec s;
  s.kind = ClassKind::MaxE3Lin2;
  s.n = n;
  s.m = m;
  s.k = 3;
  validate(s);
  return s;
}

inline ClassSpec ClassSpec::max_kxor(int n, int m, int k) {
  ClassSpec s;
  s.kind = ClassKind::MaxKXor;
  s.n = n;
  s.m = m;
  s.k = k;
  validate(s);
  return s;
}

inline ClassSpec ClassSpec::rand_ksat(int n, int m, int k) {
  ClassSpec s;
  s.kind = ClassKind::RandKSat;
  s.n = n;
  s.m = m;
  s.k = k;
  s.direction = Direction::MinimizeConflicts;
  validate(s);
  return s;
}

inline ClassSpec ClassSpec::hamming_weight(int n) {
  ClassSpec s;
  s.kind = ClassKind::HammingWeight;
  s.n = n;
  s.m = n;
  s.k = 1;
  validate(s);
  return s;
}

inline std::string_view to_string(ClassKind kind) {
  switch (kind) {
    case ClassKind::MaxCutER: return "maxcut-er";
    case ClassKind::MaxE3Lin2: return "max-e3lin2";
    case ClassKind::MaxKXor: return "max-kxor";
    case ClassKind::RandKSat: return "rand-ksat";
    case ClassKind::HammingWeight: return "hamming-weight";
  }
  return "?";
}

inline std::string_view to_string(Direction dir) {
  return dir == Direction::MaximizeSatisfied ? "maximize-satisfied" : "minimize-conflicts";
}

inline ClassKind parse_class_kind(std::string_view s) {
  for (auto k : {ClassKind::MaxCutER, ClassKind::MaxE3Lin2, ClassKind::MaxKXor, ClassKind::RandKSat,
                 ClassKind::HammingWeight}) {
    if (to_string(k) == s) return k;
  }
  fail(ErrorKind::InvalidArgument, "unknown class kind '" + std::string(s) + "'");
}

/// A clause over k distinct variables. Parity clauses contribute
/// x_a ⊕ x_b ⊕ … ⊕ parity; SAT clauses contribute 1 when every literal is
/// false (a conflict). Bit j of `negations` negates the j-th literal.
struct Clause {
  std::vector<int> variables;
  bool parity = false;
  std::uint64_t negations = 0;

  friend bool operator==(const Clause&, const Clause&) = default;
};

struct ProblemInstance {
  ClassSpec spec;
  std::vector<Clause> clauses;
  int n = 0;

  int clause_count() const { return static_cast<int>(clauses.size()); }
};

namespace detail {

/// Clause compiled to bit masks for fast evaluation.
struct CompiledClause {
  std::uint64_t mask = 0;
  std::uint64_t target = 0;  // SAT: assignment that violates the clause
  bool parity = false;
};

inline std::vector<CompiledClause> compile(const ProblemInstance& inst) {
  std::vector<CompiledClause> out;
  out.reserve(inst.clauses.size());
  for (const auto& cl : inst.clauses) {
    CompiledClause cc;
    cc.parity = cl.parity;
    for (std::size_t j = 0; j < cl.variables.size(); ++j) {
      const std::uint64_t bit = std::uint64_t{1} << cl.variables[j];
      cc.mask |= bit;
      // literal j is false when x_v equals its negation flag
      if ((cl.negations >> j) & 1u) cc.target |= bit;
    }
    out.push_back(cc);
  }
  return out;
}

inline int cost_of(std::span<const CompiledClause> clauses, bool sat, std::uint64_t x) {
  int c = 0;
  if (sat) {
    for (const auto& cl : clauses) c += (x & cl.mask) == cl.target;
  } else {
    for (const auto& cl : clauses) c += (std::popcount(x & cl.mask) & 1) ^ static_cast<int>(cl.parity);
  }
  return c;
}

/// k distinct variables from [0, n), sorted (partial Fisher–Yates).
inline std::vector<int> draw_variables(Rng& rng, int n, int k) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (int j = 0; j < k; ++j) {
    const auto pick = j + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n - j)));
    std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(pick)]);
  }
  std::vector<int> vars(pool.begin(), pool.begin() + k);
  std::sort(vars.begin(), vars.end());
  return vars;
}

}  // namespace detail

inline void validate(const ProblemInstance& inst) {
  require(inst.n == inst.spec.n, "instance: n does not match its class");
  for (const auto& cl : inst.clauses) {
    require(!cl.variables.empty(), "instance: empty clause");
    for (std::size_t a = 0; a < cl.variables.size(); ++a) {
      require(cl.variables[a] >= 0 && cl.variables[a] < inst.n, "instance: variable index out of range");
      for (std::size_t b = a + 1; b < cl.variables.size(); ++b)
        require(cl.variables[a] != cl.variables[b], "instance: repeated variable in clause");
    }
  }
}

/// Draws an instance. MaxCutER scans every vertex pair (i < j) and keeps it
/// with probability p_e; clause classes draw m clauses with k distinct
/// variables and fair parity / negation bits.
inline ProblemInstance generate_instance(const ClassSpec& spec, std::uint64_t seed) {
  validate(spec);
  Rng rng = make_rng(seed);
  ProblemInstance inst;
  inst.spec = spec;
  inst.n = spec.n;
  switch (spec.kind) {
    case ClassKind::MaxCutER:
      for (int i = 0; i < spec.n; ++i)
        for (int j = i + 1; j < spec.n; ++j)
          if (bernoulli(rng, spec.edge_probability)) inst.clauses.push_back(Clause{{i, j}, false, 0});
      break;
    case ClassKind::MaxE3Lin2:
    case ClassKind::MaxKXor:
      for (int c = 0; c < spec.m; ++c) {
        Clause cl;
        cl.variables = detail::draw_variables(rng, spec.n, spec.k);
        cl.parity = fair_bit(rng);
        inst.clauses.push_back(std::move(cl));
      }
      break;
    case ClassKind::RandKSat:
      for (int c = 0; c < spec.m; ++c) {
        Clause cl;
        cl.variables = detail::draw_variables(rng, spec.n, spec.k);
        for (int j = 0; j < spec.k; ++j)
          if (fair_bit(rng)) cl.negations |= std::uint64_t{1} << j;
        inst.clauses.push_back(std::move(cl));
      }
      break;
    case ClassKind::HammingWeight:
      for (int i = 0; i < spec.n; ++i) inst.clauses.push_back(Clause{{i}, false, 0});
      break;
  }
  return inst;
}

/// Packs a bit vector (element i = variable i) into an index.
inline std::uint64_t pack_bits(std::span<const std::uint8_t> bits) {
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) x |= std::uint64_t{1} << i;
  return x;
}

/// Parses "0101…" with character i giving variable i.
inline std::vector<std::uint8_t> parse_bits(std::string_view s) {
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (char ch : s) {
    require(ch == '0' || ch == '1', "bitstring: expected only '0' and '1'");
    bits.push_back(ch == '1');
  }
  return bits;
}

/// Cost of the bitstring encoded by `x` (variable i in bit i).
inline int evaluate_cost(const ProblemInstance& inst, std::uint64_t x) {
  const auto compiled = detail::compile(inst);
  return detail::cost_of(compiled, inst.spec.kind == ClassKind::RandKSat, x);
}

inline int evaluate_cost(const ProblemInstance& inst, std::span<const std::uint8_t> bits) {
  require(static_cast<int>(bits.size()) == inst.n,
          "evaluate_cost: bitstring length " + std::to_string(bits.size()) + " != n = " +
              std::to_string(inst.n));
  return evaluate_cost(inst, pack_bits(bits));
}

inline void check_exhaustive(int n, int limit, const char* what) {
  if (n > limit || n > 30)
    fail(ErrorKind::SizeLimit, std::string(what) + ": n = " + std::to_string(n) +
                                   " exceeds the exhaustive limit " + std::to_string(limit));
}

/// c(x) for every x in [0, 2^n).
inline std::vector<int> cost_vector(const ProblemInstance& inst, int limit = kDefaultExhaustiveLimit) {
  check_exhaustive(inst.n, limit, "cost_vector");
  const auto compiled = detail::compile(inst);
  const bool sat = inst.spec.kind == ClassKind::RandKSat;
  const std::uint64_t dim = std::uint64_t{1} << inst.n;
  std::vector<int> costs(dim);
  for (std::uint64_t x = 0; x < dim; ++x) costs[x] = detail::cost_of(compiled, sat, x);
  return costs;
}

/// Contiguous cost range {0, …, c_max}.
struct CostSet {
  int c_max = 0;

  int size() const { return c_max + 1; }
  bool contains(int c) const { return c >= 0 && c <= c_max; }
  friend bool operator==(const CostSet&, const CostSet&) = default;
};

inline CostSet cost_set(const ClassSpec& spec) {
  switch (spec.kind) {
    case ClassKind::MaxCutER: {
      if (spec.margin <= 0.0) return CostSet{spec.m};
      const double pairs = 0.5 * spec.n * (spec.n - 1.0);
      const double mean = spec.edge_probability * pairs;
      const double sd = std::sqrt(pairs * spec.edge_probability * (1.0 - spec.edge_probability));
      const int widened = static_cast<int>(std::ceil(mean + spec.margin * sd - 1e-9));
      return CostSet{std::max(spec.m, std::min(widened, static_cast<int>(pairs)))};
    }
    case ClassKind::HammingWeight:
      return CostSet{spec.n};
    default:
      return CostSet{spec.m};
  }
}

/// log P(c′) for a uniformly random bitstring; -inf for c′ > m.
inline double log_cost_probability(const ClassSpec& spec, int c) {
  require(cost_set(spec).contains(c), "cost_probability: cost " + std::to_string(c) + " outside the cost set");
  const double ln2 = std::log(2.0);
  const int m = spec.m;
  if (c > m) return kNegInf;
  switch (spec.kind) {
    case ClassKind::RandKSat: {
      const double k = spec.k;
      return -k * m * ln2 + pow_log(m - c, std::log(std::exp2(k) - 1.0)) + log_binomial(m, c);
    }
    case ClassKind::HammingWeight:
      return -spec.n * ln2 + log_binomial(spec.n, c);
    default:
      return -m * ln2 + log_binomial(m, c);
  }
}

inline double cost_probability(const ClassSpec& spec, int c) {
  return std::exp(log_cost_probability(spec, c));
}

/// Per-clause probabilities for two bitstrings at Hamming distance d: the
/// clause counts for both, for one specific one, or for neither.
struct PairProbabilities {
  double both = 0.0;
  double one = 0.0;
  double neither = 0.0;
};

/// Probability that a uniformly random k-subset of n variables contains an
/// even number of the d flipped positions.
inline double parity_preserved_probability(int n, int k, int d) {
  double s = 0.0;
  const double norm = log_binomial(n, k);
  for (int l = 0; 2 * l <= k; ++l) {
    const double t = log_binomial(d, 2 * l) + log_binomial(n - d, k - 2 * l);
    if (t != kNegInf) s += std::exp(t - norm);
  }
  return s;
}

inline PairProbabilities pair_probabilities(const ClassSpec& spec, int d) {
  require(d >= 0 && d <= spec.n, "pair_probabilities: distance " + std::to_string(d) + " outside [0, n]");
  PairProbabilities p;
  if (spec.kind == ClassKind::RandKSat) {
    const double violate = std::exp2(-spec.k);
    // both violate only if no flipped variable falls in the clause
    const double untouched = std::exp(log_binomial(spec.n - d, spec.k) - log_binomial(spec.n, spec.k));
    p.both = violate * untouched;
    p.one = violate - p.both;
    p.neither = 1.0 - 2.0 * p.one - p.both;
    return p;
  }
  // parity clauses: MaxCut (k=2), MaxE3Lin2 (k=3), MaxKXor, and HammingWeight
  // read as single-variable clauses (k=1)
  const double same = parity_preserved_probability(spec.n, spec.k, d);
  p.both = 0.5 * same;
  p.neither = p.both;
  p.one = 0.5 * (1.0 - same);
  return p;
}

struct OptimumInfo {
  int c_opt = 0;
  std::uint64_t optimal_count = 0;
};

/// Exhaustive optimum in the instance's direction.
inline OptimumInfo brute_force_optimum(const ProblemInstance& inst, int limit = kDefaultExhaustiveLimit) {
  const auto costs = cost_vector(inst, limit);
  const bool maximize = inst.spec.maximize();
  OptimumInfo best{costs.front(), 0};
  for (int c : costs) {
    if (c == best.c_opt) {
      ++best.optimal_count;
    } else if (maximize ? c > best.c_opt : c < best.c_opt) {
      best = OptimumInfo{c, 1};
    }
  }
  return best;
}

}  // namespace hqaoa
