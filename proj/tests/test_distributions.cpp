#include <gtest/gtest.h>

#include <cmath>

#include "hqaoa/distributions.hpp"
#include "oracles/enumeration.hpp"

using namespace hqaoa;

namespace {

std::vector<ClassSpec> random_classes(int n) {
  return {ClassSpec::maxcut_er(n, 0.5), ClassSpec::max_e3lin2(n, 2 * n), ClassSpec::max_kxor(n, n + 3, std::min(4, n)),
          ClassSpec::rand_ksat(n, 3 * n, 3)};
}

ProblemInstance k2_instance() { return generate_instance(ClassSpec::maxcut_er(2, 1.0), 0); }

}  // namespace

TEST(JointCostProbability, SingleEdgeClass) {
  const auto k2 = ClassSpec::maxcut_er(2, 1.0);
  ASSERT_EQ(k2.m, 1);
  EXPECT_NEAR(joint_cost_probability(k2, 0, 1, 1), 0.5, 1e-15);
  EXPECT_NEAR(joint_cost_probability(k2, 0, 0, 1), 0.0, 1e-15);
}

TEST(JointCostProbability, DiagonalAtDistanceZero) {
  const auto spec = ClassSpec::maxcut_er(8, 0.5);
  for (int cp = 0; cp <= spec.m; ++cp)
    for (int c = 0; c <= spec.m; ++c) {
      const double p = joint_cost_probability(spec, cp, c, 0);
      if (c != cp) {
        EXPECT_EQ(p, 0.0);
      } else {
        EXPECT_NEAR(p, cost_probability(spec, cp), 1e-14);
      }
    }
}

TEST(JointCostProbability, MarginalIsCostProbability) {
  for (int n : {4, 7, 10}) {
    for (const auto& spec : random_classes(n)) {
      for (int d = 0; d <= n; ++d)
        for (int cp = 0; cp <= spec.m; ++cp) {
          double s = 0;
          for (int c = 0; c <= spec.m; ++c) s += joint_cost_probability(spec, cp, c, d);
          EXPECT_NEAR(s, cost_probability(spec, cp), 1e-10) << canonical_key(spec);
        }
    }
  }
}

TEST(JointCostProbability, MatchesExhaustiveClauseEnumeration) {
  // every ordered tuple of m clauses from the class universe, every pair
  for (const auto& spec : {ClassSpec::maxcut_er(4, 0.5), ClassSpec::max_e3lin2(4, 3), ClassSpec::max_kxor(5, 2, 2),
                           ClassSpec::rand_ksat(4, 2, 2)}) {
    ClassSpec s = spec;
    if (s.kind == ClassKind::MaxCutER) s.m = 3;  // three i.i.d. signed edges
    const auto joint = oracle::enumerate_joint(s);
    for (int d = 0; d <= s.n; ++d)
      for (int cp = 0; cp <= s.m; ++cp)
        for (int c = 0; c <= s.m; ++c) {
          // bypass validation for the i.i.d.-edge MaxCut variant
          const LogFactorialTable lf(s.m);
          const double p = std::exp(detail::log_joint_multinomial(s.m, lf, detail::log_pair(s, d), cp, c));
          EXPECT_NEAR(p, joint[d][cp][c], 1e-12) << canonical_key(s) << " d=" << d << " c'=" << cp << " c=" << c;
        }
  }
}

TEST(ReplacementDistribution, SingleEdgeNeighbours) {
  const auto k2 = ClassSpec::maxcut_er(2, 1.0);
  const auto n0 = replacement_distribution(k2, 0);
  EXPECT_NEAR(n0(1, 1), 2.0, 1e-14);
  EXPECT_NEAR(n0(2, 0), 1.0, 1e-14);
  // same counts by enumeration on K2 from x = 00
  const auto e = empirical_distribution(k2_instance(), 0);
  EXPECT_EQ(e.count(1, 1), 2);
  EXPECT_EQ(e.count(2, 0), 1);
}

TEST(ReplacementDistribution, IdentityAtDistanceZero) {
  for (const auto& spec : random_classes(9))
    for (int cp = 0; cp <= spec.m; ++cp) {
      const auto N = replacement_distribution(spec, cp);
      for (int c = 0; c <= spec.m; ++c) EXPECT_NEAR(N(0, c), c == cp ? 1.0 : 0.0, 1e-12);
    }
}

TEST(ReplacementDistribution, HammingWeightClosedForm) {
  const auto N = replacement_distribution(ClassSpec::hamming_weight(4), 2);
  EXPECT_NEAR(N(2, 2), 4.0, 1e-12);
}

TEST(ReplacementDistribution, UnreachableCostIsAnError) {
  auto spec = ClassSpec::maxcut_er(10, 1.0 / 3.0, 2.0);  // widened beyond m
  try {
    replacement_distribution(spec, spec.m + 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unreachable);
  }
}

TEST(PrecomputeAll, ErdosRenyiShape) {
  const auto t = precompute_all(ClassSpec::maxcut_er(10, 1.0 / 3.0));
  EXPECT_EQ(t.size(), 16);
  EXPECT_EQ(t.raw().size(), 16u * 11u * 16u);
}

TEST(PrecomputeAll, MatchesPerCostReplacementDistribution) {
  const auto spec = ClassSpec::rand_ksat(8, 20, 3);
  const auto t = precompute_all(spec, 3);
  for (int cp = 0; cp <= spec.m; ++cp) {
    const auto N = replacement_distribution(spec, cp);
    for (int d = 0; d <= spec.n; ++d)
      for (int c = 0; c <= spec.m; ++c) EXPECT_DOUBLE_EQ(t.N(cp, d, c), N(d, c));
  }
}

TEST(PrecomputeAll, HammingWeightEqualsEnumeration) {
  for (int n : {4, 6, 9}) {
    const auto spec = ClassSpec::hamming_weight(n);
    const auto t = precompute_all(spec);
    const auto inst = generate_instance(spec, 0);
    const auto costs = cost_vector(inst);
    for (std::uint64_t x = 0; x < costs.size(); ++x) {
      const auto e = empirical_distribution(costs, n, n, x);
      const int cp = costs[x];
      for (int d = 0; d <= n; ++d)
        for (int c = 0; c <= n; ++c) EXPECT_NEAR(t.N(cp, d, c), static_cast<double>(e.count(d, c)), 1e-9);
    }
  }
}

TEST(PrecomputeAll, SumRulesAndDetailedBalance) {
  for (int n = 4; n <= 12; ++n) {
    auto classes = random_classes(n);
    classes.push_back(ClassSpec::hamming_weight(n));
    for (const auto& spec : classes) {
      const auto r = sum_rule_residuals(precompute_all(spec));
      EXPECT_LT(r.row_sum, 1e-9) << canonical_key(spec);
      EXPECT_LT(r.total, 1e-9) << canonical_key(spec);
      EXPECT_LT(r.detailed_balance, 1e-9) << canonical_key(spec);
      EXPECT_LT(r.probability_sum, 1e-12) << canonical_key(spec);
    }
  }
}

TEST(PrecomputeAll, WidenedCostSetZeroesUnreachableRows) {
  const auto spec = ClassSpec::maxcut_er(10, 1.0 / 3.0, 1.0);
  const auto t = precompute_all(spec);
  ASSERT_GT(t.size(), spec.m + 1);
  for (int cp = spec.m + 1; cp < t.size(); ++cp) {
    EXPECT_FALSE(t.reachable(cp));
    for (int d = 0; d <= spec.n; ++d)
      for (double v : t.row(cp, d)) EXPECT_EQ(v, 0.0);
  }
  const auto r = sum_rule_residuals(t);
  EXPECT_LT(r.row_sum, 1e-9);
}

TEST(PrecomputeAll, EntriesFiniteAndNonNegativeAtLargeM) {
  const auto t = precompute_all(ClassSpec::max_kxor(30, 200, 3));
  for (double v : t.raw()) {
    ASSERT_TRUE(std::isfinite(v));
    ASSERT_GE(v, 0.0);
  }
  EXPECT_LT(sum_rule_residuals(t).row_sum, 1e-9);
}

TEST(EmpiricalDistribution, RowStructure) {
  const auto inst = generate_instance(ClassSpec::max_e3lin2(8, 10), 4);
  const auto e = empirical_distribution(inst, 0b10110010);
  std::int64_t total = 0;
  for (int d = 0; d <= 8; ++d) {
    std::int64_t row = 0;
    for (int c = 0; c <= e.c_max; ++c) {
      row += e.count(d, c);
      if (d == 0) {
        EXPECT_EQ(e.count(0, c), c == e.anchor_cost ? 1 : 0);
      }
    }
    EXPECT_EQ(row, static_cast<std::int64_t>(binomial(8, d)));
    total += row;
  }
  EXPECT_EQ(total, 256);
}

TEST(EmpiricalStats, SingleMemberCohortHasZeroSpread) {
  const std::vector<ProblemInstance> one{generate_instance(ClassSpec::hamming_weight(5), 0)};
  const auto s = empirical_stats(one, 5);  // only 11111
  EXPECT_EQ(s.cohort_size, 1);
  for (double v : s.stddev.data) EXPECT_EQ(v, 0.0);
}

TEST(EmpiricalStats, HammingWeightHasNoSpread) {
  const std::vector<ProblemInstance> insts{generate_instance(ClassSpec::hamming_weight(7), 0),
                                           generate_instance(ClassSpec::hamming_weight(7), 1)};
  for (int cp = 0; cp <= 7; ++cp) {
    const auto s = empirical_stats(insts, cp);
    for (double v : s.stddev.data) EXPECT_NEAR(v, 0.0, 1e-9);
  }
}

TEST(EmpiricalStats, EmptyCohortIsAnError) {
  const std::vector<ProblemInstance> one{k2_instance()};
  EXPECT_THROW(empirical_stats(one, 5), Error);
}

TEST(EmpiricalStats, ErdosRenyiCohortMeanCorrelatesWithClassTable) {
  const auto spec = ClassSpec::maxcut_er(10, 1.0 / 3.0);
  std::vector<ProblemInstance> insts;
  for (int s = 0; s < 10; ++s) insts.push_back(generate_instance(spec, s));
  const auto table = precompute_all(spec);
  const auto stats = empirical_stats(insts, 7);
  Array2D analytic(spec.n + 1, table.size()), empirical(spec.n + 1, table.size());
  for (int d = 0; d <= spec.n; ++d)
    for (int c = 0; c < table.size(); ++c) {
      analytic(d, c) = table.N(7, d, c);
      empirical(d, c) = c < stats.mean.cols ? stats.mean(d, c) : 0.0;
    }
  EXPECT_GT(pearson_correlation(analytic, empirical), 0.9);
}

TEST(PearsonCorrelation, Basics) {
  const std::vector<double> a{1, 2, 3, 5, 8}, neg{-1, -2, -3, -5, -8};
  EXPECT_NEAR(pearson_correlation(a, a), 1.0, 1e-15);
  EXPECT_NEAR(pearson_correlation(a, neg), -1.0, 1e-15);
  const std::vector<double> flat{2, 2, 2, 2, 2};
  try {
    pearson_correlation(a, flat);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Numerical);
  }
  EXPECT_THROW(pearson_correlation(a, std::vector<double>{1, 2}), Error);
}
