#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hqaoa/optimizer.hpp"
#include "hqaoa/statevector.hpp"

using namespace hqaoa;

namespace {

constexpr double kPi = std::numbers::pi;

double grid_best(const ParamObjective& f, int steps) {
  double best = -1e300;
  for (int i = 0; i < steps; ++i)
    for (int j = 0; j < steps; ++j) {
      const std::vector<double> x{2 * kPi * i / steps, kPi * j / steps};
      best = std::max(best, f(x));
    }
  return best;
}

}  // namespace

TEST(LinearRamp, Examples) {
  const auto s = linear_ramp_expand(LinearRamp{0, 1, 1, 0}, 4);
  const std::vector<double> g{0.25, 0.5, 0.75, 1.0}, b{0.75, 0.5, 0.25, 0.0};
  for (int l = 0; l < 4; ++l) {
    EXPECT_NEAR(s.gammas[l], g[l], 1e-15);
    EXPECT_NEAR(s.betas[l], b[l], 1e-15);
  }
  const auto one = linear_ramp_expand(LinearRamp{0.3, 0.9, 0.4, 0.2}, 1);
  EXPECT_EQ(one.gammas, std::vector<double>{0.9});
  EXPECT_EQ(one.betas, std::vector<double>{0.2});
  const auto flat = linear_ramp_expand(LinearRamp{0.5, 0.5, 0.1, 0.1}, 6);
  for (int l = 0; l < 6; ++l) EXPECT_DOUBLE_EQ(flat.gammas[l], 0.5);
  EXPECT_THROW(linear_ramp_expand(LinearRamp{}, 0), Error);
}

TEST(HomogeneousObjective, ZeroParamsGiveBinomialMean) {
  const auto t = precompute_all(ClassSpec::maxcut_er(10, 1.0 / 3.0));
  const std::vector<double> zero(4, 0.0);
  EXPECT_NEAR(homogeneous_objective(zero, t, 5, Parameterization::LinearRamp4), 7.5, 1e-10);
  EXPECT_NEAR(homogeneous_objective(std::vector<double>(6, 0.0), t, 3, Parameterization::Full2p), 7.5, 1e-10);
}

TEST(HomogeneousObjective, DimensionMismatchIsAnError) {
  const auto t = precompute_all(ClassSpec::maxcut_er(8, 0.5));
  EXPECT_THROW(homogeneous_objective(std::vector<double>(5, 0.1), t, 3, Parameterization::Full2p), Error);
  EXPECT_THROW(homogeneous_objective(std::vector<double>(3, 0.1), t, 3, Parameterization::LinearRamp4), Error);
}

TEST(HomogeneousObjective, ParameterizationsAgree) {
  const auto t = precompute_all(ClassSpec::max_e3lin2(10, 20));
  const std::vector<double> ramp{0.2, 0.7, 0.55, 0.05};
  const auto s = expand_params(ramp, 5, Parameterization::LinearRamp4);
  std::vector<double> full = s.gammas;
  full.insert(full.end(), s.betas.begin(), s.betas.end());
  EXPECT_NEAR(homogeneous_objective(ramp, t, 5, Parameterization::LinearRamp4),
              homogeneous_objective(full, t, 5, Parameterization::Full2p), 1e-12);
}

TEST(HomogeneousObjective, FiniteDifferencesStableUnderStepHalving) {
  const auto t = precompute_all(ClassSpec::maxcut_er(10, 0.5));
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.1, 1.4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x{u(rng), u(rng), u(rng), u(rng)};
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto central = [&](double h) {
        auto a = x, b = x;
        a[i] += h;
        b[i] -= h;
        return (homogeneous_objective(a, t, 2, Parameterization::Full2p) -
                homogeneous_objective(b, t, 2, Parameterization::Full2p)) /
               (2 * h);
      };
      const double g1 = central(1e-5), g2 = central(5e-6);
      EXPECT_NEAR(g1, g2, 1e-3 * std::max(1.0, std::abs(g1)));
    }
  }
}

TEST(Maximize, QuadraticFixture) {
  const std::vector<double> a{1.3, 0.4};
  const ParamObjective f = [&](std::span<const double> x) {
    return -((x[0] - a[0]) * (x[0] - a[0]) + 3 * (x[1] - a[1]) * (x[1] - a[1]));
  };
  OptimizerOptions o;
  o.parameterization = Parameterization::Full2p;
  o.initial_schedule = Schedule{{0.2}, {2.5}};
  const auto r = maximize(f, 1, o);
  EXPECT_NEAR(r.params[0], a[0], 1e-4);
  EXPECT_NEAR(r.params[1], a[1], 1e-4);
  EXPECT_LT(r.iterations, 50);
}

TEST(Maximize, RespectsBounds) {
  const ParamObjective f = [](std::span<const double> x) { return x[0] + x[1]; };
  OptimizerOptions o;
  o.parameterization = Parameterization::Full2p;
  o.initial_schedule = Schedule{{1.0}, {1.0}};
  const auto r = maximize(f, 1, o);
  EXPECT_NEAR(r.params[0], 2 * kPi, 1e-12);
  EXPECT_NEAR(r.params[1], kPi, 1e-12);
}

TEST(Maximize, NonFiniteInitialObjectiveIsAnError) {
  const ParamObjective f = [](std::span<const double>) { return std::nan(""); };
  OptimizerOptions o;
  o.parameterization = Parameterization::Full2p;
  try {
    maximize(f, 1, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Numerical);
  }
}

TEST(Maximize, InvalidOptionsRejected) {
  const ParamObjective f = [](std::span<const double>) { return 0.0; };
  OptimizerOptions o;
  o.tolerance = 0;
  EXPECT_THROW(maximize(f, 1, o), Error);
  o = {};
  o.gamma_bounds = {1.0, 0.5};
  EXPECT_THROW(maximize(f, 1, o), Error);
}

TEST(Heuristic, DepthOneMatchesDenseGrid) {
  const auto t = precompute_all(ClassSpec::maxcut_er(10, 1.0 / 3.0));
  const ParamObjective f = [&](std::span<const double> x) {
    return homogeneous_objective(x, t, 1, Parameterization::Full2p);
  };
  OptimizerOptions o;
  o.parameterization = Parameterization::Full2p;
  o.restarts = 4;
  const auto r = heuristic(t, 1, o);
  EXPECT_GE(r.objective_value, grid_best(f, 200) - 1e-3);
  EXPECT_NEAR(r.objective_value, f(r.params), 1e-9);
}

TEST(Heuristic, NeverWorseThanStart) {
  for (const auto& spec : {ClassSpec::maxcut_er(10, 0.5), ClassSpec::rand_ksat(10, 40, 3)}) {
    const auto t = precompute_all(spec);
    OptimizerOptions o;
    const auto r = heuristic(t, 4, o);
    const double start = homogeneous_objective(initial_params(o, 4), t, 4, o.parameterization);
    if (spec.maximize())
      EXPECT_GE(r.objective_value, start);
    else
      EXPECT_LE(r.objective_value, start);
    ASSERT_FALSE(r.trace.empty());
    EXPECT_DOUBLE_EQ(r.trace.front().objective, start);
    EXPECT_DOUBLE_EQ(r.trace.back().objective, r.objective_value);
    EXPECT_TRUE(r.ramp.has_value());
  }
}

TEST(Heuristic, RestartsNeverHurt) {
  const auto t = precompute_all(ClassSpec::maxcut_er(9, 0.5));
  OptimizerOptions o;
  o.parameterization = Parameterization::Full2p;
  const auto single = heuristic(t, 2, o);
  o.restarts = 5;
  o.seed = 3;
  const auto multi = heuristic(t, 2, o);
  EXPECT_GE(multi.objective_value, single.objective_value);
}

TEST(Heuristic, Deterministic) {
  const auto t = precompute_all(ClassSpec::max_kxor(10, 25, 3));
  OptimizerOptions o;
  o.restarts = 2;
  o.seed = 99;
  const auto a = heuristic(t, 3, o), b = heuristic(t, 3, o);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.objective_value, b.objective_value);
  EXPECT_EQ(a.evaluation_count, b.evaluation_count);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) EXPECT_EQ(a.trace[i].objective, b.trace[i].objective);
}

TEST(Heuristic, ExactOnHammingWeight) {
  const auto spec = ClassSpec::hamming_weight(8);
  const auto t = precompute_all(spec);
  OptimizerOptions o;
  o.parameterization = Parameterization::Full2p;
  const auto r = heuristic(t, 2, o);
  const auto inst = generate_instance(spec, 0);
  EXPECT_NEAR(expectation(inst, qaoa_state(inst, r.schedule)), r.objective_value, 1e-6);
}

TEST(Heuristic, ConflictClassesAreMinimized) {
  const auto t = precompute_all(ClassSpec::rand_ksat(10, 40, 3));
  OptimizerOptions o;
  const auto r = heuristic(t, 2, o);
  EXPECT_LT(r.objective_value, 40.0 / 8.0);
}

TEST(Heuristic, ExtraRampsEscapeDegenerateStart) {
  // from the default ramp at n=20, p=3 the ascent stalls where every γ is 0
  const auto t = precompute_all(ClassSpec::maxcut_er(20, 0.5));
  OptimizerOptions o;
  o.parameterization = Parameterization::Full2p;
  const auto single = heuristic(t, 3, o);
  o.extra_ramps = {LinearRamp{0.01, 0.06, 0.6, 0.1}, LinearRamp{0.025, 0.15, 0.6, 0.1}};
  const auto swept = heuristic(t, 3, o);
  EXPECT_GE(swept.objective_value, single.objective_value);
  EXPECT_GT(swept.objective_value, t.spec().m / 2.0 + 1.0);
}
