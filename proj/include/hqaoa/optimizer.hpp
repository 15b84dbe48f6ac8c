// optimizer.hpp
// Homogeneous parameter setting: a box-constrained quasi-Newton outer loop
// whose objective is the proxy's cost estimate. The resulting angles are
// meant to be used directly in QAOA on instances of the class.

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hqaoa/distributions.hpp"
#include "hqaoa/error.hpp"
#include "hqaoa/proxy.hpp"
#include "hqaoa/random.hpp"
#include "hqaoa/schedule.hpp"

namespace hqaoa {

enum class Parameterization { Full2p, LinearRamp4 };

inline std::string_view to_string(Parameterization p) {
  return p == Parameterization::Full2p ? "full" : "ramp";
}

inline Parameterization parse_parameterization(std::string_view s) {
  if (s == "full" || s == "full2p") return Parameterization::Full2p;
  if (s == "ramp" || s == "linear-ramp") return Parameterization::LinearRamp4;
  fail(ErrorKind::InvalidArgument, "unknown parameterization '" + std::string(s) + "'");
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct OptimizerOptions {
  Parameterization parameterization = Parameterization::LinearRamp4;
  LinearRamp initial_ramp{};
  std::optional<Schedule> initial_schedule;  // Full2p only; overrides the ramp
  std::vector<LinearRamp> extra_ramps;       // further starting points, tried in order
  Interval gamma_bounds{0.0, 2.0 * std::numbers::pi};
  Interval beta_bounds{0.0, std::numbers::pi};
  double tolerance = 1e-6;
  int max_iterations = 500;
  double fd_step = 1e-6;
  bool maximize = true;
  int restarts = 0;  // extra uniformly drawn starting points
  std::uint64_t seed = 0;
};

inline void validate(const OptimizerOptions& o) {
  require(o.tolerance > 0.0, "optimizer: tolerance must be > 0");
  require(o.fd_step > 0.0, "optimizer: fd_step must be > 0");
  require(o.max_iterations >= 0, "optimizer: max_iterations must be >= 0");
  require(o.restarts >= 0, "optimizer: restarts must be >= 0");
  require(o.gamma_bounds.lo <= o.gamma_bounds.hi && o.beta_bounds.lo <= o.beta_bounds.hi,
          "optimizer: empty bounds");
}

struct TracePoint {
  int iteration = 0;
  double objective = 0.0;
};

/// Outcome of one box-constrained run; `value` is in the caller's sense
/// (maximized or minimized as requested).
struct BoxResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  std::vector<TracePoint> trace;
};

using ParamObjective = std::function<double(std::span<const double>)>;

/// Projected BFGS with central finite-difference gradients and Armijo
/// backtracking along the projected path. Never returns a point worse than
/// its start.
inline BoxResult optimize_box(const ParamObjective& objective, std::vector<double> x0, std::span<const double> lower,
                              std::span<const double> upper, bool maximize, double tolerance, int max_iterations,
                              double fd_step) {
  const std::size_t dim = x0.size();
  require(lower.size() == dim && upper.size() == dim, "optimize_box: bounds dimension mismatch");
  const double sign = maximize ? -1.0 : 1.0;  // minimize sign * f
  BoxResult res;

  auto project = [&](std::vector<double>& x) {
    for (std::size_t i = 0; i < dim; ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
  };
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    return sign * objective(x);
  };
  auto gradient = [&](const std::vector<double>& x) {
    std::vector<double> g(dim);
    std::vector<double> probe = x;
    for (std::size_t i = 0; i < dim; ++i) {
      const double lo = std::max(lower[i], x[i] - fd_step);
      const double hi = std::min(upper[i], x[i] + fd_step);
      if (hi <= lo) {
        g[i] = 0.0;
        continue;
      }
      probe[i] = hi;
      const double fh = eval(probe);
      probe[i] = lo;
      const double fl = eval(probe);
      probe[i] = x[i];
      g[i] = (fh - fl) / (hi - lo);
    }
    return g;
  };

  std::vector<double> x = std::move(x0);
  project(x);
  double fx = eval(x);
  if (!std::isfinite(fx)) fail(ErrorKind::Numerical, "optimizer: non-finite objective at the initial point");
  res.trace.push_back({0, sign * fx});
  std::vector<double> g = gradient(x);

  std::vector<double> H(dim * dim, 0.0);
  auto reset_h = [&] {
    std::fill(H.begin(), H.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) H[i * dim + i] = 1.0;
  };
  reset_h();
  bool h_identity = true;
  bool scaled = false;

  int it = 0;
  while (it < max_iterations) {
    std::vector<bool> free(dim);
    double pg = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const bool at_lo = x[i] <= lower[i] && g[i] > 0.0;
      const bool at_hi = x[i] >= upper[i] && g[i] < 0.0;
      free[i] = !(at_lo || at_hi);
      if (free[i]) pg = std::max(pg, std::abs(g[i]));
    }
    if (pg < 1e-12) break;

    std::vector<double> d(dim, 0.0);
    double slope = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      if (!free[i]) continue;
      for (std::size_t j = 0; j < dim; ++j)
        if (free[j]) d[i] -= H[i * dim + j] * g[j];
      slope += d[i] * g[i];
    }
    if (!(slope < 0.0)) {
      reset_h();
      h_identity = true;
      scaled = false;
      for (std::size_t i = 0; i < dim; ++i) d[i] = free[i] ? -g[i] : 0.0;
    }

    // Armijo backtracking on the projected path
    double alpha = 1.0;
    bool accepted = false;
    std::vector<double> xn(dim);
    double fn = fx;
    for (int ls = 0; ls < 50; ++ls) {
      for (std::size_t i = 0; i < dim; ++i) xn[i] = x[i] + alpha * d[i];
      project(xn);
      double decrease = 0.0;
      bool moved = false;
      for (std::size_t i = 0; i < dim; ++i) {
        decrease += g[i] * (xn[i] - x[i]);
        moved = moved || xn[i] != x[i];
      }
      if (!moved) break;
      fn = eval(xn);
      if (std::isfinite(fn) && fn <= fx + 1e-4 * decrease && fn < fx) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (h_identity) break;  // no descent even along the projected gradient
      reset_h();
      h_identity = true;
      scaled = false;
      continue;
    }
    ++it;
    const std::vector<double> gn = gradient(xn);
    std::vector<double> s(dim), y(dim);
    double sy = 0.0, yy = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
      sy += s[i] * y[i];
      yy += y[i] * y[i];
      ss += s[i] * s[i];
    }
    const double rel_change = (fx - fn) / std::max({std::abs(fx), std::abs(fn), 1.0});
    x = xn;
    fx = fn;
    g = gn;
    res.trace.push_back({it, sign * fx});
    if (rel_change <= tolerance) break;

    if (sy > 1e-10 * std::sqrt(ss * yy)) {  // curvature condition
      if (!scaled) {
        const double gamma = sy / yy;
        for (auto& h : H) h *= gamma;
        scaled = true;
      }
      // H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ
      const double rho = 1.0 / sy;
      std::vector<double> hy(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) hy[i] += H[i * dim + j] * y[j];
      double yhy = 0.0;
      for (std::size_t i = 0; i < dim; ++i) yhy += y[i] * hy[i];
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          H[i * dim + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
      h_identity = false;
    }
  }
  res.x = x;
  res.value = sign * fx;
  res.iterations = it;
  return res;
}

struct OptimizationResult {
  Schedule schedule;
  std::optional<LinearRamp> ramp;
  Parameterization parameterization = Parameterization::LinearRamp4;
  std::vector<double> params;
  double objective_value = 0.0;
  int iterations = 0;
  int evaluation_count = 0;
  std::vector<TracePoint> trace;
};

/// Number of free parameters for a parameterization at depth p.
inline std::size_t parameter_count(Parameterization par, int p) {
  return par == Parameterization::Full2p ? static_cast<std::size_t>(2 * p) : 4u;
}

/// Full2p: [γ1..γp, β1..βp]; LinearRamp4: [γ1, γf, β1, βf].
inline Schedule expand_params(std::span<const double> params, int p, Parameterization par) {
  require(p >= 1, "expand_params: depth must be >= 1");
  require(params.size() == parameter_count(par, p), "expand_params: parameter vector has " +
                                                        std::to_string(params.size()) + " entries, expected " +
                                                        std::to_string(parameter_count(par, p)));
  if (par == Parameterization::LinearRamp4)
    return linear_ramp_expand(LinearRamp{params[0], params[1], params[2], params[3]}, p);
  Schedule s;
  s.gammas.assign(params.begin(), params.begin() + p);
  s.betas.assign(params.begin() + p, params.end());
  return s;
}

/// The proxy's unnormalized cost estimate for a parameter vector.
inline double homogeneous_objective(std::span<const double> params, const DistributionTable& table, int p,
                                    Parameterization par) {
  return expected_cost(evolve(table, expand_params(params, p, par)), table, false);
}

inline std::vector<double> initial_params(const OptimizerOptions& o, int p) {
  if (o.parameterization == Parameterization::LinearRamp4) {
    const auto& r = o.initial_ramp;
    return {r.gamma_start, r.gamma_end, r.beta_start, r.beta_end};
  }
  const Schedule s = o.initial_schedule ? *o.initial_schedule : linear_ramp_expand(o.initial_ramp, p);
  require(s.depth() == p, "optimizer: initial schedule depth differs from p");
  std::vector<double> x = s.gammas;
  x.insert(x.end(), s.betas.begin(), s.betas.end());
  return x;
}

/// Box-constrained quasi-Newton search over the chosen parameterization from
/// the initial point, each extra ramp, then `options.restarts` seeded uniform
/// starts. The best run wins; ties keep the earlier run.
inline OptimizationResult maximize(const ParamObjective& objective, int p, const OptimizerOptions& options) {
  validate(options);
  const std::size_t dim = parameter_count(options.parameterization, p);
  std::vector<double> lower(dim), upper(dim);
  const std::size_t n_gamma = options.parameterization == Parameterization::Full2p ? static_cast<std::size_t>(p) : 2;
  for (std::size_t i = 0; i < dim; ++i) {
    const Interval b = i < n_gamma ? options.gamma_bounds : options.beta_bounds;
    lower[i] = b.lo;
    upper[i] = b.hi;
  }

  std::vector<std::vector<double>> starts{initial_params(options, p)};
  for (const auto& ramp : options.extra_ramps) {
    OptimizerOptions o = options;
    o.initial_ramp = ramp;
    o.initial_schedule.reset();
    starts.push_back(initial_params(o, p));
  }
  Rng rng = make_rng(options.seed);
  for (int r = 0; r < options.restarts; ++r) {
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < dim; ++i) x[i] = lower[i] + (upper[i] - lower[i]) * uniform01(rng);
    starts.push_back(std::move(x));
  }

  std::optional<BoxResult> best;
  int total_evals = 0;
  for (auto& x0 : starts) {
    auto run = optimize_box(objective, x0, lower, upper, options.maximize, options.tolerance, options.max_iterations,
                            options.fd_step);
    total_evals += run.evaluations;
    const bool better = !best || (options.maximize ? run.value > best->value : run.value < best->value);
    if (better) best = std::move(run);
  }

  OptimizationResult out;
  out.parameterization = options.parameterization;
  out.params = best->x;
  out.schedule = expand_params(best->x, p, options.parameterization);
  if (options.parameterization == Parameterization::LinearRamp4)
    out.ramp = LinearRamp{best->x[0], best->x[1], best->x[2], best->x[3]};
  out.objective_value = best->value;
  out.iterations = best->iterations;
  out.evaluation_count = total_evals;
  out.trace = std::move(best->trace);
  return out;
}

/// End-to-end parameter setting against a precomputed class table.
inline OptimizationResult heuristic(const DistributionTable& table, int p, OptimizerOptions options) {
  options.maximize = table.spec().maximize();
  const auto par = options.parameterization;
  return maximize([&](std::span<const double> x) { return homogeneous_objective(x, table, p, par); }, p, options);
}

inline OptimizationResult heuristic(const ClassSpec& spec, int p, const OptimizerOptions& options) {
  return heuristic(precompute_all(spec), p, options);
}

}  // namespace hqaoa
