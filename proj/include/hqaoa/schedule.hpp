// schedule.hpp
// QAOA angle schedules and the four-parameter linear ramp family.

#pragma once

#include <cmath>
#include <vector>

#include "hqaoa/error.hpp"

namespace hqaoa {

/// Depth-p angles; layer ℓ applies the phase γ_ℓ then the mixer β_ℓ.
struct Schedule {
  std::vector<double> gammas;
  std::vector<double> betas;

  int depth() const { return static_cast<int>(gammas.size()); }
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Lengths equal and angles finite. Depth 0 is allowed and means "no layers".
inline void validate(const Schedule& s) {
  require(s.gammas.size() == s.betas.size(), "schedule: gamma and beta lengths differ");
  for (double g : s.gammas) require(std::isfinite(g), "schedule: non-finite gamma");
  for (double b : s.betas) require(std::isfinite(b), "schedule: non-finite beta");
}

struct LinearRamp {
  double gamma_start = 0.1;
  double gamma_end = 0.6;
  double beta_start = 0.6;
  double beta_end = 0.1;

  friend bool operator==(const LinearRamp&, const LinearRamp&) = default;
};

/// γ_ℓ = γ1 + (γf − γ1)·ℓ/p and likewise for β, with ℓ = 1..p. The first
/// layer therefore sits at fraction 1/p, not at the start point.
inline Schedule linear_ramp_expand(const LinearRamp& ramp, int p) {
  require(p >= 1, "linear_ramp_expand: depth must be >= 1");
  require(std::isfinite(ramp.gamma_start) && std::isfinite(ramp.gamma_end) && std::isfinite(ramp.beta_start) &&
              std::isfinite(ramp.beta_end),
          "linear_ramp_expand: non-finite endpoint");
  Schedule s;
  s.gammas.resize(static_cast<std::size_t>(p));
  s.betas.resize(static_cast<std::size_t>(p));
  for (int l = 1; l < p; ++l) {
    const double t = static_cast<double>(l) / static_cast<double>(p);
    s.gammas[static_cast<std::size_t>(l - 1)] = ramp.gamma_start + (ramp.gamma_end - ramp.gamma_start) * t;
    s.betas[static_cast<std::size_t>(l - 1)] = ramp.beta_start + (ramp.beta_end - ramp.beta_start) * t;
  }
  s.gammas.back() = ramp.gamma_end;  // exact at ℓ = p
  s.betas.back() = ramp.beta_end;
  return s;
}

}  // namespace hqaoa
