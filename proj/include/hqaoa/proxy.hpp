// proxy.hpp
// Cost-indexed homogeneous evolution. Every bitstring of cost c′ is assumed
// to carry the same amplitude Q(c′); one layer maps
//
//   Q'(c′) = Σ_{d,c} cos^{n−d}β (−i sinβ)^d · e^{−iγc} Q(c) · N(c′;d,c)
//
// where the phase is taken at the source cost c. The evolution is not
// unitary, and the pseudo-norm Σ 2^n P(c′)|Q(c′)|² is never renormalized
// between layers.

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "hqaoa/distributions.hpp"
#include "hqaoa/error.hpp"
#include "hqaoa/schedule.hpp"

namespace hqaoa {

using Complex = std::complex<double>;

/// Textbook complex product, without the NaN/Inf recovery branch that
/// std::complex multiplication carries.
inline Complex cmul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

/// ⟨x|e^{−iβB}|y⟩ for Hamming distance d: cos^{n−d}β (−i sinβ)^d. The
/// magnitude is assembled in log space and the phase from exact quadrants,
/// so large n neither underflows early nor picks up rounding in the phase.
inline Complex mixer_element(int n, int d, double beta) {
  require(d >= 0 && d <= n, "mixer_element: distance outside [0, n]");
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  const double log_mag = pow_log(n - d, safe_log(std::abs(c))) + pow_log(d, safe_log(std::abs(s)));
  double mag = std::exp(log_mag);
  if ((n - d) % 2 == 1 && c < 0.0) mag = -mag;
  if (d % 2 == 1 && s < 0.0) mag = -mag;
  switch (d % 4) {
    case 0: return {mag, 0.0};
    case 1: return {0.0, -mag};
    case 2: return {-mag, 0.0};
    default: return {0.0, mag};
  }
}

struct HomogState {
  std::vector<Complex> q;
  int layer = 0;
  std::uint64_t table_ref = 0;
};

/// Layer-0 state: 2^{−n/2} on every reachable cost, 0 on unreachable ones.
inline HomogState initial_state(const DistributionTable& table) {
  HomogState s;
  s.q.assign(static_cast<std::size_t>(table.size()), Complex{});
  const double amp = std::exp2(-0.5 * table.n());
  for (int c = 0; c < table.size(); ++c)
    if (table.reachable(c)) s.q[static_cast<std::size_t>(c)] = amp;
  s.table_ref = table.fingerprint();
  return s;
}

inline HomogState evolve_step(const HomogState& state, const DistributionTable& table, double gamma, double beta) {
  if (state.table_ref != table.fingerprint() || static_cast<int>(state.q.size()) != table.size())
    fail(ErrorKind::InvalidArgument, "evolve_step: state was built from a different table");
  const int n = table.n();
  const int w = table.size();

  std::vector<Complex> mixer(static_cast<std::size_t>(n + 1));
  for (int d = 0; d <= n; ++d) mixer[static_cast<std::size_t>(d)] = mixer_element(n, d, beta);

  // phased source amplitudes, split for a vectorizable inner loop
  std::vector<double> re(static_cast<std::size_t>(w)), im(static_cast<std::size_t>(w));
  for (int c = 0; c < w; ++c) {
    const Complex r = cmul(std::polar(1.0, -gamma * c), state.q[static_cast<std::size_t>(c)]);
    re[static_cast<std::size_t>(c)] = r.real();
    im[static_cast<std::size_t>(c)] = r.imag();
  }

  HomogState out;
  out.q.assign(static_cast<std::size_t>(w), Complex{});
  out.layer = state.layer + 1;
  out.table_ref = state.table_ref;
  for (int cp = 0; cp < w; ++cp) {
    if (!table.reachable(cp)) continue;
    Complex acc{};
    for (int d = 0; d <= n; ++d) {
      const double* row = table.row(cp, d).data();
      double sr = 0.0, si = 0.0;
      for (int c = 0; c < w; ++c) {
        sr += row[c] * re[static_cast<std::size_t>(c)];
        si += row[c] * im[static_cast<std::size_t>(c)];
      }
      acc += cmul(mixer[static_cast<std::size_t>(d)], Complex{sr, si});
    }
    out.q[static_cast<std::size_t>(cp)] = acc;
  }
  return out;
}

/// K_β(c′, c) = Σ_d M_d(β) N(c′;d,c), row-major over reachable c′ (other
/// rows zero). One layer is then Q'(c′) = Σ_c K_β(c′,c) e^{−iγc} Q(c), which
/// lets a sweep over γ at fixed β skip the distance sum.
struct MixingKernel {
  int size = 0;
  std::uint64_t table_ref = 0;
  std::vector<Complex> k;
};

inline MixingKernel mixing_kernel(const DistributionTable& table, double beta) {
  const int n = table.n();
  const int w = table.size();
  MixingKernel out{w, table.fingerprint(), std::vector<Complex>(static_cast<std::size_t>(w) * w)};
  for (int d = 0; d <= n; ++d) {
    const Complex md = mixer_element(n, d, beta);
    for (int cp = 0; cp < w; ++cp) {
      if (!table.reachable(cp)) continue;
      const double* row = table.row(cp, d).data();
      Complex* dst = out.k.data() + static_cast<std::size_t>(cp) * w;
      for (int c = 0; c < w; ++c) dst[c] += Complex{md.real() * row[c], md.imag() * row[c]};
    }
  }
  return out;
}

inline HomogState apply_kernel(const HomogState& state, const MixingKernel& kernel, double gamma) {
  if (state.table_ref != kernel.table_ref || static_cast<int>(state.q.size()) != kernel.size)
    fail(ErrorKind::InvalidArgument, "apply_kernel: state was built from a different table");
  const int w = kernel.size;
  std::vector<Complex> phased(static_cast<std::size_t>(w));
  for (int c = 0; c < w; ++c)
    phased[static_cast<std::size_t>(c)] = cmul(std::polar(1.0, -gamma * c), state.q[static_cast<std::size_t>(c)]);
  HomogState out{std::vector<Complex>(static_cast<std::size_t>(w)), state.layer + 1, state.table_ref};
  for (int cp = 0; cp < w; ++cp) {
    const Complex* row = kernel.k.data() + static_cast<std::size_t>(cp) * w;
    Complex acc{};
    for (int c = 0; c < w; ++c) acc += cmul(row[c], phased[static_cast<std::size_t>(c)]);
    out.q[static_cast<std::size_t>(cp)] = acc;
  }
  return out;
}

/// Applies every layer of the schedule to the layer-0 state.
inline HomogState evolve(const DistributionTable& table, const Schedule& schedule) {
  validate(schedule);
  HomogState s = initial_state(table);
  for (int l = 0; l < schedule.depth(); ++l)
    s = evolve_step(s, table, schedule.gammas[static_cast<std::size_t>(l)], schedule.betas[static_cast<std::size_t>(l)]);
  return s;
}

/// Σ_{c′} 2^n P(c′) |Q(c′)|².
inline double pseudo_norm(const HomogState& state, const DistributionTable& table) {
  require(static_cast<int>(state.q.size()) == table.size(), "pseudo_norm: size mismatch");
  const double scale = std::exp2(table.n());
  double s = 0.0;
  for (int c = 0; c < table.size(); ++c) s += scale * table.p(c) * std::norm(state.q[static_cast<std::size_t>(c)]);
  return s;
}

/// Σ_{c′} 2^n P(c′) |Q(c′)|² c′, optionally divided by the pseudo-norm.
inline double expected_cost(const HomogState& state, const DistributionTable& table, bool normalize = false) {
  if (state.table_ref != table.fingerprint() || static_cast<int>(state.q.size()) != table.size())
    fail(ErrorKind::InvalidArgument, "expected_cost: state was built from a different table");
  const double scale = std::exp2(table.n());
  double num = 0.0;
  double den = 0.0;
  for (int c = 0; c < table.size(); ++c) {
    const double w = scale * table.p(c) * std::norm(state.q[static_cast<std::size_t>(c)]);
    num += w * c;
    den += w;
  }
  if (!normalize) return num;
  if (!(den > 0.0)) fail(ErrorKind::Numerical, "expected_cost: zero pseudo-norm");
  return num / den;
}

/// Places Q(c(x)) at every index x of a precomputed cost vector.
inline std::vector<Complex> scatter_to_bitstrings(std::span<const int> costs, const HomogState& state) {
  std::vector<Complex> amps(costs.size());
  for (std::size_t x = 0; x < costs.size(); ++x) {
    const int c = costs[x];
    if (c < 0 || c >= static_cast<int>(state.q.size()))
      fail(ErrorKind::OutOfRange, "proxy pseudostate: bitstring cost " + std::to_string(c) +
                                      " lies outside the cost set; widen it with a margin");
    amps[x] = state.q[static_cast<std::size_t>(c)];
  }
  return amps;
}

/// All 2^n amplitudes evolved with N(c(x);d,c) in place of n(x;d,c). Every
/// bitstring's update then depends on its cost alone, so this equals the
/// cost-indexed evolution scattered onto bitstrings.
inline std::vector<Complex> proxy_pseudostate(const ProblemInstance& instance, const DistributionTable& table,
                                              const Schedule& schedule, int limit = kDefaultExhaustiveLimit) {
  require(instance.n == table.n(), "proxy_pseudostate: instance and table differ in n");
  const auto costs = cost_vector(instance, limit);
  return scatter_to_bitstrings(costs, evolve(table, schedule));
}

}  // namespace hqaoa
