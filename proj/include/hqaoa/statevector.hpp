// statevector.hpp
// Exact QAOA simulation on all 2^n amplitudes: the reference the proxy and
// the heuristic's parameters are judged against.
//
// Qubit i is bit i of the amplitude index (least significant first).

#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "hqaoa/error.hpp"
#include "hqaoa/problem_classes.hpp"
#include "hqaoa/schedule.hpp"

namespace hqaoa {

using Complex = std::complex<double>;

struct Statevector {
  int n = 0;
  std::vector<Complex> amplitudes;

  static Statevector uniform(int n) {
    Statevector s;
    s.n = n;
    s.amplitudes.assign(std::size_t{1} << n, Complex{std::exp2(-0.5 * n), 0.0});
    return s;
  }
  static Statevector basis(int n, std::uint64_t x) {
    Statevector s;
    s.n = n;
    s.amplitudes.assign(std::size_t{1} << n, Complex{});
    s.amplitudes.at(x) = 1.0;
    return s;
  }

  double squared_norm() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return s;
  }
};

/// e^{−iγC}: multiplies amplitude x by e^{−iγ c(x)}. Costs are integers, so
/// the phases come from a table over the distinct cost values.
inline void apply_phase_layer(Statevector& state, std::span<const int> costs, double gamma) {
  require(costs.size() == state.amplitudes.size(), "phase layer: cost vector size mismatch");
  int c_max = 0;
  for (int c : costs) c_max = std::max(c_max, c);
  std::vector<Complex> phase(static_cast<std::size_t>(c_max) + 1);
  for (int c = 0; c <= c_max; ++c) phase[static_cast<std::size_t>(c)] = std::polar(1.0, -gamma * c);
  for (std::size_t x = 0; x < costs.size(); ++x) state.amplitudes[x] *= phase[static_cast<std::size_t>(costs[x])];
}

/// e^{−iβΣX_i} as n single-qubit rotations [[cos β, −i sin β], [−i sin β, cos β]].
inline void apply_mixer_layer(Statevector& state, double beta) {
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  const std::size_t dim = state.amplitudes.size();
  Complex* a = state.amplitudes.data();
  for (int q = 0; q < state.n; ++q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
      for (std::size_t j = base; j < base + stride; ++j) {
        const Complex u = a[j];
        const Complex v = a[j + stride];
        // (c·u − i s·v, −i s·u + c·v)
        a[j] = {c * u.real() + s * v.imag(), c * u.imag() - s * v.real()};
        a[j + stride] = {c * v.real() + s * u.imag(), c * v.imag() - s * u.real()};
      }
    }
  }
}

/// QAOA state from a precomputed cost vector.
inline Statevector qaoa_state(int n, std::span<const int> costs, const Schedule& schedule) {
  validate(schedule);
  Statevector s = Statevector::uniform(n);
  for (int l = 0; l < schedule.depth(); ++l) {
    apply_phase_layer(s, costs, schedule.gammas[static_cast<std::size_t>(l)]);
    apply_mixer_layer(s, schedule.betas[static_cast<std::size_t>(l)]);
  }
  return s;
}

inline Statevector qaoa_state(const ProblemInstance& instance, const Schedule& schedule,
                              int limit = kDefaultExhaustiveLimit) {
  const auto costs = cost_vector(instance, limit);
  return qaoa_state(instance.n, costs, schedule);
}

/// Σ_x |q(x)|² c(x).
inline double expectation(std::span<const int> costs, const Statevector& state) {
  require(costs.size() == state.amplitudes.size(), "expectation: size mismatch");
  double e = 0.0;
  for (std::size_t x = 0; x < costs.size(); ++x) e += std::norm(state.amplitudes[x]) * costs[x];
  return e;
}

inline double expectation(const ProblemInstance& instance, const Statevector& state,
                          int limit = kDefaultExhaustiveLimit) {
  require(instance.n == state.n, "expectation: qubit count mismatch");
  const auto costs = cost_vector(instance, limit);
  return expectation(costs, state);
}

/// |⟨a|b⟩|² / (⟨a|a⟩⟨b|b⟩).
inline double squared_overlap(std::span<const Complex> a, std::span<const Complex> b) {
  require(a.size() == b.size(), "squared_overlap: length mismatch");
  Complex inner{};
  double na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inner += std::conj(a[i]) * b[i];
    na += std::norm(a[i]);
    nb += std::norm(b[i]);
  }
  if (!(na > 0.0) || !(nb > 0.0)) fail(ErrorKind::Numerical, "squared_overlap: zero vector");
  return std::min(1.0, std::norm(inner) / (na * nb));
}

/// ⟨C⟩/c_opt for maximization classes. Conflict-minimizing classes report
/// (m − ⟨C⟩)/(m − c_opt) so that 1 still means optimal.
inline double approximation_ratio(double expected, int c_opt, int clause_count, Direction dir) {
  if (dir == Direction::MaximizeSatisfied) {
    if (c_opt == 0) fail(ErrorKind::Numerical, "approximation_ratio: optimum is 0");
    return expected / c_opt;
  }
  if (clause_count == c_opt) fail(ErrorKind::Numerical, "approximation_ratio: every clause conflicts");
  return (clause_count - expected) / (clause_count - c_opt);
}

inline double approximation_ratio(const ProblemInstance& instance, const Schedule& schedule,
                                  int limit = kDefaultExhaustiveLimit) {
  const auto costs = cost_vector(instance, limit);
  const auto opt = brute_force_optimum(instance, limit);
  const auto state = qaoa_state(instance.n, costs, schedule);
  return approximation_ratio(expectation(costs, state), opt.c_opt, instance.clause_count(),
                             instance.spec.direction);
}

}  // namespace hqaoa
