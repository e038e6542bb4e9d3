#pragma once

// Shared test utilities: a reproducible RNG (QPWAVE_SEED overrides the fixed
// default), random field/trajectory generators, and deliberately naive
// reference implementations of the coefficient algebra.  The references here
// must stay independent of the library kernels they check.

#include <complex>
#include <cstdlib>
#include <map>
#include <random>
#include <vector>

#include "qpwave/lattice.hpp"
#include "qpwave/qpfield.hpp"
#include "qpwave/solver.hpp"

namespace qptest {

using qpwave::CoeffMap;
using qpwave::CoefficientField;
using qpwave::Complex;
using qpwave::FrequencyVector;
using qpwave::MultiIndex;

inline std::mt19937_64 make_rng(uint64_t salt = 0) {
  uint64_t seed = 0x9e3779b97f4a7c15ull;
  if (const char* env = std::getenv("QPWAVE_SEED")) {
    seed = std::strtoull(env, nullptr, 10);
  }
  std::seed_seq seq{seed, salt};
  return std::mt19937_64(seq);
}

inline FrequencyVector random_omega(std::mt19937_64& rng, int nu,
                                    bool normalize_max = false) {
  std::uniform_real_distribution<double> mag(0.3, 2.0);
  std::bernoulli_distribution flip(0.5);
  std::vector<double> w(static_cast<size_t>(nu));
  for (auto& x : w) x = (flip(rng) ? -1.0 : 1.0) * mag(rng);
  if (normalize_max) {
    double m = 0.0;
    for (double x : w) m = std::max(m, std::abs(x));
    for (auto& x : w) x /= m;
  }
  return FrequencyVector(w);
}

// Dense random field on the l1 box of the given radius.  The amplitude decay
// keeps weighted norms tame even at k = 1.
inline CoefficientField random_field(std::mt19937_64& rng,
                                     const FrequencyVector& omega, int radius,
                                     double amplitude = 0.5) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  CoeffMap coeffs;
  for (const auto& n : qpwave::enumerate_box(radius, omega.nu())) {
    double decay = std::exp(-1.5 * static_cast<double>(qpwave::index_norm(n)));
    coeffs[n] = amplitude * decay * Complex(unit(rng), unit(rng));
  }
  return CoefficientField(omega, std::move(coeffs));
}

// Random real-valued field: draws the n > 0 half and mirrors conjugates.
inline CoefficientField random_real_field(std::mt19937_64& rng,
                                          const FrequencyVector& omega,
                                          int radius, double amplitude = 0.5) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  CoeffMap coeffs;
  for (const auto& n : qpwave::enumerate_box(radius, omega.nu())) {
    MultiIndex neg = n;
    for (auto& c : neg) c = -c;
    if (n < neg) continue;  // fill the upper half, mirror the rest
    double decay = std::exp(-1.5 * static_cast<double>(qpwave::index_norm(n)));
    Complex v = amplitude * decay * Complex(unit(rng), unit(rng));
    if (n == neg) v = Complex(v.real(), 0.0);
    coeffs[n] = v;
    coeffs[neg] = std::conj(v);
  }
  return CoefficientField(omega, std::move(coeffs), true);
}

inline qpwave::Trajectory random_trajectory(std::mt19937_64& rng,
                                            const FrequencyVector& omega,
                                            const qpwave::TimeGrid& grid,
                                            int radius,
                                            double amplitude = 0.5) {
  qpwave::Trajectory traj;
  traj.grid = grid;
  traj.states.reserve(grid.nodes.size());
  for (size_t j = 0; j < grid.nodes.size(); ++j) {
    traj.states.push_back(random_field(rng, omega, radius, amplitude));
  }
  return traj;
}

// ---- naive references ------------------------------------------------------

// Schoolbook convolution, no pruning, accumulation keyed by plain map.
inline CoefficientField convolve_reference(const CoefficientField& u,
                                           const CoefficientField& v) {
  CoeffMap out;
  for (const auto& [q, uq] : u.coeffs()) {
    for (const auto& [r, vr] : v.coeffs()) {
      MultiIndex n(q.size());
      for (size_t i = 0; i < q.size(); ++i) n[i] = q[i] + r[i];
      out[n] += uq * vr;
    }
  }
  return CoefficientField(u.omega(), std::move(out));
}

inline CoefficientField power_reference(const CoefficientField& u, int m) {
  CoefficientField acc = u;
  for (int i = 1; i < m; ++i) acc = convolve_reference(acc, u);
  return acc;
}

inline double norm_reference(const CoefficientField& u, double k) {
  double s = 0.0;
  for (const auto& [n, c] : u.coeffs()) {
    s += std::abs(c) * std::exp(k * static_cast<double>(qpwave::index_norm(n)));
  }
  return s;
}

inline double rel_diff(double a, double b) {
  double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

inline double max_field_diff(const CoefficientField& a,
                             const CoefficientField& b) {
  return qpwave::max_coeff_diff(a, b);
}

}  // namespace qptest
