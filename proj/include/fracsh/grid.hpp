#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fracsh/errors.hpp"

namespace fracsh {

/// Uniform periodic grid on [-L/2, L/2) with L = 2*pi*K.
///
/// Wavenumbers are xi_j = j / K for j in [-N/2, N/2); coefficient arrays are
/// stored in FFT order, so storage index i holds mode j = i for i < N/2 and
/// j = i - N otherwise. Because L is an integer multiple of 2*pi, the plane
/// waves e^{ikx} for integer k sit exactly on the lattice (j = kK).
class Grid1D {
 public:
  Grid1D(int half_periods, int points) : K_(half_periods), N_(points) {
    if (K_ <= 0) throw ValidationError("Grid1D: K must be positive");
    if (N_ <= 0 || N_ % 2 != 0) throw ValidationError("Grid1D: N must be positive and even");
    if (N_ < 16 * K_) {
      throw ValidationError("Grid1D: need N >= 16K (got N=" + std::to_string(N_) +
                            ", K=" + std::to_string(K_) + ")");
    }
  }

  int K() const noexcept { return K_; }
  int N() const noexcept { return N_; }
  double length() const noexcept { return 2.0 * std::numbers::pi * K_; }
  double dx() const noexcept { return length() / N_; }
  double dxi() const noexcept { return 1.0 / K_; }
  double x(int n) const noexcept { return -0.5 * length() + n * dx(); }

  int mode(int index) const noexcept { return index < N_ / 2 ? index : index - N_; }
  int index(int mode) const noexcept { return mode >= 0 ? mode : mode + N_; }
  bool has_mode(int mode) const noexcept { return mode >= -N_ / 2 && mode < N_ / 2; }
  double xi(int index) const noexcept { return mode(index) / static_cast<double>(K_); }

  std::vector<double> points() const {
    std::vector<double> out(N_);
    for (int n = 0; n < N_; ++n) out[n] = x(n);
    return out;
  }
  std::vector<double> wavenumbers() const {
    std::vector<double> out(N_);
    for (int i = 0; i < N_; ++i) out[i] = xi(i);
    return out;
  }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  int K_;
  int N_;
};

/// Half-period count K of the fast grid for a slow period L_X, i.e. the
/// integer K with eps * 2*pi*K == L_X. Throws if eps is not admissible.
inline int fast_half_periods(double slow_period, double eps) {
  if (!(eps > 0.0) || !(eps <= 1.0)) throw ValidationError("eps must lie in (0, 1]");
  const double k = slow_period / (2.0 * std::numbers::pi * eps);
  const double rounded = std::round(k);
  if (rounded < 1.0 || std::abs(k - rounded) > 1e-9 * k) {
    throw ValidationError("eps = " + std::to_string(eps) +
                          " is not admissible: L_X / (2 pi eps) is not an integer");
  }
  return static_cast<int>(rounded);
}

inline bool is_admissible(double slow_period, double eps) {
  try {
    fast_half_periods(slow_period, eps);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

/// Slow grid of period L_X, which must be an integer multiple of 2 pi.
inline Grid1D slow_grid_for(double slow_period, int points) {
  const double k = slow_period / (2.0 * std::numbers::pi);
  const double rounded = std::round(k);
  if (rounded < 1.0 || std::abs(k - rounded) > 1e-9 * k) {
    throw ValidationError("slow period must be a positive integer multiple of 2 pi");
  }
  return Grid1D(static_cast<int>(rounded), points);
}

/// Fast grid commensurate with a slow grid of period L_X: K = L_X/(2 pi eps),
/// N = points_per_half_period * K.
inline Grid1D fast_grid_for(double slow_period, double eps, int points_per_half_period = 16) {
  const int K = fast_half_periods(slow_period, eps);
  return Grid1D(K, points_per_half_period * K);
}

}  // namespace fracsh
