#pragma once

// Complex fields on a periodic grid carried in both physical and Fourier
// representation, plus the discrete surrogates of the H^theta, L^1-of-Fourier
// and C^k_b norms.
//
// Fourier coefficients use the continuum-consistent normalization
//   u_hat_j = dx / sqrt(2 pi) * sum_n u(x_n) e^{-i xi_j x_n},
// so u_hat_j approximates the Fourier transform at xi_j and Parseval reads
//   sum_j |u_hat_j|^2 dxi = dx * sum_n |u(x_n)|^2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <numbers>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "fracsh/errors.hpp"
#include "fracsh/fft.hpp"
#include "fracsh/grid.hpp"

namespace fracsh {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kSqrt2Pi = 2.5066282746310002;

/// Sobolev index theta >= 0 of the Bessel potential space H^theta.
class SobolevIndex {
 public:
  explicit SobolevIndex(double theta) : theta_(theta) {
    if (!std::isfinite(theta) || theta < 0.0) throw ValidationError("Sobolev index must be finite and >= 0");
  }
  double value() const noexcept { return theta_; }

 private:
  double theta_;
};

namespace detail {
inline double alternating_sign(int mode) { return (mode % 2 == 0) ? 1.0 : -1.0; }
}  // namespace detail

/// Physical samples -> continuum-normalized coefficients (FFT order).
inline ComplexVector forward_transform(const Grid1D& grid, std::span<const Complex> values) {
  if (static_cast<int>(values.size()) != grid.N()) throw ValidationError("forward_transform: size mismatch");
  ComplexVector out(values.begin(), values.end());
  fft::transform(out, fft::Direction::forward);
  const double scale = grid.dx() / kSqrt2Pi;
  for (int i = 0; i < grid.N(); ++i) out[i] *= scale * detail::alternating_sign(grid.mode(i));
  return out;
}

/// Continuum-normalized coefficients -> physical samples.
inline ComplexVector inverse_transform(const Grid1D& grid, std::span<const Complex> coeffs) {
  if (static_cast<int>(coeffs.size()) != grid.N()) throw ValidationError("inverse_transform: size mismatch");
  ComplexVector out(coeffs.size());
  const double scale = kSqrt2Pi / grid.dx() / grid.N();
  for (int i = 0; i < grid.N(); ++i) out[i] = coeffs[i] * (scale * detail::alternating_sign(grid.mode(i)));
  fft::transform(out, fft::Direction::backward);
  return out;
}

/// Immutable field value; both representations are always in sync.
class SpectralField {
 public:
  explicit SpectralField(Grid1D grid)
      : grid_(grid), values_(grid.N(), Complex{}), coeffs_(grid.N(), Complex{}) {}

  static SpectralField from_values(Grid1D grid, ComplexVector values) {
    SpectralField f(grid, std::move(values), {});
    f.coeffs_ = forward_transform(f.grid_, f.values_);
    return f;
  }

  static SpectralField from_coefficients(Grid1D grid, ComplexVector coeffs) {
    SpectralField f(grid, {}, std::move(coeffs));
    f.values_ = inverse_transform(f.grid_, f.coeffs_);
    return f;
  }

  /// Samples fn(x) at the grid points; fn may return double or complex.
  template <class Fn>
  static SpectralField sample(Grid1D grid, Fn&& fn) {
    ComplexVector values(grid.N());
    for (int n = 0; n < grid.N(); ++n) values[n] = Complex(fn(grid.x(n)));
    return from_values(grid, std::move(values));
  }

  const Grid1D& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }
  std::span<const Complex> coefficients() const noexcept { return coeffs_; }
  Complex coefficient(int mode) const { return coeffs_.at(grid_.index(mode)); }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
  }
  double max_imag() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v.imag()));
    return m;
  }

  SpectralField conj() const {
    ComplexVector v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), [](Complex z) { return std::conj(z); });
    return from_values(grid_, std::move(v));
  }

  /// Drops the imaginary part of the physical values.
  SpectralField real_part() const {
    ComplexVector v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), [](Complex z) { return Complex(z.real(), 0.0); });
    return from_values(grid_, std::move(v));
  }

  friend SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    return combine(a, b, 1.0, 1.0);
  }
  friend SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    return combine(a, b, 1.0, -1.0);
  }
  friend SpectralField operator*(Complex s, const SpectralField& a) {
    SpectralField out = a;
    for (auto& v : out.values_) v *= s;
    for (auto& c : out.coeffs_) c *= s;
    return out;
  }
  friend SpectralField operator*(const SpectralField& a, Complex s) { return s * a; }

 private:
  SpectralField(Grid1D grid, ComplexVector values, ComplexVector coeffs)
      : grid_(grid), values_(std::move(values)), coeffs_(std::move(coeffs)) {}

  static SpectralField combine(const SpectralField& a, const SpectralField& b, double sa, double sb) {
    if (!(a.grid_ == b.grid_)) throw ValidationError("SpectralField: grid mismatch");
    SpectralField out = a;
    for (size_t i = 0; i < out.values_.size(); ++i) {
      out.values_[i] = sa * a.values_[i] + sb * b.values_[i];
      out.coeffs_[i] = sa * a.coeffs_[i] + sb * b.coeffs_[i];
    }
    return out;
  }

  Grid1D grid_;
  ComplexVector values_;
  ComplexVector coeffs_;
};

/// Multiplies every coefficient by symbol(xi); symbol may return double or complex.
template <class Symbol>
SpectralField apply_symbol(const SpectralField& f, Symbol&& symbol) {
  const Grid1D& g = f.grid();
  ComplexVector c(f.coefficients().begin(), f.coefficients().end());
  for (int i = 0; i < g.N(); ++i) c[i] *= Complex(symbol(g.xi(i)));
  return SpectralField::from_coefficients(g, std::move(c));
}

/// Spectral derivative of the given order (Nyquist mode dropped for odd orders).
inline SpectralField derivative(const SpectralField& f, int order) {
  if (order < 0) throw ValidationError("derivative: negative order");
  const Grid1D& g = f.grid();
  ComplexVector c(f.coefficients().begin(), f.coefficients().end());
  for (int i = 0; i < g.N(); ++i) {
    if (order % 2 == 1 && g.mode(i) == -g.N() / 2) {
      c[i] = 0.0;
      continue;
    }
    c[i] *= std::pow(Complex(0.0, g.xi(i)), order);
  }
  return SpectralField::from_coefficients(g, std::move(c));
}

/// ( sum_j (1 + xi_j^2)^theta |u_hat_j|^2 dxi )^{1/2}
inline double h_norm(const SpectralField& f, SobolevIndex theta) {
  const Grid1D& g = f.grid();
  const auto c = f.coefficients();
  double sum = 0.0;
  for (int i = 0; i < g.N(); ++i) {
    const double xi = g.xi(i);
    sum += std::pow(1.0 + xi * xi, theta.value()) * std::norm(c[i]);
  }
  return std::sqrt(sum * g.dxi());
}

inline double h_norm(const SpectralField& f, double theta) { return h_norm(f, SobolevIndex(theta)); }

/// sum_j |u_hat_j| dxi
inline double l1_fourier_norm(const SpectralField& f) {
  double sum = 0.0;
  for (const auto& c : f.coefficients()) sum += std::abs(c);
  return sum * f.grid().dxi();
}

/// dx * sum_n |u(x_n)|^2, the physical-space side of Parseval.
inline double l2_physical_squared(const SpectralField& f) {
  double sum = 0.0;
  for (const auto& v : f.values()) sum += std::norm(v);
  return sum * f.grid().dx();
}

/// Trigonometric interpolant (dxi / sqrt(2 pi)) sum_j u_hat_j e^{i xi_j x} at an arbitrary x.
inline Complex interpolate(const SpectralField& f, double x) {
  const Grid1D& g = f.grid();
  const auto c = f.coefficients();
  Complex sum{};
  for (int i = 0; i < g.N(); ++i) {
    if (c[i] != Complex{}) sum += c[i] * std::polar(1.0, g.xi(i) * x);
  }
  return sum * (g.dxi() / kSqrt2Pi);
}

/// sup_x |u(x)| of the trigonometric interpolant: grid maxima within 10% of
/// the largest are refined by Brent's method on the two adjacent cells.
inline double sup_norm(const SpectralField& f) {
  const Grid1D& g = f.grid();
  const auto v = f.values();
  const double grid_max = f.max_abs();
  if (grid_max == 0.0) return 0.0;
  const int n_pts = g.N();
  double best = grid_max;
  for (int n = 0; n < n_pts; ++n) {
    const double here = std::abs(v[n]);
    if (here < 0.9 * grid_max) continue;
    if (here < std::abs(v[(n + 1) % n_pts]) || here < std::abs(v[(n + n_pts - 1) % n_pts])) continue;
    auto neg = [&](double x) { return -std::abs(interpolate(f, x)); };
    const auto r = boost::math::tools::brent_find_minima(neg, g.x(n) - g.dx(), g.x(n) + g.dx(),
                                                         std::numeric_limits<double>::digits / 2);
    best = std::max(best, -r.second);
  }
  return best;
}

/// Integer-order C^k_b norm: sum_{m <= k} sup_x |d^m u / dx^m|.
inline double cb_norm(const SpectralField& f, int k) {
  if (k < 0 || k > 3) throw ValidationError("cb_norm: derivative order must be in {0,1,2,3}");
  double total = sup_norm(f);
  for (int m = 1; m <= k; ++m) total += sup_norm(derivative(f, m));
  return total;
}

// ---------------------------------------------------------------------------
// Pseudospectral products with zero padding by a factor of two. Padding to 2N
// makes quadratic and cubic products alias-free on the retained modes.

namespace detail {

inline ComplexVector padded_values(const Grid1D& grid, const Grid1D& padded, std::span<const Complex> coeffs) {
  ComplexVector pc(padded.N(), Complex{});
  const int nyquist = -grid.N() / 2;
  for (int i = 0; i < grid.N(); ++i) {
    const int j = grid.mode(i);
    if (j == nyquist) {
      pc[padded.index(j)] += 0.5 * coeffs[i];
      pc[padded.index(-j)] += 0.5 * coeffs[i];
    } else {
      pc[padded.index(j)] = coeffs[i];
    }
  }
  return inverse_transform(padded, pc);
}

inline ComplexVector truncate_padded(const Grid1D& grid, const Grid1D& padded, std::span<const Complex> values) {
  const ComplexVector pc = forward_transform(padded, values);
  ComplexVector out(grid.N(), Complex{});
  for (int i = 0; i < grid.N(); ++i) {
    const int j = grid.mode(i);
    if (j != -grid.N() / 2) out[i] = pc[padded.index(j)];
  }
  return out;
}

}  // namespace detail

/// Coefficients of op(u) computed on the 2x padded grid and truncated back.
template <class Op>
ComplexVector dealiased_apply(const Grid1D& grid, std::span<const Complex> coeffs, Op&& op) {
  const Grid1D padded(grid.K(), 2 * grid.N());
  ComplexVector v = detail::padded_values(grid, padded, coeffs);
  for (auto& z : v) z = op(z);
  return detail::truncate_padded(grid, padded, v);
}

/// Coefficients of op(u, w) for two coefficient arrays on the same grid.
template <class Op>
ComplexVector dealiased_apply(const Grid1D& grid, std::span<const Complex> a, std::span<const Complex> b, Op&& op) {
  const Grid1D padded(grid.K(), 2 * grid.N());
  ComplexVector va = detail::padded_values(grid, padded, a);
  const ComplexVector vb = detail::padded_values(grid, padded, b);
  for (size_t n = 0; n < va.size(); ++n) va[n] = op(va[n], vb[n]);
  return detail::truncate_padded(grid, padded, va);
}

template <class Op>
SpectralField dealiased_map(const SpectralField& f, Op&& op) {
  return SpectralField::from_coefficients(f.grid(), dealiased_apply(f.grid(), f.coefficients(), std::forward<Op>(op)));
}

template <class Op>
SpectralField dealiased_map(const SpectralField& f, const SpectralField& g, Op&& op) {
  if (!(f.grid() == g.grid())) throw ValidationError("dealiased_map: grid mismatch");
  return SpectralField::from_coefficients(
      f.grid(), dealiased_apply(f.grid(), f.coefficients(), g.coefficients(), std::forward<Op>(op)));
}

inline SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
  return dealiased_map(f, g, [](Complex a, Complex b) { return a * b; });
}

/// Plain pointwise product of the physical samples (aliasing is the caller's concern).
inline SpectralField pointwise_product(const SpectralField& f, const SpectralField& g) {
  if (!(f.grid() == g.grid())) throw ValidationError("pointwise_product: grid mismatch");
  ComplexVector v(f.values().size());
  for (size_t n = 0; n < v.size(); ++n) v[n] = f.values()[n] * g.values()[n];
  return SpectralField::from_values(f.grid(), std::move(v));
}

// ---------------------------------------------------------------------------

/// x -> f(eps x) e^{ikx} on the fast grid, f given on the slow grid.
///
/// With commensurate grids (eps * L_fast == L_slow) the slow mode m lands
/// exactly on fast mode m + k K_fast, with coefficient scaled by 1/eps, so the
/// result is the exact Fourier interpolant. The slow Nyquist mode is dropped.
/// If keep_slow is given, only slow modes with keep_slow(eps * Xi) == true are
/// carried over; this realizes E_0 applied to f(eps .) before modulation.
template <class Keep>
SpectralField scale_embed_filtered(const SpectralField& slow, double eps, int k, const Grid1D& fast, Keep&& keep_slow) {
  const Grid1D& sg = slow.grid();
  if (!(eps > 0.0) || std::abs(eps * fast.length() - sg.length()) > 1e-9 * sg.length()) {
    throw ValidationError("scale_embed: eps is incommensurate with the slow and fast grids");
  }
  if (std::abs(k) > 4) throw ValidationError("scale_embed: |k| must be <= 4");
  const auto sc = slow.coefficients();
  double largest = 0.0;
  for (const auto& c : sc) largest = std::max(largest, std::abs(c));
  ComplexVector fc(fast.N(), Complex{});
  for (int i = 0; i < sg.N(); ++i) {
    const int m = sg.mode(i);
    if (m == -sg.N() / 2) continue;
    if (!keep_slow(eps * sg.xi(i))) continue;
    const int j = m + k * fast.K();
    if (!fast.has_mode(j)) {
      if (std::abs(sc[i]) > 1e-12 * largest) {
        throw ValidationError("scale_embed: fast grid cannot represent the embedded field");
      }
      continue;
    }
    fc[fast.index(j)] = sc[i] / eps;
  }
  return SpectralField::from_coefficients(fast, std::move(fc));
}

inline SpectralField scale_embed(const SpectralField& slow, double eps, int k, const Grid1D& fast) {
  return scale_embed_filtered(slow, eps, k, fast, [](double) { return true; });
}

}  // namespace fracsh
