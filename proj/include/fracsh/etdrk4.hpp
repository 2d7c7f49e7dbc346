#pragma once

// Fourth-order exponential time differencing Runge-Kutta (Cox-Matthews, with
// the Kassam-Trefethen contour evaluation of the phi-functions) for
// v' = lambda v + N(v) with a diagonal real symbol lambda.

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "fracsh/errors.hpp"
#include "fracsh/spectral_field.hpp"

namespace fracsh {

class Etdrk4 {
 public:
  Etdrk4(std::vector<double> lambda, double h) : lambda_(std::move(lambda)), h_(h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("ETDRK4: time step must be positive");
    const size_t n = lambda_.size();
    E_.resize(n);
    E2_.resize(n);
    Q_.resize(n);
    f1_.resize(n);
    f2_.resize(n);
    f3_.resize(n);
    for (size_t i = 0; i < n; ++i) {
      const double z = h * lambda_[i];
      E_[i] = std::exp(z);
      E2_[i] = std::exp(0.5 * z);
      const Coefficients c = std::abs(z) < kContourThreshold ? contour(z) : direct(z);
      Q_[i] = h * c.q;
      f1_[i] = h * c.f1;
      f2_[i] = h * c.f2;
      f3_[i] = h * c.f3;
    }
  }

  double dt() const noexcept { return h_; }
  const std::vector<double>& lambda() const noexcept { return lambda_; }

  /// One step; nonlinear(v) maps coefficients to the coefficients of N(v).
  template <class Nonlinear>
  ComplexVector step(const ComplexVector& v, Nonlinear&& nonlinear) const {
    const size_t n = v.size();
    if (n != lambda_.size()) throw ValidationError("ETDRK4: state size mismatch");
    const ComplexVector Nv = nonlinear(v);
    ComplexVector a(n);
    for (size_t i = 0; i < n; ++i) a[i] = E2_[i] * v[i] + Q_[i] * Nv[i];
    const ComplexVector Na = nonlinear(a);
    ComplexVector b(n);
    for (size_t i = 0; i < n; ++i) b[i] = E2_[i] * v[i] + Q_[i] * Na[i];
    const ComplexVector Nb = nonlinear(b);
    ComplexVector c(n);
    for (size_t i = 0; i < n; ++i) c[i] = E2_[i] * a[i] + Q_[i] * (2.0 * Nb[i] - Nv[i]);
    const ComplexVector Nc = nonlinear(c);
    ComplexVector out(n);
    for (size_t i = 0; i < n; ++i) {
      out[i] = E_[i] * v[i] + f1_[i] * Nv[i] + 2.0 * f2_[i] * (Na[i] + Nb[i]) + f3_[i] * Nc[i];
    }
    return out;
  }

  static constexpr double kContourThreshold = 0.5;
  static constexpr int kContourPoints = 32;

 private:
  struct Coefficients {
    double q, f1, f2, f3;
  };

  static Coefficients direct(double z) {
    const double ez = std::exp(z);
    const double z3 = z * z * z;
    return {(std::exp(0.5 * z) - 1.0) / z, (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3,
            (2.0 + z + ez * (z - 2.0)) / z3, (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3};
  }

  // Cauchy-integral mean over a unit circle around z; free of cancellation at z -> 0.
  static Coefficients contour(double z) {
    std::complex<double> q{}, f1{}, f2{}, f3{};
    for (int k = 0; k < kContourPoints; ++k) {
      const double angle = 2.0 * std::numbers::pi * (k + 0.5) / kContourPoints;
      const std::complex<double> w = z + std::polar(1.0, angle);
      const std::complex<double> ew = std::exp(w);
      const std::complex<double> w3 = w * w * w;
      q += (std::exp(0.5 * w) - 1.0) / w;
      f1 += (-4.0 - w + ew * (4.0 - 3.0 * w + w * w)) / w3;
      f2 += (2.0 + w + ew * (w - 2.0)) / w3;
      f3 += (-4.0 - 3.0 * w - w * w + ew * (4.0 - w)) / w3;
    }
    const double m = kContourPoints;
    return {q.real() / m, f1.real() / m, f2.real() / m, f3.real() / m};
  }

  std::vector<double> lambda_;
  double h_;
  std::vector<double> E_, E2_, Q_, f1_, f2_, f3_;
};

}  // namespace fracsh
