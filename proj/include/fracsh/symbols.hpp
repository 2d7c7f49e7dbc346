#pragma once

// Fourier-multiplier calculus for the fractional Swift-Hohenberg operator:
// fractional Laplacian (spectral route and singular-integral oracle), the
// linear symbol and its semigroup, the indicator mode filters, and the Taylor
// remainder multipliers r^{+-}, m^{1,+-}, m^{2,+-} around the critical modes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "fracsh/errors.hpp"
#include "fracsh/grid.hpp"
#include "fracsh/quadrature.hpp"
#include "fracsh/spectral_field.hpp"

namespace fracsh {

/// Exponent alpha of (-Delta)^{alpha/2}. The fractional range is (0, 2); the
/// classical value alpha = 2 is admitted as a regression anchor.
class FractionalPower {
 public:
  explicit FractionalPower(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw ValidationError("alpha must lie in (0, 2]");
  }
  double value() const noexcept { return alpha_; }
  bool classical() const noexcept { return alpha_ == 2.0; }

 private:
  double alpha_;
};

/// Widths of the critical bands B_delta(+-1) and the low-frequency ball B_r0(0).
class FilterConfig {
 public:
  FilterConfig() : FilterConfig(0.5, 0.125) {}
  FilterConfig(double delta, double r0) : delta_(delta), r0_(r0) {
    if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("filter: delta must lie in (0, 1)");
    if (!(r0 > 0.0)) throw ValidationError("filter: r0 must be positive");
    if (!(3.0 * r0 < delta)) throw ValidationError("filter: need 3 r0 < delta");
  }
  double delta() const noexcept { return delta_; }
  double r0() const noexcept { return r0_; }

 private:
  double delta_;
  double r0_;
};

enum class Filter { critical, stable, low, low_complement };

/// Open balls of radius delta around +-1.
inline double critical_symbol(double xi, const FilterConfig& cfg) {
  return (std::abs(xi - 1.0) < cfg.delta() || std::abs(xi + 1.0) < cfg.delta()) ? 1.0 : 0.0;
}

/// Closed ball of radius r0 around 0.
inline double low_symbol(double xi, const FilterConfig& cfg) { return std::abs(xi) <= cfg.r0() ? 1.0 : 0.0; }

inline double filter_symbol(double xi, Filter which, const FilterConfig& cfg) {
  switch (which) {
    case Filter::critical:
      return critical_symbol(xi, cfg);
    case Filter::stable:
      return 1.0 - critical_symbol(xi, cfg);
    case Filter::low:
      return low_symbol(xi, cfg);
    case Filter::low_complement:
      return 1.0 - low_symbol(xi, cfg);
  }
  return 0.0;
}

inline SpectralField mode_filter(const SpectralField& f, Filter which, const FilterConfig& cfg) {
  return apply_symbol(f, [&](double xi) { return filter_symbol(xi, which, cfg); });
}

/// Keeps the half-open frequency band [center - half_width, center + half_width).
inline SpectralField band_pass(const SpectralField& f, double center, double half_width) {
  return apply_symbol(f, [&](double xi) { return (xi >= center - half_width && xi < center + half_width) ? 1.0 : 0.0; });
}

struct SemigroupBounds {
  double sigma_s;  // decay rate on the stable modes
  double sigma_c;  // growth rate on the critical modes, in units of eps^2
  double C_Lambda;
};

inline SemigroupBounds semigroup_bounds(FractionalPower alpha, const FilterConfig& cfg) {
  const double a = alpha.value();
  const double d = cfg.delta();
  const double m = std::min({1.0, 1.0 - std::pow(std::abs(1.0 - d), a), std::pow(std::abs(1.0 + d), a) - 1.0});
  return {0.5 * m * m, 1.0, 1.0};
}

// ---------------------------------------------------------------------------
// Fractional Laplacian

/// (-Delta)^nu f via the multiplier |xi|^{2 nu}.
inline SpectralField frac_laplacian(const SpectralField& f, double nu) {
  if (!(nu > 0.0 && nu <= 2.0)) throw ValidationError("frac_laplacian: nu must lie in (0, 2]");
  return apply_symbol(f, [nu](double xi) { return std::pow(std::abs(xi), 2.0 * nu); });
}

/// Normalization of the singular integral such that e^{i xi x} has eigenvalue |xi|^alpha.
inline double singular_integral_constant(double alpha) {
  return std::pow(2.0, alpha) * std::tgamma(0.5 * (1.0 + alpha)) /
         (std::sqrt(std::numbers::pi) * std::abs(std::tgamma(-0.5 * alpha)));
}

struct SingularIntegralOptions {
  double excision = 5e-2;               // |x - y| below this is handled by a Taylor expansion
  double cutoff = 200.0 * std::numbers::pi;  // integrate |x - y| up to here, tail of u(x) analytic
  double panel = std::numbers::pi;      // panel length for the outer integral
  QuadratureTolerance tol{1e-12, 1e-10, 12};
};

/// c_alpha P.V. int (u(x) - u(y)) / |x - y|^{1+alpha} dy by direct quadrature.
///
/// The integral is folded to s = |x - y| > 0. On [0, excision) the symmetric
/// difference is replaced by -u''(x) s^2 - u(x) s^4 / 12 (central differences); the
/// range beyond the cutoff contributes only the u(x) part, integrated exactly.
/// Independent of the spectral route; used as an oracle for frac_laplacian.
inline double frac_laplacian_singular_oracle(const std::function<double(double)>& u, double x, FractionalPower alpha,
                                              const SingularIntegralOptions& opt = {}) {
  const double a = alpha.value();
  if (a >= 2.0) throw ValidationError("singular integral oracle needs alpha < 2");
  const double ux = u(x);
  const double h = 1e-3;
  const double u2 = (u(x + h) - 2.0 * ux + u(x - h)) / (h * h);
  const double k = 2e-2;
  const double u4 = (u(x + 2.0 * k) - 4.0 * u(x + k) + 6.0 * ux - 4.0 * u(x - k) + u(x - 2.0 * k)) / std::pow(k, 4);
  const double eta = opt.excision;
  double total = -u2 * std::pow(eta, 2.0 - a) / (2.0 - a) - u4 * std::pow(eta, 4.0 - a) / (12.0 * (4.0 - a));

  auto integrand = [&](double s) { return (2.0 * ux - u(x + s) - u(x - s)) / std::pow(s, 1.0 + a); };
  const int panels = std::max(1, static_cast<int>(std::ceil((opt.cutoff - eta) / opt.panel - 1e-9)));
  const double width = (opt.cutoff - eta) / panels;
  for (int k = 0; k < panels; ++k) {
    const double lo = eta + k * width;
    const double hi = k + 1 == panels ? opt.cutoff : lo + width;
    total += integrate(integrand, lo, hi, opt.tol);
  }
  total += 2.0 * ux * std::pow(opt.cutoff, -a) / a;
  return singular_integral_constant(a) * total;
}

// ---------------------------------------------------------------------------
// Linear symbol and semigroup

/// -(1 - |xi|^alpha)^2 + eps^2
inline double sh_symbol_eval(double xi, FractionalPower alpha, double eps) {
  const double w = 1.0 - std::pow(std::abs(xi), alpha.value());
  return -w * w + eps * eps;
}

inline SpectralField semigroup_apply(const SpectralField& f, double t, FractionalPower alpha, double eps) {
  if (!(t >= 0.0)) throw ValidationError("semigroup_apply: t must be >= 0");
  return apply_symbol(f, [&](double xi) { return std::exp(t * sh_symbol_eval(xi, alpha, eps)); });
}

/// Sup over the grid of |e^{t lambda} m_c| and |e^{t lambda} m_s|.
inline std::pair<double, double> semigroup_bound_check(const Grid1D& grid, double t, FractionalPower alpha, double eps,
                                                       const FilterConfig& cfg) {
  if (!(t >= 0.0)) throw ValidationError("semigroup_bound_check: t must be >= 0");
  const SemigroupBounds b = semigroup_bounds(alpha, cfg);
  if (eps * eps > b.sigma_s) throw ValidationError("semigroup_bound_check: eps^2 exceeds sigma_s");
  double crit = 0.0;
  double stab = 0.0;
  for (int i = 0; i < grid.N(); ++i) {
    const double xi = grid.xi(i);
    const double e = std::exp(t * sh_symbol_eval(xi, alpha, eps));
    const double mc = critical_symbol(xi, cfg);
    crit = std::max(crit, e * mc);
    stab = std::max(stab, e * (1.0 - mc));
  }
  return {crit, stab};
}

// ---------------------------------------------------------------------------
// Taylor remainder multipliers

enum class RemainderKind { r_plus, r_minus, m1_plus, m1_minus, m2_plus, m2_minus };

inline bool is_plus(RemainderKind k) {
  return k == RemainderKind::r_plus || k == RemainderKind::m1_plus || k == RemainderKind::m2_plus;
}

/// 3 p' p'' - (1 - p) p''' for p(r) = |r|^alpha, r != 0.
inline double remainder_kernel(double r, double alpha) {
  const double s = std::abs(r);
  const double sign = r < 0.0 ? -1.0 : 1.0;
  const double p = std::pow(s, alpha);
  const double d1 = sign * alpha * std::pow(s, alpha - 1.0);
  const double d2 = alpha * (alpha - 1.0) * std::pow(s, alpha - 2.0);
  const double d3 = sign * alpha * (alpha - 1.0) * (alpha - 2.0) * std::pow(s, alpha - 3.0);
  return 3.0 * d1 * d2 - (1.0 - p) * d3;
}

inline double remainder_multiplier(double xi, FractionalPower alpha, RemainderKind kind,
                                   QuadratureTolerance tol = {}) {
  const double s = is_plus(kind) ? 1.0 : -1.0;
  if (!(s * xi > 0.0)) throw ValidationError("remainder_multiplier: xi has the wrong sign for this branch");
  const double a = alpha.value();
  switch (kind) {
    case RemainderKind::r_plus:
    case RemainderKind::r_minus:
      return integrate([&](double r) { return remainder_kernel(r, a) * (xi - r) * (xi - r); }, s, xi, tol);
    case RemainderKind::m1_plus:
    case RemainderKind::m1_minus: {
      const double inner =
          integrate([&](double r) { return remainder_kernel(r, a) * (xi + 2.0 * s - 2.0 * r); }, s, 2.0 * s, tol);
      return inner * (xi - 2.0 * s);
    }
    case RemainderKind::m2_plus:
    case RemainderKind::m2_minus:
      return integrate([&](double r) { return remainder_kernel(r, a) * (xi - r) * (xi - r); }, 2.0 * s, xi, tol);
  }
  return 0.0;
}

/// Closed form of the remainder constant at xi = +-2.
inline double c_plus(FractionalPower alpha) {
  const double a = alpha.value();
  return std::pow(2.0, 2.0 * a) - std::pow(2.0, a + 1.0) + (1.0 - a * a);
}

/// The defining integral of c^{+} (sign = +1) or c^{-} (sign = -1).
inline double c_pm_quadrature(FractionalPower alpha, int sign, QuadratureTolerance tol = {}) {
  const double s = sign >= 0 ? 1.0 : -1.0;
  const double a = alpha.value();
  return integrate([&](double r) { return remainder_kernel(r, a) * (2.0 * s - r) * (2.0 * s - r); }, s, 2.0 * s, tol);
}

/// | -(1-|xi|^alpha)^2 + alpha^2 (xi -+ 1)^2 + r^{+-}(xi) |, branch chosen by the sign of xi.
inline double taylor_identity_defect(double xi, FractionalPower alpha) {
  if (xi == 0.0) throw ValidationError("taylor_identity_defect: xi must be nonzero");
  const double s = xi > 0.0 ? 1.0 : -1.0;
  const double a = alpha.value();
  const double w = 1.0 - std::pow(std::abs(xi), a);
  const double r = remainder_multiplier(xi, alpha, s > 0 ? RemainderKind::r_plus : RemainderKind::r_minus);
  return std::abs(-w * w + a * a * (xi - s) * (xi - s) + r);
}

/// | r^{+-}(xi) - c^{+-} - m^{1,+-}(xi) - m^{2,+-}(xi) |
inline double remainder_reconstruction_defect(double xi, FractionalPower alpha) {
  if (xi == 0.0) throw ValidationError("remainder_reconstruction_defect: xi must be nonzero");
  const bool plus = xi > 0.0;
  const double r = remainder_multiplier(xi, alpha, plus ? RemainderKind::r_plus : RemainderKind::r_minus);
  const double m1 = remainder_multiplier(xi, alpha, plus ? RemainderKind::m1_plus : RemainderKind::m1_minus);
  const double m2 = remainder_multiplier(xi, alpha, plus ? RemainderKind::m2_plus : RemainderKind::m2_minus);
  return std::abs(r - c_pm_quadrature(alpha, plus ? 1 : -1) - m1 - m2);
}

/// Multipliers tabulated on a grid. The remainder arrays use the + branch for
/// xi > 0 and the - branch for xi < 0; they are zero at xi = 0.
class SymbolTable {
 public:
  SymbolTable(const Grid1D& grid, FractionalPower alpha, const FilterConfig& cfg) : grid_(grid), alpha_(alpha) {
    const int n = grid.N();
    sh_symbol_.resize(n);
    m_c_.resize(n);
    m_s_.resize(n);
    m_0_.resize(n);
    r_.assign(n, 0.0);
    m1_.assign(n, 0.0);
    m2_.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double xi = grid.xi(i);
      sh_symbol_[i] = sh_symbol_eval(xi, alpha, 0.0);
      m_c_[i] = critical_symbol(xi, cfg);
      m_s_[i] = 1.0 - m_c_[i];
      m_0_[i] = low_symbol(xi, cfg);
      if (xi == 0.0) continue;
      const bool plus = xi > 0.0;
      r_[i] = remainder_multiplier(xi, alpha, plus ? RemainderKind::r_plus : RemainderKind::r_minus);
      m1_[i] = remainder_multiplier(xi, alpha, plus ? RemainderKind::m1_plus : RemainderKind::m1_minus);
      m2_[i] = remainder_multiplier(xi, alpha, plus ? RemainderKind::m2_plus : RemainderKind::m2_minus);
    }
  }

  const Grid1D& grid() const noexcept { return grid_; }
  FractionalPower alpha() const noexcept { return alpha_; }
  const std::vector<double>& sh_symbol() const noexcept { return sh_symbol_; }
  const std::vector<double>& m_c() const noexcept { return m_c_; }
  const std::vector<double>& m_s() const noexcept { return m_s_; }
  const std::vector<double>& m_0() const noexcept { return m_0_; }
  const std::vector<double>& r_pm() const noexcept { return r_; }
  const std::vector<double>& m1_pm() const noexcept { return m1_; }
  const std::vector<double>& m2_pm() const noexcept { return m2_; }

  /// Multiplies f's coefficients by a tabulated array.
  SpectralField apply(const SpectralField& f, const std::vector<double>& table) const {
    if (!(f.grid() == grid_)) throw ValidationError("SymbolTable::apply: grid mismatch");
    ComplexVector c(f.coefficients().begin(), f.coefficients().end());
    for (size_t i = 0; i < c.size(); ++i) c[i] *= table[i];
    return SpectralField::from_coefficients(grid_, std::move(c));
  }

 private:
  Grid1D grid_;
  FractionalPower alpha_;
  std::vector<double> sh_symbol_, m_c_, m_s_, m_0_, r_, m1_, m2_;
};

}  // namespace fracsh
