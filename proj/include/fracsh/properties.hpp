#pragma once

// Randomized checks of the norm, scaling and multiplier inequalities on
// band-limited fields. Every check reports the worst measured quantity next
// to the bound it is compared with.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fracsh/gl.hpp"
#include "fracsh/quadrature.hpp"
#include "fracsh/residuum.hpp"
#include "fracsh/spectral_field.hpp"
#include "fracsh/symbols.hpp"

namespace fracsh {

struct PropertyResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;  // worst case of the tested quantity
  double bound = 0.0;     // what it was compared against
  std::string detail;
};

/// Random field with coefficients supported on |xi| <= bandwidth, Gaussian
/// envelope of width bandwidth / 2. Real-valued unless complex_valued is set.
inline SpectralField random_bandlimited(const Grid1D& grid, std::mt19937_64& rng, double bandwidth,
                                        bool complex_valued = false) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexVector c(grid.N(), Complex{});
  const double w = 0.5 * bandwidth;
  for (int i = 0; i < grid.N(); ++i) {
    const int j = grid.mode(i);
    const double xi = grid.xi(i);
    if (std::abs(xi) > bandwidth || j == -grid.N() / 2) continue;
    const double env = std::exp(-0.5 * xi * xi / (w * w));
    if (complex_valued) {
      c[i] = env * Complex(u(rng), u(rng));
    } else if (j > 0) {
      c[i] = env * Complex(u(rng), u(rng));
      c[grid.index(-j)] = std::conj(c[i]);
    } else if (j == 0) {
      c[i] = env * u(rng);
    }
  }
  return SpectralField::from_coefficients(grid, std::move(c));
}

struct PropertySuiteOptions {
  std::uint64_t seed = 20240531;
  int trials = 4;
  FilterConfig filter{};
  double slow_period = 16.0 * std::numbers::pi;
  int slow_points = 256;
  std::vector<double> eps_list{0.2, 0.1, 0.05};
  bool zero_fields = false;  // replace every random field by 0
};

namespace detail {

struct Worst {
  double ratio = 0.0;  // measured / bound, maximized
  double measured = 0.0;
  double bound = 0.0;
  bool ok = true;
  void update(double m, double b, bool pass) {
    ok = ok && pass;
    const double r = b > 0.0 ? m / b : (m > 0.0 ? INFINITY : 0.0);
    if (r >= ratio) ratio = r, measured = m, bound = b;
  }
  PropertyResult result(std::string name, std::string detail = {}) const {
    return {std::move(name), ok, measured, bound, std::move(detail)};
  }
};

inline constexpr double kSlack = 1.05;
inline constexpr double kAbsSlack = 1e-9;

}  // namespace detail

inline std::vector<PropertyResult> run_property_checks(const PropertySuiteOptions& opt = {}) {
  using detail::kAbsSlack;
  using detail::kSlack;
  std::mt19937_64 rng(opt.seed);
  const Grid1D slow = slow_grid_for(opt.slow_period, opt.slow_points);
  const Grid1D lab(8, 256);
  const FilterConfig& cfg = opt.filter;
  auto field = [&](const Grid1D& g, double bw, bool cplx = false) {
    SpectralField f = random_bandlimited(g, rng, bw, cplx);
    return opt.zero_fields ? SpectralField(g) : f;
  };
  std::vector<PropertyResult> out;

  {
    detail::Worst w;
    for (int t = 0; t < opt.trials; ++t) {
      const SpectralField f = field(lab, 3.0, true);
      const double h2 = std::pow(h_norm(f, 0.0), 2);
      const double diff = std::abs(h2 - l2_physical_squared(f));
      w.update(diff, 1e-10 * h2, diff <= 1e-10 * h2);
    }
    out.push_back(w.result("parseval"));
  }

  {
    detail::Worst w2, w3;
    for (double mu : {1.0, 1.5, 2.0}) {
      for (int t = 0; t < opt.trials; ++t) {
        const SpectralField f = field(lab, 2.0), g = field(lab, 2.0), h = field(lab, 2.0);
        const double lhs2 = h_norm(dealiased_product(f, g), mu);
        const double rhs2 = h_norm(f, mu) * l1_fourier_norm(g) + l1_fourier_norm(f) * h_norm(g, mu);
        w2.update(lhs2, rhs2, lhs2 <= rhs2 + kAbsSlack);
        const double lhs3 = h_norm(dealiased_product(dealiased_product(f, g), h), mu);
        const double rhs3 = h_norm(f, mu) * l1_fourier_norm(g) * l1_fourier_norm(h) +
                            l1_fourier_norm(f) * h_norm(g, mu) * l1_fourier_norm(h) +
                            l1_fourier_norm(f) * l1_fourier_norm(g) * h_norm(h, mu);
        w3.update(lhs3, rhs3, lhs3 <= rhs3 + kAbsSlack);
      }
    }
    out.push_back(w2.result("product_estimate", "mu in {1, 1.5, 2}"));
    out.push_back(w3.result("product_estimate_ternary", "mu in {1, 1.5, 2}"));
  }

  {
    detail::Worst wl1, wsob;
    for (double eps : opt.eps_list) {
      const Grid1D fast = fast_grid_for(opt.slow_period, eps);
      for (int k : {0, 1, 2}) {
        const SpectralField f = field(slow, 4.0, true);
        const SpectralField e = scale_embed(f, eps, k, fast);
        const double l1f = l1_fourier_norm(f);
        const double d = std::abs(l1_fourier_norm(e) - l1f);
        wl1.update(d, 1e-9 * std::max(1.0, l1f), d <= 1e-9 * std::max(1.0, l1f));
        for (double mu : {0.0, 1.0, 2.0}) {
          const double lhs = h_norm(e, mu);
          const double rhs = std::pow(1.0 + k + k * k, mu / 2.0) * std::pow(eps, -0.5) * h_norm(f, mu);
          wsob.update(lhs, rhs, lhs <= kSlack * rhs + kAbsSlack);
        }
      }
    }
    out.push_back(wl1.result("l1_scaling_invariance", "|L1(f(eps.)e^{ik.}) - L1(f)|"));
    out.push_back(wsob.result("scaled_sobolev", "(1+k+k^2)^{mu/2} eps^{-1/2} |f|_{H^mu}"));
  }

  {
    detail::Worst w;
    for (double mu : {1.0, 2.0}) {
      const double C =
          std::sqrt(integrate([mu](double s) { return 2.0 * std::pow(1.0 + s * s, -mu); }, 0.0, 1e4, {1e-12, 1e-12, 30}) +
                    2.0 * std::pow(1e4, 1.0 - 2.0 * mu) / (2.0 * mu - 1.0));
      for (int t = 0; t < opt.trials; ++t) {
        const SpectralField f = field(lab, 5.0, true);
        const double lhs = l1_fourier_norm(f);
        const double rhs = C * h_norm(f, mu);
        w.update(lhs, rhs, lhs <= kSlack * rhs + kAbsSlack);
      }
    }
    out.push_back(w.result("l1_vs_sobolev", "C_mu = (int (1+xi^2)^{-mu})^{1/2}"));
  }

  {
    // E_0^c on a sech profile, whose slow bandwidth exceeds r0 / eps for every eps.
    const SpectralField sech = opt.zero_fields ? SpectralField(slow)
                                               : SpectralField::sample(slow, [](double X) { return 1.0 / std::cosh(X); });
    detail::Worst wconst;
    bool slopes_ok = true;
    bool truncation_seen = opt.zero_fields;
    std::string detail_text;
    for (double mu : {1.0, 2.0}) {
      for (int k : {0, 1}) {
        std::vector<double> norms;
        for (double eps : opt.eps_list) {
          const Grid1D fast = fast_grid_for(opt.slow_period, eps);
          const SpectralField tail = scale_embed_filtered(sech, eps, k, fast, [&](double xi) { return std::abs(xi) > cfg.r0(); });
          const double lhs = h_norm(tail, mu);
          const double rhs = (1.0 + 1.0 / (cfg.r0() * cfg.r0())) * std::pow(1.0 + k + k * k, mu / 2.0) *
                             std::pow(eps, mu - 0.5) * h_norm(sech, mu);
          wconst.update(lhs, rhs, lhs <= kSlack * rhs + kAbsSlack);
          if (lhs > 0.0) truncation_seen = true;
          norms.push_back(lhs);
        }
        const auto slope = fit_loglog(opt.eps_list, norms);
        if (slope) {
          slopes_ok = slopes_ok && *slope >= mu - 0.6;
          detail_text += "mu=" + std::to_string(mu).substr(0, 3) + ",k=" + std::to_string(k) +
                         ": slope " + std::to_string(*slope) + "; ";
        }
      }
    }
    PropertyResult r = wconst.result("e0c_scaling", detail_text);
    r.passed = r.passed && slopes_ok && truncation_seen;
    out.push_back(r);
  }

  {
    detail::Worst w;
    for (double eps : opt.eps_list) {
      const Grid1D fast = fast_grid_for(opt.slow_period, eps);
      for (int s : {1, -1}) {
        const SpectralField f = field(slow, 3.0, true);
        const SpectralField e = scale_embed(f, eps, s, fast);
        const SpectralField lhs = apply_symbol(e, [s](double xi) { return (xi - s) * (xi - s); });
        const SpectralField rhs = Complex(-eps * eps) * scale_embed(derivative(f, 2), eps, s, fast);
        const double d = (lhs - rhs).max_abs();
        w.update(d, 1e-9, d <= 1e-9);
      }
    }
    out.push_back(w.result("critical_symbol_identity"));
  }

  {
    detail::Worst w;
    auto low = [&](double xi) { return std::abs(xi) <= cfg.r0(); };
    for (double eps : opt.eps_list) {
      const Grid1D fast = fast_grid_for(opt.slow_period, eps);
      for (double nu : {0.25, 0.5, 0.75}) {
        const SpectralField f = field(slow, 3.0, true);
        const SpectralField lhs = frac_laplacian(scale_embed_filtered(f, eps, 0, fast, low), nu);
        const SpectralField rhs =
            Complex(std::pow(eps, 2.0 * nu)) * scale_embed_filtered(frac_laplacian(f, nu), eps, 0, fast, low);
        const double d = (lhs - rhs).max_abs();
        w.update(d, 1e-10, d <= 1e-10);
      }
    }
    out.push_back(w.result("e0_fractional_laplacian_commutation"));
  }

  {
    double margin = INFINITY;
    std::string text;
    for (double a : {1.3, 1.5, 1.7}) {
      const FractionalPower alpha(a);
      auto slope_near = [&](RemainderKind kind, double base) {
        std::vector<double> d, v;
        for (double h : {0.4, 0.2, 0.1, 0.05}) {
          d.push_back(h);
          v.push_back(std::abs(remainder_multiplier(base + h, alpha, kind)));
        }
        return fit_loglog(d, v).value_or(0.0);
      };
      const double s_r = std::min(slope_near(RemainderKind::r_plus, 1.0), slope_near(RemainderKind::r_minus, -1.0));
      const double s_m1 = slope_near(RemainderKind::m1_plus, 2.0);
      const double s_m2 = slope_near(RemainderKind::m2_plus, 2.0);
      margin = std::min({margin, s_r - 2.9, s_m1 - 0.9, s_m2 - 2.9});
      text += "alpha " + std::to_string(a).substr(0, 3) + ": " + std::to_string(s_r) + ", " + std::to_string(s_m1) +
              ", " + std::to_string(s_m2) + "; ";
    }
    out.push_back({"multiplier_vanishing_orders", margin >= 0.0, margin, 0.0,
                   "slopes of |r|, |m1|, |m2| near their base points minus 2.9, 0.9, 2.9: " + text});
  }

  {
    detail::Worst wrec, wsym;
    for (double a : {1.0, 1.3, 1.7}) {
      const FractionalPower alpha(a);
      for (int i = 0; i < 9; ++i) {
        const double xi = 1.6 + 0.1 * i;
        const double d1 = remainder_reconstruction_defect(xi, alpha);
        const double d2 = remainder_reconstruction_defect(-xi, alpha);
        wrec.update(std::max(d1, d2), 1e-8, std::max(d1, d2) <= 1e-8);
      }
      const double d = std::abs(c_pm_quadrature(alpha, 1) - c_pm_quadrature(alpha, -1));
      wsym.update(d, 1e-10, d <= 1e-10);
    }
    out.push_back(wrec.result("remainder_reconstruction"));
    out.push_back(wsym.result("c_plus_equals_c_minus"));
  }

  {
    // Multiplier norms of E_0 f(eps .) e^{i.} (r^+) and e^{2i.} (m^{1,+}, m^{2,+}).
    const FractionalPower alpha(1.5);
    const SpectralField f = field(slow, 0.6);
    auto low = [&](double xi) { return std::abs(xi) <= cfg.r0(); };
    std::vector<double> nr, n1, n2;
    for (double eps : opt.eps_list) {
      const Grid1D fast = fast_grid_for(opt.slow_period, eps);
      auto norm_of = [&](int k, RemainderKind kind) {
        const SpectralField e = scale_embed_filtered(f, eps, k, fast, low);
        return h_norm(apply_symbol(e, [&](double xi) {
                        return std::abs(xi - k) <= cfg.r0() + 1e-12 ? remainder_multiplier(xi, alpha, kind) : 0.0;
                      }),
                      1.0);
      };
      nr.push_back(norm_of(1, RemainderKind::r_plus));
      n1.push_back(norm_of(2, RemainderKind::m1_plus));
      n2.push_back(norm_of(2, RemainderKind::m2_plus));
    }
    const auto sr = fit_loglog(opt.eps_list, nr), s1 = fit_loglog(opt.eps_list, n1), s2 = fit_loglog(opt.eps_list, n2);
    PropertyResult r{"multiplier_norm_scaling", true, 0.0, 0.0, ""};
    if (sr && s1 && s2) {
      r.passed = *sr >= 2.4 && *s1 >= 0.4 && *s2 >= 2.4;
      r.measured = std::min({*sr - 2.4, *s1 - 0.4, *s2 - 2.4});
      r.detail = "slopes r+ " + std::to_string(*sr) + ", m1+ " + std::to_string(*s1) + ", m2+ " + std::to_string(*s2);
    } else {
      r.detail = "zero field";
    }
    out.push_back(r);
  }

  {
    detail::Worst wsplit, widem, wsemi;
    const FractionalPower alpha(1.5);
    for (int t = 0; t < opt.trials; ++t) {
      const SpectralField f = field(lab, 6.0, true);
      const SpectralField c = mode_filter(f, Filter::critical, cfg);
      const SpectralField s = mode_filter(f, Filter::stable, cfg);
      const double d = (c + s - f).max_abs();
      wsplit.update(d, 1e-14 * std::max(1.0, f.max_abs()), d <= 1e-14 * std::max(1.0, f.max_abs()));
      double idem = 0.0;
      for (Filter which : {Filter::critical, Filter::stable, Filter::low, Filter::low_complement}) {
        const SpectralField once = mode_filter(f, which, cfg);
        idem = std::max(idem, (mode_filter(once, which, cfg) - once).max_abs());
      }
      widem.update(idem, 1e-12, idem <= 1e-12);
      const SpectralField a = semigroup_apply(semigroup_apply(f, 0.7, alpha, 0.1), 1.3, alpha, 0.1);
      const SpectralField b = semigroup_apply(f, 2.0, alpha, 0.1);
      const double ds = (a - b).max_abs();
      wsemi.update(ds, 1e-12, ds <= 1e-12);
    }
    out.push_back(wsplit.result("filter_partition"));
    out.push_back(widem.result("filter_idempotence"));
    out.push_back(wsemi.result("semigroup_law"));
  }

  {
    // Ansatz and GL invariants on the default amplitude.
    const GLParams gl = gl_coefficients(FractionalPower(1.5), 1.0, 1.0);
    const SpectralField A0 = opt.zero_fields ? SpectralField(slow) : default_initial_amplitude(slow);
    const GLState s0{A0, 0.0};
    detail::Worst wreal, wgauge;
    std::vector<double> holder;
    for (double eps : opt.eps_list) {
      const Grid1D fast = fast_grid_for(opt.slow_period, eps);
      const AnsatzFields ans = build_ansatz(s0, gl, eps, fast, cfg);
      const double im = std::max(ans.psi.max_imag(), ans.Psi.max_imag());
      wreal.update(im, 1e-10, im <= 1e-10);
      const SpectralField eps_psi = Complex(eps) * ans.Psi;
      holder.push_back(cb_norm(mode_filter(ans.Psi, Filter::critical, cfg), 1) +
                       cb_norm(Complex(1.0 / eps) * mode_filter(eps_psi, Filter::stable, cfg), 1));
    }
    const Complex phase = std::polar(1.0, 0.7);
    const GLParams glg = gl_coefficients(FractionalPower(1.5), 0.0, 1.0);
    const SpectralField rotated_first = gl_evolve({phase * A0, 0.0}, glg, 0.25, 1.0 / 256).A;
    const SpectralField rotated_after = phase * gl_evolve(s0, glg, 0.25, 1.0 / 256).A;
    const double dg = (rotated_first - rotated_after).max_abs();
    wgauge.update(dg, 1e-9, dg <= 1e-9);
    out.push_back(wreal.result("ansatz_reality"));
    out.push_back(wgauge.result("gl_gauge_equivariance"));
    double hmax = 0.0;
    for (double h : holder) hmax = std::max(hmax, h);
    const double hbound = 10.0 * holder.front();
    out.push_back({"psi_sup_norm_bounded", hmax <= hbound || hmax == 0.0, hmax, hbound,
                   "cb_norm(E_c Psi,1) + cb_norm(E_s Psi_s,1) over the eps list"});
  }

  return out;
}

}  // namespace fracsh
