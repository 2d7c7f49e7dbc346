#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fracsh/fracsh.hpp"

using namespace fracsh;

namespace {

const double kPi = std::numbers::pi;
const double kLX = 16.0 * kPi;
const std::vector<double> kEps{0.2, 0.1, 0.05};

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string("undefined"); }

Outcome c_plus_closed_form() {
  double worst = 0.0;
  for (int k = 1; k <= 7; ++k) {
    const FractionalPower alpha(0.25 * k);
    worst = std::max(worst, std::abs(c_plus(alpha) - c_pm_quadrature(alpha, 1)));
  }
  return {worst < 1e-10, "max |closed - quadrature| = " + fmt(worst)};
}

Outcome classical_limit() {
  const GLParams p = gl_coefficients(2.0, 0.0, 1.0);
  return {p.diffusion == 4.0 && p.gamma == 3.0, "diffusion " + fmt(p.diffusion) + ", gamma " + fmt(p.gamma)};
}

Outcome taylor_identities() {
  double worst_taylor = 0.0, worst_recon = 0.0;
  for (double a : {1.0, 1.3, 1.7}) {
    const FractionalPower alpha(a);
    for (int sign : {1, -1}) {
      for (int k = 1; k <= 200; ++k) {
        const double xi = sign * 0.02 * k;
        worst_taylor = std::max(worst_taylor, taylor_identity_defect(xi, alpha));
        worst_recon = std::max(worst_recon, remainder_reconstruction_defect(xi, alpha));
      }
    }
  }
  return {worst_taylor < 1e-8 && worst_recon < 1e-8,
          "max Taylor defect " + fmt(worst_taylor) + ", max reconstruction defect " + fmt(worst_recon)};
}

Outcome fractional_laplacian() {
  const Grid1D g(4096, 65536);
  auto gauss = [](double x) { return std::exp(-x * x / 2.0); };
  const SpectralField gs = SpectralField::sample(g, gauss);
  double worst_oracle = 0.0;
  for (double a : {0.5, 1.0, 1.5}) {
    const SpectralField spectral = frac_laplacian(gs, a / 2.0);
    for (int p = 0; p < 10; ++p) {
      const double x = 0.5 * p;
      const double ref = interpolate(spectral, x).real();
      const double oracle = frac_laplacian_singular_oracle(gauss, x, FractionalPower(a));
      worst_oracle = std::max(worst_oracle, std::abs(oracle - ref) / std::abs(ref));
    }
  }
  const Grid1D coarse(16, 1024);
  const Grid1D fine(8, 1024);
  const SpectralField g1 = SpectralField::sample(coarse, gauss);
  const SpectralField g2 = SpectralField::sample(fine, [](double x) { return std::exp(-2.0 * x * x); });
  double worst_scaling = 0.0;
  for (double a : {0.5, 1.0, 1.5}) {
    const SpectralField lhs = frac_laplacian(g2, a / 2.0);
    const SpectralField base = frac_laplacian(g1, a / 2.0);
    double err = 0.0, scale = 0.0;
    for (int n = 0; n < fine.N(); ++n) {
      const double rhs = std::pow(2.0, a) * base.values()[n].real();
      err = std::max(err, std::abs(lhs.values()[n].real() - rhs));
      scale = std::max(scale, std::abs(rhs));
    }
    worst_scaling = std::max(worst_scaling, err / scale);
  }
  return {worst_oracle < 1e-4 && worst_scaling < 1e-8,
          "oracle max rel error " + fmt(worst_oracle) + ", scaling max rel error " + fmt(worst_scaling)};
}

Outcome property_suite() {
  const std::vector<PropertyResult> results = run_property_checks();
  int passed = 0;
  std::string failed;
  for (const auto& r : results) {
    if (r.passed) ++passed;
    else failed += " " + r.name;
  }
  return {passed == static_cast<int>(results.size()),
          std::to_string(passed) + "/" + std::to_string(results.size()) + " checks pass" +
              (failed.empty() ? "" : ", failing:" + failed)};
}

Outcome residuum_scalings() {
  SweepSetup setup;
  setup.T_star = 0.08;
  const ResiduumStudy s = residuum_scaling_study(kEps, FractionalPower(1.0), 1.0, 1.0, SobolevIndex(1.0), setup);
  const ScalingReport& r = s.report;
  const bool ok = !r.degenerate() && *r.crit_slope >= 3.2 && *r.stab_slope >= 2.2;
  return {ok, "T* = 0.08: critical slope " + fmt_opt(r.crit_slope) + " (>= 3.2), stable slope " +
                  fmt_opt(r.stab_slope) + " (>= 2.2)"};
}

Outcome approximation_error() {
  bool ok = true;
  std::string detail;
  for (double a : {1.0, 1.5}) {
    const ConvergenceStudy s = convergence_study(kEps, FractionalPower(a), 0.0, 1.0, SobolevIndex(1.0));
    const ConvergenceReport& r = s.report;
    const bool in_window = r.slope_psi && *r.slope_psi >= 1.35 && *r.slope_psi <= 2.2;
    ok = ok && in_window && r.monotone();
    detail += "alpha " + fmt(a) + ": errors " + fmt(r.err_psi[0]) + ", " + fmt(r.err_psi[1]) + ", " +
              fmt(r.err_psi[2]) + ", slope " + fmt_opt(r.slope_psi) + (r.monotone() ? "" : " (not monotone)") + "; ";
  }
  return {ok, detail + "window [1.35, 2.2]"};
}

Outcome nonlinearity_differences() {
  const ScalingReport r = nonlinearity_difference_scaling(kEps, FractionalPower(1.0), 0.0, 1.0, SobolevIndex(1.0));
  const bool ok = !r.degenerate() && *r.crit_slope >= 1.8 && *r.stab_slope >= -0.1;
  return {ok, "critical slope " + fmt_opt(r.crit_slope) + " (>= 1.8), stable slope " + fmt_opt(r.stab_slope) +
                  " (>= -0.1)"};
}

double order_from(const std::vector<double>& diffs) { return std::log2(diffs[diffs.size() - 2] / diffs.back()); }

Outcome solver_consistency() {
  const double eps = 0.1;
  const Grid1D slow = slow_grid_for(kLX, 256);
  const GLParams gl = gl_coefficients(1.0, 0.0, 1.0);
  const GLState s0{default_initial_amplitude(slow), 0.0};
  std::vector<SpectralField> gl_sol;
  for (double dT : {0.2, 0.1, 0.05, 0.025}) gl_sol.push_back(gl_evolve(s0, gl, 1.0, dT).A);
  std::vector<double> gl_diff;
  for (size_t k = 0; k + 1 < gl_sol.size(); ++k) gl_diff.push_back(h_norm(gl_sol[k] - gl_sol[k + 1], 0.0));
  const double gl_order = order_from(gl_diff);

  const Grid1D fast = fast_grid_for(kLX, eps);
  const SpectralField u0 =
      (Complex(eps) * build_ansatz(s0, gl, eps, fast, FilterConfig{}).Psi).real_part();
  const SHParams p(FractionalPower(1.0), eps, 0.0, 1.0, 0.8);
  std::vector<SpectralField> sh_sol;
  for (double dt : {0.8, 0.4, 0.2, 0.1}) sh_sol.push_back(sh_solution_at(u0, p.with_dt(dt), 8.0));
  std::vector<double> sh_diff;
  for (size_t k = 0; k + 1 < sh_sol.size(); ++k) sh_diff.push_back(h_norm(sh_sol[k] - sh_sol[k + 1], 0.0));
  const double sh_order = order_from(sh_diff);

  const SpectralField mode = SpectralField::sample(fast, [](double x) { return 1e-6 * std::cos(x); });
  const SHParams q(FractionalPower(1.0), eps, 1.0, 1.0, 0.05);
  double worst_growth = 0.0;
  for (const auto& s : sh_evolve(mode, q, 100.0, 5)) {
    const double ratio = std::abs(s.u.coefficient(fast.K())) / std::abs(mode.coefficient(fast.K()));
    worst_growth = std::max(worst_growth, std::abs(ratio / std::exp(eps * eps * s.t) - 1.0));
  }
  const bool ok = gl_order >= 3.8 && sh_order >= 3.8 && worst_growth < 1e-3;
  return {ok, "GL order " + fmt(gl_order) + ", SH order " + fmt(sh_order) + " (>= 3.8), growth rel error " +
                  fmt(worst_growth) + " (< 1e-3)"};
}

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "c+ closed form vs quadrature", 1.0, c_plus_closed_form},
      {2, "classical-limit amplitude coefficients", 0.0, classical_limit},
      {3, "Taylor and remainder identities", 30.0, taylor_identities},
      {4, "fractional Laplacian cross-validation", 0.0, fractional_laplacian},
      {5, "estimate and identity property suite", 120.0, property_suite},
      {6, "residuum scalings", 900.0, residuum_scalings},
      {7, "approximation error scaling", 1800.0, approximation_error},
      {8, "nonlinearity-difference scalings", 600.0, nonlinearity_differences},
      {9, "solver self-consistency", 600.0, solver_consistency},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.time_limit == 0.0 || secs < c.time_limit;
    const bool passed = o.passed && in_time;
    if (!passed) ++failures;
    const std::string limit = c.time_limit > 0.0 ? " (limit " + fmt(c.time_limit) + " s)" : "";
    std::printf("[%s] criterion %d: %s: %s; %.2f s%s\n", passed ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, limit.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
