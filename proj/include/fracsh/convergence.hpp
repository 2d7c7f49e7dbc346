#pragma once

// Approximation error sup_t |u - eps psi|_{H^theta} of the Swift-Hohenberg
// solution started on the improved ansatz, swept over epsilon.

#include <optional>
#include <vector>

#include "fracsh/gl.hpp"
#include "fracsh/parallel.hpp"
#include "fracsh/residuum.hpp"
#include "fracsh/sh.hpp"

namespace fracsh {

inline constexpr double kErrorFloor = 1e-9;

struct ConvergenceReport {
  std::vector<double> eps_list;
  std::vector<double> err_psi;  // sup_t |u - eps psi|
  std::vector<double> err_Psi;  // sup_t |u - eps Psi|
  std::vector<double> sh_dt;    // step size after the halving probe
  std::optional<double> slope_psi;
  std::optional<double> slope_Psi;
  SobolevIndex theta{1.0};

  bool below_floor() const {
    for (double e : err_psi) {
      if (e >= kErrorFloor) return false;
    }
    return true;
  }
  bool monotone() const {
    for (size_t i = 1; i < err_psi.size(); ++i) {
      if (!(err_psi[i] < err_psi[i - 1])) return false;
    }
    return true;
  }
};

struct ConvergenceSample {
  double eps;
  double t;
  double err_psi;
  double err_Psi;
};

struct ConvergenceStudy {
  ConvergenceReport report;
  std::vector<ConvergenceSample> rows;
};

inline ConvergenceStudy convergence_study(const std::vector<double>& eps_list, FractionalPower alpha, double a1,
                                          double a2, SobolevIndex theta, const SweepSetup& setup = {},
                                          double sh_dt = 0.05) {
  validate_eps_list(eps_list);
  const GLParams gl = gl_coefficients(alpha, a1, a2);
  const std::vector<GLState> traj = gl_sample_trajectory(gl, setup);
  const int ne = static_cast<int>(eps_list.size());
  std::vector<std::vector<ConvergenceSample>> per_eps(ne);
  std::vector<double> dts(ne, sh_dt);
  parallel_for(ne, setup.workers, [&](int e) {
    const double eps = eps_list[e];
    const Grid1D fast = fast_grid_for(setup.slow_period, eps);
    std::vector<AnsatzFields> ans;
    ans.reserve(traj.size());
    for (const GLState& s : traj) ans.push_back(build_ansatz(s, gl, eps, fast, setup.filter));
    const SpectralField u0 = (Complex(eps) * ans.front().Psi).real_part();
    const SHParams p = sh_select_dt(u0, SHParams(alpha, eps, a1, a2, sh_dt, setup.filter));
    dts[e] = p.dt();
    const std::vector<SHState> states = sh_evolve(u0, p, setup.T_star / (eps * eps), setup.samples);
    for (size_t k = 0; k < states.size(); ++k) {
      const SpectralField& u = states[k].u;
      per_eps[e].push_back({eps, states[k].t, h_norm(u - Complex(eps) * ans[k].psi, theta),
                            h_norm(u - Complex(eps) * ans[k].Psi, theta)});
    }
  });
  ConvergenceStudy out;
  out.report.eps_list = eps_list;
  out.report.theta = theta;
  out.report.sh_dt = dts;
  for (const auto& rows : per_eps) {
    double mp = 0.0, mP = 0.0;
    for (const auto& r : rows) {
      mp = std::max(mp, r.err_psi);
      mP = std::max(mP, r.err_Psi);
      out.rows.push_back(r);
    }
    out.report.err_psi.push_back(mp);
    out.report.err_Psi.push_back(mP);
  }
  if (!out.report.below_floor()) {
    out.report.slope_psi = fit_loglog(eps_list, out.report.err_psi);
    out.report.slope_Psi = fit_loglog(eps_list, out.report.err_Psi);
  }
  return out;
}

}  // namespace fracsh
