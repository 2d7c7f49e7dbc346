#pragma once

// Residuum Res(v) = -v_t + Lambda v + N(v) of the improved approximation,
// its critical/stable split and harmonic bands, and epsilon-sweeps with
// least-squares log-log slope fits.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "fracsh/errors.hpp"
#include "fracsh/gl.hpp"
#include "fracsh/parallel.hpp"
#include "fracsh/sh.hpp"
#include "fracsh/spectral_field.hpp"
#include "fracsh/symbols.hpp"

namespace fracsh {

inline constexpr double kBeta = 1.5;

struct ResiduumSample {
  double t = 0.0;
  SpectralField res;
  SpectralField res_c;
  SpectralField res_s;
  std::array<double, 9> z_bands{};  // H^theta norm of band k at index k + 4

  double z(int k) const { return z_bands.at(k + 4); }
};

inline ResiduumSample compute_residuum(const AnsatzFields& ansatz, const SHParams& p, SobolevIndex theta,
                                       double t = 0.0) {
  const double eps = p.eps();
  if (!(ansatz.Psi.grid() == ansatz.dPsi_dt.grid())) throw ValidationError("compute_residuum: grid mismatch");
  const SpectralField v = Complex(eps) * ansatz.Psi;
  const SpectralField res = sh_rhs(v, p) - Complex(eps) * ansatz.dPsi_dt;
  ResiduumSample out{t, res, mode_filter(res, Filter::critical, p.filter()), mode_filter(res, Filter::stable, p.filter()),
                     {}};
  for (int k = -4; k <= 4; ++k) out.z_bands[k + 4] = h_norm(band_pass(res, k, p.filter().delta()), theta);
  return out;
}

/// Ordinary least-squares slope of log y against log x; empty if any y is
/// not strictly positive and finite or fewer than two points are given.
inline std::optional<double> fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i])) return std::nullopt;
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

inline void validate_eps_list(const std::vector<double>& eps_list) {
  if (eps_list.size() < 3) throw ValidationError("eps_list needs at least 3 entries");
  for (size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] < eps_list[i - 1])) throw ValidationError("eps_list must be strictly decreasing");
  }
}

/// Discretization and horizon shared by all epsilon-sweeps.
struct SweepSetup {
  double slow_period = 16.0 * std::numbers::pi;
  int slow_points = 256;
  double T_star = 1.0;
  int samples = 33;
  double gl_dt = 1.0 / 256.0;
  double init_amplitude = 0.8;
  double init_width = 1.0;
  FilterConfig filter{};
  int workers = 1;
};

/// GL solution from init_amplitude * sech(X / init_width) at T_k = T_star k / (samples - 1).
inline std::vector<GLState> gl_sample_trajectory(const GLParams& gl, const SweepSetup& setup) {
  const Grid1D slow_grid = slow_grid_for(setup.slow_period, setup.slow_points);
  return gl_trajectory({default_initial_amplitude(slow_grid, setup.init_amplitude, setup.init_width), 0.0}, gl, uniform_times(setup.T_star, setup.samples),
                       setup.gl_dt);
}

struct ScalingReport {
  std::vector<double> eps_list;
  std::vector<double> crit_norms;  // per eps, sup over samples
  std::vector<double> stab_norms;
  std::vector<double> crit_argmax_t;
  std::vector<double> stab_argmax_t;
  std::optional<double> crit_slope;
  std::optional<double> stab_slope;
  SobolevIndex theta{1.0};

  bool degenerate() const { return !crit_slope || !stab_slope; }
};

struct ResiduumRow {
  double eps;
  double t;
  double norm_crit;
  double norm_stab;
  std::array<double, 5> z;  // bands k = 0..4
};

struct ResiduumStudy {
  ScalingReport report;
  std::vector<ResiduumRow> rows;
};

inline ResiduumStudy residuum_scaling_study(const std::vector<double>& eps_list, FractionalPower alpha, double a1,
                                            double a2, SobolevIndex theta, const SweepSetup& setup = {}) {
  validate_eps_list(eps_list);
  if (theta.value() < 1.0) throw ValidationError("residuum study needs theta >= 1");
  const GLParams gl = gl_coefficients(alpha, a1, a2);
  const std::vector<GLState> traj = gl_sample_trajectory(gl, setup);
  const int ne = static_cast<int>(eps_list.size());
  std::vector<std::vector<ResiduumRow>> per_eps(ne);
  parallel_for(ne, setup.workers, [&](int e) {
    const double eps = eps_list[e];
    const Grid1D fast = fast_grid_for(setup.slow_period, eps);
    const SHParams sh(alpha, eps, a1, a2, 0.05, setup.filter);
    for (const GLState& s : traj) {
      const AnsatzFields ans = build_ansatz(s, gl, eps, fast, setup.filter);
      const double t = s.T / (eps * eps);
      const ResiduumSample r = compute_residuum(ans, sh, theta, t);
      per_eps[e].push_back({eps, t, h_norm(r.res_c, theta), h_norm(r.res_s, theta),
                            {r.z(0), r.z(1), r.z(2), r.z(3), r.z(4)}});
    }
  });
  ResiduumStudy out;
  out.report.eps_list = eps_list;
  out.report.theta = theta;
  for (const auto& rows : per_eps) {
    double mc = -1.0, ms = -1.0, tc = 0.0, ts = 0.0;
    for (const auto& row : rows) {
      if (row.norm_crit > mc) mc = row.norm_crit, tc = row.t;
      if (row.norm_stab > ms) ms = row.norm_stab, ts = row.t;
      out.rows.push_back(row);
    }
    out.report.crit_norms.push_back(mc);
    out.report.stab_norms.push_back(ms);
    out.report.crit_argmax_t.push_back(tc);
    out.report.stab_argmax_t.push_back(ts);
  }
  out.report.crit_slope = fit_loglog(eps_list, out.report.crit_norms);
  out.report.stab_slope = fit_loglog(eps_list, out.report.stab_norms);
  return out;
}

// ---------------------------------------------------------------------------
// Nonlinearity differences N(eps Psi + eps^beta R) - N(eps Psi)

struct PerturbationField {
  SpectralField R_c;
  SpectralField R_s;
};

/// B(eps x) e^{ikx} + c.c. with B(X) = exp(-X^2/8), restricted to
/// slow frequencies |eps Xi| <= half_band and scaled to unit H^theta norm.
inline SpectralField modulated_bump(const Grid1D& slow, double eps, int k, const Grid1D& fast, double half_band,
                                    SobolevIndex theta) {
  const SpectralField B = SpectralField::sample(slow, [](double X) { return std::exp(-X * X / 8.0); });
  auto keep = [half_band](double xi) { return std::abs(xi) <= half_band; };
  const SpectralField f = scale_embed_filtered(B, eps, k, fast, keep) + scale_embed_filtered(B, eps, -k, fast, keep);
  const double n = h_norm(f, theta);
  return Complex(1.0 / n) * f;
}

/// Critical-band perturbation at e^{+-ix} and stable-band perturbation at e^{+-3ix},
/// each band-limited to within 0.75 delta of its carrier.
inline PerturbationField default_perturbation(const Grid1D& slow, double eps, const Grid1D& fast,
                                              const FilterConfig& cfg, SobolevIndex theta) {
  const double band = 0.75 * cfg.delta();
  return {modulated_bump(slow, eps, 1, fast, band, theta), modulated_bump(slow, eps, 3, fast, band, theta)};
}

/// Returns (eps^{-beta} |E_c dN|, eps^{-beta-1} |E_s dN|) for R = R_c + eps R_s.
inline std::pair<double, double> nonlinearity_difference(const SpectralField& Psi, const PerturbationField& R,
                                                         const SHParams& p, SobolevIndex theta) {
  const double eps = p.eps();
  const SpectralField v = Complex(eps) * Psi;
  const SpectralField pert = Complex(std::pow(eps, kBeta)) * (R.R_c + Complex(eps) * R.R_s);
  const SpectralField dN = sh_nonlinearity(v + pert, p) - sh_nonlinearity(v, p);
  return {std::pow(eps, -kBeta) * h_norm(mode_filter(dN, Filter::critical, p.filter()), theta),
          std::pow(eps, -kBeta - 1.0) * h_norm(mode_filter(dN, Filter::stable, p.filter()), theta)};
}

/// Sweep of the two nonlinearity-difference quantities (sup over the sample
/// times of the GL trajectory). If zero_perturbation is set, R = 0.
inline ScalingReport nonlinearity_difference_scaling(const std::vector<double>& eps_list, FractionalPower alpha,
                                                     double a1, double a2, SobolevIndex theta,
                                                     const SweepSetup& setup = {}, bool zero_perturbation = false) {
  validate_eps_list(eps_list);
  const GLParams gl = gl_coefficients(alpha, a1, a2);
  const std::vector<GLState> traj = gl_sample_trajectory(gl, setup);
  const int ne = static_cast<int>(eps_list.size());
  ScalingReport out;
  out.eps_list = eps_list;
  out.theta = theta;
  out.crit_norms.assign(ne, 0.0);
  out.stab_norms.assign(ne, 0.0);
  out.crit_argmax_t.assign(ne, 0.0);
  out.stab_argmax_t.assign(ne, 0.0);
  parallel_for(ne, setup.workers, [&](int e) {
    const double eps = eps_list[e];
    const Grid1D fast = fast_grid_for(setup.slow_period, eps);
    const SHParams sh(alpha, eps, a1, a2, 0.05, setup.filter);
    PerturbationField R = default_perturbation(traj.front().slow_grid(), eps, fast, setup.filter, theta);
    if (zero_perturbation) R = {SpectralField(fast), SpectralField(fast)};
    for (const GLState& s : traj) {
      const AnsatzFields ans = build_ansatz(s, gl, eps, fast, setup.filter);
      const auto [c, st] = nonlinearity_difference(ans.Psi, R, sh, theta);
      const double t = s.T / (eps * eps);
      if (c > out.crit_norms[e]) out.crit_norms[e] = c, out.crit_argmax_t[e] = t;
      if (st > out.stab_norms[e]) out.stab_norms[e] = st, out.stab_argmax_t[e] = t;
    }
  });
  out.crit_slope = fit_loglog(eps_list, out.crit_norms);
  out.stab_slope = fit_loglog(eps_list, out.stab_norms);
  return out;
}

}  // namespace fracsh
