#pragma once

// Study configuration (flat key = value files plus overrides), the study
// drivers behind the command-line tool, and their CSV/JSON writers.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fracsh/convergence.hpp"
#include "fracsh/errors.hpp"
#include "fracsh/gl.hpp"
#include "fracsh/properties.hpp"
#include "fracsh/residuum.hpp"
#include "fracsh/sh.hpp"
#include "fracsh/symbols.hpp"

namespace fracsh {

using Json = nlohmann::ordered_json;

struct StudyConfig {
  double alpha = 1.0;
  double a1 = 1.0;
  double a2 = 1.0;
  double theta = 1.0;
  std::vector<double> eps_list{0.2, 0.1, 0.05};
  double L_X = 16.0 * std::numbers::pi;
  int N_slow = 256;
  int samples = 33;
  double T_star = 1.0;
  double delta = 0.5;
  double r0 = 0.125;
  double dt = 0.05;
  double gl_dt = 1.0 / 256.0;
  double init_amplitude = 0.8;
  double init_width = 1.0;
  std::string output_dir = "out";
  std::uint64_t seed = 20240531;
  int workers = 1;
};

// ---------------------------------------------------------------------------
// Parsing

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

/// Real number, optionally followed by "pi" (e.g. "16pi", "0.5pi", "pi").
inline double parse_real(const std::string& text) {
  std::string s = trim(text);
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s = trim(s.substr(0, s.size() - 2));
    if (!s.empty() && s.back() == '*') s = trim(s.substr(0, s.size() - 1));
    if (s.empty()) return factor;
  }
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + text + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw ValidationError("not a number: '" + text + "'");
  return v * factor;
}

inline long long parse_integer(const std::string& text) {
  const std::string s = trim(text);
  size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("not an integer: '" + text + "'");
  }
  if (used != s.size()) throw ValidationError("not an integer: '" + text + "'");
  return v;
}

inline std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(parse_real(item));
  }
  return out;
}

inline void apply_setting(StudyConfig& c, const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  auto as_int = [&] {
    const long long v = parse_integer(value);
    if (v < INT32_MIN || v > INT32_MAX) throw ValidationError(key + ": out of range");
    return static_cast<int>(v);
  };
  if (key == "alpha") c.alpha = parse_real(value);
  else if (key == "a1") c.a1 = parse_real(value);
  else if (key == "a2") c.a2 = parse_real(value);
  else if (key == "theta") c.theta = parse_real(value);
  else if (key == "eps_list") c.eps_list = parse_real_list(value);
  else if (key == "L_X") c.L_X = parse_real(value);
  else if (key == "N_slow") c.N_slow = as_int();
  else if (key == "samples") c.samples = as_int();
  else if (key == "T_star") c.T_star = parse_real(value);
  else if (key == "delta") c.delta = parse_real(value);
  else if (key == "r0") c.r0 = parse_real(value);
  else if (key == "dt") c.dt = parse_real(value);
  else if (key == "gl_dt") c.gl_dt = parse_real(value);
  else if (key == "init_amplitude") c.init_amplitude = parse_real(value);
  else if (key == "init_width") c.init_width = parse_real(value);
  else if (key == "output_dir") c.output_dir = trim(value);
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_integer(value));
  else if (key == "workers") c.workers = as_int();
  else throw ValidationError("unknown configuration key '" + key + "'");
}

/// "key=value" override.
inline void apply_override(StudyConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ValidationError("expected key=value, got '" + assignment + "'");
  apply_setting(c, assignment.substr(0, eq), assignment.substr(eq + 1));
}

/// Lines "key = value"; '#' starts a comment, blank lines are ignored.
inline void apply_config_text(StudyConfig& c, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(c, line.substr(0, eq), line.substr(eq + 1));
  }
}

inline void apply_config_file(StudyConfig& c, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  apply_config_text(c, in);
}

// ---------------------------------------------------------------------------
// Validation and derived quantities

inline FilterConfig filter_of(const StudyConfig& c) { return FilterConfig(c.delta, c.r0); }

inline SweepSetup setup_of(const StudyConfig& c) {
  SweepSetup s;
  s.slow_period = c.L_X;
  s.slow_points = c.N_slow;
  s.T_star = c.T_star;
  s.samples = c.samples;
  s.gl_dt = c.gl_dt;
  s.init_amplitude = c.init_amplitude;
  s.init_width = c.init_width;
  s.filter = filter_of(c);
  s.workers = c.workers;
  return s;
}

inline void validate(const StudyConfig& c) {
  const FractionalPower alpha(c.alpha);
  const FilterConfig filter = filter_of(c);
  static_cast<void>(SobolevIndex(c.theta));
  slow_grid_for(c.L_X, c.N_slow);
  validate_eps_list(c.eps_list);
  const double sigma_s = semigroup_bounds(alpha, filter).sigma_s;
  for (double eps : c.eps_list) {
    fast_half_periods(c.L_X, eps);
    if (eps * eps > sigma_s) throw ValidationError("eps = " + std::to_string(eps) + " violates eps^2 <= sigma_s");
  }
  if (c.samples < 2) throw ValidationError("samples must be >= 2");
  if (!(c.T_star > 0.0)) throw ValidationError("T_star must be positive");
  if (!(c.dt > 0.0) || !(c.gl_dt > 0.0)) throw ValidationError("time steps must be positive");
  if (!(c.init_width > 0.0)) throw ValidationError("init_width must be positive");
  if (c.workers < 1) throw ValidationError("workers must be >= 1");
  if (c.output_dir.empty()) throw ValidationError("output_dir must not be empty");
}

inline Json config_json(const StudyConfig& c) {
  Json j;
  j["alpha"] = c.alpha;
  j["a1"] = c.a1;
  j["a2"] = c.a2;
  j["theta"] = c.theta;
  j["eps_list"] = c.eps_list;
  j["L_X"] = c.L_X;
  j["N_slow"] = c.N_slow;
  j["samples"] = c.samples;
  j["T_star"] = c.T_star;
  j["delta"] = c.delta;
  j["r0"] = c.r0;
  j["dt"] = c.dt;
  j["gl_dt"] = c.gl_dt;
  j["init_amplitude"] = c.init_amplitude;
  j["init_width"] = c.init_width;
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  return j;
}

inline Json derived_json(const StudyConfig& c) {
  const FractionalPower alpha(c.alpha);
  const GLParams gl = gl_coefficients(alpha, c.a1, c.a2);
  Json j;
  j["c_plus"] = gl.c_plus;
  j["gamma"] = gl.gamma;
  j["diffusion"] = gl.diffusion;
  j["sigma_s"] = semigroup_bounds(alpha, filter_of(c)).sigma_s;
  Json grids = Json::array();
  for (double eps : c.eps_list) {
    const int K = fast_half_periods(c.L_X, eps);
    grids.push_back({{"eps", eps}, {"K", K}, {"N", 16 * K}});
  }
  j["fast_grids"] = grids;
  return j;
}

// ---------------------------------------------------------------------------
// Output

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

inline Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline void write_manifest(const StudyConfig& c, const std::string& command) {
  Json j;
  j["command"] = command;
  j["config"] = config_json(c);
  j["derived"] = derived_json(c);
  write_file_atomic(std::filesystem::path(c.output_dir) / "manifest.json", j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Drivers. Each returns a process exit code (kExitOk or kExitThreshold);
// validation and numeric failures propagate as exceptions.

inline constexpr double kSymbolDefectTolerance = 1e-8;

inline int run_symbols(const StudyConfig& c) {
  if (!(c.alpha > 0.0 && c.alpha < 2.0)) throw ValidationError("symbols: alpha must lie in the open interval (0, 2)");
  const FractionalPower alpha(c.alpha);
  write_manifest(c, "symbols");
  const double closed = c_plus(alpha);
  const double quad = c_pm_quadrature(alpha, 1);
  const double quad_minus = c_pm_quadrature(alpha, -1);
  double worst = std::abs(closed - quad);
  std::ostringstream csv;
  csv << "alpha,xi,sh_symbol,r_pm,m1_pm,m2_pm,taylor_defect,reconstruction_defect,c_plus_closed,c_plus_quadrature\n";
  for (int sign : {-1, 1}) {
    for (int k = 1; k <= 200; ++k) {
      const double xi = sign * 0.02 * k;
      const bool plus = sign > 0;
      const double r = remainder_multiplier(xi, alpha, plus ? RemainderKind::r_plus : RemainderKind::r_minus);
      const double m1 = remainder_multiplier(xi, alpha, plus ? RemainderKind::m1_plus : RemainderKind::m1_minus);
      const double m2 = remainder_multiplier(xi, alpha, plus ? RemainderKind::m2_plus : RemainderKind::m2_minus);
      const double td = taylor_identity_defect(xi, alpha);
      const double rd = std::abs(r - (plus ? quad : quad_minus) - m1 - m2);
      worst = std::max({worst, td, rd});
      csv << format_real(c.alpha) << ',' << format_real(xi) << ',' << format_real(sh_symbol_eval(xi, alpha, 0.0)) << ','
          << format_real(r) << ',' << format_real(m1) << ',' << format_real(m2) << ',' << format_real(td) << ','
          << format_real(rd) << ',' << format_real(closed) << ',' << format_real(quad) << '\n';
    }
  }
  write_file_atomic(std::filesystem::path(c.output_dir) / "symbols.csv", csv.str());
  return worst > kSymbolDefectTolerance ? kExitThreshold : kExitOk;
}

inline int run_gl(const StudyConfig& c) {
  validate(c);
  write_manifest(c, "gl");
  const GLParams gl = gl_coefficients(FractionalPower(c.alpha), c.a1, c.a2);
  const std::vector<GLState> traj = gl_sample_trajectory(gl, setup_of(c));
  std::ostringstream csv;
  csv << "T,norm_l2,norm_h_theta,max_abs,tail\n";
  for (const auto& s : traj) {
    csv << format_real(s.T) << ',' << format_real(h_norm(s.A, 0.0)) << ',' << format_real(h_norm(s.A, c.theta)) << ','
        << format_real(s.A.max_abs()) << ',' << format_real(spectral_tail(s.A)) << '\n';
  }
  write_file_atomic(std::filesystem::path(c.output_dir) / "gl.csv", csv.str());
  std::ostringstream prof;
  prof << "X,re,im\n";
  const SpectralField& A = traj.back().A;
  for (int n = 0; n < A.grid().N(); ++n) {
    prof << format_real(A.grid().x(n)) << ',' << format_real(A.values()[n].real()) << ','
         << format_real(A.values()[n].imag()) << '\n';
  }
  write_file_atomic(std::filesystem::path(c.output_dir) / "gl_final.csv", prof.str());
  return kExitOk;
}

inline std::string eps_tag(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", eps);
  return buf;
}

inline int run_sh(const StudyConfig& c) {
  validate(c);
  write_manifest(c, "sh");
  const FractionalPower alpha(c.alpha);
  const SweepSetup setup = setup_of(c);
  const GLParams gl = gl_coefficients(alpha, c.a1, c.a2);
  const GLState start = gl_sample_trajectory(gl, setup).front();
  const int ne = static_cast<int>(c.eps_list.size());
  std::vector<Json> summaries(ne);
  parallel_for(ne, c.workers, [&](int e) {
    const double eps = c.eps_list[e];
    const Grid1D fast = fast_grid_for(c.L_X, eps);
    const SpectralField u0 = (Complex(eps) * build_ansatz(start, gl, eps, fast, setup.filter).Psi).real_part();
    const SHParams p = sh_select_dt(u0, SHParams(alpha, eps, c.a1, c.a2, c.dt, setup.filter));
    const std::vector<SHState> states = sh_evolve(u0, p, c.T_star / (eps * eps), c.samples);
    std::ostringstream csv;
    write_checkpoint(csv, states);
    write_file_atomic(std::filesystem::path(c.output_dir) / ("sh_eps_" + eps_tag(eps) + ".csv"), csv.str());
    Json sups = Json::array();
    for (const auto& s : states) sups.push_back(s.u.max_abs());
    summaries[e] = {{"eps", eps}, {"K", fast.K()}, {"N", fast.N()}, {"dt", p.dt()}, {"t_end", states.back().t},
                    {"sup_norm", sups}};
  });
  write_file_atomic(std::filesystem::path(c.output_dir) / "sh.json", Json(summaries).dump(2) + "\n");
  return kExitOk;
}

inline constexpr double kCritSlopeMin = 3.2;
inline constexpr double kStabSlopeMin = 2.2;
inline constexpr double kResiduumFloor = 1e-9;
inline constexpr double kNonlinearCritSlopeMin = 1.8;
inline constexpr double kNonlinearStabSlopeMin = -0.1;

inline bool all_below(const std::vector<double>& v, double floor) {
  for (double x : v) {
    if (!(x < floor)) return false;
  }
  return true;
}

inline int run_residuum(const StudyConfig& c) {
  validate(c);
  write_manifest(c, "residuum");
  const FractionalPower alpha(c.alpha);
  const SobolevIndex theta(c.theta);
  const SweepSetup setup = setup_of(c);
  const ResiduumStudy study = residuum_scaling_study(c.eps_list, alpha, c.a1, c.a2, theta, setup);
  std::ostringstream csv;
  csv << "eps,t,norm_crit,norm_stab,z0,z1,z2,z3,z4\n";
  for (const auto& r : study.rows) {
    csv << format_real(r.eps) << ',' << format_real(r.t) << ',' << format_real(r.norm_crit) << ','
        << format_real(r.norm_stab);
    for (double z : r.z) csv << ',' << format_real(z);
    csv << '\n';
  }
  const std::filesystem::path dir(c.output_dir);
  write_file_atomic(dir / "residuum.csv", csv.str());

  const ScalingReport& rep = study.report;
  const bool floor = all_below(rep.crit_norms, kResiduumFloor) && all_below(rep.stab_norms, kResiduumFloor);
  Json s;
  s["theta"] = c.theta;
  s["crit_slope"] = floor ? Json(nullptr) : optional_json(rep.crit_slope);
  s["stab_slope"] = floor ? Json(nullptr) : optional_json(rep.stab_slope);
  s["eps_list"] = rep.eps_list;
  s["crit_norms"] = rep.crit_norms;
  s["stab_norms"] = rep.stab_norms;
  s["crit_argmax_t"] = rep.crit_argmax_t;
  s["stab_argmax_t"] = rep.stab_argmax_t;
  if (floor) s["note"] = "all residuum norms below the 1e-9 floor";
  else if (rep.degenerate()) s["note"] = "degenerate: a norm vanished, slope undefined";
  write_file_atomic(dir / "slopes.json", s.dump(2) + "\n");

  const ScalingReport nd = nonlinearity_difference_scaling(c.eps_list, alpha, c.a1, c.a2, theta, setup);
  Json n;
  n["theta"] = c.theta;
  n["beta"] = kBeta;
  n["eps_list"] = nd.eps_list;
  n["crit_quantity"] = nd.crit_norms;
  n["stab_quantity"] = nd.stab_norms;
  n["crit_slope"] = optional_json(nd.crit_slope);
  n["stab_slope"] = optional_json(nd.stab_slope);
  write_file_atomic(dir / "nonlinearity.json", n.dump(2) + "\n");

  if (floor || rep.degenerate()) return kExitOk;
  const bool ok = *rep.crit_slope >= kCritSlopeMin && *rep.stab_slope >= kStabSlopeMin;
  return ok ? kExitOk : kExitThreshold;
}

inline constexpr double kConvergenceSlopeMin = 1.35;
inline constexpr double kConvergenceSlopeMax = 2.2;

inline int run_convergence(const StudyConfig& c) {
  validate(c);
  write_manifest(c, "convergence");
  const StudyConfig& cfg = c;
  const ConvergenceStudy study = convergence_study(cfg.eps_list, FractionalPower(cfg.alpha), cfg.a1, cfg.a2,
                                                   SobolevIndex(cfg.theta), setup_of(cfg), cfg.dt);
  std::ostringstream csv;
  csv << "eps,t,err_psi,err_Psi\n";
  for (const auto& r : study.rows) {
    csv << format_real(r.eps) << ',' << format_real(r.t) << ',' << format_real(r.err_psi) << ','
        << format_real(r.err_Psi) << '\n';
  }
  const std::filesystem::path dir(c.output_dir);
  write_file_atomic(dir / "convergence.csv", csv.str());
  const ConvergenceReport& rep = study.report;
  Json j;
  j["theta"] = c.theta;
  j["eps_list"] = rep.eps_list;
  j["err_psi"] = rep.err_psi;
  j["err_Psi"] = rep.err_Psi;
  j["sh_dt"] = rep.sh_dt;
  j["slope_psi"] = optional_json(rep.slope_psi);
  j["slope_Psi"] = optional_json(rep.slope_Psi);
  j["monotone"] = rep.monotone();
  if (rep.below_floor()) j["note"] = "n/a - below floor";
  write_file_atomic(dir / "convergence.json", j.dump(2) + "\n");
  if (rep.below_floor()) return kExitOk;
  const bool ok = rep.slope_psi && *rep.slope_psi >= kConvergenceSlopeMin && *rep.slope_psi <= kConvergenceSlopeMax &&
                  rep.monotone();
  return ok ? kExitOk : kExitThreshold;
}

inline int run_props(const StudyConfig& c) {
  write_manifest(c, "props");
  PropertySuiteOptions opt;
  opt.seed = c.seed;
  opt.filter = filter_of(c);
  opt.slow_period = c.L_X;
  opt.slow_points = c.N_slow;
  opt.eps_list = c.eps_list;
  const std::vector<PropertyResult> results = run_property_checks(opt);
  Json arr = Json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    arr.push_back({{"name", r.name}, {"passed", r.passed}, {"measured", r.measured}, {"bound", r.bound},
                   {"detail", r.detail}});
  }
  Json j;
  j["seed"] = c.seed;
  j["all_passed"] = all;
  j["checks"] = arr;
  write_file_atomic(std::filesystem::path(c.output_dir) / "props.json", j.dump(2) + "\n");
  return all ? kExitOk : kExitThreshold;
}

}  // namespace fracsh
