#pragma once

// Fractional Swift-Hohenberg equation
//   u_t = -(1 - (-Delta)^{alpha/2})^2 u + eps^2 u - a1 u^2 - a2 u^3
// on the fast periodic grid, integrated with ETDRK4 on the exact symbol.

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fracsh/errors.hpp"
#include "fracsh/etdrk4.hpp"
#include "fracsh/gl.hpp"
#include "fracsh/spectral_field.hpp"
#include "fracsh/symbols.hpp"

namespace fracsh {

class SHParams {
 public:
  SHParams(FractionalPower alpha, double eps, double a1, double a2, double dt, FilterConfig filter = {})
      : alpha_(alpha), eps_(eps), a1_(a1), a2_(a2), dt_(dt), filter_(filter) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw ValidationError("SH: eps must be finite and >= 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("SH: dt must be positive");
    const double sigma_s = semigroup_bounds(alpha, filter).sigma_s;
    if (eps * eps > sigma_s) {
      throw ValidationError("SH: eps^2 = " + std::to_string(eps * eps) + " exceeds sigma_s = " +
                            std::to_string(sigma_s));
    }
  }

  FractionalPower alpha() const noexcept { return alpha_; }
  double eps() const noexcept { return eps_; }
  double a1() const noexcept { return a1_; }
  double a2() const noexcept { return a2_; }
  double dt() const noexcept { return dt_; }
  const FilterConfig& filter() const noexcept { return filter_; }
  static constexpr int dealias_factor = 2;

  SHParams with_dt(double dt) const { return SHParams(alpha_, eps_, a1_, a2_, dt, filter_); }

 private:
  FractionalPower alpha_;
  double eps_;
  double a1_;
  double a2_;
  double dt_;
  FilterConfig filter_;
};

struct SHState {
  SpectralField u;
  double t = 0.0;
};

inline constexpr double kSHTailGuard = 1e-8;

inline std::vector<double> sh_linear_symbol(const Grid1D& grid, const SHParams& p) {
  std::vector<double> out(grid.N());
  for (int i = 0; i < grid.N(); ++i) out[i] = sh_symbol_eval(grid.xi(i), p.alpha(), p.eps());
  return out;
}

inline ComplexVector sh_nonlinear_coefficients(const Grid1D& grid, std::span<const Complex> coeffs, double a1,
                                               double a2) {
  if (a1 == 0.0 && a2 == 0.0) return ComplexVector(coeffs.size(), Complex{});
  return dealiased_apply(grid, coeffs, [a1, a2](Complex u) { return -a1 * u * u - a2 * u * u * u; });
}

/// -a1 u^2 - a2 u^3, dealiased by zero padding.
inline SpectralField sh_nonlinearity(const SpectralField& u, const SHParams& p) {
  return SpectralField::from_coefficients(u.grid(), sh_nonlinear_coefficients(u.grid(), u.coefficients(), p.a1(), p.a2()));
}

/// Lambda u + N(u) evaluated spectrally.
inline SpectralField sh_rhs(const SpectralField& u, const SHParams& p) {
  const SpectralField lin = apply_symbol(u, [&](double xi) { return sh_symbol_eval(xi, p.alpha(), p.eps()); });
  return lin + sh_nonlinearity(u, p);
}

inline void check_sh_state(const SHState& s) {
  const double m = s.u.max_abs();
  if (!std::isfinite(m) || m > kBlowUpNorm) {
    throw NumericError("SH blow-up at t = " + std::to_string(s.t) + " (sup norm " + std::to_string(m) + ")");
  }
  const double tail = spectral_tail(s.u);
  if (!(tail < kSHTailGuard)) {
    throw NumericError("SH resolution guard violated at t = " + std::to_string(s.t) + " (tail " +
                       std::to_string(tail) + ")");
  }
}

/// ETDRK4 integrator for a fixed grid and parameter set.
class SHIntegrator {
 public:
  SHIntegrator(const Grid1D& grid, const SHParams& p) : grid_(grid), params_(p), lambda_(sh_linear_symbol(grid, p)) {}

  /// Advances by span using equal steps no longer than params.dt.
  ComplexVector advance(ComplexVector v, double span) {
    if (span <= 0.0) return v;
    const int steps = std::max(1, static_cast<int>(std::ceil(span / params_.dt() - 1e-9)));
    const Etdrk4& stepper = stepper_for(span / steps);
    const double a1 = params_.a1();
    const double a2 = params_.a2();
    auto nonlinear = [&](const ComplexVector& u) { return sh_nonlinear_coefficients(grid_, u, a1, a2); };
    for (int s = 0; s < steps; ++s) {
      v = stepper.step(v, nonlinear);
      for (const auto& c : v) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw NumericError("SH blow-up: non-finite state");
      }
    }
    return v;
  }

  const Etdrk4& stepper_for(double h) {
    const long long key = std::llround(h * 1e12);
    auto it = steppers_.find(key);
    if (it == steppers_.end()) it = steppers_.emplace(key, Etdrk4(lambda_, h)).first;
    return it->second;
  }

 private:
  Grid1D grid_;
  SHParams params_;
  std::vector<double> lambda_;
  std::map<long long, Etdrk4> steppers_;
};

inline SHState sh_step(const SHState& state, const SHParams& p) {
  const Grid1D& g = state.u.grid();
  SHIntegrator integrator(g, p);
  ComplexVector v(state.u.coefficients().begin(), state.u.coefficients().end());
  const auto& stepper = integrator.stepper_for(p.dt());
  v = stepper.step(v, [&](const ComplexVector& u) { return sh_nonlinear_coefficients(g, u, p.a1(), p.a2()); });
  SHState out{SpectralField::from_coefficients(g, std::move(v)), state.t + p.dt()};
  const double m = out.u.max_abs();
  if (!std::isfinite(m) || m > kBlowUpNorm) throw NumericError("SH blow-up at t = " + std::to_string(out.t));
  return out;
}

/// Uniform sample times t_k = k t_end / (samples - 1), k = 0..samples-1.
inline std::vector<double> uniform_times(double t_end, int samples) {
  if (samples < 2) throw ValidationError("need at least 2 samples");
  if (!(t_end > 0.0)) throw ValidationError("end time must be positive");
  std::vector<double> out(samples);
  for (int k = 0; k < samples; ++k) out[k] = t_end * k / (samples - 1);
  return out;
}

inline std::vector<SHState> sh_evolve(const SpectralField& u0, const SHParams& p, double t_end, int samples) {
  const std::vector<double> times = uniform_times(t_end, samples);
  const Grid1D& g = u0.grid();
  SHIntegrator integrator(g, p);
  std::vector<SHState> out;
  out.reserve(samples);
  ComplexVector v(u0.coefficients().begin(), u0.coefficients().end());
  double t = 0.0;
  for (double target : times) {
    v = integrator.advance(std::move(v), target - t);
    t = target;
    SHState s{SpectralField::from_coefficients(g, v), t};
    check_sh_state(s);
    out.push_back(std::move(s));
  }
  return out;
}

/// u(t_probe) computed with the given step size.
inline SpectralField sh_solution_at(const SpectralField& u0, const SHParams& p, double t_probe) {
  SHIntegrator integrator(u0.grid(), p);
  ComplexVector v(u0.coefficients().begin(), u0.coefficients().end());
  return SpectralField::from_coefficients(u0.grid(), integrator.advance(std::move(v), t_probe));
}

/// Halves dt until u(t_probe) changes by at most tol in H^0 under a further halving.
inline SHParams sh_select_dt(const SpectralField& u0, const SHParams& p, double tol = 1e-8, double t_probe = 1.0,
                             int max_halvings = 8) {
  SHParams cur = p;
  for (int k = 0; k <= max_halvings; ++k) {
    const SHParams half = cur.with_dt(0.5 * cur.dt());
    const double diff = h_norm(sh_solution_at(u0, cur, t_probe) - sh_solution_at(u0, half, t_probe), 0.0);
    if (diff <= tol) return cur;
    cur = half;
  }
  throw NumericError("SH: time-step probe did not reach the tolerance after " + std::to_string(max_halvings) +
                     " halvings");
}

// ---------------------------------------------------------------------------
// Checkpoints: CSV with header t,j,re,im and one row per Fourier mode.

inline void write_checkpoint(std::ostream& os, const std::vector<SHState>& states) {
  os << "t,j,re,im\n";
  os.precision(17);
  for (const auto& s : states) {
    const Grid1D& g = s.u.grid();
    for (int j = -g.N() / 2; j < g.N() / 2; ++j) {
      const Complex c = s.u.coefficient(j);
      os << s.t << ',' << j << ',' << c.real() << ',' << c.imag() << '\n';
    }
  }
}

inline std::vector<SHState> read_checkpoint(std::istream& is, const Grid1D& grid) {
  std::string line;
  if (!std::getline(is, line) || line != "t,j,re,im") throw ValidationError("checkpoint: bad header");
  std::vector<SHState> out;
  ComplexVector coeffs(grid.N());
  int filled = 0;
  double current_t = 0.0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double t = 0.0, re = 0.0, im = 0.0;
    int j = 0;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(row >> t >> c1 >> j >> c2 >> re >> c3 >> im) || c1 != ',' || c2 != ',' || c3 != ',') {
      throw ValidationError("checkpoint: malformed row '" + line + "'");
    }
    if (!grid.has_mode(j)) throw ValidationError("checkpoint: mode outside the grid");
    if (filled == 0) current_t = t;
    coeffs[grid.index(j)] = Complex(re, im);
    if (++filled == grid.N()) {
      out.push_back({SpectralField::from_coefficients(grid, coeffs), current_t});
      filled = 0;
    }
  }
  if (filled != 0) throw ValidationError("checkpoint: truncated record");
  return out;
}

}  // namespace fracsh
