#pragma once

// Ginzburg-Landau amplitude equation
//   dA/dT = alpha^2 A_XX + A - gamma |A|^2 A
// on a periodic slow grid, and the first-order / improved approximations
// psi and Psi built from its solution.

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fracsh/errors.hpp"
#include "fracsh/etdrk4.hpp"
#include "fracsh/grid.hpp"
#include "fracsh/spectral_field.hpp"
#include "fracsh/symbols.hpp"

namespace fracsh {

struct GLParams {
  FractionalPower alpha;
  double a1;
  double a2;
  double c_plus;
  double gamma;
  double diffusion;

  /// alpha^2 + c^+, the denominator of the second-harmonic amplitude.
  double harmonic_denominator() const { return alpha.value() * alpha.value() + c_plus; }
};

inline GLParams gl_coefficients(FractionalPower alpha, double a1, double a2) {
  const double a = alpha.value();
  const double cp = c_plus(alpha);
  const double denom = a * a + cp;
  if (!(denom > 0.0)) throw NumericError("gl_coefficients: alpha^2 + c^+ must be positive");
  const double gamma = -(4.0 + 2.0 / denom) * a1 * a1 + 3.0 * a2;
  return {alpha, a1, a2, cp, gamma, a * a};
}

inline GLParams gl_coefficients(double alpha, double a1, double a2) {
  return gl_coefficients(FractionalPower(alpha), a1, a2);
}

struct GLState {
  SpectralField A;
  double T = 0.0;

  const Grid1D& slow_grid() const noexcept { return A.grid(); }
};

inline constexpr double kGLTailGuard = 1e-10;
inline constexpr double kBlowUpNorm = 1e6;

/// Largest coefficient modulus at the two outermost retained modes +-(N/2 - 1).
inline double spectral_tail(const SpectralField& f) {
  const Grid1D& g = f.grid();
  const int last = g.N() / 2 - 1;
  return std::max(std::abs(f.coefficient(last)), std::abs(f.coefficient(-last)));
}

inline void check_gl_state(const GLState& s) {
  const double n = h_norm(s.A, 0.0);
  if (!std::isfinite(n) || n > kBlowUpNorm) {
    throw NumericError("GL blow-up at T = " + std::to_string(s.T) + " (L2 norm " + std::to_string(n) + ")");
  }
  const double tail = spectral_tail(s.A);
  if (!(tail < kGLTailGuard)) {
    std::ostringstream msg;
    msg << "GL resolution guard violated at T = " << s.T << " (outermost coefficient " << tail << ", limit "
        << kGLTailGuard << ")";
    throw NumericError(msg.str());
  }
}

/// amplitude * sech(X / width), centred in the slow domain.
inline SpectralField default_initial_amplitude(const Grid1D& slow, double amplitude = 0.8, double width = 1.0) {
  if (!(width > 0.0)) throw ValidationError("initial amplitude width must be positive");
  return SpectralField::sample(slow, [amplitude, width](double X) { return amplitude / std::cosh(X / width); });
}

inline std::vector<double> gl_linear_symbol(const Grid1D& slow, const GLParams& p) {
  std::vector<double> out(slow.N());
  for (int i = 0; i < slow.N(); ++i) out[i] = 1.0 - p.diffusion * slow.xi(i) * slow.xi(i);
  return out;
}

/// Coefficients of -gamma |A|^2 A (dealiased).
inline ComplexVector gl_nonlinear(const Grid1D& slow, std::span<const Complex> coeffs, double gamma) {
  if (gamma == 0.0) return ComplexVector(coeffs.size(), Complex{});
  return dealiased_apply(slow, coeffs, [gamma](Complex a) { return -gamma * std::norm(a) * a; });
}

inline SpectralField gl_rhs(const GLState& state, const GLParams& p) {
  const Grid1D& g = state.slow_grid();
  ComplexVector c = gl_nonlinear(g, state.A.coefficients(), p.gamma);
  const auto a = state.A.coefficients();
  for (int i = 0; i < g.N(); ++i) {
    if (g.mode(i) == -g.N() / 2) {
      c[i] = 0.0;
      continue;
    }
    c[i] += (1.0 - p.diffusion * g.xi(i) * g.xi(i)) * a[i];
  }
  return SpectralField::from_coefficients(g, std::move(c));
}

namespace detail {

inline ComplexVector gl_advance(const Grid1D& g, const GLParams& p, ComplexVector v, double span, double dT,
                                std::map<long long, Etdrk4>& cache) {
  if (span <= 0.0) return v;
  const int steps = std::max(1, static_cast<int>(std::ceil(span / dT - 1e-9)));
  const double h = span / steps;
  const long long key = std::llround(h * 1e12);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, Etdrk4(gl_linear_symbol(g, p), h)).first;
  const Etdrk4& stepper = it->second;
  auto nonlinear = [&](const ComplexVector& u) { return gl_nonlinear(g, u, p.gamma); };
  for (int s = 0; s < steps; ++s) v = stepper.step(v, nonlinear);
  return v;
}

}  // namespace detail

/// States at the requested (non-decreasing, >= state.T) times. Each interval
/// between consecutive times is split into equal ETDRK4 steps no longer than dT.
inline std::vector<GLState> gl_trajectory(const GLState& state, const GLParams& p, const std::vector<double>& times,
                                          double dT) {
  if (!(dT > 0.0)) throw ValidationError("gl: dT must be positive");
  check_gl_state(state);
  const Grid1D& g = state.slow_grid();
  std::map<long long, Etdrk4> cache;
  std::vector<GLState> out;
  out.reserve(times.size());
  ComplexVector v(state.A.coefficients().begin(), state.A.coefficients().end());
  double T = state.T;
  for (double target : times) {
    if (target < T - 1e-12) throw ValidationError("gl: sample times must be non-decreasing and >= the start time");
    v = detail::gl_advance(g, p, std::move(v), target - T, dT, cache);
    T = target;
    GLState s{SpectralField::from_coefficients(g, v), T};
    check_gl_state(s);
    out.push_back(std::move(s));
  }
  return out;
}

inline GLState gl_evolve(const GLState& state, const GLParams& p, double T_end, double dT) {
  if (!(T_end >= state.T)) throw ValidationError("gl: T_end precedes the current time");
  return gl_trajectory(state, p, {T_end}, dT).front();
}

// ---------------------------------------------------------------------------
// Ansatz

struct AnsatzFields {
  SpectralField psi;      // A(eps x) e^{ix} + c.c.
  SpectralField Psi;      // improved approximation
  SpectralField A0;       // slow grid
  SpectralField A2;       // slow grid
  SpectralField dPsi_dt;  // fast-time derivative of Psi
};

namespace detail {

/// E_0[f(eps .)] e^{ikx}
inline SpectralField embed_low(const SpectralField& slow, double eps, int k, const Grid1D& fast,
                               const FilterConfig& cfg) {
  return scale_embed_filtered(slow, eps, k, fast, [&](double xi) { return std::abs(xi) <= cfg.r0(); });
}

/// E0[a] e^{ix} + E0[a2] e^{2ix} eps + E0[a0] eps + conjugates, with a, a2, a0 on the slow grid.
inline SpectralField harmonic_sum(const SpectralField& a, const SpectralField& a2, const SpectralField& a0, double eps,
                                  const Grid1D& fast, const FilterConfig& cfg) {
  SpectralField out = embed_low(a, eps, 1, fast, cfg) + embed_low(a.conj(), eps, -1, fast, cfg);
  const SpectralField higher = embed_low(a2, eps, 2, fast, cfg) + embed_low(a2.conj(), eps, -2, fast, cfg) +
                               embed_low(a0, eps, 0, fast, cfg);
  return out + Complex(eps) * higher;
}

}  // namespace detail

inline AnsatzFields build_ansatz(const GLState& state, const GLParams& p, double eps, const Grid1D& fast,
                                 const FilterConfig& cfg) {
  const SpectralField& A = state.A;
  const SpectralField Abar = A.conj();
  const double b = p.a1 / p.harmonic_denominator();

  const SpectralField A0 = Complex(-2.0 * p.a1) * dealiased_product(A, Abar);
  const SpectralField A2 = Complex(-b) * dealiased_product(A, A);

  const SpectralField psi = scale_embed(A, eps, 1, fast) + scale_embed(Abar, eps, -1, fast);
  const SpectralField Psi = detail::harmonic_sum(A, A2, A0, eps, fast, cfg);

  const SpectralField AT = gl_rhs(state, p);
  const SpectralField A0T = Complex(-2.0 * p.a1) * (dealiased_product(AT, Abar) + dealiased_product(A, AT.conj()));
  const SpectralField A2T = Complex(-2.0 * b) * dealiased_product(A, AT);
  const SpectralField dPsi = Complex(eps * eps) * detail::harmonic_sum(AT, A2T, A0T, eps, fast, cfg);

  return {psi, Psi, A0, A2, dPsi};
}

}  // namespace fracsh
