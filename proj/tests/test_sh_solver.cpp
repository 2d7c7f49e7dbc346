#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fracsh/fracsh.hpp"

using namespace fracsh;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kPi = std::numbers::pi;
const double kLX = 16.0 * kPi;

double max_diff(const SpectralField& a, const SpectralField& b) { return (a - b).max_abs(); }

SpectralField initial_ansatz(double eps, double alpha, double a1, double a2) {
  const GLParams gl = gl_coefficients(alpha, a1, a2);
  const GLState s{default_initial_amplitude(slow_grid_for(kLX, 256)), 0.0};
  return (Complex(eps) * build_ansatz(s, gl, eps, fast_grid_for(kLX, eps), FilterConfig{}).Psi).real_part();
}

double inner(const SpectralField& a, const SpectralField& b) {
  double s = 0.0;
  for (int i = 0; i < a.grid().N(); ++i) s += (std::conj(a.coefficients()[i]) * b.coefficients()[i]).real();
  return s * a.grid().dxi();
}

}  // namespace

TEST_CASE("Swift-Hohenberg parameters", "[sh_solver]") {
  CHECK_NOTHROW(SHParams(FractionalPower(1.0), 0.1, 1.0, 1.0, 0.05));
  CHECK_THROWS_AS(SHParams(FractionalPower(1.0), 0.1, 1.0, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(SHParams(FractionalPower(1.0), -0.1, 1.0, 1.0, 0.05), ValidationError);
  CHECK_THROWS_AS(SHParams(FractionalPower(1.0), 0.5, 1.0, 1.0, 0.05), ValidationError);
}

TEST_CASE("Swift-Hohenberg nonlinearity", "[sh_solver]") {
  const Grid1D g(4, 64);
  const SHParams p(FractionalPower(1.0), 0.1, 1.0, 0.0, 0.05);
  CHECK(sh_nonlinearity(SpectralField(g), p).max_abs() == 0.0);
  const SHParams q(FractionalPower(1.0), 0.1, 0.7, 1.3, 0.05);
  const double c = 0.4;
  const SpectralField u = SpectralField::sample(g, [c](double) { return c; });
  const SpectralField n = sh_nonlinearity(u, q);
  for (auto v : n.values()) CHECK_THAT(v.real(), WithinAbs(-0.7 * c * c - 1.3 * c * c * c, 1e-14));

  const SpectralField cosx = SpectralField::sample(g, [](double x) { return std::cos(x); });
  const SpectralField expect = SpectralField::sample(g, [](double x) { return -0.5 * (1.0 + std::cos(2.0 * x)); });
  const SpectralField got = sh_nonlinearity(cosx, p);
  double err = 0.0;
  for (int i = 0; i < g.N(); ++i) err = std::max(err, std::abs(got.coefficients()[i] - expect.coefficients()[i]));
  CHECK(err < 1e-12);
}

TEST_CASE("linear steps equal the semigroup", "[sh_solver]") {
  const Grid1D g = fast_grid_for(kLX, 0.1);
  std::mt19937_64 rng(31);
  const SpectralField u0 = random_bandlimited(g, rng, 3.0, false);
  const SHParams p(FractionalPower(1.5), 0.1, 0.0, 0.0, 0.05);
  const SHState one = sh_step({u0, 0.0}, p);
  CHECK(one.t == 0.05);
  CHECK(max_diff(one.u, semigroup_apply(u0, 0.05, p.alpha(), 0.1)) < 1e-12);
  const std::vector<SHState> states = sh_evolve(u0, p, 20.0, 5);
  for (const auto& s : states) CHECK(max_diff(s.u, semigroup_apply(u0, s.t, p.alpha(), 0.1)) < 1e-10);
}

TEST_CASE("critical mode grows like exp(eps^2 t)", "[sh_solver]") {
  const double eps = 0.1;
  const Grid1D g = fast_grid_for(kLX, eps);
  const SpectralField u0 = SpectralField::sample(g, [](double x) { return 1e-6 * std::cos(x); });
  const SHParams p(FractionalPower(1.0), eps, 1.0, 1.0, 0.05);
  const std::vector<SHState> states = sh_evolve(u0, p, 20.0, 5);
  const int K = g.K();
  for (const auto& s : states) {
    const double ratio = std::abs(s.u.coefficient(K)) / std::abs(u0.coefficient(K));
    CHECK_THAT(ratio, WithinRel(std::exp(eps * eps * s.t), 1e-3));
  }
}

TEST_CASE("Swift-Hohenberg self-convergence in dt", "[sh_solver]") {
  const double eps = 0.1;
  const SpectralField u0 = initial_ansatz(eps, 1.0, 1.0, 1.0);
  const SHParams p(FractionalPower(1.0), eps, 1.0, 1.0, 0.05);
  const SpectralField coarse = sh_solution_at(u0, p, 1.0);
  const SpectralField fine = sh_solution_at(u0, p.with_dt(0.025), 1.0);
  CHECK(h_norm(coarse - fine, 0.0) < 1e-9);
  CHECK(sh_select_dt(u0, p).dt() == 0.05);
}

TEST_CASE("zero initial data stays zero", "[sh_solver]") {
  const Grid1D g = fast_grid_for(kLX, 0.2);
  const SHParams p(FractionalPower(1.3), 0.2, 1.0, 1.0, 0.05);
  for (const auto& s : sh_evolve(SpectralField(g), p, 5.0, 6)) CHECK(s.u.max_abs() == 0.0);
}

TEST_CASE("solution started on the ansatz keeps the pattern", "[sh_solver]") {
  const double eps = 0.1;
  const FilterConfig cfg;
  const GLParams gl = gl_coefficients(1.0, 0.0, 1.0);
  SweepSetup setup;
  const std::vector<GLState> traj = gl_sample_trajectory(gl, setup);
  const Grid1D fast = fast_grid_for(kLX, eps);
  const SpectralField u0 = (Complex(eps) * build_ansatz(traj.front(), gl, eps, fast, cfg).Psi).real_part();
  const SHParams p(FractionalPower(1.0), eps, 0.0, 1.0, 0.05);
  const std::vector<SHState> states = sh_evolve(u0, p, 1.0 / (eps * eps), setup.samples);
  REQUIRE(states.size() == traj.size());
  for (size_t k = 0; k < states.size(); ++k) {
    const double ref = eps * build_ansatz(traj[k], gl, eps, fast, cfg).Psi.max_abs();
    const double sup = states[k].u.max_abs();
    CHECK(sup >= 0.5 * ref);
    CHECK(sup <= 2.0 * ref);
    CHECK(states[k].u.max_imag() < 1e-10);
  }
}

TEST_CASE("instantaneous L2 balance", "[sh_solver]") {
  const double eps = 0.1;
  const SpectralField u0 = initial_ansatz(eps, 1.0, 0.0, 1.0);
  const SHParams p(FractionalPower(1.0), eps, 0.0, 1.0, 0.05);
  const double spectral = 2.0 * inner(u0, sh_rhs(u0, p));
  const double h = 1e-3;
  const double n0 = h_norm(u0, 0.0) * h_norm(u0, 0.0);
  auto norm_at = [&](double t) {
    const SpectralField u = sh_solution_at(u0, p.with_dt(t), t);
    return h_norm(u, 0.0) * h_norm(u, 0.0);
  };
  const double d1 = (norm_at(h) - n0) / h;
  const double d2 = (norm_at(2.0 * h) - n0) / (2.0 * h);
  CHECK_THAT(2.0 * d1 - d2, WithinRel(spectral, 1e-6));
}

TEST_CASE("translation equivariance", "[sh_solver]") {
  const double eps = 0.2;
  const Grid1D g = fast_grid_for(kLX, eps);
  std::mt19937_64 rng(37);
  const SpectralField u0 = Complex(0.3) * random_bandlimited(g, rng, 2.0, false);
  const int shift = 37;
  auto shifted = [&](const SpectralField& f) {
    ComplexVector v(g.N());
    for (int n = 0; n < g.N(); ++n) v[n] = f.values()[(n + shift) % g.N()];
    return SpectralField::from_values(g, v);
  };
  const SHParams p(FractionalPower(1.5), eps, 1.0, 1.0, 0.05);
  const SpectralField a = sh_solution_at(shifted(u0), p, 5.0);
  const SpectralField b = shifted(sh_solution_at(u0, p, 5.0));
  CHECK(max_diff(a, b) < 1e-9);
}

TEST_CASE("checkpoint round trip", "[sh_solver]") {
  const Grid1D g(2, 32);
  std::mt19937_64 rng(41);
  const std::vector<SHState> states{{random_bandlimited(g, rng, 2.0, false), 0.0},
                                    {random_bandlimited(g, rng, 2.0, true), 0.5}};
  std::stringstream ss;
  write_checkpoint(ss, states);
  const std::string text = ss.str();
  CHECK(text.rfind("t,j,re,im\n", 0) == 0);
  const std::vector<SHState> back = read_checkpoint(ss, g);
  REQUIRE(back.size() == 2);
  for (size_t k = 0; k < 2; ++k) {
    CHECK(back[k].t == states[k].t);
    for (int i = 0; i < g.N(); ++i) CHECK(back[k].u.coefficients()[i] == states[k].u.coefficients()[i]);
  }
  std::stringstream bad("t,j,re,im\n0,1,2\n");
  CHECK_THROWS_AS(read_checkpoint(bad, g), ValidationError);
  std::stringstream truncated("t,j,re,im\n0,1,2,3\n");
  CHECK_THROWS_AS(read_checkpoint(truncated, g), ValidationError);
}

TEST_CASE("blow-up and resolution guards", "[sh_solver]") {
  const Grid1D g = fast_grid_for(kLX, 0.2);
  const SHParams p(FractionalPower(1.0), 0.2, 0.0, -1.0, 0.05);
  const SpectralField big = SpectralField::sample(g, [](double x) { return 3.0 * std::cos(x); });
  CHECK_THROWS_AS(sh_evolve(big, p, 50.0, 3), NumericError);
}
