#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "fracsh/fracsh.hpp"

using namespace fracsh;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kPi = std::numbers::pi;

SpectralField gaussian(const Grid1D& g) {
  return SpectralField::sample(g, [](double x) { return std::exp(-x * x / 2.0); });
}

double max_diff(const SpectralField& a, const SpectralField& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("grid geometry", "[spectral_core]") {
  const Grid1D g(8, 128);
  CHECK(g.length() == 2.0 * kPi * 8);
  CHECK(g.dxi() == 1.0 / 8);
  CHECK(g.x(0) == -0.5 * g.length());
  CHECK(g.xi(g.index(8)) == 1.0);
  CHECK(g.xi(g.index(-16)) == -2.0);
  CHECK(g.mode(g.N() / 2) == -g.N() / 2);
  CHECK_THROWS_AS(Grid1D(8, 127), ValidationError);
  CHECK_THROWS_AS(Grid1D(8, 64), ValidationError);
  CHECK_THROWS_AS(Grid1D(0, 64), ValidationError);
}

TEST_CASE("admissible eps are commensurate with the slow period", "[spectral_core]") {
  const double LX = 16.0 * kPi;
  CHECK(fast_half_periods(LX, 0.2) == 40);
  CHECK(fast_half_periods(LX, 0.1) == 80);
  CHECK(fast_half_periods(LX, 0.05) == 160);
  CHECK(is_admissible(LX, 0.1));
  CHECK_FALSE(is_admissible(LX, 0.3));
  CHECK_THROWS_AS(fast_half_periods(LX, 0.3), ValidationError);
  const Grid1D fast = fast_grid_for(LX, 0.1);
  CHECK(fast.K() == 80);
  CHECK(fast.N() == 1280);
  CHECK_THROWS_AS(slow_grid_for(5.0, 256), ValidationError);
}

TEST_CASE("round trip and conjugate symmetry", "[spectral_core]") {
  const Grid1D g(8, 256);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  ComplexVector v(g.N());
  for (auto& z : v) z = {nd(rng), 0.0};
  const SpectralField f = SpectralField::from_values(g, v);
  const ComplexVector back = inverse_transform(g, forward_transform(g, v));
  double err = 0.0, scale = 0.0;
  for (int n = 0; n < g.N(); ++n) {
    err = std::max(err, std::abs(back[n] - v[n]));
    scale = std::max(scale, std::abs(v[n]));
  }
  CHECK(err <= 1e-12 * scale);
  double sym = 0.0;
  for (int j = 1; j < g.N() / 2; ++j) sym = std::max(sym, std::abs(f.coefficient(-j) - std::conj(f.coefficient(j))));
  CHECK(sym < 1e-12);
}

TEST_CASE("forward transform of a constant, a lattice plane wave and a Gaussian", "[spectral_core]") {
  const Grid1D g(8, 128);
  const SpectralField one = SpectralField::sample(g, [](double) { return 1.0; });
  CHECK_THAT(one.coefficient(0).real(), WithinRel(g.length() / kSqrt2Pi, 1e-13));
  double rest = 0.0;
  for (int i = 1; i < g.N(); ++i) rest = std::max(rest, std::abs(one.coefficients()[i]));
  CHECK(rest < 1e-12);

  const SpectralField wave = SpectralField::sample(g, [](double x) { return std::polar(1.0, x); });
  for (int i = 0; i < g.N(); ++i) {
    if (g.mode(i) == 8) CHECK_THAT(std::abs(wave.coefficients()[i]), WithinRel(g.length() / kSqrt2Pi, 1e-13));
    else CHECK(std::abs(wave.coefficients()[i]) < 1e-11);
  }

  const Grid1D h(8, 512);
  const SpectralField gs = gaussian(h);
  double dev = 0.0;
  for (int i = 0; i < h.N(); ++i) {
    const double xi = h.xi(i);
    if (std::abs(xi) <= 6.0) dev = std::max(dev, std::abs(gs.coefficients()[i] - std::exp(-xi * xi / 2.0)));
  }
  CHECK(dev < 1e-10);
}

TEST_CASE("Sobolev norms of the Gaussian and a plane wave", "[spectral_core]") {
  const Grid1D g(8, 512);
  const SpectralField gs = gaussian(g);
  CHECK_THAT(h_norm(gs, 0.0), WithinAbs(std::pow(kPi, 0.25), 1e-8));
  CHECK_THAT(h_norm(gs, 1.0), WithinAbs(std::sqrt(1.5 * std::sqrt(kPi)), 1e-8));
  const SpectralField wave = SpectralField::sample(g, [](double x) { return std::polar(1.0, x); });
  for (double theta : {0.0, 0.5, 1.0, 2.5}) {
    CHECK_THAT(h_norm(wave, theta), WithinRel(std::pow(2.0, theta / 2.0) * std::sqrt(g.length()), 1e-12));
  }
  CHECK_THROWS_AS(SobolevIndex(-1.0), ValidationError);
  CHECK_THROWS_AS(SobolevIndex(std::nan("")), ValidationError);
}

TEST_CASE("Parseval identity", "[spectral_core]") {
  const Grid1D g(8, 256);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const SpectralField f = random_bandlimited(g, rng, 3.0, trial % 2 == 1);
    const double n0 = h_norm(f, 0.0);
    CHECK(std::abs(n0 * n0 - l2_physical_squared(f)) <= 1e-10 * n0 * n0);
  }
}

TEST_CASE("Fourier L1 norm", "[spectral_core]") {
  const Grid1D g(8, 512);
  CHECK_THAT(l1_fourier_norm(gaussian(g)), WithinAbs(std::sqrt(2.0 * kPi), 1e-6));
  CHECK(l1_fourier_norm(SpectralField(g)) == 0.0);
  const SpectralField wave = SpectralField::sample(g, [](double x) { return std::polar(1.0, x); });
  CHECK_THAT(l1_fourier_norm(wave), WithinRel(std::sqrt(2.0 * kPi), 1e-12));
}

TEST_CASE("C_b^k norms", "[spectral_core]") {
  const Grid1D g(8, 512);
  const SpectralField s = SpectralField::sample(g, [](double x) { return std::sin(x); });
  CHECK_THAT(cb_norm(s, 0), WithinAbs(1.0, 1e-10));
  CHECK_THAT(cb_norm(s, 1), WithinAbs(2.0, 1e-10));
  CHECK_THAT(cb_norm(gaussian(g), 1), WithinAbs(1.0 + std::exp(-0.5), 1e-6));
}

TEST_CASE("scale_embed", "[spectral_core]") {
  const double LX = 16.0 * kPi;
  const Grid1D slow = slow_grid_for(LX, 256);
  const Grid1D fast = fast_grid_for(LX, 0.1);
  const SpectralField one = SpectralField::sample(slow, [](double) { return 1.0; });
  const SpectralField wave = SpectralField::sample(fast, [](double x) { return std::polar(1.0, x); });
  CHECK(max_diff(scale_embed(one, 0.1, 1, fast), wave) < 1e-11);

  const SpectralField gs = gaussian(slow);
  CHECK(max_diff(scale_embed(gs, 1.0, 0, slow), gs) < 1e-14);

  const SpectralField sech = SpectralField::sample(slow, [](double X) { return 1.0 / std::cosh(X); });
  const SpectralField embedded = scale_embed(sech, 0.1, 2, fast);
  const SpectralField direct =
      SpectralField::sample(fast, [](double x) { return std::polar(1.0 / std::cosh(0.1 * x), 2.0 * x); });
  CHECK(max_diff(embedded, direct) < 1e-10);
  CHECK_THROWS_AS(scale_embed(gs, 0.3, 1, fast), ValidationError);
}

TEST_CASE("scaled Sobolev estimate on random band-limited fields", "[spectral_core]") {
  const double LX = 16.0 * kPi;
  const Grid1D slow = slow_grid_for(LX, 256);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 3; ++trial) {
    const SpectralField f = random_bandlimited(slow, rng, 1.0, false);
    for (double eps : {0.2, 0.1, 0.05}) {
      const Grid1D fast = fast_grid_for(LX, eps);
      for (int k : {0, 1, 2}) {
        const SpectralField e = scale_embed(f, eps, k, fast);
        for (double mu : {0.0, 1.0, 2.0}) {
          const double bound = std::pow(1.0 + k + k * k, mu / 2.0) / std::sqrt(eps) * h_norm(f, mu);
          CHECK(h_norm(e, mu) <= 1.05 * bound);
        }
      }
    }
  }
}

TEST_CASE("product estimates with constant one", "[spectral_core]") {
  const Grid1D g(8, 256);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    const SpectralField f = random_bandlimited(g, rng, 2.0, false);
    const SpectralField h = random_bandlimited(g, rng, 2.0, false);
    const SpectralField w = random_bandlimited(g, rng, 2.0, false);
    for (double mu : {1.0, 1.5, 2.0}) {
      const double lhs = h_norm(dealiased_product(f, h), mu);
      const double rhs = h_norm(f, mu) * l1_fourier_norm(h) + l1_fourier_norm(f) * h_norm(h, mu);
      CHECK(lhs <= rhs + 1e-9);
      const double lhs3 = h_norm(dealiased_product(dealiased_product(f, h), w), mu);
      const double rhs3 = h_norm(f, mu) * l1_fourier_norm(h) * l1_fourier_norm(w) +
                          l1_fourier_norm(f) * h_norm(h, mu) * l1_fourier_norm(w) +
                          l1_fourier_norm(f) * l1_fourier_norm(h) * h_norm(w, mu);
      CHECK(lhs3 <= rhs3 + 1e-9);
    }
  }
}

TEST_CASE("L1 norm is invariant under scaling and modulation", "[spectral_core]") {
  const double LX = 16.0 * kPi;
  const Grid1D slow = slow_grid_for(LX, 256);
  std::mt19937_64 rng(9);
  const SpectralField f = random_bandlimited(slow, rng, 1.0, true);
  for (double eps : {0.2, 0.1, 0.05}) {
    const Grid1D fast = fast_grid_for(LX, eps);
    for (int k : {-2, 0, 1, 3}) CHECK_THAT(l1_fourier_norm(scale_embed(f, eps, k, fast)), WithinAbs(l1_fourier_norm(f), 1e-9));
  }
}

TEST_CASE("L1 norm bounded by the Sobolev norm", "[spectral_core]") {
  const Grid1D g(8, 256);
  std::mt19937_64 rng(13);
  for (double mu : {1.0, 2.0}) {
    const double C = std::sqrt(integrate([mu](double t) {
      const double xi = std::tan(t);
      return std::pow(1.0 + xi * xi, 1.0 - mu);
    }, -0.5 * kPi, 0.5 * kPi));
    if (mu == 1.0) CHECK_THAT(C, WithinRel(std::sqrt(kPi), 1e-9));
    for (int trial = 0; trial < 4; ++trial) {
      const SpectralField f = random_bandlimited(g, rng, 3.0, false);
      CHECK(l1_fourier_norm(f) <= C * h_norm(f, mu) + 1e-9);
    }
  }
}

TEST_CASE("dealiased products keep retained modes exact", "[spectral_core]") {
  const Grid1D g(2, 32);
  const SpectralField c = SpectralField::sample(g, [](double x) { return std::cos(x); });
  const SpectralField expect = SpectralField::sample(g, [](double x) { return std::cos(x) * std::cos(x) * std::cos(x); });
  CHECK(max_diff(dealiased_product(dealiased_product(c, c), c), expect) < 1e-13);
}

TEST_CASE("plan cache is safe under concurrent use", "[spectral_core]") {
  const Grid1D g(8, 256);
  std::mt19937_64 rng(1);
  const SpectralField f = random_bandlimited(g, rng, 3.0, true);
  const double ref = h_norm(SpectralField::from_values(g, ComplexVector(f.values().begin(), f.values().end())), 1.0);
  std::vector<double> out(16, 0.0);
  parallel_for(16, 4, [&](int i) {
    const SpectralField h = SpectralField::from_values(g, ComplexVector(f.values().begin(), f.values().end()));
    out[i] = h_norm(h, 1.0);
  });
  for (double v : out) CHECK(v == ref);
}
