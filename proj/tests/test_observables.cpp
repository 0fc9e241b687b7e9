#include <doctest.h>

#include <cmath>

#include "nl4s/error.hpp"
#include "nl4s/observables.hpp"
#include "support.hpp"

using namespace nl4s;
using namespace nl4s::testing;

namespace {

// Brute-force windowed mass: every center, every point, periodic distance.
double brute_concentration(const PhysicalField& u, double alpha) {
  const auto& g = u.grid();
  const double P = 2.0 * g.half_width();
  double best = 0.0;
  for (std::size_t c = 0; c < u.size(); ++c) {
    const auto ci = g.unflatten(c);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const auto ii = g.unflatten(i);
      double r2 = 0.0;
      for (int a = 0; a < g.dim(); ++a) {
        double d = std::abs(g.coordinate(ii[a]) - g.coordinate(ci[a]));
        d = std::min(d, P - d);
        r2 += d * d;
      }
      if (r2 <= alpha * alpha * (1 + 1e-12)) s += std::norm(u[i]);
    }
    best = std::max(best, s * g.cell_volume());
  }
  return best;
}

}  // namespace

TEST_CASE("energy of a plane wave has a closed form") {
  const GridSpec g(1, 64, 4.0);
  const double xi = g.frequency(3);
  const double A = 0.7;
  const auto u = sample(g, [&](auto x) { return A * std::polar(1.0, xi * x[0]); });
  NonlinearityParams p{8.0, -1, 1};
  const double V = g.box_volume();
  const double expect = 0.5 * std::pow(xi, 4) * A * A * V - 0.5 * xi * xi * A * A * V - std::pow(A, 10) * V / 10.0;
  CHECK(energy(u, p) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(mass(u) == doctest::Approx(A * A * V).epsilon(1e-13));
  CHECK(sup_norm(u) == doctest::Approx(A));
  CHECK(lebesgue_norm(u, 4.0) == doctest::Approx(A * std::pow(V, 0.25)).epsilon(1e-13));
  CHECK(lebesgue_norm(u, Exponent::infinity()) == doctest::Approx(A));
  CHECK(sobolev_norm(u, 1.5, Bracket::inhomogeneous) ==
        doctest::Approx(std::pow(1 + xi * xi, 0.75) * A * std::sqrt(V)).epsilon(1e-12));
}

TEST_CASE("energy is invariant under translation and phase") {
  const GridSpec g(1, 256, 10.0);
  const auto u = smooth_random(g, 2);
  std::vector<Complex> shifted(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) shifted[i] = std::polar(1.0, 0.3) * u[(i + 17) % u.size()];
  const PhysicalField v(g, shifted);
  const NonlinearityParams p;
  CHECK(energy(v, p) == doctest::Approx(energy(u, p)).epsilon(1e-12));
  CHECK(energy(to_spectral(u), u, p) == doctest::Approx(energy(u, p)).epsilon(1e-13));
}

TEST_CASE("Wirtinger derivatives match finite differences") {
  const NonlinearityParams p{3.0, -1, 0};
  const GridSpec g(1, 16, 1.0);
  const Complex z0(0.6, -0.4);
  const PhysicalField u(g, std::vector<Complex>(16, z0));
  const auto [dz, dzbar] = F_prime(u, p);
  auto F = [&](Complex z) { return std::pow(std::abs(z), p.p) * z; };
  const double h = 1e-6;
  const Complex dx = (F(z0 + h) - F(z0 - h)) / (2 * h);
  const Complex dy = (F(z0 + Complex(0, h)) - F(z0 - Complex(0, h))) / (2 * h);
  CHECK(std::abs(dz[0] - 0.5 * (dx - Complex(0, 1) * dy)) < 1e-8);
  CHECK(std::abs(dzbar[0] - 0.5 * (dx + Complex(0, 1) * dy)) < 1e-8);
  const auto zero = F_prime(PhysicalField(g), p);
  CHECK(std::abs(zero.second[0]) == 0.0);
}

TEST_CASE("concentration matches brute force, grows with alpha and stays below the mass") {
  for (int dim : {1, 2}) {
    const GridSpec g(dim, dim == 1 ? 128 : 32, 5.0);
    const auto u = smooth_random(g, 7 + dim);
    double prev = 0.0;
    for (double a : {0.3, 0.8, 1.5, 3.0, 5.0}) {
      const auto c = concentration(u, a);
      CHECK(c.value == doctest::Approx(brute_concentration(u, a)).epsilon(1e-10));
      CHECK(c.value >= prev - 1e-12);
      CHECK(c.value <= mass(u) * (1 + 1e-12));
      prev = c.value;
    }
  }
}

TEST_CASE("spectral tail and boundary mass") {
  const GridSpec g(1, 64, 4.0);
  const auto lo = sample(g, [&](auto x) { return std::polar(1.0, g.frequency(2) * x[0]); });
  const auto hi = sample(g, [&](auto x) { return std::polar(1.0, g.frequency(30) * x[0]); });
  CHECK(spectral_tail_fraction(to_spectral(lo)) < 1e-28);
  CHECK(spectral_tail_fraction(to_spectral(hi)) == doctest::Approx(1.0));
  const auto bump = sample(g, [](auto x) { return Complex(std::exp(-x[0] * x[0])); });
  CHECK(boundary_mass_fraction(bump) < 1e-6);
}

TEST_CASE("spacetime norm of a time-constant field") {
  const GridSpec g(1, 64, 4.0);
  const auto u = smooth_random(g, 1);
  std::vector<TimedField> s{{0.0, u}, {0.5, u}, {2.0, u}};
  const double q4 = lebesgue_norm(u, 4.0);
  CHECK(spacetime_norm(s, Exponent(2), Exponent(4)) == doctest::Approx(q4 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(spacetime_norm(s, Exponent::infinity(), Exponent(4)) == doctest::Approx(q4));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((NonlinearityParams{0.0, -1, 0}).validate(), DomainError);
  CHECK_THROWS_AS((NonlinearityParams{8.0, 2, 0}).validate(), DomainError);
  CHECK(NonlinearityParams::mass_critical(2).p == 4.0);
}
