#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nl4s/error.hpp"
#include "nl4s/spectral.hpp"
#include "support.hpp"

using namespace nl4s;
using namespace nl4s::testing;

TEST_CASE("grid geometry") {
  const GridSpec g(1, 64, 20.0);
  CHECK(g.dx() == doctest::Approx(40.0 / 64));
  CHECK(g.coordinate(0) == -20.0);
  CHECK(g.coordinate(32) == doctest::Approx(0.0));
  CHECK(g.wavenumber(31) == 31);
  CHECK(g.wavenumber(32) == -32);
  CHECK(g.nyquist() == doctest::Approx(std::numbers::pi / 20.0 * 32));
  CHECK_THROWS_AS(GridSpec(1, 48, 1.0), DomainError);
  CHECK_THROWS_AS(GridSpec(3, 64, 1.0), DomainError);
  CHECK_THROWS_AS(GridSpec(1, 8, 1.0), DomainError);
  CHECK_THROWS_AS(GridSpec(1, 64, -1.0), DomainError);
}

TEST_CASE("forward transform matches a direct DFT") {
  const GridSpec g(1, 128, 5.0);
  const auto f = white_noise(g, 3);
  const auto c = to_spectral(f);
  CHECK(rel_l2(c.coeffs(), naive_dft_1d(f)) < 1e-13);
}

TEST_CASE("Plancherel and roundtrip in 1D and 2D") {
  for (int dim : {1, 2}) {
    const GridSpec g(dim, dim == 1 ? 256 : 64, 7.0);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto f = white_noise(g, seed);
      const auto c = to_spectral(f);
      CHECK(std::abs(l2_norm(c) - grid_l2(f)) / grid_l2(f) < 1e-13);
      const auto back = to_physical(c);
      CHECK(rel_l2(back.values(), f.values()) < 1e-14);
    }
  }
}

TEST_CASE("transform rejects a grid mismatch") {
  const GridSpec a(1, 64, 1.0), b(1, 128, 1.0);
  CHECK_THROWS_AS(apply_multiplier(PhysicalField(a), Multiplier::identity(b)), GridMismatch);
}

TEST_CASE("derivatives of single modes are exact") {
  const GridSpec g(1, 64, 3.0);
  const int k = 5;
  const double xi = g.frequency(k);
  const auto e = sample(g, [&](auto x) { return std::polar(1.0, xi * x[0]); });
  const auto d = partial_derivative(e, 0);
  for (std::size_t j = 0; j < g.n(); ++j) CHECK(std::abs(d[j] - Complex(0, xi) * e[j]) < 1e-12);

  const auto h = fractional_derivative(e, 1.5, Bracket::homogeneous);
  const auto b = fractional_derivative(e, -2.0, Bracket::inhomogeneous);
  for (std::size_t j = 0; j < g.n(); ++j) {
    CHECK(std::abs(h.field[j] - std::pow(xi, 1.5) * e[j]) < 1e-12);
    CHECK(std::abs(b.field[j] - std::pow(1 + xi * xi, -1.0) * e[j]) < 1e-12);
  }
  CHECK_FALSE(h.zero_mode_annihilated);
}

TEST_CASE("negative homogeneous powers drop the mean and say so") {
  const GridSpec g(1, 32, 1.0);
  const auto c = sample(g, [](auto) { return Complex(2.0); });
  const auto r = fractional_derivative(c, -1.0, Bracket::homogeneous);
  CHECK(r.zero_mode_annihilated);
  CHECK(l2_norm(r.field) < 1e-14);
  CHECK_THROWS_AS(fractional_derivative(c, 4.5, Bracket::homogeneous), DomainError);
}

TEST_CASE("partial derivative zeroes the Nyquist mode") {
  const GridSpec g(1, 16, 1.0);
  const auto alt = sample(g, [&](auto x) { return std::polar(1.0, g.nyquist() * (x[0] + 1.0)); });
  CHECK(l2_norm(partial_derivative(alt, 0)) < 1e-13);
}

TEST_CASE("LP bump shape") {
  CHECK(lp_bump(0.0) == 1.0);
  CHECK(lp_bump(1.0) == 1.0);
  CHECK(lp_bump(2.0) == 0.0);
  CHECK(lp_bump(3.0) == 0.0);
  CHECK(lp_bump(std::sqrt(2.0)) == doctest::Approx(0.5));
  double prev = 1.0;
  for (double r = 1.0; r <= 2.0; r += 1e-3) {
    CHECK(lp_bump(r) <= prev + 1e-15);
    prev = lp_bump(r);
  }
  CHECK(is_dyadic(8.0));
  CHECK(is_dyadic(0.25));
  CHECK_FALSE(is_dyadic(6.0));
  CHECK_THROWS_AS(lp_project(PhysicalField(GridSpec(1, 16, 1.0)), 3.0, LpMode::leq), DomainError);
}

TEST_CASE("dyadic partition reconstructs the field") {
  const GridSpec g(2, 64, 6.0);
  const auto f = white_noise(g, 11);
  const double M0 = 0.25;
  auto sum = lp_project(f, M0, LpMode::leq);
  for (double M = 2 * M0; M <= 2 * g.max_frequency(); M *= 2) sum += lp_project(f, M, LpMode::eq);
  CHECK(rel_l2(sum.values(), f.values()) < 1e-13);
  const auto lo = lp_project(f, 4.0, LpMode::leq);
  const auto hi = lp_project(f, 4.0, LpMode::gt);
  CHECK(rel_l2((lo + hi).values(), f.values()) < 1e-14);
  CHECK(rel_l2(lp_project(f, 64.0, LpMode::leq).values(), f.values()) < 1e-14);
}

TEST_CASE("Bernstein ratios respect the dyadic constants") {
  const GridSpec g(1, 512, 20.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto f = white_noise(g, seed);
    for (double M : {1.0, 4.0, 16.0}) {
      for (double s : {0.5, 1.0, 2.0}) {
        const auto r = bernstein_check(f, M, s);
        CHECK(r.annulus_ratio <= std::pow(2.0, s) + 1e-12);
        CHECK(r.annulus_ratio >= std::pow(2.0, -s) - 1e-12);
        CHECK(r.low_ratio <= std::pow(2.0, s) + 1e-12);
        CHECK(r.high_ratio <= std::pow(2.0, s) + 1e-12);
      }
    }
  }
}

TEST_CASE("Bernstein check refuses a vanishing projection") {
  const GridSpec g(1, 64, 1.0);
  const auto c = sample(g, [](auto) { return Complex(1.0); });
  CHECK_THROWS_AS(bernstein_check(c, 8.0, 1.0), DomainError);
}

TEST_CASE("multipliers compose and reject non-finite symbols") {
  const GridSpec g(1, 64, 2.0);
  const auto a = fractional_multiplier(g, 1.0, Bracket::inhomogeneous);
  const auto b = fractional_multiplier(g, -1.0, Bracket::inhomogeneous);
  const auto f = white_noise(g, 5);
  CHECK(rel_l2(apply_multiplier(f, a * b).values(), f.values()) < 1e-14);
  CHECK_THROWS_AS(Multiplier::radial(g, [](double k) { return Complex(1.0 / k); }), DomainError);
}
