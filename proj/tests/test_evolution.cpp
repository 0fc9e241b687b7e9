#include <doctest.h>

#include <cmath>
#include <vector>

#include "nl4s/error.hpp"
#include "nl4s/evolution.hpp"
#include "nl4s/ground_state.hpp"
#include "support.hpp"

using namespace nl4s;
using namespace nl4s::testing;

TEST_CASE("linear step is the exact propagator on a plane wave") {
  const GridSpec g(1, 64, 5.0);
  const double xi = g.frequency(7);
  const auto u = sample(g, [&](auto x) { return std::polar(1.0, xi * x[0]); });
  const NonlinearityParams p{8.0, -1, 1};
  const double tau = 0.013;
  const auto v = linear_step(u, tau, p);
  const Complex ph = std::polar(1.0, tau * (std::pow(xi, 4) - xi * xi));
  for (std::size_t j = 0; j < g.n(); ++j) CHECK(std::abs(v[j] - ph * u[j]) < 1e-12);
}

TEST_CASE("nonlinear step rotates the phase by mu tau |u|^p") {
  const GridSpec g(1, 32, 1.0);
  const auto u = smooth_random(g, 1);
  const NonlinearityParams p;
  const auto v = nonlinear_step(u, 0.2, p);
  for (std::size_t j = 0; j < g.n(); ++j) {
    CHECK(std::abs(v[j] - u[j] * std::polar(1.0, -0.2 * std::pow(std::abs(u[j]), 8))) < 1e-14);
  }
}

TEST_CASE("Strang step is time reversible") {
  const GridSpec g(1, 128, 6.0);
  const auto u = smooth_random(g, 5);
  const NonlinearityParams p;
  const auto back = strang_step(strang_step(u, 1e-3, p), -1e-3, p);
  CHECK(rel_l2(back.values(), u.values()) < 1e-12);
}

TEST_CASE("snapshots land on requested times and mass is conserved") {
  const GridSpec g(1, 256, 20.0);
  const auto u0 = Complex(0.5) * gaussian_initial_guess(g);
  EvolveConfig cfg;
  cfg.dt0 = 7e-3;
  cfg.T_max = 0.1;
  cfg.snapshot_interval = 0.025;
  cfg.snapshot_times = {0.011};
  const auto tr = strang_evolve(u0, cfg);
  std::vector<double> expect{0.0, 0.011, 0.025, 0.05, 0.075, 0.1};
  REQUIRE(tr.snapshots.size() == expect.size());
  for (std::size_t k = 0; k < expect.size(); ++k) CHECK(tr.snapshots[k].time == doctest::Approx(expect[k]).epsilon(1e-14));
  CHECK(tr.snapshots.back().time == 0.1);
  CHECK(tr.stop == StopReason::horizon);
  for (const auto& r : tr.series) CHECK(std::abs(r.mass - tr.series.front().mass) < 1e-12 * tr.series.front().mass);
}

TEST_CASE("adaptive step follows c_dt / (1 + ||u||^p)") {
  const GridSpec g(1, 256, 20.0);
  const auto u0 = Complex(1.5) * gaussian_initial_guess(g);
  EvolveConfig cfg;
  cfg.dt0 = 1e-3;
  cfg.c_dt = 1e-3;
  cfg.T_max = 0.01;
  const auto tr = strang_evolve(u0, cfg);
  const double expect = 1e-3 / (1.0 + std::pow(1.5, 8));
  CHECK(tr.series[1].dt == doctest::Approx(expect).epsilon(1e-12));
  EvolveConfig fixed = cfg;
  fixed.adaptive = false;
  const auto tf = strang_evolve(u0, fixed);
  CHECK(tf.steps == 10);
}

TEST_CASE("calibrated c_dt makes the first step dt0") {
  const GridSpec g(1, 128, 20.0);
  const auto u0 = Complex(1.2) * gaussian_initial_guess(g);
  EvolveConfig cfg;
  cfg.dt0 = 2e-4;
  cfg.T_max = 1e-3;
  const auto tr = strang_evolve(u0, cfg);
  CHECK(tr.series[1].dt == doctest::Approx(2e-4).epsilon(1e-12));
  CHECK(tr.c_dt == doctest::Approx(2e-4 * (1 + std::pow(1.2, 8))).epsilon(1e-12));
}

TEST_CASE("supercritical data trips a stop rule and the fit sees the blowup") {
  const GridSpec g(1, 1024, 20.0);
  const auto Q = petviashvili_solve(g, 8.0, gaussian_initial_guess(g));
  EvolveConfig cfg;
  cfg.T_max = 1.0;
  const auto tr = strang_evolve(Complex(1.2) * Q.Q, cfg);
  CHECK(tr.stopped_on_blowup());
  CHECK(tr.final_time() < 0.2);
  const auto fit = detect_blowup_fit(tr, 1.5);
  CHECK(fit.detected);
  CHECK(fit.t_star >= tr.final_time());
  CHECK(fit.t_star < tr.final_time() * 1.01);
}

TEST_CASE("synthetic blowup series is recovered") {
  for (double beta : {0.3, 0.5, 1.0}) {
    const double T = 0.37, C = 2.0;
    std::vector<double> t, y;
    for (int k = 0; k < 400; ++k) {
      const double tk = T * (1.0 - std::pow(0.97, k));
      t.push_back(tk);
      y.push_back(C * std::pow(T - tk, -beta) * (1.0 + 1e-3 * std::sin(k)));
    }
    const auto r = fit_blowup_series(t, y, y.front(), 1.5, true);
    CHECK(r.detected);
    CHECK(std::abs(r.t_star - T) / T < 0.01);
    CHECK(std::abs(r.beta - beta) / beta < 0.04);
  }
}

TEST_CASE("fit declines a rate with too few samples and rejects a non-monotone window") {
  std::vector<double> t{0, 0.1, 0.2}, y{1, 3, 9};
  const auto few = fit_blowup_series(t, y, 1.0, 1.5, true);
  CHECK(few.detected);
  CHECK(std::isnan(few.beta));
  CHECK_FALSE(fit_blowup_series(t, y, 1.0, 1.5, false).detected);
  std::vector<double> t2, y2;
  for (int k = 0; k < 40; ++k) {
    t2.push_back(0.01 * k);
    y2.push_back(5.0 + std::sin(k));
  }
  CHECK_FALSE(fit_blowup_series(t2, y2, 1.0, 1.5, true).detected);
}

TEST_CASE("Strang splitting is second order") {
  const GridSpec g(1, 256, 20.0);
  const auto Q = petviashvili_solve(g, 8.0, gaussian_initial_guess(g));
  EvolveConfig cfg;
  cfg.dt0 = 2e-4;
  cfg.T_max = 0.05;
  const double order = richardson_order(Complex(0.9) * Q.Q, cfg);
  CHECK(order > 1.8);
  CHECK(order < 2.2);
}

TEST_CASE("scaling symmetry holds to discretization accuracy") {
  const GridSpec g(1, 256, 20.0);
  const auto u0 = Complex(0.6) * gaussian_initial_guess(g, 2.0);
  EvolveConfig cfg;
  cfg.dt0 = 1e-3;
  cfg.T_max = 0.05;
  CHECK(scaling_test(u0, 1.0, cfg).discrepancy == 0.0);
  const auto r = scaling_test(u0, 2.0, cfg);
  CHECK(r.discrepancy <= 10 * r.richardson_estimate);
  CHECK(std::abs(r.mass_scaled - r.mass_original) < 1e-12 * r.mass_original);
  CHECK_THROWS_AS(scaling_test(u0, 3.0, cfg), GridMismatch);
}

TEST_CASE("configuration validation") {
  EvolveConfig cfg;
  cfg.dt0 = -1;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  CHECK(to_string(StopReason::spectral_tail) == "spectral_tail");
}
