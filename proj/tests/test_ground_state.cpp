#include <doctest.h>

#include <cmath>

#include "nl4s/error.hpp"
#include "nl4s/evolution.hpp"
#include "nl4s/ground_state.hpp"
#include "nl4s/observables.hpp"
#include "support.hpp"

using namespace nl4s;
using namespace nl4s::testing;

namespace {
const GroundStateRecord& q1024() {
  static const GroundStateRecord rec = [] {
    const GridSpec g(1, 1024, 20.0);
    return petviashvili_solve(g, 8.0, gaussian_initial_guess(g));
  }();
  return rec;
}
}  // namespace

TEST_CASE("Petviashvili converges on the 1D critical problem") {
  const auto& r = q1024();
  CHECK(r.residual < 1e-10);
  CHECK(r.iterations < 200);
  CHECK(std::abs(r.stabilization - 1.0) < 1e-10);
  // The physical-sample residual is limited by |xi|^4-amplified rounding.
  CHECK(r.residual_physical < 1e-7);
}

TEST_CASE("ground state profile is even, peaked at the origin and real") {
  const auto& Q = q1024().Q;
  const auto& g = Q.grid();
  const std::size_t n = g.n();
  double maxabs = 0.0;
  std::size_t arg = 0;
  for (std::size_t j = 0; j < n; ++j) {
    CHECK(Q[j].imag() == 0.0);
    if (std::abs(Q[j]) > maxabs) {
      maxabs = std::abs(Q[j]);
      arg = j;
    }
  }
  CHECK(arg == n / 2);
  CHECK(Q[n / 2].real() > 0);
  for (std::size_t j = 1; j < n / 2; ++j) CHECK(std::abs(Q[n / 2 + j] - Q[n / 2 - j]) < 1e-10 * maxabs);
  CHECK(std::abs(Q[0]) < 1e-4 * maxabs);
}

TEST_CASE("Pohozaev identities: GN attainment and zero energy") {
  const auto& r = q1024();
  const double p = 8.0;
  const double lq = std::pow(lebesgue_norm(r.Q, p + 2), p + 2);
  const double lap2 = std::pow(laplacian_norm(r.Q), 2);
  CHECK(std::abs(lq - (1 + p / 2) * lap2) / lq < 1e-6);
  CHECK(std::abs(energy(r.Q, NonlinearityParams{})) < 1e-6 * lap2);
  // Mass identity from testing the equation against Q: ||lap Q||^2 + ||Q||^2 = ||Q||_{p+2}^{p+2}.
  CHECK(std::abs(lap2 + mass(r.Q) - lq) / lq < 1e-9);
}

TEST_CASE("GN inequality on random fields") {
  const auto rep = gn_verify(q1024(), 100, 9);
  CHECK(rep.max_sample_ratio <= rep.c_attained * (1 + 1e-6));
  CHECK(rep.attainment_rel_error < 1e-6);
  CHECK(rep.samples == 100);
}

TEST_CASE("a slightly perturbed Q does not beat the attained constant") {
  const auto& r = q1024();
  const auto& g = r.Q.grid();
  for (double eps : {1e-3, -1e-3, 1e-2}) {
    const auto v = r.Q + Complex(eps) * sample(g, [](auto x) { return Complex(std::exp(-x[0] * x[0]) * x[0] * x[0]); });
    CHECK(gn_ratio(v, 8.0) <= r.c_attained * (1 + 1e-9));
  }
}

TEST_CASE("Q is a standing wave e^{-it} Q of the evolution") {
  const auto& r = q1024();
  EvolveConfig cfg;
  cfg.dt0 = 1e-4;
  cfg.T_max = 0.05;
  const auto tr = strang_evolve(r.Q, cfg);
  const auto expect = std::polar(1.0, -0.05) * r.Q;
  CHECK(l2_norm(tr.final_state() - expect) / l2_norm(r.Q) < 1e-6);
}

TEST_CASE("2D ground state converges") {
  const GridSpec g(2, 128, 16.0);
  const auto r = petviashvili_solve(g, 4.0, gaussian_initial_guess(g));
  CHECK(r.residual < 1e-10);
  const double lq = std::pow(lebesgue_norm(r.Q, 6.0), 6.0);
  CHECK(std::abs(lq - 3.0 * std::pow(laplacian_norm(r.Q), 2)) / lq < 1e-6);
}

TEST_CASE("solver errors") {
  const GridSpec g(1, 128, 20.0);
  CHECK_THROWS_AS(petviashvili_solve(g, 8.0, PhysicalField(g)), DomainError);
  PetviashviliOptions few;
  few.max_iter = 3;
  try {
    petviashvili_solve(g, 8.0, gaussian_initial_guess(g), few);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations() == 3);
    CHECK(e.last_residual() > 1e-10);
  }
}

TEST_CASE("certify reproduces the record from Q alone") {
  const auto& r = q1024();
  const auto c = certify_ground_state(r.Q, 8.0);
  CHECK(c.mass == doctest::Approx(r.mass).epsilon(1e-14));
  CHECK(c.c_attained == doctest::Approx(r.c_attained).epsilon(1e-14));
  CHECK(c.residual_physical < 1e-7);
}
