#pragma once

#include <span>
#include <string>
#include <vector>

#include "nl4s/exponents.hpp"
#include "nl4s/field.hpp"
#include "nl4s/observables.hpp"
#include "nl4s/spectral.hpp"

namespace nl4s {

struct EvolveConfig;

// Radial smoothing multiplier: 1 for |xi| <= N, (|xi|/N)^(gamma-2) for
// |xi| >= 2N, and (|xi|/N)^((gamma-2) s(t)) with t = log2(|xi|/N) and the
// rising cubic smoothstep s in between. C^1 and non-increasing.
class IMultiplier {
 public:
  IMultiplier(double N, double gamma);

  double N() const noexcept { return N_; }
  double gamma() const noexcept { return gamma_; }
  double operator()(double xi_abs) const noexcept;
  // Tabulated on a grid's frequency lattice.
  Multiplier on_grid(const GridSpec& grid) const;

 private:
  double N_;
  double gamma_;
};

IMultiplier build_m(double N, double gamma);
PhysicalField apply_I(const PhysicalField& u, const IMultiplier& m);

// E(I_N u)
double modified_energy(const PhysicalField& u, const IMultiplier& m, const NonlinearityParams& params);

struct PropertyCheck {
  std::string name;
  double raw_ratio = 0;       // LHS / RHS with constant 1
  double sharp_constant = 0;  // sup over |xi| of the pointwise symbol ratio
  double normalized = 0;      // raw_ratio / sharp_constant, never above 1 in L2
};

struct IPropertyReport {
  double N = 0, gamma = 0, sigma = 0;
  // L2 forms of: ||If|| <= ||f||; || |grad|^s P_{>N} f || <= N^(s-2) ||lap I f||;
  // ||<grad>^s f|| <= ||<lap> I f||; ||f||_{H^g} <= ||If||_{H^2} <= N^(2-g) ||f||_{H^g};
  // ||If||_{H^2 dot} <= N^(2-g) ||f||_{H^g dot}.
  std::vector<PropertyCheck> l2;
  // Raw L^q ratios of ||If||_q / ||f||_q for the requested exponents.
  std::vector<std::pair<double, double>> lq_bounded;
};

// Sharp constants are sup_{0 < |xi| <= max lattice |xi|} of the symbol ratio,
// taken over a dense radial sample plus the lattice itself.
IPropertyReport check_I_properties(const PhysicalField& u, const IMultiplier& m, double sigma,
                                   std::span<const double> q_exponents = {});

// || grad I F(u) - (I grad u) . F'(u) ||_{L2}, summed over components, with
// (w . F'(u)) := dF/dz w + dF/dzbar conj(w).
double commutator_norm(const PhysicalField& u, const IMultiplier& m, const NonlinearityParams& params);

struct SweepRow {
  double N = 0;
  double sup_increment = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double slope = 0;
  double intercept = 0;
  double window = 0;
  double gamma = 0;
  double delta = 0;
  // Raw energy drift sup_t |E(u(t)) - E(u0)| of the same run.
  double raw_energy_drift = 0;
  int snapshots = 0;
};

// Evolves u0 once over [0, window] and reports sup_t |E(I_N u(t)) - E(I_N u0)|
// per N along the stored snapshots, plus the least-squares slope of
// log(increment) against log(N). Throws DomainError if an N is not below
// nyquist/2 or the run stops on a blowup rule.
SweepResult almost_conservation_sweep(const PhysicalField& u0, double gamma, double delta,
                                      std::span<const double> N_list, double window,
                                      const EvolveConfig& config);

// Least-squares slope and intercept of y on x.
std::pair<double, double> least_squares_line(std::span<const double> x, std::span<const double> y);

}  // namespace nl4s
