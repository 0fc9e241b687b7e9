#pragma once

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nl4s/exponents.hpp"
#include "nl4s/field.hpp"
#include "nl4s/spectral.hpp"

namespace nl4s {

// i u_t + lap^2 u + epsilon lap u + mu |u|^p u = 0.
// The focusing mass-critical equation is mu = -1, epsilon = 0, p = 8/d.
struct NonlinearityParams {
  double p = 8.0;
  int mu = -1;
  int epsilon = 0;

  static NonlinearityParams mass_critical(int d_sim);
  // Throws DomainError.
  void validate() const;
};

// |u|^p u
PhysicalField F_eval(const PhysicalField& u, const NonlinearityParams& params);

// (dF/dz, dF/dzbar) = ((1 + p/2)|z|^p, (p/2)|z|^p z/zbar), with z/zbar := 0 at 0.
std::pair<PhysicalField, PhysicalField> F_prime(const PhysicalField& u,
                                                const NonlinearityParams& params);

// (1 + p/2)(p/2)|z|^(p-1), the largest second Wirtinger derivative magnitude.
std::vector<double> F_second_mag(const PhysicalField& u, const NonlinearityParams& params);

double mass(const PhysicalField& u);

// 1/2 ||lap u||^2 - epsilon/2 ||grad u||^2 + mu/(p+2) ||u||_{p+2}^{p+2}
double energy(const PhysicalField& u, const NonlinearityParams& params);
double energy(const SpectralField& u_hat, const PhysicalField& u, const NonlinearityParams& params);

// ||u||_{H^s} with <xi> = (1+|xi|^2)^{1/2}, or the homogeneous seminorm.
double sobolev_norm(const PhysicalField& u, double s, Bracket bracket);
double sobolev_norm(const SpectralField& u_hat, double s, Bracket bracket);

double laplacian_norm(const PhysicalField& u);
double lebesgue_norm(const PhysicalField& u, const Exponent& q);
double lebesgue_norm(const PhysicalField& u, double q);
double sup_norm(const PhysicalField& u);

// Fraction of L2 mass carried by |xi| > nyquist/2.
double spectral_tail_fraction(const SpectralField& u_hat);

// Mass within distance `radius_fraction` * L of the box faces.
double boundary_mass_fraction(const PhysicalField& u, double radius_fraction = 0.1);

struct Concentration {
  double value = 0;
  std::array<double, GridSpec::kMaxDim> center{};
};

// max_y of the mass inside the (periodic) ball of radius alpha around grid
// point y; ties go to the lexicographically smallest index.
Concentration concentration(const PhysicalField& u, double alpha);

struct TimedField {
  double time;
  PhysicalField field;
};

// ||A u||_{L^p_t L^q_x} with trapezoid quadrature in time over the snapshots.
// `transform` defaults to the identity.
double spacetime_norm(std::span<const TimedField> snapshots, const Exponent& p_t,
                      const Exponent& q_x, const Multiplier* transform = nullptr);

// max over the catalogue of ||<lap> I u||_{L^p_t L^q_x}, <lap> := 1 + |xi|^2.
double Z_I_estimate(std::span<const TimedField> snapshots, const Multiplier& i_symbol,
                    std::span<const AdmissiblePair> catalogue);

}  // namespace nl4s
