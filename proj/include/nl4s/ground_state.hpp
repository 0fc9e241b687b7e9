#pragma once

#include <cstdint>

#include "nl4s/field.hpp"

namespace nl4s {

// Converged solution of lap^2 Q + Q - |Q|^p Q = 0, the standing-wave profile
// of u = e^{-it} Q for i u_t + lap^2 u = |u|^p u.
struct GroundStateRecord {
  PhysicalField Q;
  // Converged spectral iterate; Q == to_physical(Q_hat) up to rounding.
  SpectralField Q_hat;
  double p = 0;
  // ||(1+|xi|^4) Q_hat - F[|Q|^p Q]|| / ||Q||, evaluated on Q_hat.
  double residual = 0;
  // Same residual recomputed from the rounded physical samples. Dominated by
  // |xi|^4-amplified rounding noise on fine grids.
  double residual_physical = 0;
  double mass = 0;
  double laplacian_norm = 0;
  // ||Q||_{p+2}^{p+2} / (||Q||_2^p ||lap Q||_2^2)
  double c_attained = 0;
  double stabilization = 0;
  int iterations = 0;
};

struct PetviashviliOptions {
  double tol = 1e-10;
  int max_iter = 500;
  bool recenter = true;
};

// Spectral renormalization iteration with stabilizing factor S^((p+1)/p).
// Throws ConvergenceError on divergence or when max_iter is exhausted.
GroundStateRecord petviashvili_solve(const GridSpec& grid, double p, const PhysicalField& init,
                                     const PetviashviliOptions& options = {});

// Default start: exp(-|x|^2).
PhysicalField gaussian_initial_guess(const GridSpec& grid, double width = 1.0);

// Rebuilds the derived quantities of a record from Q (e.g. after loading).
GroundStateRecord certify_ground_state(const PhysicalField& Q, double p);

// Pure functional: ||v||_{p+2}^{p+2} / (||v||_2^p ||lap v||_2^2).
double gn_ratio(const PhysicalField& v, double p);

struct GnReport {
  double c_attained = 0;
  // | ||Q||_{p+2}^{p+2} - (1 + p/2) ||lap Q||^2 | / ||Q||_{p+2}^{p+2}
  double attainment_rel_error = 0;
  double energy = 0;
  double energy_over_lap2 = 0;
  double max_sample_ratio = 0;
  int samples = 0;
};

// Checks attainment on Q and the inequality on `samples` random localized
// smooth fields; throws DomainError("GN violation ...") if a sample exceeds
// c_attained * (1 + tol).
GnReport gn_verify(const GroundStateRecord& record, int samples, std::uint64_t seed = 1,
                   double tol = 1e-6);

// Random sum of Gaussian bumps kept well inside the box.
PhysicalField random_localized_field(const GridSpec& grid, std::uint64_t seed);

}  // namespace nl4s
