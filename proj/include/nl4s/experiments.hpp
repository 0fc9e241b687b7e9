#pragma once

#include <array>
#include <filesystem>
#include <span>

#include "nl4s/config.hpp"
#include "nl4s/ground_state.hpp"
#include "nl4s/manifest.hpp"

namespace nl4s {

// Solves for Q on the run grid, or loads and certifies ground_state.path.
GroundStateRecord obtain_ground_state(const RunConfig& c);

// Initial data per the recipe; `Q` is required for the ground_state recipe.
PhysicalField build_initial_data(const RunConfig& c, const GroundStateRecord* Q);

// w(x) = v(scale * x + center) by trigonometric interpolation of v, axis by axis.
// Points outside the box wrap periodically.
PhysicalField spectral_resample(const PhysicalField& v, double scale, std::span<const double> center);

struct ProfileAlignment {
  // psi is compared with Q after a circular shift by `shift` cells per axis:
  // (S psi)_j = psi_{j + shift}.
  std::array<long, GridSpec::kMaxDim> shift{};
  double phase = 0;     // optimal e^{i phase} S psi ~ Q
  double distance = 0;  // || e^{i phase} S psi - Q ||_{L2}
};

// Minimizes the L2 distance over all circular shifts (FFT cross-correlation)
// and the global phase (closed form).
ProfileAlignment align_to_profile(const PhysicalField& psi, const PhysicalField& Q);

// Applies the alignment to psi.
PhysicalField apply_alignment(const PhysicalField& psi, const ProfileAlignment& a);

// Runs the configured experiment, writes outputs and manifest.json under
// config.output_dir and returns the manifest. Failures are recorded in the
// manifest, not thrown, except for an unwritable output directory.
RunManifest run_experiment(const RunConfig& c);

}  // namespace nl4s
