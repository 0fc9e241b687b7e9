#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nl4s/evolution.hpp"
#include "nl4s/grid.hpp"
#include "nl4s/observables.hpp"

namespace nl4s {

enum class ExperimentKind {
  ground_state,
  evolve,
  blowup_concentration,
  profile_extraction,
  almost_conservation,
  gwp_below_threshold,
  sobolev_growth,
  scaling_invariance,
  lwp_window,
};

std::string to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string& name);
const std::vector<ExperimentKind>& all_experiment_kinds();

struct InitialData {
  // "ground_state": amplitude * Q; "gaussian": amplitude * exp(-|x|^2 / width^2);
  // "file": a snapshot, times amplitude.
  std::string recipe = "ground_state";
  double amplitude = 0.9;
  double width = 1.0;
  std::string path;
  // Optional seeded complex white-noise perturbation, relative to the sup norm
  // of the clean data.
  double noise = 0.0;
};

struct GroundStateSource {
  // Empty: solve on the run grid. Otherwise a snapshot holding Q.
  std::string path;
  double tol = 1e-10;
  int max_iter = 500;
  int gn_samples = 500;
};

// All lengths are in units of x (the box is [-half_width, half_width)^d),
// times in units of t, frequencies in units of xi = pi k / half_width.
struct RunConfig {
  ExperimentKind kind = ExperimentKind::evolve;
  int dim = 1;
  std::size_t n = 1024;
  double half_width = 20.0;
  NonlinearityParams params;

  double gamma = 1.5;
  double delta = 0.0;
  std::optional<int> d_ana;
  // I-operator cutoff for monitored E(I_N u); unset means identity.
  std::optional<double> N;
  std::vector<double> N_list{8, 16, 32, 64};

  InitialData initial;
  GroundStateSource ground_state;

  double dt0 = 1e-3;
  double c_dt = 0.0;
  bool adaptive = true;
  double T_max = 1.0;
  double snapshot_interval = 0.0;
  bool save_snapshots = true;
  StopRules stop;

  // Experiment parameters.
  double window = 0.5;                 // almost_conservation time window
  double growth_bound = 3.0;           // gwp_below_threshold: max ||u||_{H^g} / initial
  double concentration_constant = 10;  // alpha(t) = c (T* - t)^(g/8)
  double concentration_floor_cells = 4;
  double concentration_target = 0.9;   // fraction of ||Q||^2
  int profile_count = 8;
  std::vector<double> lambdas{0.5, 1.0, 2.0};
  std::vector<double> amplitudes{0.25, 0.5, 0.75, 1.0};
  double lwp_constant = 0.02;          // T = c ||A u0||_{H^g}^(-4/g)
  double lwp_accuracy = 1e-6;          // max Richardson estimate inside the window
  double scaling_factor = 10.0;        // discrepancy <= factor * Richardson estimate
  int workers = 0;                     // 0: hardware concurrency

  std::string output_dir = "nl4s_out";
  std::uint64_t seed = 1;

  GridSpec grid() const;
  EvolveConfig evolve_config() const;
};

nlohmann::json to_json(const RunConfig& c);
// Unknown keys are rejected with a FormatError naming the key.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// Applies "a.b.c" = value onto the JSON form. The value is parsed as JSON when
// possible, otherwise taken as a string.
void apply_override(nlohmann::json& j, const std::string& dotted_key, const std::string& value);

struct ConfigCheck {
  std::vector<std::string> errors;
  std::vector<std::string> advisories;
  bool ok() const noexcept { return errors.empty(); }
};

ConfigCheck validate_config(const RunConfig& c);

}  // namespace nl4s
