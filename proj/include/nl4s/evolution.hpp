#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nl4s/error.hpp"
#include "nl4s/field.hpp"
#include "nl4s/i_operator.hpp"
#include "nl4s/observables.hpp"

namespace nl4s {

struct StopRules {
  // ||u||_{H^gamma} above this multiple of its initial value.
  double norm_growth = 1e3;
  double dt_min = 1e-12;
  double tail_stop = 1e-3;
  // Tail fraction above which the run is marked untrusted.
  double tail_untrusted = 1e-6;
};

struct EvolveConfig {
  NonlinearityParams params;
  double dt0 = 1e-3;
  // dt = min(dt0, c_dt / (1 + ||u||_inf^p)). Non-positive: calibrated to the
  // initial data so that the first step equals dt0.
  double c_dt = 0;
  bool adaptive = true;
  double T_max = 1.0;
  // Regular snapshot spacing; 0 keeps only the first and last states.
  double snapshot_interval = 0;
  // Extra snapshot times inside (0, T_max).
  std::vector<double> snapshot_times;
  // Regularity of the monitored H^gamma norm.
  double gamma = 1.5;
  // Multiplier for the E(Iu) column; absent means I = identity.
  std::optional<IMultiplier> i_multiplier;
  // Concentration radius for the monitored series; 0 means L/4.
  double concentration_radius = 0;
  StopRules stop;

  void validate() const;
};

enum class StopReason { horizon, norm_growth, dt_underflow, spectral_tail };
std::string to_string(StopReason r);

struct ObservableRecord {
  double time = 0;
  double dt = 0;
  double mass = 0;
  double energy = 0;
  double modified_energy = 0;
  double hgamma = 0;
  double laplacian = 0;
  double sup = 0;
  double tail = 0;
  double concentration = 0;
};

struct Trajectory {
  GridSpec grid;
  std::vector<TimedField> snapshots;
  std::vector<ObservableRecord> series;
  StopReason stop = StopReason::horizon;
  bool untrusted = false;
  double untrusted_since = 0;
  long steps = 0;
  double initial_hgamma = 0;
  double c_dt = 0;

  bool stopped_on_blowup() const noexcept { return stop != StopReason::horizon; }
  const PhysicalField& final_state() const { return snapshots.back().field; }
  double final_time() const { return snapshots.back().time; }
};

// Non-finite state during integration; carries the last good state.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, PhysicalField last_good, double time)
      : Error(what), last_good_(std::move(last_good)), time_(time) {}
  const PhysicalField& last_good() const noexcept { return last_good_; }
  double time() const noexcept { return time_; }

 private:
  PhysicalField last_good_;
  double time_;
};

// Exact flow of i u_t + lap^2 u + epsilon lap u = 0:
// u_hat *= exp(i tau (|xi|^4 - epsilon |xi|^2)).
PhysicalField linear_step(const PhysicalField& u, double tau, const NonlinearityParams& params);

// Exact flow of i u_t + mu |u|^p u = 0: u *= exp(i mu tau |u|^p).
PhysicalField nonlinear_step(const PhysicalField& u, double tau, const NonlinearityParams& params);

// L(tau/2) N(tau) L(tau/2)
PhysicalField strang_step(const PhysicalField& u, double tau, const NonlinearityParams& params);

Trajectory strang_evolve(const PhysicalField& u0, const EvolveConfig& config);

// Observables of a single state (the same record the integrator stores).
ObservableRecord observe(const PhysicalField& u, double time, const EvolveConfig& config);

struct BlowupFitOptions {
  // Fit on samples whose norm exceeds this multiple of the initial norm.
  double threshold_factor = 2.0;
  std::size_t min_samples = 8;
  // Relative dip tolerated before the window counts as non-monotone.
  double monotone_tol = 1e-6;
};

struct BlowupReport {
  bool detected = false;
  double t_star = 0;
  double beta = 0;
  double fit_residual = 0;
  std::size_t fit_samples = 0;
  double last_time = 0;
  double rate_lower_bound = 0;  // gamma / 4
  bool satisfies_lower_bound = false;
  std::string note;
};

// Fits ||u(t)|| ~ C (T* - t)^(-beta) with T* chosen by golden-section search on
// the least-squares residual of log||u|| against log(T* - t).
BlowupReport fit_blowup_series(std::span<const double> times, std::span<const double> norms,
                               double initial_norm, double gamma, bool stopped_on_blowup,
                               const BlowupFitOptions& options = {});

BlowupReport detect_blowup_fit(const Trajectory& traj, double gamma,
                               const BlowupFitOptions& options = {});

// Relative L2 difference between two runs at dt and dt/2 (and c_dt/2), times 4/3.
double richardson_error_estimate(const PhysicalField& u0, const EvolveConfig& config);

// Relative L2 distance between the two terminal states of runs at dt and dt/2
// and dt/4; returns log2 of the ratio of successive differences.
double richardson_order(const PhysicalField& u0, const EvolveConfig& config);

struct ScalingReport {
  double lambda = 1;
  double time = 0;
  double discrepancy = 0;
  double richardson_estimate = 0;
  double mass_original = 0;
  double mass_scaled = 0;
};

// u_lambda(0, x) = lambda^(-d/2) u0(x / lambda), evolved on [-lambda L, lambda L)
// to lambda^4 T_max and compared against u(T_max). lambda in {1/2, 1, 2}.
ScalingReport scaling_test(const PhysicalField& u0, double lambda, const EvolveConfig& config);

}  // namespace nl4s
