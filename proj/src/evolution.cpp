#include "nl4s/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nl4s/spectral.hpp"

namespace nl4s {

void EvolveConfig::validate() const {
  params.validate();
  if (!(dt0 > 0.0) || !std::isfinite(dt0)) throw DomainError("dt0 must be positive");
  if (!(T_max > 0.0) || !std::isfinite(T_max)) throw DomainError("T_max must be positive");
  if (snapshot_interval < 0.0) throw DomainError("snapshot_interval must be >= 0");
  if (!(gamma >= 0.0)) throw DomainError("monitored regularity gamma must be >= 0");
  if (!(stop.norm_growth > 1.0)) throw DomainError("norm_growth threshold must exceed 1");
  if (!(stop.dt_min > 0.0)) throw DomainError("dt_min must be positive");
  if (!(stop.tail_stop > 0.0) || !(stop.tail_untrusted > 0.0)) {
    throw DomainError("spectral tail thresholds must be positive");
  }
  for (double t : snapshot_times) {
    if (!(t > 0.0 && t < T_max)) throw DomainError("snapshot_times must lie in (0, T_max)");
  }
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::horizon: return "horizon";
    case StopReason::norm_growth: return "norm_growth";
    case StopReason::dt_underflow: return "dt_underflow";
    case StopReason::spectral_tail: return "spectral_tail";
  }
  return "unknown";
}

namespace {

// Precomputed symbols for stepping and monitoring on one grid.
class Engine {
 public:
  Engine(const GridSpec& grid, const EvolveConfig& cfg) : grid_(grid), cfg_(cfg) {
    const auto mags = grid.frequency_magnitudes();
    const std::size_t n = mags.size();
    omega_.resize(n);
    k2_.resize(n);
    hgamma_w_.resize(n);
    tail_mask_.resize(n);
    const double cut = 0.5 * grid.nyquist();
    for (std::size_t i = 0; i < n; ++i) {
      const double k2 = mags[i] * mags[i];
      k2_[i] = k2;
      omega_[i] = k2 * k2 - cfg.params.epsilon * k2;
      hgamma_w_[i] = std::pow(1.0 + k2, cfg.gamma);
      tail_mask_[i] = mags[i] > cut ? 1.0 : 0.0;
    }
    if (cfg.i_multiplier) {
      const auto m = cfg.i_multiplier->on_grid(grid);
      m_.resize(n);
      for (std::size_t i = 0; i < n; ++i) m_[i] = m.symbol()[i].real();
    }
    radius_ = cfg.concentration_radius > 0.0 ? cfg.concentration_radius : 0.25 * grid.half_width();
    radius_ = std::min(radius_, grid.half_width());
    ball_hat_.assign(n, Complex(0.0));
    const double dx = grid.dx();
    for (std::size_t i = 0; i < n; ++i) {
      const auto idx = grid.unflatten(i);
      double r2 = 0.0;
      for (int a = 0; a < grid.dim(); ++a) {
        const double off = dx * grid.wavenumber(idx[a]);
        r2 += off * off;
      }
      ball_hat_[i] = r2 <= radius_ * radius_ * (1.0 + 1e-12) ? 1.0 : 0.0;
    }
    forward_transform(grid, ball_hat_);
    conv_scale_ = std::sqrt(static_cast<double>(n) / grid.cell_volume()) * grid.cell_volume();
  }

  void linear(std::vector<Complex>& u, double tau) {
    forward_transform(grid_, u);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] *= std::polar(1.0, tau * omega_[i]);
    inverse_transform(grid_, u);
  }

  void nonlinear(std::vector<Complex>& u, double tau) const {
    const double p = cfg_.params.p;
    const double mu = cfg_.params.mu;
    for (auto& v : u) {
      const double a = std::abs(v);
      if (a != 0.0) v *= std::polar(1.0, mu * tau * std::pow(a, p));
    }
  }

  void strang(std::vector<Complex>& u, double tau) {
    linear(u, 0.5 * tau);
    nonlinear(u, tau);
    linear(u, 0.5 * tau);
  }

  ObservableRecord observe(const std::vector<Complex>& u, double time) {
    ObservableRecord r;
    r.time = time;
    const double dv = grid_.cell_volume();
    const double p = cfg_.params.p;
    const double q = p + 2.0;
    scratch_.assign(u.begin(), u.end());
    forward_transform(grid_, scratch_);
    double mass = 0.0, lap2 = 0.0, grad2 = 0.0, hg = 0.0, tail = 0.0;
    double lap2_i = 0.0, grad2_i = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double e = std::norm(scratch_[i]);
      mass += e;
      lap2 += k2_[i] * k2_[i] * e;
      grad2 += k2_[i] * e;
      hg += hgamma_w_[i] * e;
      tail += tail_mask_[i] * e;
      if (!m_.empty()) {
        const double mm = m_[i] * m_[i];
        lap2_i += mm * k2_[i] * k2_[i] * e;
        grad2_i += mm * k2_[i] * e;
      }
    }
    double pot = 0.0, sup = 0.0;
    for (const auto& v : u) {
      const double a = std::abs(v);
      pot += std::pow(a, q);
      sup = std::max(sup, a);
    }
    pot *= dv;
    const double mu = cfg_.params.mu;
    const double eps = cfg_.params.epsilon;
    r.mass = mass;
    r.energy = 0.5 * lap2 - 0.5 * eps * grad2 + mu / q * pot;
    r.hgamma = std::sqrt(hg);
    r.laplacian = std::sqrt(lap2);
    r.sup = sup;
    r.tail = mass > 0.0 ? tail / mass : 0.0;
    if (m_.empty()) {
      r.modified_energy = r.energy;
    } else {
      for (std::size_t i = 0; i < u.size(); ++i) scratch_[i] *= m_[i];
      inverse_transform(grid_, scratch_);
      double pot_i = 0.0;
      for (const auto& v : scratch_) pot_i += std::pow(std::abs(v), q);
      r.modified_energy = 0.5 * lap2_i - 0.5 * eps * grad2_i + mu / q * pot_i * dv;
    }
    for (std::size_t i = 0; i < u.size(); ++i) scratch_[i] = std::norm(u[i]);
    forward_transform(grid_, scratch_);
    for (std::size_t i = 0; i < u.size(); ++i) scratch_[i] *= ball_hat_[i];
    inverse_transform(grid_, scratch_);
    double best = 0.0;
    for (const auto& v : scratch_) best = std::max(best, v.real());
    r.concentration = std::clamp(best * conv_scale_, 0.0, mass);
    return r;
  }

 private:
  GridSpec grid_;
  const EvolveConfig& cfg_;
  std::vector<double> omega_, k2_, hgamma_w_, tail_mask_, m_;
  std::vector<Complex> ball_hat_, scratch_;
  double radius_ = 0;
  double conv_scale_ = 1;
};

bool all_finite(const std::vector<Complex>& u) {
  for (const auto& v : u) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

double sup_of(const std::vector<Complex>& u) {
  double m = 0.0;
  for (const auto& v : u) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> snapshot_schedule(const EvolveConfig& cfg) {
  std::vector<double> times(cfg.snapshot_times.begin(), cfg.snapshot_times.end());
  if (cfg.snapshot_interval > 0.0) {
    for (long k = 1;; ++k) {
      const double t = static_cast<double>(k) * cfg.snapshot_interval;
      if (t >= cfg.T_max * (1.0 - 1e-12)) break;
      times.push_back(t);
    }
  }
  times.push_back(cfg.T_max);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, b); }),
              times.end());
  return times;
}

}  // namespace

PhysicalField linear_step(const PhysicalField& u, double tau, const NonlinearityParams& params) {
  if (!std::isfinite(tau)) throw DomainError("linear_step: tau must be finite");
  EvolveConfig cfg;
  cfg.params = params;
  Engine eng(u.grid(), cfg);
  std::vector<Complex> v(u.values().begin(), u.values().end());
  eng.linear(v, tau);
  return PhysicalField(u.grid(), std::move(v));
}

PhysicalField nonlinear_step(const PhysicalField& u, double tau, const NonlinearityParams& params) {
  if (!std::isfinite(tau)) throw DomainError("nonlinear_step: tau must be finite");
  params.validate();
  std::vector<Complex> v(u.values().begin(), u.values().end());
  for (auto& z : v) {
    const double a = std::abs(z);
    if (a != 0.0) z *= std::polar(1.0, params.mu * tau * std::pow(a, params.p));
  }
  return PhysicalField(u.grid(), std::move(v));
}

PhysicalField strang_step(const PhysicalField& u, double tau, const NonlinearityParams& params) {
  return linear_step(nonlinear_step(linear_step(u, 0.5 * tau, params), tau, params), 0.5 * tau,
                     params);
}

ObservableRecord observe(const PhysicalField& u, double time, const EvolveConfig& config) {
  Engine eng(u.grid(), config);
  std::vector<Complex> v(u.values().begin(), u.values().end());
  return eng.observe(v, time);
}

Trajectory strang_evolve(const PhysicalField& u0, const EvolveConfig& config) {
  config.validate();
  const auto& grid = u0.grid();
  Engine eng(grid, config);
  const double p = config.params.p;

  Trajectory traj{grid, {}, {}};
  std::vector<Complex> u(u0.values().begin(), u0.values().end());
  std::vector<Complex> last_good = u;
  double t = 0.0;

  auto rec0 = eng.observe(u, 0.0);
  traj.initial_hgamma = rec0.hgamma;
  const double c_dt =
      config.c_dt > 0.0 ? config.c_dt : config.dt0 * (1.0 + std::pow(sup_of(u), p));
  traj.c_dt = c_dt;
  traj.series.push_back(rec0);
  traj.snapshots.push_back({0.0, u0});
  if (rec0.tail > config.stop.tail_untrusted) {
    traj.untrusted = true;
    traj.untrusted_since = 0.0;
  }

  const auto schedule = snapshot_schedule(config);
  std::size_t next = 0;
  bool stopped = false;
  while (next < schedule.size()) {
    const double target = schedule[next];
    double dt = config.dt0;
    if (config.adaptive) dt = std::min(dt, c_dt / (1.0 + std::pow(sup_of(u), p)));
    if (dt < config.stop.dt_min) {
      traj.stop = StopReason::dt_underflow;
      stopped = true;
      break;
    }
    const double remaining = target - t;
    bool lands = false;
    if (remaining <= dt * (1.0 + 1e-9)) {
      dt = remaining;
      lands = true;
    } else if (remaining < 2.0 * dt) {
      dt = 0.5 * remaining;
    }

    last_good = u;
    eng.strang(u, dt);
    if (!all_finite(u)) {
      throw IntegrationError("non-finite field at t=" + std::to_string(t + dt),
                             PhysicalField(grid, std::move(last_good)), t);
    }
    t = lands ? target : t + dt;
    ++traj.steps;

    auto rec = eng.observe(u, t);
    rec.dt = dt;
    traj.series.push_back(rec);
    if (!traj.untrusted && rec.tail > config.stop.tail_untrusted) {
      traj.untrusted = true;
      traj.untrusted_since = t;
    }
    if (lands) {
      traj.snapshots.push_back({t, PhysicalField(grid, u)});
      ++next;
    }
    if (rec.hgamma > config.stop.norm_growth * traj.initial_hgamma) {
      traj.stop = StopReason::norm_growth;
      stopped = true;
    } else if (rec.tail > config.stop.tail_stop) {
      traj.stop = StopReason::spectral_tail;
      stopped = true;
    }
    if (stopped) break;
  }
  if (stopped && traj.snapshots.back().time != t) {
    traj.snapshots.push_back({t, PhysicalField(grid, u)});
  }
  return traj;
}

}  // namespace nl4s
