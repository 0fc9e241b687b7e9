#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nl4s/evolution.hpp"

namespace nl4s {

namespace {

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double rms = 0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    r += e * e;
  }
  f.rms = std::sqrt(r / n);
  return f;
}

}  // namespace

BlowupReport fit_blowup_series(std::span<const double> times, std::span<const double> norms,
                               double initial_norm, double gamma, bool stopped_on_blowup,
                               const BlowupFitOptions& options) {
  BlowupReport rep;
  rep.rate_lower_bound = gamma / 4.0;
  rep.last_time = times.empty() ? 0.0 : times.back();
  if (!stopped_on_blowup) {
    rep.note = "run reached its horizon without a blowup stop rule";
    return rep;
  }
  std::vector<double> t, y;
  const double threshold = options.threshold_factor * initial_norm;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (norms[i] >= threshold) {
      t.push_back(times[i]);
      y.push_back(norms[i]);
    }
  }
  rep.fit_samples = t.size();
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (y[i] < y[i - 1] * (1.0 - options.monotone_tol) || !(t[i] > t[i - 1])) {
      rep.note = "norm series above threshold is not monotone";
      return rep;
    }
  }
  rep.detected = true;
  if (t.size() < options.min_samples) {
    rep.note = "too few samples above threshold for a rate fit";
    rep.t_star = rep.last_time;
    rep.beta = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }

  std::vector<double> logy(y.size()), logx(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) logy[i] = std::log(y[i]);
  const double t_last = t.back();
  const double span = std::max(t_last - t.front(), 1e-300);
  // T* = t_last + span * exp(s)
  auto residual = [&](double s) {
    const double tstar = t_last + span * std::exp(s);
    for (std::size_t i = 0; i < t.size(); ++i) logx[i] = std::log(tstar - t[i]);
    return fit_line(logx, logy).rms;
  };
  const double s_lo = std::log(1e-8), s_hi = std::log(10.0);
  // Coarse scan, then golden-section refinement around the best cell.
  const int scan = 400;
  double best_s = s_lo, best_r = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= scan; ++k) {
    const double s = s_lo + (s_hi - s_lo) * k / scan;
    const double r = residual(s);
    if (r < best_r) {
      best_r = r;
      best_s = s;
    }
  }
  const double cell = (s_hi - s_lo) / scan;
  double a = std::max(s_lo, best_s - cell), b = std::min(s_hi, best_s + cell);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = residual(c), fd = residual(d);
  for (int it = 0; it < 200 && (b - a) > 1e-14; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = residual(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = residual(d);
    }
  }
  const double s_opt = 0.5 * (a + b);
  rep.t_star = t_last + span * std::exp(s_opt);
  for (std::size_t i = 0; i < t.size(); ++i) logx[i] = std::log(rep.t_star - t[i]);
  const auto f = fit_line(logx, logy);
  rep.beta = -f.slope;
  rep.fit_residual = f.rms;
  rep.satisfies_lower_bound = rep.beta >= rep.rate_lower_bound;
  return rep;
}

BlowupReport detect_blowup_fit(const Trajectory& traj, double gamma, const BlowupFitOptions& options) {
  std::vector<double> t, y;
  t.reserve(traj.series.size());
  for (const auto& r : traj.series) {
    t.push_back(r.time);
    y.push_back(r.hgamma);
  }
  return fit_blowup_series(t, y, traj.initial_hgamma, gamma, traj.stopped_on_blowup(), options);
}

namespace {

EvolveConfig halved(const EvolveConfig& cfg, const Trajectory& ref) {
  EvolveConfig h = cfg;
  h.dt0 = 0.5 * cfg.dt0;
  h.c_dt = 0.5 * ref.c_dt;
  return h;
}

double relative_distance(const PhysicalField& a, const PhysicalField& b) {
  return l2_norm(a - b) / l2_norm(b);
}

Trajectory run_to_horizon(const PhysicalField& u0, const EvolveConfig& cfg) {
  auto traj = strang_evolve(u0, cfg);
  if (traj.stopped_on_blowup()) {
    throw DomainError("run stopped on rule '" + to_string(traj.stop) + "' at t=" +
                      std::to_string(traj.final_time()) + " before T_max");
  }
  return traj;
}

}  // namespace

double richardson_error_estimate(const PhysicalField& u0, const EvolveConfig& config) {
  const auto coarse = run_to_horizon(u0, config);
  const auto fine = run_to_horizon(u0, halved(config, coarse));
  return 4.0 / 3.0 * relative_distance(coarse.final_state(), fine.final_state());
}

double richardson_order(const PhysicalField& u0, const EvolveConfig& config) {
  const auto a = run_to_horizon(u0, config);
  const auto hb = halved(config, a);
  const auto b = run_to_horizon(u0, hb);
  const auto c = run_to_horizon(u0, halved(hb, b));
  const double e1 = l2_norm(a.final_state() - b.final_state());
  const double e2 = l2_norm(b.final_state() - c.final_state());
  return std::log2(e1 / e2);
}

ScalingReport scaling_test(const PhysicalField& u0, double lambda, const EvolveConfig& config) {
  if (lambda != 0.5 && lambda != 1.0 && lambda != 2.0) {
    throw GridMismatch("scaling test supports lambda in {1/2, 1, 2} only");
  }
  const auto& g = u0.grid();
  const GridSpec gl(g.dim(), g.n(), lambda * g.half_width());
  const double amp = std::pow(lambda, -0.5 * g.dim());
  std::vector<Complex> scaled(u0.values().begin(), u0.values().end());
  for (auto& v : scaled) v *= amp;
  const PhysicalField ul(gl, std::move(scaled));

  EvolveConfig cl = config;
  const double l4 = std::pow(lambda, 4);
  cl.T_max = l4 * config.T_max;
  cl.snapshot_interval = 0.0;
  cl.snapshot_times.clear();
  if (cl.concentration_radius > 0.0) cl.concentration_radius *= lambda;
  EvolveConfig co = config;
  co.snapshot_interval = 0.0;
  co.snapshot_times.clear();

  ScalingReport rep;
  rep.lambda = lambda;
  rep.time = config.T_max;
  rep.mass_original = mass(u0);
  rep.mass_scaled = mass(ul);

  const auto a = run_to_horizon(u0, co);
  const auto b = run_to_horizon(ul, cl);
  std::vector<Complex> back(b.final_state().values().begin(), b.final_state().values().end());
  for (auto& v : back) v /= amp;
  const PhysicalField bb(g, std::move(back));
  rep.discrepancy = relative_distance(bb, a.final_state());
  if (lambda == 1.0) {
    rep.richardson_estimate = richardson_error_estimate(u0, co);
  } else {
    rep.richardson_estimate =
        std::max(richardson_error_estimate(u0, co), richardson_error_estimate(ul, cl));
  }
  return rep;
}

}  // namespace nl4s
