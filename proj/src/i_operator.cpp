#include "nl4s/i_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nl4s/error.hpp"
#include "nl4s/evolution.hpp"

namespace nl4s {

IMultiplier::IMultiplier(double N, double gamma) : N_(N), gamma_(gamma) {
  if (!(N > 0.0) || !std::isfinite(N)) throw DomainError("I-operator cutoff N must be positive");
  if (!(gamma > 0.0 && gamma < 2.0)) throw DomainError("I-operator regularity must lie in (0, 2)");
}

double IMultiplier::operator()(double xi_abs) const noexcept {
  const double r = xi_abs / N_;
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return std::pow(r, gamma_ - 2.0);
  return std::pow(r, (gamma_ - 2.0) * smoothstep(std::log2(r)));
}

Multiplier IMultiplier::on_grid(const GridSpec& grid) const {
  return Multiplier::radial(grid, [this](double k) { return Complex((*this)(k)); });
}

IMultiplier build_m(double N, double gamma) { return IMultiplier(N, gamma); }

PhysicalField apply_I(const PhysicalField& u, const IMultiplier& m) {
  return apply_multiplier(u, m.on_grid(u.grid()));
}

double modified_energy(const PhysicalField& u, const IMultiplier& m, const NonlinearityParams& params) {
  return energy(apply_I(u, m), params);
}

namespace {

// sup over 0 < k <= kmax of ratio(k): dense log-spaced sample plus the lattice.
template <typename Ratio>
double sharp_constant(const GridSpec& grid, Ratio&& ratio) {
  double best = 0.0;
  const double kmin = grid.frequency(1) * 1e-3;
  const double kmax = grid.max_frequency();
  const int samples = 20000;
  for (int i = 0; i <= samples; ++i) {
    const double k = kmin * std::pow(kmax / kmin, double(i) / samples);
    best = std::max(best, ratio(k));
  }
  for (double k : grid.frequency_magnitudes()) {
    if (k > 0.0) best = std::max(best, ratio(k));
  }
  return best;
}

double weighted_norm(std::span<const Complex> c, std::span<const double> mags,
                     const std::function<double(double)>& symbol) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double w = symbol(mags[i]);
    s += w * w * std::norm(c[i]);
  }
  return std::sqrt(s);
}

}  // namespace

IPropertyReport check_I_properties(const PhysicalField& u, const IMultiplier& m, double sigma,
                                   std::span<const double> q_exponents) {
  const double g = m.gamma();
  const double N = m.N();
  if (!(sigma >= 0.0 && sigma <= g)) throw DomainError("need 0 <= sigma <= gamma");
  const auto& grid = u.grid();
  const auto spec = to_spectral(u);
  const auto c = spec.coeffs();
  const auto mags = grid.frequency_magnitudes();

  auto jb = [](double k, double s) { return std::pow(1.0 + k * k, 0.5 * s); };
  auto hom = [](double k, double s) { return k == 0.0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(k, s); };

  struct Spec {
    const char* name;
    std::function<double(double)> lhs;
    std::function<double(double)> rhs;
  };
  const double n_pow_sigma = std::pow(N, sigma - 2.0);
  const double n_pow_gap = std::pow(N, 2.0 - g);
  const std::vector<Spec> specs = {
      {"I bounded on L2", [&](double k) { return m(k); }, [](double) { return 1.0; }},
      {"high-frequency |grad|^sigma P_>N vs N^(sigma-2) lap I",
       [&](double k) { return hom(k, sigma) * (1.0 - lp_bump(k / N)); },
       [&](double k) { return n_pow_sigma * k * k * m(k); }},
      {"<grad>^sigma vs <lap> I", [&](double k) { return jb(k, sigma); },
       [&](double k) { return (1.0 + k * k) * m(k); }},
      {"H^gamma vs H^2 of I (lower)", [&](double k) { return jb(k, g); },
       [&](double k) { return jb(k, 2.0) * m(k); }},
      {"H^2 of I vs N^(2-gamma) H^gamma (upper)", [&](double k) { return jb(k, 2.0) * m(k); },
       [&](double k) { return n_pow_gap * jb(k, g); }},
      {"homogeneous H^2 of I vs N^(2-gamma) H^gamma", [&](double k) { return k * k * m(k); },
       [&](double k) { return n_pow_gap * hom(k, g); }},
  };

  IPropertyReport rep;
  rep.N = N;
  rep.gamma = g;
  rep.sigma = sigma;
  for (const auto& s : specs) {
    const double num = weighted_norm(c, mags, s.lhs);
    const double den = weighted_norm(c, mags, s.rhs);
    if (den == 0.0) {
      throw DomainError(std::string("zero denominator in I-operator check: ") + s.name);
    }
    PropertyCheck pc;
    pc.name = s.name;
    pc.raw_ratio = num / den;
    pc.sharp_constant = sharp_constant(grid, [&](double k) {
      const double r = s.rhs(k);
      return r > 0.0 ? s.lhs(k) / r : 0.0;
    });
    pc.normalized = pc.raw_ratio / pc.sharp_constant;
    rep.l2.push_back(pc);
  }
  if (!q_exponents.empty()) {
    const auto iu = apply_I(u, m);
    for (double q : q_exponents) {
      const double den = lebesgue_norm(u, q);
      if (den == 0.0) throw DomainError("zero L^q norm in I-operator check");
      rep.lq_bounded.emplace_back(q, lebesgue_norm(iu, q) / den);
    }
  }
  return rep;
}

double commutator_norm(const PhysicalField& u, const IMultiplier& m, const NonlinearityParams& params) {
  const auto& grid = u.grid();
  const auto I = m.on_grid(grid);
  const auto F = F_eval(u, params);
  const auto [dz, dzbar] = F_prime(u, params);
  const auto IF = apply_multiplier(F, I);
  const auto Iu = apply_multiplier(u, I);
  double acc = 0.0;
  for (int a = 0; a < grid.dim(); ++a) {
    const auto lhs = partial_derivative(IF, a);
    const auto w = partial_derivative(Iu, a);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const Complex chain = dz[i] * w[i] + dzbar[i] * std::conj(w[i]);
      acc += std::norm(lhs[i] - chain);
    }
  }
  return std::sqrt(acc * grid.cell_volume());
}

std::pair<double, double> least_squares_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("line fit needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

SweepResult almost_conservation_sweep(const PhysicalField& u0, double gamma, double delta,
                                      std::span<const double> N_list, double window,
                                      const EvolveConfig& config) {
  const auto& grid = u0.grid();
  if (N_list.empty()) throw DomainError("almost-conservation sweep needs at least one N");
  for (double N : N_list) {
    if (!(N < 0.5 * grid.nyquist())) {
      throw DomainError("sweep cutoff N=" + std::to_string(N) + " must lie below nyquist/2 = " +
                        std::to_string(0.5 * grid.nyquist()));
    }
  }
  EvolveConfig cfg = config;
  cfg.T_max = window;
  cfg.i_multiplier.reset();
  if (cfg.snapshot_interval <= 0.0) cfg.snapshot_interval = window / 200.0;
  const auto traj = strang_evolve(u0, cfg);
  if (traj.stopped_on_blowup()) {
    throw DomainError("run stopped on '" + to_string(traj.stop) + "' at t=" +
                      std::to_string(traj.final_time()) + " inside the window; use a shorter window");
  }

  SweepResult res;
  res.window = window;
  res.gamma = gamma;
  res.delta = delta;
  res.snapshots = static_cast<int>(traj.snapshots.size());
  const double e0 = traj.series.front().energy;
  for (const auto& r : traj.series) res.raw_energy_drift = std::max(res.raw_energy_drift, std::abs(r.energy - e0));

  std::vector<double> lx, ly;
  for (double N : N_list) {
    const IMultiplier m(N, gamma);
    const auto I = m.on_grid(grid);
    const double ref = energy(apply_multiplier(traj.snapshots.front().field, I), cfg.params);
    double sup = 0.0;
    for (std::size_t k = 1; k < traj.snapshots.size(); ++k) {
      const double e = energy(apply_multiplier(traj.snapshots[k].field, I), cfg.params);
      sup = std::max(sup, std::abs(e - ref));
    }
    res.rows.push_back({N, sup});
    if (sup > 0.0) {
      lx.push_back(std::log(N));
      ly.push_back(std::log(sup));
    }
  }
  if (lx.size() >= 2) {
    std::tie(res.slope, res.intercept) = least_squares_line(lx, ly);
  } else {
    res.slope = std::numeric_limits<double>::quiet_NaN();
    res.intercept = std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

}  // namespace nl4s
