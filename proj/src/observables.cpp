#include "nl4s/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nl4s/error.hpp"

namespace nl4s {

double mass(const PhysicalField& u) {
  double s = 0.0;
  for (const auto& v : u.values()) s += std::norm(v);
  return s * u.grid().cell_volume();
}

double energy(const SpectralField& u_hat, const PhysicalField& u, const NonlinearityParams& params) {
  params.validate();
  const auto mags = u.grid().frequency_magnitudes();
  const auto c = u_hat.coeffs();
  double lap = 0.0, grad = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double k2 = mags[i] * mags[i];
    const double e = std::norm(c[i]);
    lap += k2 * k2 * e;
    grad += k2 * e;
  }
  double pot = 0.0;
  const double q = params.p + 2.0;
  for (const auto& v : u.values()) pot += std::pow(std::abs(v), q);
  pot *= u.grid().cell_volume();
  return 0.5 * lap - 0.5 * params.epsilon * grad + params.mu / q * pot;
}

double energy(const PhysicalField& u, const NonlinearityParams& params) {
  return energy(to_spectral(u), u, params);
}

double sobolev_norm(const SpectralField& u_hat, double s, Bracket bracket) {
  const auto mags = u_hat.grid().frequency_magnitudes();
  const auto c = u_hat.coeffs();
  double acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double k = mags[i];
    double w;
    if (bracket == Bracket::inhomogeneous) {
      w = std::pow(1.0 + k * k, s);
    } else {
      w = k == 0.0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(k, 2.0 * s);
    }
    acc += w * std::norm(c[i]);
  }
  return std::sqrt(acc);
}

double sobolev_norm(const PhysicalField& u, double s, Bracket bracket) {
  return sobolev_norm(to_spectral(u), s, bracket);
}

double laplacian_norm(const PhysicalField& u) {
  return sobolev_norm(u, 2.0, Bracket::homogeneous);
}

double sup_norm(const PhysicalField& u) {
  double m = 0.0;
  for (const auto& v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

double lebesgue_norm(const PhysicalField& u, double q) {
  if (std::isinf(q)) return sup_norm(u);
  if (!(q >= 1.0)) throw DomainError("Lebesgue exponent must be >= 1");
  double s = 0.0;
  for (const auto& v : u.values()) s += std::pow(std::abs(v), q);
  return std::pow(s * u.grid().cell_volume(), 1.0 / q);
}

double lebesgue_norm(const PhysicalField& u, const Exponent& q) {
  return q.infinite() ? sup_norm(u) : lebesgue_norm(u, q.to_double());
}

double spectral_tail_fraction(const SpectralField& u_hat) {
  const auto& g = u_hat.grid();
  const auto mags = g.frequency_magnitudes();
  const double cut = 0.5 * g.nyquist();
  double tail = 0.0, total = 0.0;
  const auto c = u_hat.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double e = std::norm(c[i]);
    total += e;
    if (mags[i] > cut) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

double boundary_mass_fraction(const PhysicalField& u, double radius_fraction) {
  const auto& g = u.grid();
  const double edge = (1.0 - radius_fraction) * g.half_width();
  double inside = 0.0, total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto idx = g.unflatten(i);
    bool near = false;
    for (int a = 0; a < g.dim(); ++a) near = near || std::abs(g.coordinate(idx[a])) >= edge;
    const double e = std::norm(u[i]);
    total += e;
    if (near) inside += e;
  }
  return total > 0.0 ? inside / total : 0.0;
}

Concentration concentration(const PhysicalField& u, double alpha) {
  const auto& g = u.grid();
  if (!(alpha > 0.0) || alpha > g.half_width()) {
    throw DomainError("concentration radius must lie in (0, L]");
  }
  // Periodic ball indicator centred on index 0, convolved with |u|^2.
  std::vector<Complex> ball(g.size()), dens(g.size());
  const double dx = g.dx();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.unflatten(i);
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      const double off = dx * g.wavenumber(idx[a]);  // signed periodic offset
      r2 += off * off;
    }
    ball[i] = r2 <= alpha * alpha * (1.0 + 1e-12) ? 1.0 : 0.0;
    dens[i] = std::norm(u[i]);
  }
  Concentration out;
  double total = 0.0;
  for (const auto& d : dens) total += d.real();
  for (int a = 0; a < g.dim(); ++a) out.center[a] = g.coordinate(0);
  if (total == 0.0) {
    for (int a = 0; a < g.dim(); ++a) out.center[a] = 0.0;
    return out;
  }
  // With unitary transforms, conv = IFFT(FFT a * FFT b) * sqrt(N / dV) * dV.
  forward_transform(g, ball);
  forward_transform(g, dens);
  for (std::size_t i = 0; i < g.size(); ++i) dens[i] *= ball[i];
  inverse_transform(g, dens);
  const double scale = std::sqrt(static_cast<double>(g.size()) / g.cell_volume()) * g.cell_volume();
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : dens) best = std::max(best, v.real() * scale);
  const double tie_tol = 1e-12 * std::max(best, 1e-300);
  std::size_t arg = 0;
  for (std::size_t i = 0; i < dens.size(); ++i) {
    if (dens[i].real() * scale >= best - tie_tol) {
      arg = i;
      break;
    }
  }
  out.value = std::clamp(dens[arg].real() * scale, 0.0, total * g.cell_volume());
  const auto idx = g.unflatten(arg);
  for (int a = 0; a < g.dim(); ++a) out.center[a] = g.coordinate(idx[a]);
  return out;
}

double spacetime_norm(std::span<const TimedField> snapshots, const Exponent& p_t,
                      const Exponent& q_x, const Multiplier* transform) {
  if (snapshots.size() < 2) throw DomainError("spacetime_norm needs at least two snapshots");
  std::vector<double> g(snapshots.size());
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    if (k > 0 && !(snapshots[k].time > snapshots[k - 1].time)) {
      throw DomainError("snapshot times must be strictly increasing");
    }
    const auto& f = snapshots[k].field;
    g[k] = transform ? lebesgue_norm(apply_multiplier(f, *transform), q_x) : lebesgue_norm(f, q_x);
  }
  if (p_t.infinite()) return *std::max_element(g.begin(), g.end());
  const double p = p_t.to_double();
  double acc = 0.0;
  for (std::size_t k = 1; k < g.size(); ++k) {
    const double h = snapshots[k].time - snapshots[k - 1].time;
    acc += 0.5 * h * (std::pow(g[k - 1], p) + std::pow(g[k], p));
  }
  return std::pow(acc, 1.0 / p);
}

double Z_I_estimate(std::span<const TimedField> snapshots, const Multiplier& i_symbol,
                    std::span<const AdmissiblePair> catalogue) {
  if (catalogue.empty()) throw DomainError("Z_I estimate needs a non-empty pair catalogue");
  for (const auto& pair : catalogue) {
    if (!is_biharmonic_admissible(pair)) {
      throw DomainError("catalogue pair (" + pair.p_t.str() + ", " + pair.q_x.str() +
                        ") is not biharmonic admissible");
    }
  }
  const auto bracket = Multiplier::radial(i_symbol.grid(), [](double k) { return Complex(1.0 + k * k); });
  const auto op = bracket * i_symbol;
  double best = 0.0;
  for (const auto& pair : catalogue) {
    best = std::max(best, spacetime_norm(snapshots, pair.p_t, pair.q_x, &op));
  }
  return best;
}

}  // namespace nl4s
