#include "nl4s/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "nl4s/error.hpp"
#include "nl4s/observables.hpp"
#include "nl4s/spectral.hpp"

namespace nl4s {

namespace {

std::vector<Complex> nonlinear_term(const GridSpec& grid, std::span<const Complex> q_hat,
                                    double p, std::vector<Complex>& q_phys) {
  q_phys.assign(q_hat.begin(), q_hat.end());
  inverse_transform(grid, q_phys);
  for (auto& v : q_phys) v = Complex(v.real(), 0.0);
  std::vector<Complex> n(q_phys.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double a = std::abs(q_phys[i].real());
    n[i] = a == 0.0 ? 0.0 : std::pow(a, p) * q_phys[i].real();
  }
  forward_transform(grid, n);
  return n;
}

double spectral_residual(std::span<const double> symbol, std::span<const Complex> q_hat,
                         std::span<const Complex> n_hat) {
  double r = 0.0, q = 0.0;
  for (std::size_t i = 0; i < q_hat.size(); ++i) {
    r += std::norm(symbol[i] * q_hat[i] - n_hat[i]);
    q += std::norm(q_hat[i]);
  }
  return std::sqrt(r / q);
}

// Index of x = 0 along each axis is n/2.
std::size_t peak_shift(const GridSpec& g, std::span<const Complex> q, int axis) {
  std::size_t best = 0;
  double val = -1.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double a = std::abs(q[i]);
    if (a > val) {
      val = a;
      best = i;
    }
  }
  return g.unflatten(best)[axis];
}

// Multiplies by exp(i xi . shift dx) to move the peak to the origin.
void recenter(const GridSpec& g, std::span<const Complex> q_phys, std::span<Complex> q_hat) {
  std::array<double, GridSpec::kMaxDim> shift{};
  bool any = false;
  for (int a = 0; a < g.dim(); ++a) {
    const auto j = peak_shift(g, q_phys, a);
    const auto off = static_cast<double>(static_cast<std::ptrdiff_t>(j) -
                                         static_cast<std::ptrdiff_t>(g.n() / 2));
    shift[a] = off * g.dx();
    any = any || off != 0.0;
  }
  if (!any) return;
  for (std::size_t i = 0; i < q_hat.size(); ++i) {
    const auto idx = g.unflatten(i);
    double phase = 0.0;
    for (int a = 0; a < g.dim(); ++a) phase += g.frequency(idx[a]) * shift[a];
    q_hat[i] *= std::polar(1.0, phase);
  }
}

// Enforces a real profile by Hermitian symmetrization c(k) <- (c(k) + conj c(-k)) / 2,
// done on the coefficients so small high modes keep their relative accuracy.
void make_real(const GridSpec& g, std::span<Complex> q_hat) {
  std::vector<Complex> tmp(q_hat.begin(), q_hat.end());
  const std::size_t n = g.n();
  for (std::size_t i = 0; i < tmp.size(); ++i) {
    const auto idx = g.unflatten(i);
    std::size_t j = 0;
    for (int a = 0; a < g.dim(); ++a) j = j * n + (n - idx[a]) % n;
    q_hat[i] = 0.5 * (tmp[i] + std::conj(tmp[j]));
  }
}

}  // namespace

PhysicalField gaussian_initial_guess(const GridSpec& grid, double width) {
  return sample(grid, [width](std::span<const double> x) {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    return Complex(std::exp(-r2 / (width * width)));
  });
}

double gn_ratio(const PhysicalField& v, double p) {
  const double l2 = l2_norm(v);
  const double lap = laplacian_norm(v);
  if (l2 == 0.0 || lap == 0.0) throw DomainError("GN ratio undefined for fields with zero norm");
  const double lq = std::pow(lebesgue_norm(v, p + 2.0), p + 2.0);
  return lq / (std::pow(l2, p) * lap * lap);
}

GroundStateRecord petviashvili_solve(const GridSpec& grid, double p, const PhysicalField& init,
                                     const PetviashviliOptions& options) {
  require_same_grid(grid, init.grid(), "petviashvili_solve");
  if (!(p > 0.0)) throw DomainError("nonlinearity power must be positive");
  if (!(options.tol > 0.0)) throw DomainError("tolerance must be positive");
  if (l2_norm(init) == 0.0) throw DomainError("initial guess must be nonzero");

  const auto mags = grid.frequency_magnitudes();
  std::vector<double> symbol(mags.size());
  for (std::size_t i = 0; i < mags.size(); ++i) {
    const double k2 = mags[i] * mags[i];
    symbol[i] = 1.0 + k2 * k2;
  }
  const double theta = (p + 1.0) / p;

  std::vector<Complex> q_hat(init.values().begin(), init.values().end());
  for (auto& v : q_hat) v = Complex(v.real(), 0.0);
  forward_transform(grid, q_hat);

  std::vector<Complex> q_phys;
  double residual = INFINITY;
  double S = 0.0;
  int it = 0;
  for (; it < options.max_iter; ++it) {
    auto n_hat = nonlinear_term(grid, q_hat, p, q_phys);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < q_hat.size(); ++i) {
      num += symbol[i] * std::norm(q_hat[i]);
      den += (std::conj(n_hat[i]) * q_hat[i]).real();
    }
    S = num / den;
    if (!(S >= 1e-6 && S <= 1e6)) {
      throw ConvergenceError("Petviashvili iteration diverged: stabilization factor " +
                                 std::to_string(S) + " left [1e-6, 1e6]",
                             residual, it);
    }
    residual = spectral_residual(symbol, q_hat, n_hat);
    if (residual < options.tol && std::abs(S - 1.0) < options.tol) break;

    const double factor = std::pow(S, theta);
    for (std::size_t i = 0; i < q_hat.size(); ++i) q_hat[i] = factor * n_hat[i] / symbol[i];
    if (options.recenter) {
      std::vector<Complex> phys(q_hat.begin(), q_hat.end());
      inverse_transform(grid, phys);
      recenter(grid, phys, q_hat);
      make_real(grid, q_hat);
    }
  }
  if (it == options.max_iter) {
    throw ConvergenceError("Petviashvili iteration hit max_iter=" + std::to_string(options.max_iter) +
                               " with residual " + std::to_string(residual),
                           residual, it);
  }

  std::vector<Complex> phys(q_hat.begin(), q_hat.end());
  inverse_transform(grid, phys);
  for (auto& v : phys) v = Complex(v.real(), 0.0);
  auto rec = certify_ground_state(PhysicalField(grid, std::move(phys)), p);
  rec.Q_hat = SpectralField(grid, std::move(q_hat));
  rec.residual = residual;
  rec.stabilization = S;
  rec.iterations = it;
  return rec;
}

GroundStateRecord certify_ground_state(const PhysicalField& Q, double p) {
  const auto& grid = Q.grid();
  const auto q_hat = to_spectral(Q);
  const auto mags = grid.frequency_magnitudes();
  std::vector<double> symbol(mags.size());
  for (std::size_t i = 0; i < mags.size(); ++i) symbol[i] = 1.0 + std::pow(mags[i], 4);
  std::vector<Complex> scratch;
  const auto n_hat = nonlinear_term(grid, q_hat.coeffs(), p, scratch);

  GroundStateRecord rec{Q, q_hat, p};
  rec.residual_physical = spectral_residual(symbol, q_hat.coeffs(), n_hat);
  rec.residual = rec.residual_physical;
  rec.mass = mass(Q);
  rec.laplacian_norm = laplacian_norm(Q);
  rec.c_attained = gn_ratio(Q, p);
  rec.stabilization = 1.0;
  return rec;
}

PhysicalField random_localized_field(const GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double L = grid.half_width();
  const int bumps = count(rng);
  struct Bump {
    std::array<double, GridSpec::kMaxDim> c;
    double w;
    Complex a;
    std::array<double, GridSpec::kMaxDim> k;
  };
  std::vector<Bump> bs;
  const double wmin = 6.0 * grid.dx();
  const double wmax = 0.15 * L;
  for (int b = 0; b < bumps; ++b) {
    Bump bump{};
    bump.w = wmin * std::pow(wmax / wmin, unit(rng));
    for (int a = 0; a < grid.dim(); ++a) {
      bump.c[a] = (unit(rng) - 0.5) * L;
      bump.k[a] = normal(rng) / bump.w;
    }
    bump.a = Complex(normal(rng), normal(rng));
    bs.push_back(bump);
  }
  return sample(grid, [&](std::span<const double> x) {
    Complex v(0.0);
    for (const auto& b : bs) {
      double r2 = 0.0, ph = 0.0;
      for (std::size_t a = 0; a < x.size(); ++a) {
        r2 += (x[a] - b.c[a]) * (x[a] - b.c[a]);
        ph += b.k[a] * x[a];
      }
      v += b.a * std::exp(-r2 / (b.w * b.w)) * std::polar(1.0, ph);
    }
    return v;
  });
}

GnReport gn_verify(const GroundStateRecord& record, int samples, std::uint64_t seed, double tol) {
  const auto& Q = record.Q;
  const double p = record.p;
  GnReport rep;
  rep.c_attained = gn_ratio(Q, p);
  const double lq = std::pow(lebesgue_norm(Q, p + 2.0), p + 2.0);
  const double lap = laplacian_norm(Q);
  rep.attainment_rel_error = std::abs(lq - (1.0 + 0.5 * p) * lap * lap) / lq;
  NonlinearityParams params{p, -1, 0};
  rep.energy = energy(Q, params);
  rep.energy_over_lap2 = rep.energy / (lap * lap);
  rep.samples = samples;
  for (int s = 0; s < samples; ++s) {
    const auto v = random_localized_field(Q.grid(), seed + static_cast<std::uint64_t>(s));
    const double r = gn_ratio(v, p);
    rep.max_sample_ratio = std::max(rep.max_sample_ratio, r);
    if (r > rep.c_attained * (1.0 + tol)) {
      throw DomainError("GN violation: sample " + std::to_string(s) + " has ratio " +
                        std::to_string(r) + " > C_attained " + std::to_string(rep.c_attained) +
                        " (wrong Q or under-resolved grid)");
    }
  }
  return rep;
}

}  // namespace nl4s
