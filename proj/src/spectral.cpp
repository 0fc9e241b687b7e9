#include "nl4s/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "nl4s/error.hpp"

namespace nl4s {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
// Plans are created once per (dim, n) and shared for the process lifetime.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

const PlanPair& plans_for(const GridSpec& grid) {
  static std::map<std::pair<int, std::size_t>, PlanPair> cache;
  std::lock_guard lock(planner_mutex());
  auto key = std::make_pair(grid.dim(), grid.n());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  auto* scratch = fftw_alloc_complex(grid.size());
  const int n = static_cast<int>(grid.n());
  PlanPair p;
  if (grid.dim() == 1) {
    p.forward = fftw_plan_dft_1d(n, scratch, scratch, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_1d(n, scratch, scratch, FFTW_BACKWARD, flags);
  } else {
    p.forward = fftw_plan_dft_2d(n, n, scratch, scratch, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_2d(n, n, scratch, scratch, FFTW_BACKWARD, flags);
  }
  fftw_free(scratch);
  if (p.forward == nullptr || p.backward == nullptr) throw Error("FFTW planning failed");
  return cache.emplace(key, p).first->second;
}

fftw_complex* as_fftw(std::span<Complex> data) {
  return reinterpret_cast<fftw_complex*>(data.data());
}

}  // namespace

void forward_transform(const GridSpec& grid, std::span<Complex> data) {
  if (data.size() != grid.size()) throw GridMismatch("forward_transform: size mismatch");
  const auto& p = plans_for(grid);
  fftw_execute_dft(p.forward, as_fftw(data), as_fftw(data));
  // sum|c|^2 = dx^d sum|u|^2
  const double scale = std::sqrt(grid.cell_volume() / static_cast<double>(grid.size()));
  for (auto& c : data) c *= scale;
}

void inverse_transform(const GridSpec& grid, std::span<Complex> data) {
  if (data.size() != grid.size()) throw GridMismatch("inverse_transform: size mismatch");
  const auto& p = plans_for(grid);
  fftw_execute_dft(p.backward, as_fftw(data), as_fftw(data));
  const double scale = 1.0 / std::sqrt(grid.cell_volume() * static_cast<double>(grid.size()));
  for (auto& c : data) c *= scale;
}

SpectralField to_spectral(const PhysicalField& f) {
  std::vector<Complex> data(f.values().begin(), f.values().end());
  forward_transform(f.grid(), data);
  return SpectralField(f.grid(), std::move(data));
}

PhysicalField to_physical(const SpectralField& f) {
  std::vector<Complex> data(f.coeffs().begin(), f.coeffs().end());
  inverse_transform(f.grid(), data);
  return PhysicalField(f.grid(), std::move(data));
}

// --- multipliers -----------------------------------------------------------

Multiplier::Multiplier(GridSpec grid, std::vector<Complex> symbol)
    : grid_(grid), symbol_(std::move(symbol)) {
  if (symbol_.size() != grid_.size()) throw GridMismatch("Multiplier: symbol size mismatch");
  for (std::size_t i = 0; i < symbol_.size(); ++i) {
    if (!std::isfinite(symbol_[i].real()) || !std::isfinite(symbol_[i].imag())) {
      throw DomainError("Multiplier: non-finite symbol value at lattice index " +
                        std::to_string(i));
    }
  }
}

Multiplier Multiplier::radial(const GridSpec& grid, const RadialSymbol& symbol) {
  const auto mags = grid.frequency_magnitudes();
  std::vector<Complex> s(mags.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = symbol(mags[i]);
  return Multiplier(grid, std::move(s));
}

Multiplier Multiplier::general(const GridSpec& grid, const GeneralSymbol& symbol) {
  std::vector<Complex> s(grid.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto idx = grid.unflatten(i);
    std::array<double, GridSpec::kMaxDim> xi{};
    for (int a = 0; a < grid.dim(); ++a) xi[a] = grid.frequency(idx[a]);
    s[i] = symbol(std::span<const double>(xi.data(), static_cast<std::size_t>(grid.dim())));
  }
  return Multiplier(grid, std::move(s));
}

Multiplier Multiplier::identity(const GridSpec& grid) {
  return Multiplier(grid, std::vector<Complex>(grid.size(), Complex(1.0, 0.0)));
}

Multiplier Multiplier::operator*(const Multiplier& other) const {
  require_same_grid(grid_, other.grid_, "multiplier composition");
  std::vector<Complex> s(symbol_.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = symbol_[i] * other.symbol_[i];
  return Multiplier(grid_, std::move(s));
}

PhysicalField apply_multiplier(const PhysicalField& f, const Multiplier& m) {
  require_same_grid(f.grid(), m.grid(), "apply_multiplier");
  std::vector<Complex> data(f.values().begin(), f.values().end());
  forward_transform(f.grid(), data);
  const auto sym = m.symbol();
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= sym[i];
  inverse_transform(f.grid(), data);
  return PhysicalField(f.grid(), std::move(data));
}

SpectralField apply_multiplier(const SpectralField& f, const Multiplier& m) {
  require_same_grid(f.grid(), m.grid(), "apply_multiplier");
  std::vector<Complex> data(f.coeffs().begin(), f.coeffs().end());
  const auto sym = m.symbol();
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= sym[i];
  return SpectralField(f.grid(), std::move(data));
}

Multiplier fractional_multiplier(const GridSpec& grid, double s, Bracket bracket) {
  if (!(s >= -4.0 && s <= 4.0)) {
    throw DomainError("fractional order must lie in [-4, 4], got " + std::to_string(s));
  }
  if (bracket == Bracket::inhomogeneous) {
    return Multiplier::radial(grid, [s](double k) { return Complex(std::pow(1.0 + k * k, 0.5 * s)); });
  }
  return Multiplier::radial(grid, [s](double k) {
    if (k == 0.0) return Complex(s == 0.0 ? 1.0 : 0.0);
    return Complex(std::pow(k, s));
  });
}

FractionalDerivative fractional_derivative(const PhysicalField& f, double s, Bracket bracket) {
  const auto m = fractional_multiplier(f.grid(), s, bracket);
  bool annihilated = false;
  if (bracket == Bracket::homogeneous && s < 0.0) {
    Complex mean(0.0, 0.0);
    for (const auto& v : f.values()) mean += v;
    mean /= static_cast<double>(f.size());
    double scale = 0.0;
    for (const auto& v : f.values()) scale = std::max(scale, std::abs(v));
    annihilated = std::abs(mean) > 1e-14 * std::max(scale, 1e-300);
  }
  return {apply_multiplier(f, m), annihilated};
}

PhysicalField partial_derivative(const PhysicalField& f, int axis) {
  if (axis < 0 || axis >= f.grid().dim()) throw DomainError("partial_derivative: bad axis");
  const auto& g = f.grid();
  std::vector<Complex> sym(g.size());
  const auto comp = g.frequency_component(axis);
  for (std::size_t i = 0; i < sym.size(); ++i) {
    // The Nyquist mode of an even grid has no well-defined derivative.
    const bool nyq = g.wavenumber(g.unflatten(i)[axis]) == -static_cast<int>(g.n() / 2);
    sym[i] = nyq ? Complex(0.0) : Complex(0.0, comp[i]);
  }
  return apply_multiplier(f, Multiplier(g, std::move(sym)));
}

// --- Littlewood-Paley ------------------------------------------------------

double smoothstep(double t) noexcept {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * (3.0 - 2.0 * t);
}

double lp_bump(double r) noexcept {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  return 1.0 - smoothstep(std::log2(r));
}

bool is_dyadic(double M) noexcept {
  if (!(M > 0.0) || !std::isfinite(M)) return false;
  int e = 0;
  const double mant = std::frexp(M, &e);
  return mant == 0.5;
}

Multiplier lp_multiplier(const GridSpec& grid, double M, LpMode mode) {
  if (!is_dyadic(M)) throw DomainError("Littlewood-Paley scale must be a power of two");
  switch (mode) {
    case LpMode::leq:
      return Multiplier::radial(grid, [M](double k) { return Complex(lp_bump(k / M)); });
    case LpMode::gt:
      return Multiplier::radial(grid, [M](double k) { return Complex(1.0 - lp_bump(k / M)); });
    case LpMode::eq:
      return Multiplier::radial(
          grid, [M](double k) { return Complex(lp_bump(k / M) - lp_bump(2.0 * k / M)); });
  }
  throw DomainError("unknown Littlewood-Paley mode");
}

PhysicalField lp_project(const PhysicalField& f, double M, LpMode mode) {
  return apply_multiplier(f, lp_multiplier(f.grid(), M, mode));
}

BernsteinReport bernstein_check(const PhysicalField& f, double M, double s) {
  const auto& g = f.grid();
  const auto spec = to_spectral(f);
  const auto mags = g.frequency_magnitudes();
  const auto c = spec.coeffs();

  double annulus = 0.0, annulus_d = 0.0;
  double high = 0.0, high_d = 0.0;
  double low = 0.0, low_d = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double k = mags[i];
    const double e = std::norm(c[i]);
    const double ds = k == 0.0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(k, s);
    const double pm = lp_bump(k / M) - lp_bump(2.0 * k / M);
    const double pge = 1.0 - lp_bump(2.0 * k / M);
    const double ple = lp_bump(k / M);
    annulus += pm * pm * e;
    annulus_d += pm * pm * ds * ds * e;
    high += pge * pge * e;
    high_d += pge * pge * ds * ds * e;
    low += ple * ple * e;
    low_d += ple * ple * ds * ds * e;
  }
  if (annulus <= 0.0) throw DomainError("bernstein_check: P_M f vanishes, ratio undefined");
  const double Ms = std::pow(M, s);
  BernsteinReport r;
  r.M = M;
  r.s = s;
  r.annulus_ratio = std::sqrt(annulus_d) / (Ms * std::sqrt(annulus));
  r.high_ratio = high_d > 0.0 ? std::sqrt(high) * Ms / std::sqrt(high_d) : 0.0;
  r.low_ratio = low > 0.0 ? std::sqrt(low_d) / (Ms * std::sqrt(low)) : 0.0;
  return r;
}

}  // namespace nl4s
