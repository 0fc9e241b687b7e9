#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nl4s/field.hpp"

namespace nl4s {

SpectralField to_spectral(const PhysicalField& f);
PhysicalField to_physical(const SpectralField& f);

// In-place unitary transforms on raw row-major buffers of grid.size() entries.
void forward_transform(const GridSpec& grid, std::span<Complex> data);
void inverse_transform(const GridSpec& grid, std::span<Complex> data);

// Diagonal Fourier multiplier with its symbol tabulated on a grid's lattice.
class Multiplier {
 public:
  using RadialSymbol = std::function<Complex(double /*|xi|*/)>;
  using GeneralSymbol = std::function<Complex(std::span<const double> /*xi*/)>;

  // Throws DomainError if any symbol value is not finite.
  Multiplier(GridSpec grid, std::vector<Complex> symbol);

  static Multiplier radial(const GridSpec& grid, const RadialSymbol& symbol);
  static Multiplier general(const GridSpec& grid, const GeneralSymbol& symbol);
  static Multiplier identity(const GridSpec& grid);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const Complex> symbol() const noexcept { return symbol_; }

  // Pointwise product of two multipliers (composition of the operators).
  Multiplier operator*(const Multiplier& other) const;

 private:
  GridSpec grid_;
  std::vector<Complex> symbol_;
};

PhysicalField apply_multiplier(const PhysicalField& f, const Multiplier& m);
SpectralField apply_multiplier(const SpectralField& f, const Multiplier& m);

enum class Bracket { homogeneous, inhomogeneous };

struct FractionalDerivative {
  PhysicalField field;
  // True when s < 0 (homogeneous) discarded a nonzero mean.
  bool zero_mode_annihilated = false;
};

// |grad|^s (symbol |xi|^s, zero mode sent to 0 when s < 0) or
// <grad>^s (symbol (1+|xi|^2)^(s/2)). Requires s in [-4, 4].
FractionalDerivative fractional_derivative(const PhysicalField& f, double s, Bracket bracket);

Multiplier fractional_multiplier(const GridSpec& grid, double s, Bracket bracket);

// Spectral gradient component d/dx_axis.
PhysicalField partial_derivative(const PhysicalField& f, int axis);

// Littlewood-Paley bump: 1 on r <= 1, 0 on r >= 2, cubic smoothstep in
// log2(r) between.
double lp_bump(double r) noexcept;

// Rising cubic smoothstep 3t^2 - 2t^3 clamped to [0, 1].
double smoothstep(double t) noexcept;

enum class LpMode { leq, gt, eq };

// P_{<=M}, P_{>M}, P_M with the bump above. M must be a power of two.
PhysicalField lp_project(const PhysicalField& f, double M, LpMode mode);
Multiplier lp_multiplier(const GridSpec& grid, double M, LpMode mode);

// True if M = 2^k for some integer k.
bool is_dyadic(double M) noexcept;

struct BernsteinReport {
  double M = 0;
  double s = 0;
  // ||P_M |grad|^s f|| / (M^s ||P_M f||), lies in [2^-|s|, 2^|s|].
  double annulus_ratio = 0;
  // ||P_{>=M} f|| M^s / || |grad|^s P_{>=M} f||, bounded by 2^s for s > 0
  // since P_{>=M} = 1 - phi(2 xi / M) is supported on |xi| >= M/2.
  double high_ratio = 0;
  // ||P_{<=M} |grad|^s f|| / (M^s ||P_{<=M} f||), bounded by 2^s for s > 0.
  double low_ratio = 0;
};

// Throws DomainError when P_M f vanishes.
BernsteinReport bernstein_check(const PhysicalField& f, double M, double s);

}  // namespace nl4s
