#pragma once

#include <complex>
#include <span>
#include <vector>

#include "nl4s/grid.hpp"

namespace nl4s {

using Complex = std::complex<double>;

// Complex samples of a function on a periodic grid, row-major.
class PhysicalField {
 public:
  explicit PhysicalField(GridSpec grid);  // zero field
  PhysicalField(GridSpec grid, std::vector<Complex> values);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }
  std::span<Complex> values() noexcept { return values_; }
  std::vector<Complex>&& release() && { return std::move(values_); }

  Complex operator[](std::size_t i) const noexcept { return values_[i]; }
  Complex& operator[](std::size_t i) noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  PhysicalField& operator+=(const PhysicalField& other);
  PhysicalField& operator-=(const PhysicalField& other);
  PhysicalField& operator*=(Complex scale);

 private:
  GridSpec grid_;
  std::vector<Complex> values_;
};

PhysicalField operator+(PhysicalField a, const PhysicalField& b);
PhysicalField operator-(PhysicalField a, const PhysicalField& b);
PhysicalField operator*(Complex s, PhysicalField a);

// Unitary Fourier coefficients in FFT ordering: sum |c|^2 == dx^dim * sum |u|^2.
class SpectralField {
 public:
  explicit SpectralField(GridSpec grid);
  SpectralField(GridSpec grid, std::vector<Complex> coeffs);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

 private:
  GridSpec grid_;
  std::vector<Complex> coeffs_;
};

// Field from a function of position; `fn` receives the coordinate array.
template <typename Fn>
PhysicalField sample(const GridSpec& grid, Fn&& fn) {
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto idx = grid.unflatten(i);
    std::array<double, GridSpec::kMaxDim> x{};
    for (int a = 0; a < grid.dim(); ++a) x[a] = grid.coordinate(idx[a]);
    v[i] = fn(std::span<const double>(x.data(), static_cast<std::size_t>(grid.dim())));
  }
  return PhysicalField(grid, std::move(v));
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

// L2 norm over the box (grid sum times cell volume).
double l2_norm(const PhysicalField& f);
double l2_norm(const SpectralField& f);

}  // namespace nl4s
