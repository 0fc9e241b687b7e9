#include "nl4s/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nl4s/error.hpp"

namespace nl4s {

GridSpec::GridSpec(int dim, std::size_t n, double half_width)
    : dim_(dim), n_(n), half_width_(half_width) {
  if (dim < 1 || dim > kMaxDim) {
    throw DomainError("grid dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (n < 16 || (n & (n - 1)) != 0) {
    throw DomainError("points per axis must be a power of two >= 16, got " + std::to_string(n));
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw DomainError("box half-width must be positive and finite");
  }
}

double GridSpec::cell_volume() const noexcept { return std::pow(dx(), dim_); }

double GridSpec::box_volume() const noexcept { return std::pow(2.0 * half_width_, dim_); }

std::size_t GridSpec::size() const noexcept { return dim_ == 1 ? n_ : n_ * n_; }

double GridSpec::coordinate(std::size_t j) const noexcept {
  return -half_width_ + static_cast<double>(j) * dx();
}

int GridSpec::wavenumber(std::size_t j) const noexcept {
  const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
  const auto jj = static_cast<std::ptrdiff_t>(j);
  return static_cast<int>(jj < half ? jj : jj - static_cast<std::ptrdiff_t>(n_));
}

double GridSpec::frequency(std::size_t j) const noexcept {
  return std::numbers::pi / half_width_ * wavenumber(j);
}

double GridSpec::nyquist() const noexcept {
  return std::numbers::pi / half_width_ * static_cast<double>(n_ / 2);
}

double GridSpec::max_frequency() const noexcept { return nyquist() * std::sqrt(double(dim_)); }

std::array<std::size_t, GridSpec::kMaxDim> GridSpec::unflatten(std::size_t flat) const noexcept {
  if (dim_ == 1) return {flat, 0};
  return {flat / n_, flat % n_};
}

std::vector<double> GridSpec::frequency_magnitudes() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto idx = unflatten(i);
    double s = 0.0;
    for (int a = 0; a < dim_; ++a) {
      const double k = frequency(idx[a]);
      s += k * k;
    }
    out[i] = std::sqrt(s);
  }
  return out;
}

std::vector<double> GridSpec::frequency_component(int axis) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = frequency(unflatten(i)[axis]);
  return out;
}

std::vector<double> GridSpec::radii() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto idx = unflatten(i);
    double s = 0.0;
    for (int a = 0; a < dim_; ++a) {
      const double x = coordinate(idx[a]);
      s += x * x;
    }
    out[i] = std::sqrt(s);
  }
  return out;
}

}  // namespace nl4s
