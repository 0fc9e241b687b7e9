#include "nl4s/field.hpp"

#include <cmath>
#include <string>

#include "nl4s/error.hpp"

namespace nl4s {

namespace {

void require_size(const GridSpec& grid, std::size_t count, const char* what) {
  if (count != grid.size()) {
    throw GridMismatch(std::string(what) + ": expected " + std::to_string(grid.size()) +
                       " samples, got " + std::to_string(count));
  }
}

void require_finite(std::span<const Complex> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) {
      throw DomainError(std::string(what) + ": non-finite entry at index " + std::to_string(i));
    }
  }
}

}  // namespace

PhysicalField::PhysicalField(GridSpec grid) : grid_(grid), values_(grid.size()) {}

PhysicalField::PhysicalField(GridSpec grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  require_size(grid_, values_.size(), "PhysicalField");
  require_finite(values_, "PhysicalField");
}

PhysicalField& PhysicalField::operator+=(const PhysicalField& other) {
  require_same_grid(grid_, other.grid_, "field addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

PhysicalField& PhysicalField::operator-=(const PhysicalField& other) {
  require_same_grid(grid_, other.grid_, "field subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

PhysicalField& PhysicalField::operator*=(Complex scale) {
  for (auto& v : values_) v *= scale;
  return *this;
}

PhysicalField operator+(PhysicalField a, const PhysicalField& b) { return a += b; }
PhysicalField operator-(PhysicalField a, const PhysicalField& b) { return a -= b; }
PhysicalField operator*(Complex s, PhysicalField a) { return a *= s; }

SpectralField::SpectralField(GridSpec grid) : grid_(grid), coeffs_(grid.size()) {}

SpectralField::SpectralField(GridSpec grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  require_size(grid_, coeffs_.size(), "SpectralField");
  require_finite(coeffs_, "SpectralField");
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) {
    throw GridMismatch(std::string(what) + ": grids differ (dim " + std::to_string(a.dim()) + "/" +
                       std::to_string(b.dim()) + ", n " + std::to_string(a.n()) + "/" +
                       std::to_string(b.n()) + ")");
  }
}

double l2_norm(const PhysicalField& f) {
  double s = 0.0;
  for (const auto& v : f.values()) s += std::norm(v);
  return std::sqrt(s * f.grid().cell_volume());
}

double l2_norm(const SpectralField& f) {
  double s = 0.0;
  for (const auto& v : f.coeffs()) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace nl4s
