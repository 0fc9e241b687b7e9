#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace nl4s {

// Periodic Cartesian grid on [-L, L)^dim with n points per axis.
//
// Samples sit at x_j = -L + j*dx. Fourier coefficients use the standard FFT
// ordering: index j corresponds to the integer wavenumber k_j = j for
// j < n/2 and j - n otherwise, with lattice frequency (pi/L)*k_j.
class GridSpec {
 public:
  static constexpr int kMaxDim = 2;

  GridSpec(int dim, std::size_t n, double half_width);

  int dim() const noexcept { return dim_; }
  std::size_t n() const noexcept { return n_; }
  double half_width() const noexcept { return half_width_; }
  double dx() const noexcept { return 2.0 * half_width_ / static_cast<double>(n_); }
  // dx^dim
  double cell_volume() const noexcept;
  double box_volume() const noexcept;
  std::size_t size() const noexcept;

  double coordinate(std::size_t j) const noexcept;
  int wavenumber(std::size_t j) const noexcept;
  double frequency(std::size_t j) const noexcept;
  // pi/L * n/2
  double nyquist() const noexcept;
  // Largest |xi| on the lattice (nyquist * sqrt(dim)).
  double max_frequency() const noexcept;

  // Multi-index of a flat row-major index.
  std::array<std::size_t, kMaxDim> unflatten(std::size_t flat) const noexcept;

  // |xi| for every flat index, in FFT ordering.
  std::vector<double> frequency_magnitudes() const;
  // Component `axis` of xi for every flat index.
  std::vector<double> frequency_component(int axis) const;
  // |x| for every flat index (distance to the origin, not periodic).
  std::vector<double> radii() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int dim_;
  std::size_t n_;
  double half_width_;
};

}  // namespace nl4s
