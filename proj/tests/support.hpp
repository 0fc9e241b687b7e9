#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "nl4s/field.hpp"

namespace nl4s::testing {

// Complex white noise, unit variance per component.
inline PhysicalField white_noise(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<Complex> v(g.size());
  for (auto& z : v) {
    const double re = nd(rng);
    z = Complex(re, nd(rng));
  }
  return PhysicalField(g, std::move(v));
}

// Smooth random field: a few Gaussians with random centers, widths and tilts.
inline PhysicalField smooth_random(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double L = g.half_width();
  struct B {
    double c[2], w, k[2];
    Complex a;
  };
  std::vector<B> bs(3);
  for (auto& b : bs) {
    b.c[0] = 0.4 * L * u(rng);
    b.c[1] = 0.4 * L * u(rng);
    b.w = 0.5 + 1.5 * (u(rng) + 1.0);
    b.k[0] = 3.0 * u(rng);
    b.k[1] = 3.0 * u(rng);
    b.a = Complex(u(rng), u(rng));
  }
  return sample(g, [&](std::span<const double> x) {
    Complex s = 0.0;
    for (const auto& b : bs) {
      double r2 = 0.0, ph = 0.0;
      for (std::size_t a = 0; a < x.size(); ++a) {
        r2 += (x[a] - b.c[a]) * (x[a] - b.c[a]);
        ph += b.k[a] * x[a];
      }
      s += b.a * std::exp(-r2 / (b.w * b.w)) * std::polar(1.0, ph);
    }
    return s;
  });
}

// Direct DFT with the library's unitary normalization and FFT ordering (1D).
inline std::vector<Complex> naive_dft_1d(const PhysicalField& f) {
  const auto& g = f.grid();
  const std::size_t n = g.n();
  std::vector<Complex> out(n);
  const double scale = std::sqrt(g.dx() / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += f[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * j % n) / static_cast<double>(n));
    }
    out[k] = acc * scale;
  }
  return out;
}

inline double rel_l2(std::span<const Complex> a, std::span<const Complex> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

inline double grid_l2(const PhysicalField& f) {
  double s = 0.0;
  for (const auto& z : f.values()) s += std::norm(z);
  return std::sqrt(s * f.grid().cell_volume());
}

}  // namespace nl4s::testing
