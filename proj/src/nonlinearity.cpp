#include <cmath>
#include <limits>

#include "nl4s/error.hpp"
#include "nl4s/observables.hpp"

namespace nl4s {

NonlinearityParams NonlinearityParams::mass_critical(int d_sim) {
  return {8.0 / static_cast<double>(d_sim), -1, 0};
}

void NonlinearityParams::validate() const {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("nonlinearity power p must be positive");
  if (mu != 1 && mu != -1) throw DomainError("mu must be +1 or -1");
  if (epsilon < -1 || epsilon > 1) throw DomainError("epsilon must be -1, 0 or +1");
}

PhysicalField F_eval(const PhysicalField& u, const NonlinearityParams& params) {
  params.validate();
  std::vector<Complex> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double a = std::abs(u[i]);
    out[i] = a == 0.0 ? Complex(0.0) : std::pow(a, params.p) * u[i];
  }
  return PhysicalField(u.grid(), std::move(out));
}

std::pair<PhysicalField, PhysicalField> F_prime(const PhysicalField& u,
                                                const NonlinearityParams& params) {
  params.validate();
  const double p = params.p;
  std::vector<Complex> dz(u.size()), dzbar(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = std::abs(u[i]);
    if (a == 0.0) continue;
    const double ap = std::pow(a, p);
    dz[i] = (1.0 + 0.5 * p) * ap;
    // z / zbar = z^2 / |z|^2
    dzbar[i] = 0.5 * p * ap * (u[i] * u[i]) / (a * a);
  }
  return {PhysicalField(u.grid(), std::move(dz)), PhysicalField(u.grid(), std::move(dzbar))};
}

std::vector<double> F_second_mag(const PhysicalField& u, const NonlinearityParams& params) {
  params.validate();
  const double p = params.p;
  const double c = (1.0 + 0.5 * p) * 0.5 * p;
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double a = std::abs(u[i]);
    if (a == 0.0) {
      out[i] = p > 1.0 ? 0.0 : (p == 1.0 ? c : std::numeric_limits<double>::infinity());
    } else {
      out[i] = c * std::pow(a, p - 1.0);
    }
  }
  return out;
}

}  // namespace nl4s
