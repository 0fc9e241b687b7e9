#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>
#include <vector>

namespace nl4s {

using Rational = boost::rational<std::int64_t>;

// A Lebesgue exponent in [1, inf], held exactly.
class Exponent {
 public:
  Exponent(Rational value);  // NOLINT: implicit from rationals is intended
  Exponent(std::int64_t value) : Exponent(Rational(value)) {}  // NOLINT
  static Exponent infinity();

  bool infinite() const noexcept { return infinite_; }
  // Only meaningful when finite.
  Rational value() const noexcept { return value_; }
  // 1/p, zero for p = inf.
  Rational reciprocal() const;
  double to_double() const;
  std::string str() const;

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  Exponent() = default;
  Rational value_{0};
  bool infinite_ = false;
};

// Parses "16/5", "4", "inf".
Exponent parse_exponent(const std::string& text);

struct AdmissiblePair {
  Exponent p_t;
  Exponent q_x;
  int d_ana = 1;
};

// gamma_{p,q} = d/2 - d/q - 4/p, exact.
Rational gamma_pq(const Exponent& p_t, const Exponent& q_x, int d_ana);

// (p,q) in [2,inf]^2, (p,q,d) != (2,inf,2), 2/p + d/q <= d/2.
bool is_schrodinger_admissible(const AdmissiblePair& pair);
// Schrodinger admissible, q < inf, gamma_{p,q} == 0.
bool is_biharmonic_admissible(const AdmissiblePair& pair);

// Pairs the almost-conservation analysis labels biharmonic admissible, for a
// given analysis dimension; `gamma` feeds the gamma-dependent pair when that
// pair exists (d - 4 gamma > 0).
std::vector<AdmissiblePair> named_biharmonic_pairs(int d_ana, Rational gamma);

// Default finite stand-in for the sup over all biharmonic pairs:
// {(inf,2), (2, 2d/(d-4)), (16/d, 4), (4, 2d/(d-2))}, keeping the admissible ones.
std::vector<AdmissiblePair> default_pair_catalogue(int d);

struct ExponentReport {
  int d_ana = 0;
  double gamma = 0;
  double delta = 0;
  // 2(2 + 16/d + 4/g)(2-g) / ((2-g+delta) - (2-g)(16/d + 4/g))
  double a_gamma = 0;
  // 0 < a_gamma < 2, the range the blowup analysis needs.
  bool a_gamma_in_range = false;
  // (4 d g^2 + (2d+48) g + 16 d) / (16 d + (56-3d) g - 16 g^2)
  double a_dgamma = 0;
  // (56 - 3d + sqrt(137 d^2 + 1712 d + 3136)) / (2 (2d+32))
  double gamma_lower_conc = 0;
  // 8d / (3d + 8)
  double gamma_lower_gwp = 0;
  // a(gamma) / (2 (2 - gamma)), the power in N(T) ~ Lambda(T)^...
  double n_of_t_exponent = 0;
  // 4(2-g) / ((2-g+delta) g - 4(2-g)); NaN when the denominator is not positive.
  double sobolev_growth_exponent = 0;
  // (2-g)/g, the power in N ~ lambda^...
  double n_of_lambda_exponent = 0;
  // ceil(gamma) <= 1 + 8/d
  bool regularity_ok = false;
  // delta < gamma + 8/d - 3
  bool delta_in_range = false;
};

// Evaluates every exponent in 50-digit arithmetic. Throws DomainError when
// gamma is outside (0,2), delta < 0, d < 1, or a denominator is not positive.
ExponentReport compute_paper_exponents(int d_ana, double gamma, double delta);

double gamma_lower_conc(int d_ana);
double gamma_lower_gwp(int d_ana);
Rational gamma_lower_gwp_exact(int d_ana);
bool regularity_ok(int d_ana, double gamma);

}  // namespace nl4s
