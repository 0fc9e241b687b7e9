#include "nl4s/exponents.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <limits>

#include "nl4s/error.hpp"

namespace nl4s {

Exponent::Exponent(Rational value) : value_(value) {
  if (value < Rational(1)) throw DomainError("Lebesgue exponent must be >= 1");
}

Exponent Exponent::infinity() {
  Exponent e;
  e.infinite_ = true;
  return e;
}

Rational Exponent::reciprocal() const {
  return infinite_ ? Rational(0) : Rational(1) / value_;
}

double Exponent::to_double() const {
  if (infinite_) return std::numeric_limits<double>::infinity();
  return boost::rational_cast<double>(value_);
}

std::string Exponent::str() const {
  if (infinite_) return "inf";
  if (value_.denominator() == 1) return std::to_string(value_.numerator());
  return std::to_string(value_.numerator()) + "/" + std::to_string(value_.denominator());
}

Exponent parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "oo") return Exponent::infinity();
  try {
    const auto slash = text.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const auto v = std::stoll(text, &used);
      if (used != text.size()) throw FormatError("trailing characters");
      return Exponent(Rational(v));
    }
    const auto num = std::stoll(text.substr(0, slash), &used);
    if (used != slash) throw FormatError("trailing characters");
    const auto den_text = text.substr(slash + 1);
    const auto den = std::stoll(den_text, &used);
    if (used != den_text.size() || den == 0) throw FormatError("bad denominator");
    return Exponent(Rational(num, den));
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception&) {
    throw FormatError("cannot parse exponent '" + text + "' (expected integer, a/b or inf)");
  }
}

Rational gamma_pq(const Exponent& p_t, const Exponent& q_x, int d_ana) {
  const Rational d(d_ana);
  return d / 2 - d * q_x.reciprocal() - Rational(4) * p_t.reciprocal();
}

bool is_schrodinger_admissible(const AdmissiblePair& pair) {
  const Rational two(2);
  const bool p_ok = pair.p_t.infinite() || pair.p_t.value() >= two;
  const bool q_ok = pair.q_x.infinite() || pair.q_x.value() >= two;
  if (!p_ok || !q_ok || pair.d_ana < 1) return false;
  if (!pair.p_t.infinite() && pair.p_t.value() == two && pair.q_x.infinite() && pair.d_ana == 2) {
    return false;
  }
  const Rational d(pair.d_ana);
  return two * pair.p_t.reciprocal() + d * pair.q_x.reciprocal() <= d / 2;
}

bool is_biharmonic_admissible(const AdmissiblePair& pair) {
  return is_schrodinger_admissible(pair) && !pair.q_x.infinite() &&
         gamma_pq(pair.p_t, pair.q_x, pair.d_ana) == Rational(0);
}

namespace {

// Keeps a candidate (p, q) only when both exponents are well defined and >= 1.
void push_if_valid(std::vector<AdmissiblePair>& out, Rational p, Rational q, int d, bool p_inf = false) {
  if (!p_inf && p < Rational(1)) return;
  if (q < Rational(1)) return;
  out.push_back({p_inf ? Exponent::infinity() : Exponent(p), Exponent(q), d});
}

}  // namespace

std::vector<AdmissiblePair> named_biharmonic_pairs(int d_ana, Rational gamma) {
  const std::int64_t d = d_ana;
  std::vector<AdmissiblePair> out;
  push_if_valid(out, Rational(16, d), Rational(4), d_ana);
  if (4 * d - 11 > 0) push_if_valid(out, Rational(32, 11), Rational(8 * d, 4 * d - 11), d_ana);
  if (8 - d > 0 && 15 - 2 * d > 0) {
    push_if_valid(out, Rational(16 * (8 - d), d), Rational(4 * (8 - d), 15 - 2 * d), d_ana);
  }
  if (d > 3 && d * d - 3 * d - 2 > 0) {
    push_if_valid(out, Rational(4 * (d - 3)), Rational(2 * d * (d - 3), d * d - 3 * d - 2), d_ana);
  }
  if (d > 3 && 2 * d - 7 > 0) {
    push_if_valid(out, Rational(16 * (d - 3), d), Rational(4 * (d - 3), 2 * d - 7), d_ana);
  }
  const Rational den_p = Rational(d) - Rational(4) * gamma;
  const Rational den_q = Rational(d * d + 4 * d) + Rational(16) * gamma;
  if (den_p > Rational(0) && den_q > Rational(0)) {
    push_if_valid(out, Rational(2 * (d + 8)) / den_p, Rational(2 * d * (d + 8)) / den_q, d_ana);
  }
  return out;
}

std::vector<AdmissiblePair> default_pair_catalogue(int d) {
  std::vector<AdmissiblePair> candidates;
  candidates.push_back({Exponent::infinity(), Exponent(2), d});
  if (d > 4) candidates.push_back({Exponent(2), Exponent(Rational(2 * d, d - 4)), d});
  candidates.push_back({Exponent(Rational(16, d) >= Rational(1) ? Rational(16, d) : Rational(1)),
                        Exponent(4), d});
  if (d > 2) candidates.push_back({Exponent(4), Exponent(Rational(2 * d, d - 2)), d});
  std::vector<AdmissiblePair> out;
  for (const auto& c : candidates) {
    if (is_biharmonic_admissible(c)) out.push_back(c);
  }
  return out;
}

// --- threshold calculus ----------------------------------------------------

namespace {

using Real = boost::multiprecision::cpp_dec_float_50;

Real lower_conc(int d_ana) {
  const Real d(d_ana);
  return (Real(56) - 3 * d + boost::multiprecision::sqrt(137 * d * d + 1712 * d + 3136)) /
         (2 * (2 * d + 32));
}

}  // namespace

double gamma_lower_conc(int d_ana) {
  if (d_ana < 1) throw DomainError("analysis dimension must be >= 1");
  return lower_conc(d_ana).convert_to<double>();
}

Rational gamma_lower_gwp_exact(int d_ana) {
  if (d_ana < 1) throw DomainError("analysis dimension must be >= 1");
  return Rational(8 * d_ana, 3 * d_ana + 8);
}

double gamma_lower_gwp(int d_ana) { return boost::rational_cast<double>(gamma_lower_gwp_exact(d_ana)); }

bool regularity_ok(int d_ana, double gamma) {
  if (d_ana < 1) throw DomainError("analysis dimension must be >= 1");
  // ceil(g) <= 1 + 8/d  <=>  d (ceil(g) - 1) <= 8
  return static_cast<double>(d_ana) * (std::ceil(gamma) - 1.0) <= 8.0;
}

ExponentReport compute_paper_exponents(int d_ana, double gamma, double delta) {
  if (d_ana < 1) throw DomainError("analysis dimension must be >= 1");
  if (!(gamma > 0.0 && gamma < 2.0)) throw DomainError("gamma must lie in (0, 2)");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw DomainError("delta must be >= 0");

  const Real d(d_ana), g(gamma), dl(delta);
  const Real two(2);
  const Real gap = two - g;
  const Real weight = Real(16) / d + Real(4) / g;

  ExponentReport r;
  r.d_ana = d_ana;
  r.gamma = gamma;
  r.delta = delta;

  const Real a_den = (gap + dl) - gap * weight;
  if (!(a_den > 0)) {
    throw DomainError(
        "modified-energy exponent undefined: (2-gamma+delta) - (2-gamma)(16/d+4/gamma) must be "
        "positive");
  }
  const Real a = 2 * (two + weight) * gap / a_den;
  r.a_gamma = a.convert_to<double>();
  r.a_gamma_in_range = a > 0 && a < 2;
  r.n_of_t_exponent = (a / (2 * gap)).convert_to<double>();

  const Real ad_den = 16 * d + (56 - 3 * d) * g - 16 * g * g;
  if (!(ad_den > 0)) {
    throw DomainError(
        "limiting-profile regularity undefined: 16d + (56-3d) gamma - 16 gamma^2 must be positive");
  }
  r.a_dgamma = ((4 * d * g * g + (2 * d + 48) * g + 16 * d) / ad_den).convert_to<double>();

  r.gamma_lower_conc = lower_conc(d_ana).convert_to<double>();
  r.gamma_lower_gwp = gamma_lower_gwp(d_ana);

  const Real growth_den = (gap + dl) * g - 4 * gap;
  r.sobolev_growth_exponent = growth_den > 0 ? (4 * gap / growth_den).convert_to<double>()
                                             : std::numeric_limits<double>::quiet_NaN();
  r.n_of_lambda_exponent = (gap / g).convert_to<double>();
  r.regularity_ok = regularity_ok(d_ana, gamma);
  r.delta_in_range = delta > 0.0 && dl < g + Real(8) / d - 3;
  return r;
}

}  // namespace nl4s
