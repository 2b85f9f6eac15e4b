#include "pw/special.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "pw/errors.hpp"

namespace pw {

cplx expm1(cplx z) {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

cplx cpow(cplx base, double a) {
  if (a == 0.0) return 1.0;
  if (base == cplx(0.0)) return 0.0;
  if (base.imag() == 0.0 && base.real() > 0.0) return std::pow(base.real(), a);
  return std::exp(a * std::log(base));
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive, got " + format_number(x));
  return std::lgamma(x);
}

double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

double poisson_tail(double x, int m) {
  if (x < 0.0) throw DomainError("poisson_tail: x must be non-negative");
  if (x == 0.0) return 0.0;
  // Sum terms directly from k = m+1 upward in log space.
  double log_term = (m + 1) * std::log(x) - std::lgamma(m + 2.0) - x;
  double sum = 0.0;
  for (int k = m + 1; k < m + 2000; ++k) {
    const double term = std::exp(log_term);
    sum += term;
    if (k > x && term < 1e-18 * sum) break;
    log_term += std::log(x) - std::log(k + 1.0);
  }
  return sum;
}

GammaExpr& GammaExpr::times_power(std::string base_name, double base, double exponent) {
  powers_.push_back({std::move(base_name), base, exponent});
  return *this;
}

GammaExpr& GammaExpr::times_gamma(double arg, int sign) {
  gammas_.push_back({arg, sign});
  return *this;
}

GammaExpr& GammaExpr::times(double c) {
  coef_ *= c;
  return *this;
}

double GammaExpr::log_value() const {
  if (!(coef_ > 0.0)) throw DomainError("GammaExpr: log of non-positive constant");
  double v = std::log(coef_);
  for (const auto& p : powers_) v += p.exponent * std::log(p.base);
  for (const auto& g : gammas_) v += g.sign * log_gamma(g.arg);
  return v;
}

double GammaExpr::value() const {
  if (coef_ == 0.0) return 0.0;
  double sign = coef_ < 0.0 ? -1.0 : 1.0;
  GammaExpr pos = *this;
  pos.coef_ = std::abs(coef_);
  return sign * std::exp(pos.log_value());
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  std::string s = os.str();
  return s;
}

namespace {
std::string short_number(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}
}  // namespace

std::string GammaExpr::to_string() const {
  std::vector<std::string> num;
  std::vector<std::string> den;
  if (coef_ != 1.0) num.push_back(short_number(coef_));
  for (const auto& g : gammas_) (g.sign > 0 ? num : den).push_back("Γ(" + short_number(g.arg) + ")");
  for (const auto& p : powers_) {
    if (p.exponent == 0.0) continue;
    const double e = std::abs(p.exponent);
    std::string term = p.name;
    const auto glyphs = std::count_if(term.begin(), term.end(), [](char c) { return (c & 0xC0) != 0x80; });
    if (glyphs > 1 && e != 1.0) term = "(" + term + ")";
    if (e != 1.0) term += "^" + short_number(e);
    (p.exponent > 0 ? num : den).push_back(term);
  }
  // juxtaposition, with a dot only where two numerals would merge
  auto join = [](const std::vector<std::string>& v) {
    std::string out;
    for (const auto& t : v) {
      if (!out.empty() && std::isdigit(static_cast<unsigned char>(out.back())) &&
          std::isdigit(static_cast<unsigned char>(t.front())))
        out += "·";
      out += t;
    }
    return out;
  };
  std::string out = num.empty() ? "1" : join(num);
  if (!den.empty()) out += den.size() == 1 ? "/" + join(den) : "/(" + join(den) + ")";
  return out;
}

}  // namespace pw
