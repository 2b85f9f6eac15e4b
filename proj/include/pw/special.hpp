#pragma once

#include <complex>
#include <string>
#include <vector>

namespace pw {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// exp(z) - 1 without cancellation for small |z|.
cplx expm1(cplx z);

// Principal-branch complex power with the convention 0^a = 0 for Re a > 0.
cplx cpow(cplx base, double a);

// log Gamma for positive arguments, throwing on non-positive input.
double log_gamma(double x);
double log_beta(double a, double b);

// Upper tail sum_{k > m} x^k / k! times exp(-x) (Poisson tail), x >= 0.
double poisson_tail(double x, int m);

// Symbolic product of constants: coef * prod base_i^{e_i} * prod Gamma(g_j)^{s_j}.
// Kept symbolic so reports can print the exact constant.
class GammaExpr {
 public:
  GammaExpr() = default;
  explicit GammaExpr(double coef) : coef_(coef) {}

  GammaExpr& times_power(std::string base_name, double base, double exponent);
  GammaExpr& times_gamma(double arg, int sign = 1);
  GammaExpr& times(double c);

  double value() const;
  double log_value() const;
  std::string to_string() const;

 private:
  struct Power {
    std::string name;
    double base;
    double exponent;
  };
  struct GammaFactor {
    double arg;
    int sign;
  };
  double coef_ = 1.0;
  std::vector<Power> powers_;
  std::vector<GammaFactor> gammas_;
};

std::string format_number(double x);

}  // namespace pw
