#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "pw/fock.hpp"
#include "pw/heisenberg.hpp"

namespace pw::da {

using cplx = std::complex<double>;
using fock::MultiIndex;
using heisenberg::CVec;

// Polynomial on C^dim with sparse complex coefficients; zero coefficients are dropped.
class BallPolynomial {
 public:
  explicit BallPolynomial(int dim);
  static BallPolynomial constant(int dim, cplx c);
  static BallPolynomial monomial(const MultiIndex& alpha, cplx c = 1.0);
  // Sums and products of numbers, i, z1..z{dim}, ^ with integer exponents and parentheses,
  // e.g. "z1*z2 + 0.5*z1^3 - (1+2i) z2". Throws ParseError.
  static BallPolynomial parse(const std::string& text, int dim);

  int dim() const { return dim_; }
  int degree() const;
  const std::map<MultiIndex, cplx>& coefficients() const { return coeffs_; }
  cplx coefficient(const MultiIndex& alpha) const;
  void add(const MultiIndex& alpha, cplx c);

  cplx operator()(const CVec& z) const;
  BallPolynomial operator+(const BallPolynomial& o) const;
  BallPolynomial operator-(const BallPolynomial& o) const;
  BallPolynomial operator*(const BallPolynomial& o) const;
  BallPolynomial operator*(cplx c) const;
  std::string to_string() const;

 private:
  int dim_;
  std::map<MultiIndex, cplx> coeffs_;
};

// sum_alpha (alpha!/|alpha|!) |a_alpha|^2
double da_norm_coeff_sq(const BallPolynomial& f);
// sum_alpha |alpha| (alpha!/|alpha|!) |a_alpha|^2; constants have norm 0.
double dot_dirichlet_norm_coeff_sq(const BallPolynomial& f);

// R z^alpha = |alpha| z^alpha
BallPolynomial radial_derivative(const BallPolynomial& f);
// R_0 = Id, R_k = (Id + R/k) R_{k-1}, applied by the recursion.
BallPolynomial script_r(int k, const BallPolynomial& f);
// Eigenvalue of R_k on degree-d monomials: (k+d)!/(k! d!), via log-Gamma.
double script_r_eigenvalue(int k, int d);

// int over the unit sphere of C^dim of |z^alpha|^2 d sigma = 2 pi^dim alpha!/(dim-1+|alpha|)!
double sphere_monomial_integral(const MultiIndex& alpha);

struct RadialRule {
  int order = 24;  // Gauss-Jacobi nodes in u = |z|^2
};

// n n!/pi^{n+1} int_B (1-|z|^2)^{n-1} |z|^{-2n} |R_n f|^2 dz with dim = n+1 >= 2, by sphere
// orthogonality and a Gauss-Jacobi rule in u = |z|^2 (the |z|^{-2n} factor cancels analytically).
double da_norm_integral_sq(const BallPolynomial& f, const RadialRule& rule = {});

// Same integral by a full tensor rule (radius, simplex coordinates |z_j|^2, torus angles) with
// no orthogonality assumed; dim 2 or 3.
double da_norm_integral_direct(const BallPolynomial& f, int order = 16);

}  // namespace pw::da
