#pragma once

#include <complex>
#include <vector>

namespace pw::heisenberg {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Hermitian product w.z̄ = sum_j w_j conj(z_j); the one convention used everywhere.
cplx hermitian_dot(const CVec& w, const CVec& z);
double norm_sq(const CVec& z);

// Element [z, t] of the Heisenberg group H_n = C^n x R.
struct Element {
  CVec z;
  double t = 0.0;

  int dim() const { return static_cast<int>(z.size()); }
  static Element identity(int n) { return {CVec(n, 0.0), 0.0}; }
};

// [w,s][z,t] = [w+z, s+t - Im(w.z̄)/2]
Element mul(const Element& a, const Element& b);
Element inv(const Element& a);
// (|z|^4/16 + t^2)^{1/4}
double homogeneous_norm(const Element& a);
// d(a, b) = |a b^{-1}|
double distance(const Element& a, const Element& b);
bool in_ball(const Element& center, double r, const Element& a);
// (z, t) -> (delta z, delta^2 t)
Element dilate(double delta, const Element& a);

}  // namespace pw::heisenberg
