#include "pw/heisenberg.hpp"

#include <cmath>

#include "pw/errors.hpp"

namespace pw::heisenberg {

cplx hermitian_dot(const CVec& w, const CVec& z) {
  if (w.size() != z.size()) throw DimensionError("hermitian_dot: length mismatch");
  cplx s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * std::conj(z[j]);
  return s;
}

double norm_sq(const CVec& z) {
  double s = 0.0;
  for (const auto& c : z) s += std::norm(c);
  return s;
}

Element mul(const Element& a, const Element& b) {
  if (a.dim() != b.dim()) throw DimensionError("heisenberg::mul: dimension mismatch");
  Element out;
  out.z.resize(a.z.size());
  for (std::size_t j = 0; j < a.z.size(); ++j) out.z[j] = a.z[j] + b.z[j];
  out.t = a.t + b.t - 0.5 * hermitian_dot(a.z, b.z).imag();
  return out;
}

Element inv(const Element& a) {
  Element out{a.z, -a.t};
  for (auto& c : out.z) c = -c;
  return out;
}

double homogeneous_norm(const Element& a) {
  const double r2 = norm_sq(a.z);
  return std::pow(r2 * r2 / 16.0 + a.t * a.t, 0.25);
}

double distance(const Element& a, const Element& b) { return homogeneous_norm(mul(a, inv(b))); }

bool in_ball(const Element& center, double r, const Element& a) { return distance(a, center) < r; }

Element dilate(double delta, const Element& a) {
  if (!(delta > 0.0)) throw DomainError("dilate: delta must be positive");
  Element out{a.z, delta * delta * a.t};
  for (auto& c : out.z) c *= delta;
  return out;
}

}  // namespace pw::heisenberg
