#include "pw/siegel.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "pw/errors.hpp"
#include "pw/quadrature.hpp"
#include "pw/special.hpp"

namespace pw::siegel {

using heisenberg::norm_sq;

SiegelPoint i_point(int n) { return {CVec(n, 0.0), cplx(0.0, 1.0)}; }

double rho(const SiegelPoint& p) { return p.last.imag() - 0.25 * norm_sq(p.zp); }

Horocyclic psi(const SiegelPoint& p) {
  double h = rho(p);
  if (h < -kBoundaryBand) throw DomainError("psi: point lies outside the closed half-space");
  if (std::abs(h) < kBoundaryBand) h = 0.0;
  return {p.zp, p.last.real(), h};
}

SiegelPoint psi_inv(const CVec& z, double t, double h) {
  if (h < 0.0) throw DomainError("psi_inv: h must be non-negative");
  return {z, cplx(t, 0.25 * norm_sq(z) + h)};
}

SiegelPoint psi_inv(const Horocyclic& c) { return psi_inv(c.z, c.t, c.h); }

SiegelPoint cayley(const CVec& omega) {
  if (omega.size() < 2) throw DimensionError("cayley: ball point must have n+1 >= 2 components");
  const std::size_t n = omega.size() - 1;
  const cplx w = omega[n];
  const cplx den = 1.0 - w;
  if (std::abs(den) == 0.0) throw DomainError("cayley: pole at omega_{n+1} = 1");
  SiegelPoint p;
  p.zp.resize(n);
  for (std::size_t j = 0; j < n; ++j) p.zp[j] = 2.0 * omega[j] / den;
  p.last = cplx(0.0, 1.0) * (1.0 + w) / den;
  return p;
}

CVec cayley_inv(const SiegelPoint& p) {
  const cplx den = p.last + cplx(0.0, 1.0);
  if (std::abs(den) == 0.0) throw DomainError("cayley_inv: pole at zeta_{n+1} = -i");
  CVec omega(p.zp.size() + 1);
  for (std::size_t j = 0; j < p.zp.size(); ++j) omega[j] = cplx(0.0, 1.0) * p.zp[j] / den;
  omega.back() = (p.last - cplx(0.0, 1.0)) / den;
  return omega;
}

Unitary make_unitary(int n, std::vector<cplx> u) {
  if (n <= 0 || u.size() != static_cast<std::size_t>(n * n)) throw DimensionError("make_unitary: need n*n entries");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < n; ++k) s += std::conj(u[k * n + i]) * u[k * n + j];
      if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-12) throw DomainError("make_unitary: matrix is not unitary");
    }
  return {n, std::move(u)};
}

namespace {

SiegelPoint apply_one(const Translation& tr, const SiegelPoint& p) {
  if (tr.g.dim() != p.dim()) throw DimensionError("apply: translation dimension mismatch");
  SiegelPoint out = p;
  for (std::size_t j = 0; j < p.zp.size(); ++j) out.zp[j] = p.zp[j] + tr.g.z[j];
  const cplx i(0.0, 1.0);
  out.last = p.last + tr.g.t + 0.25 * i * norm_sq(tr.g.z) + 0.5 * i * heisenberg::hermitian_dot(p.zp, tr.g.z);
  return out;
}

SiegelPoint apply_one(const Dilation& d, const SiegelPoint& p) {
  if (!(d.delta > 0.0)) throw DomainError("apply: dilation factor must be positive");
  SiegelPoint out = p;
  for (auto& c : out.zp) c *= d.delta;
  out.last *= d.delta * d.delta;
  return out;
}

SiegelPoint apply_one(const Unitary& u, const SiegelPoint& p) {
  if (u.n != p.dim()) throw DimensionError("apply: unitary dimension mismatch");
  SiegelPoint out = p;
  for (int i = 0; i < u.n; ++i) {
    cplx s = 0.0;
    for (int k = 0; k < u.n; ++k) s += u.u[i * u.n + k] * p.zp[k];
    out.zp[i] = s;
  }
  return out;
}

SiegelPoint apply_one(const Inversion&, const SiegelPoint& p) {
  if (std::abs(p.last) == 0.0) throw DomainError("apply: inversion pole at zeta_{n+1} = 0");
  SiegelPoint out = p;
  const cplx i(0.0, 1.0);
  for (auto& c : out.zp) c = i * c / p.last;
  out.last = -1.0 / p.last;
  return out;
}

SiegelPoint apply_one(const Composition& c, const SiegelPoint& p) {
  SiegelPoint out = p;
  for (const auto& part : c.parts) out = apply(part, out);
  return out;
}

}  // namespace

SiegelPoint apply(const Automorphism& phi, const SiegelPoint& p) {
  return std::visit([&](const auto& k) { return apply_one(k, p); }, phi.kind);
}

double heisenberg_unit_ball_volume(int n) {
  if (n < 1) throw DomainError("heisenberg_unit_ball_volume: n must be positive");
  // {|z|^4/16 + t^2 < 1}: t-extent 2 sqrt(1 - s^2) with s = |z|^2/4; polar coordinates in z
  // give (2^{2n+1} pi^n / Gamma(n)) int_0^1 sqrt(1-s^2) s^{n-1} ds.
  const auto g = quadrature::gauss_jacobi(24, 0.5, 0.0);
  double integral = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = 0.5 * (g.nodes[i] + 1.0);
    integral += g.weights[i] * std::pow(0.5, 1.5) * std::sqrt(1.0 + s) * std::pow(s, n - 1);
  }
  return std::exp((2 * n + 1) * std::log(2.0) + n * std::log(kPi) - std::lgamma(n)) * integral;
}

double tent_constant(int n) {
  static std::mutex m;
  static std::map<int, double> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, 2.0 * heisenberg_unit_ball_volume(n)).first;
  return it->second;
}

double tent_volume(int n, double r) {
  if (!(r > 0.0)) throw DomainError("tent_volume: radius must be positive");
  return tent_constant(n) * std::pow(r, 2 * n + 4);
}

bool in_tent(const Horocyclic& center, double r, const SiegelPoint& q) {
  const Horocyclic c = psi(q);
  if (c.dim() != center.dim()) throw DimensionError("in_tent: dimension mismatch");
  const heisenberg::Element a{c.z, c.t}, b{center.z, center.t};
  return heisenberg::in_ball(b, r, a) && std::abs(center.h - c.h) < r * r;
}

}  // namespace pw::siegel
