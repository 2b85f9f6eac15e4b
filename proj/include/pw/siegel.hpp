#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "pw/heisenberg.hpp"

namespace pw::siegel {

using cplx = std::complex<double>;
using heisenberg::CVec;

// Points of the closed half-space are treated as boundary points when |rho| is below this.
inline constexpr double kBoundaryBand = 1e-12;

struct SiegelPoint {
  CVec zp;    // zeta' in C^n
  cplx last;  // zeta_{n+1}
  int dim() const { return static_cast<int>(zp.size()); }
};

// Horocyclic chart (z, t, h) with h = rho.
struct Horocyclic {
  CVec z;
  double t = 0.0;
  double h = 0.0;
  int dim() const { return static_cast<int>(z.size()); }
};

// Base point (0', i).
SiegelPoint i_point(int n);

// Im zeta_{n+1} - |zeta'|^2/4
double rho(const SiegelPoint& p);
Horocyclic psi(const SiegelPoint& p);
SiegelPoint psi_inv(const Horocyclic& c);
SiegelPoint psi_inv(const CVec& z, double t, double h);

// Cayley transform from the unit ball of C^{n+1}; C(0) = (0', i).
SiegelPoint cayley(const CVec& omega);
CVec cayley_inv(const SiegelPoint& p);

struct Translation {
  heisenberg::Element g;
};
struct Dilation {
  double delta;
};
struct Unitary {
  int n;
  std::vector<cplx> u;  // row-major n x n
};
struct Inversion {};
struct Automorphism;
struct Composition {
  std::vector<Automorphism> parts;  // applied first to last
};

struct Automorphism {
  std::variant<Translation, Dilation, Unitary, Inversion, Composition> kind;
};

// Builds a Unitary after checking U*U = I within 1e-12.
Unitary make_unitary(int n, std::vector<cplx> u);

SiegelPoint apply(const Automorphism& phi, const SiegelPoint& p);

// c_n with |P(zeta, r)| = c_n r^{2n+4}; computed once and cached.
double tent_constant(int n);
// Volume of the unit ball of the homogeneous metric on H_n.
double heisenberg_unit_ball_volume(int n);
double tent_volume(int n, double r);
bool in_tent(const Horocyclic& center, double r, const SiegelPoint& q);

}  // namespace pw::siegel
