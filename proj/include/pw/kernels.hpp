#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "pw/quadrature.hpp"
#include "pw/siegel.hpp"
#include "pw/special.hpp"
#include "pw/spectral.hpp"

namespace pw::kernels {

using cplx = std::complex<double>;
using heisenberg::CVec;
using siegel::Horocyclic;
using siegel::SiegelPoint;

// Q(omega, zeta) = (omega_{n+1} - conj zeta_{n+1})/(2i) - omega'.conj(zeta')/4
cplx q_pairing(const SiegelPoint& omega, const SiegelPoint& zeta);

enum class KernelKind { Szego, Bergman, WeightedDirichlet, DirichletLog, BallDirichlet };

struct KernelId {
  KernelKind kind = KernelKind::Bergman;
  int n = 1;
  double nu = 0.0;
  int m = 0;
  bool dotted = false;  // DirichletLog without the additive 1

  static KernelId szego(int n);
  static KernelId bergman(int n, double nu);
  // nu in (-n-2, -1); nu = -n-1 is the Drury-Arveson kernel. Requires 2m + nu > -1.
  static KernelId weighted_dirichlet(int n, double nu, int m);
  static KernelId dirichlet_log(int n, int m, bool dotted = false);
  // Kernel of the dotted Dirichlet space on the unit ball of C^{n+1}.
  static KernelId ball_dirichlet(int n);

  GammaExpr constant_expr() const;
  double constant() const;
  // K = constant * Q^{-power} for the power-type kernels.
  double power() const;
  std::string name() const;
  // The space whose reproducing kernel this is (BallDirichlet has none on U).
  spectral::SpaceTag space() const;
};

struct EvalOptions {
  // Track the logarithm continuously through the factor logs; when off, a product with
  // non-positive real part throws instead of silently picking the principal branch.
  bool track_branch = true;
};

cplx kernel_eval(const KernelId& id, const SiegelPoint& omega, const SiegelPoint& zeta, const EvalOptions& opt = {});
cplx kernel_eval(const KernelId& id, const Horocyclic& omega, const Horocyclic& zeta, const EvalOptions& opt = {});
// d^j/d omega_{n+1}^j of K(omega, zeta).
cplx kernel_vertical_derivative(const KernelId& id, const SiegelPoint& omega, const SiegelPoint& zeta, int j);
// ((n+1)!/pi^{n+1}) log(1/(1 - omega.conj(zeta))) on the unit ball of C^{n+1}.
cplx ball_kernel_eval(int n, const CVec& omega, const CVec& zeta);

// omega -> K(omega, zeta) as a function on U with analytic vertical derivatives.
spectral::HolomorphicFunction kernel_function(const KernelId& id, const Horocyclic& zeta);

struct CheckResult {
  cplx lhs;
  cplx rhs;
  double rel_error;
};

// <K(., w0), K(., zeta)> by configuration quadrature against K(zeta, w0).
CheckResult reproducing_check(const KernelId& id, const Horocyclic& zeta, const Horocyclic& w0,
                              const spectral::ConfigurationRule& rule);
// <c, K(., zeta)> in the Dirichlet space (non-dotted kernel) against c.
CheckResult constant_reproducing_check(const KernelId& id, const Horocyclic& zeta, cplx c,
                                       const spectral::ConfigurationRule& rule);
// Suggested configuration rule for integrating against kernels centred at the given points.
spectral::ConfigurationRule kernel_rule(const KernelId& id, const Horocyclic& a, const Horocyclic& b,
                                        bool fast = false);

// D(omega, zeta) = K(omega,omega) + K(zeta,zeta) - 2 Re K(omega,zeta) for the dotted Dirichlet kernel.
double dirichlet_distance(const KernelId& id, const SiegelPoint& omega, const SiegelPoint& zeta);
// D(phi zeta, phi omega) against D(zeta, omega).
CheckResult mobius_invariance_check(const KernelId& id, const siegel::Automorphism& phi, const SiegelPoint& zeta,
                                    const SiegelPoint& omega);
// K(a,b) - K(a,c) - K(d,b) + K(d,c) before and after phi.
CheckResult mobius_cross_check(const KernelId& id, const siegel::Automorphism& phi, const SiegelPoint& a,
                               const SiegelPoint& b, const SiegelPoint& c, const SiegelPoint& d);

struct CayleyResult {
  cplx ball;             // K^B(omega, zeta)
  cplx transferred;      // ((n+1)!/(pi^{n+1} gamma)) Kdot^U(C omega, C zeta)
  double log_rel_error;  // |ball - transferred| / |ball|, 0 when both vanish
  double exp_rel_error;  // 1/(1 - omega.conj zeta) against the Q ratio
};
CayleyResult cayley_transfer_check(int m, const CVec& omega_ball, const CVec& zeta_ball);

// C0 with int_U rho(w)^a / |Q(zeta, w)|^{a+b+n+2} dw = C0 rho(zeta)^{-b}.
double beta_chain_constant(double a, double b, int n);
GammaExpr beta_chain_constant_expr(double a, double b, int n);
// The reduced s-, r- and k-integrals by nested tan-mapped Gauss-Jacobi rules; returns C0.
double beta_chain_nested_quadrature(double a, double b, int n, int order = 48);
// The original integral at zeta by importance sampling.
quadrature::MonteCarloResult beta_chain_monte_carlo(double a, double b, const Horocyclic& zeta, std::uint64_t samples,
                                                 std::uint64_t seed);

// int_U |Q(zeta,w)^{-m} - Q(i,w)^{-m}|^2 rho(w)^{2m-n-2} dw and its ratio to
// (1+|zeta|^2)^{2m+1}/rho(zeta). Reported only; the bound has no explicit constant.
struct DifferenceIntegral {
  double integral;
  double ratio;
};
DifferenceIntegral dirichlet_difference_integral(int n, int m, const SiegelPoint& zeta,
                                                 const spectral::ConfigurationRule& rule);

struct GramResult {
  std::vector<cplx> matrix;  // row-major
  double min_eigenvalue;
  double trace;
  double hermitian_defect;
};
GramResult gram_matrix(const KernelId& id, const std::vector<SiegelPoint>& points);
GramResult ball_gram_matrix(int n, const std::vector<CVec>& points);

}  // namespace pw::kernels
