#pragma once

#include <complex>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "pw/fock.hpp"
#include "pw/quadrature.hpp"
#include "pw/siegel.hpp"

namespace pw::spectral {

using cplx = std::complex<double>;
using siegel::Horocyclic;
using siegel::SiegelPoint;
using heisenberg::CVec;

enum class SpaceKind { Hardy, Bergman, WeightedDirichlet, DruryArveson, Dirichlet };

// Function space on the half-space with its parameters; constructors validate ranges.
struct SpaceTag {
  SpaceKind kind = SpaceKind::Bergman;
  int n = 1;
  double nu = 0.0;  // weight parameter (Hardy: -1, Drury-Arveson: -n-1, Dirichlet: -n-2)
  int m = 0;        // derivative order (0 for Hardy and Bergman)

  static SpaceTag hardy(int n);
  static SpaceTag bergman(int n, double nu);
  static SpaceTag weighted_dirichlet(int n, double nu, int m);
  static SpaceTag drury_arveson(int n, int m);
  static SpaceTag dirichlet(int n, int m);

  // Constant G in ||F||^2 = G ||tau||^2_{L^2_nu} (Hardy: 1).
  double pw_constant() const;
  std::string pw_constant_expr() const;
  // Power of h in the configuration-space norm of the m-th vertical derivative.
  double weight_exponent() const { return 2.0 * m + nu; }
  std::string name() const;
};

// phi(lambda) = coef |lambda|^power e^{-decay |lambda|}
struct ScalarProfile {
  cplx coef = 1.0;
  double power = 0.0;
  double decay = 1.0;
};

struct FiniteTerm {
  fock::MultiIndex alpha;
  ScalarProfile profile;
};

// tau for the reproducing kernel at `base` of the given space.
struct KernelFamily {
  SpaceTag space;
  Horocyclic base;
};

// v(lambda) = sum_alpha phi_alpha(lambda) e_alpha (distinct alphas).
struct FiniteFamily {
  std::vector<FiniteTerm> terms;
};

// v(lambda) sampled at the nodes mu_k = -lambda_k of a half-line rule; integrals use
// that rule with its weight divided out.
struct SampledFamily {
  quadrature::HalfLineRule rule;
  std::vector<fock::FockVector> values;
};

// Paley-Wiener datum: tau(lambda) f = <f, v(lambda)> e_0 for lambda < 0 and 0 for lambda > 0,
// times `factor` * lambda^lambda_power.
class SpectralProfile {
 public:
  using Family = std::variant<KernelFamily, FiniteFamily, SampledFamily>;

  SpectralProfile(int n, Family family, cplx factor = 1.0, int lambda_power = 0);
  static SpectralProfile zero(int n) { return SpectralProfile(n, FiniteFamily{}); }

  int n() const { return n_; }
  const Family& family() const { return family_; }
  cplx factor() const { return factor_; }
  int lambda_power() const { return lambda_power_; }
  bool is_dirichlet_kernel() const;

  // v(lambda) on the given truncation (zero vector for lambda > 0).
  fock::FockVector value(double lambda, const fock::TruncationPtr& trunc) const;
  // ||tau(lambda)||_HS = ||v(lambda)||, using a truncation fine enough for 1e-17 tails.
  double hs_norm_sq(double lambda) const;

  // Analytic continuation of conj(v(-mu)) into Re mu > 0 (principal branches).
  void conj_coefficients(cplx mu, const fock::FockTruncation& trunc, std::vector<cplx>& out) const;
  // Fock degree needed at |mu| for synthesis at z with relative tail below 1e-17.
  int synthesis_degree(double abs_mu, const std::vector<cplx>& z) const;
  // Exponent p with ||v(lambda)|| ~ |lambda|^p as lambda -> 0 (including lambda_power).
  double small_exponent() const;
  // Exponent q of the leading term of mu^n * sum_alpha conj(v_alpha) conj(c_alpha)(z,t).
  double synthesis_exponent() const;
  // Complex exponential rates w_j: the synthesis integrand is a sum of e^{-w_j mu} times powers.
  std::vector<cplx> synthesis_rates(const Horocyclic& p) const;

 private:
  int n_;
  Family family_;
  cplx factor_;
  int lambda_power_;
};

struct SynthesisOptions {
  int node_count = 32;
  bool rotate_contour = true;
  double max_rotation = 1.3;   // radians
  bool check_resolution = false;
  double tolerance = 1e-10;    // relative, for the node-doubling check
  // Kernel families: sum the Fock coefficients over a truncated basis instead of pairing the
  // coherent-state rows through the reproducing kernel of F^lambda.
  bool fock_sum = false;
};

// (2 pi)^{-(n+1)} int_{-inf}^0 e^{h lambda} tr(tau(lambda) sigma_lambda[z,t]*) |lambda|^n d lambda
cplx synthesize(const SpectralProfile& tau, const SiegelPoint& p, const SynthesisOptions& opt = {});
cplx synthesize(const SpectralProfile& tau, const Horocyclic& p, const SynthesisOptions& opt = {});

// Subtracted synthesis for the Dirichlet space: integrand uses e^{lambda h} sigma[z,t]* - e^{lambda} sigma[0,0]*.
cplx synthesize_dirichlet(const SpectralProfile& tau, const SiegelPoint& p, cplx c, const SynthesisOptions& opt = {});
cplx synthesize_dirichlet(const SpectralProfile& tau, const Horocyclic& p, cplx c, const SynthesisOptions& opt = {});

// v(lambda) -> lambda^m v(lambda)
SpectralProfile spectral_derivative(const SpectralProfile& tau, int m);

// (2 pi)^{-(n+1)} int ||tau(lambda)||^2_HS |lambda|^{n-nu-1} d lambda
double l2nu_norm_sq(const SpectralProfile& tau, double nu, int node_count = 64);

// Configuration-space norm of synth(tau) evaluated on the spectral side: Plancherel in (z,t)
// for each height, then the h-integral of the slices by quadrature (no closed-form Gamma factor).
double spectral_space_norm_sq(const SpectralProfile& tau, const SpaceTag& tag, int node_count = 64);

// A holomorphic function on the half-space, with its m-th derivative in zeta_{n+1}.
struct HolomorphicFunction {
  std::function<cplx(const Horocyclic&)> value;
  std::function<cplx(const Horocyclic&, int)> vertical_derivative;  // may be empty when m = 0
};

HolomorphicFunction from_profile(const SpectralProfile& tau, const SynthesisOptions& opt = {});
HolomorphicFunction from_dirichlet_profile(const SpectralProfile& tau, cplx c, const SynthesisOptions& opt = {});

// Tensor rule over (h, z, t) with locally adapted tan maps:
//   h = h_scale tan(u) with the weight h^beta integrated by Gauss-Jacobi at u = 0;
//   z = center.z + r omega, r = 2 sqrt(h + r_shift) tan(u), omega on the unit sphere
//       (trapezoid in angles; n = 2 uses Hopf coordinates);
//   t = center.t - Im(z.conj(center.z))/2 + (h + t_shift + |z - center.z|^2/4) tan(u).
struct ConfigurationRule {
  int h_order = 48;
  int r_order = 40;
  int t_order = 64;
  int angle_order = 8;
  double h_scale = 1.0;
  double r_shift = 1.0;
  double t_shift = 1.0;
  // Power-law decay D of the h-integrand (including h^beta) as h -> infinity; the u-rule then
  // carries the endpoint factor (pi/2 - u)^{D-2}. 0 means exponential or unknown decay.
  double h_decay = 0.0;
  // h = h_scale tan(u)^h_power; 2 resolves tails expanding in powers of h^{-1/2}.
  double h_power = 1.0;
  Horocyclic center{{}, 0.0, 0.0};

  std::string describe() const;
  static ConfigurationRule fast();
};

// int_{U} f(z,t,h) h^beta dz dt dh over the chart.
double integrate_chart(const std::function<double(const Horocyclic&)>& f, double beta, int n, const ConfigurationRule& rule);
cplx integrate_chart_complex(const std::function<cplx(const Horocyclic&)>& f, double beta, int n, const ConfigurationRule& rule);
// int_{C^n x R} f(z,t,h) dz dt at fixed h.
cplx integrate_slice(const std::function<cplx(const Horocyclic&)>& f, double h, int n, const ConfigurationRule& rule);

// <F, G> in the space (Hardy uses the extrapolated boundary limit).
cplx space_inner_product(const HolomorphicFunction& f, const HolomorphicFunction& g, const SpaceTag& tag,
                         const ConfigurationRule& rule);
double space_norm_sq(const HolomorphicFunction& f, const SpaceTag& tag, const ConfigurationRule& rule);

struct HardyResult {
  std::vector<double> heights;
  std::vector<double> slice_norms_sq;
  double extrapolated;  // Richardson limit as h -> 0
  double sup_on_grid;
};
HardyResult hardy_norm_sq(const HolomorphicFunction& f, int n, const ConfigurationRule& rule, int levels = 6,
                          double h_max = 0.25);

}  // namespace pw::spectral
