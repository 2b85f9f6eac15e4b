#include "pw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pw/bargmann.hpp"
#include "pw/errors.hpp"
#include "pw/special.hpp"

namespace pw::spectral {

namespace {

using fock::FockTruncation;
using fock::FockVector;
using fock::TruncationPtr;

constexpr double kSynthesisTail = 1e-17;

double two_pi_factor(int n) { return std::pow(2.0 * kPi, -(n + 1)); }

// 2Q(omega, zeta) in horocyclic coordinates.
cplx two_q(const Horocyclic& w, const Horocyclic& z) {
  CVec d(w.z.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = w.z[j] - z.z[j];
  const double im = heisenberg::hermitian_dot(w.z, z.z).imag();
  return cplx(w.h + z.h + 0.25 * heisenberg::norm_sq(d), -(w.t - z.t + 0.5 * im));
}

Horocyclic i_chart(int n) { return Horocyclic{CVec(n, 0.0), 0.0, 1.0}; }

CVec conj_vec(const CVec& z) {
  CVec out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) out[j] = std::conj(z[j]);
  return out;
}

cplx ipow(cplx x, int k) {
  cplx r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

void check_space_dim(const SpaceTag& s) {
  if (s.n < 1) throw DimensionError("SpaceTag: n must be at least 1");
}

}  // namespace

// ---------------------------------------------------------------- SpaceTag

SpaceTag SpaceTag::hardy(int n) {
  SpaceTag s{SpaceKind::Hardy, n, -1.0, 0};
  check_space_dim(s);
  return s;
}

SpaceTag SpaceTag::bergman(int n, double nu) {
  SpaceTag s{SpaceKind::Bergman, n, nu, 0};
  check_space_dim(s);
  if (!(nu > -1.0)) throw DomainError("Bergman space needs nu > -1");
  return s;
}

SpaceTag SpaceTag::weighted_dirichlet(int n, double nu, int m) {
  SpaceTag s{SpaceKind::WeightedDirichlet, n, nu, m};
  check_space_dim(s);
  if (!(nu > -n - 2.0 && nu < -1.0)) throw DomainError("weighted Dirichlet space needs -n-2 < nu < -1");
  if (!(2.0 * m + nu > -1.0)) throw DomainError("weighted Dirichlet space needs 2m + nu > -1");
  return s;
}

SpaceTag SpaceTag::drury_arveson(int n, int m) {
  SpaceTag s{SpaceKind::DruryArveson, n, -n - 1.0, m};
  check_space_dim(s);
  if (!(2 * m > n)) throw DomainError("Drury-Arveson norm needs 2m > n");
  return s;
}

SpaceTag SpaceTag::dirichlet(int n, int m) {
  SpaceTag s{SpaceKind::Dirichlet, n, -n - 2.0, m};
  check_space_dim(s);
  if (!(2 * m > n + 1)) throw DomainError("Dirichlet space needs 2m > n + 1");
  return s;
}

double SpaceTag::pw_constant() const {
  if (kind == SpaceKind::Hardy) return 1.0;
  const double a = 2.0 * m + nu + 1.0;
  return std::exp(log_gamma(a) - a * std::log(2.0));
}

std::string SpaceTag::pw_constant_expr() const {
  if (kind == SpaceKind::Hardy) return "1";
  const double a = 2.0 * m + nu + 1.0;
  GammaExpr g;
  g.times_gamma(a).times_power("2", 2.0, -a);
  return g.to_string();
}

std::string SpaceTag::name() const {
  std::ostringstream os;
  switch (kind) {
    case SpaceKind::Hardy: os << "hardy(n=" << n << ")"; break;
    case SpaceKind::Bergman: os << "bergman(n=" << n << ",nu=" << format_number(nu) << ")"; break;
    case SpaceKind::WeightedDirichlet:
      os << "weighted-dirichlet(n=" << n << ",nu=" << format_number(nu) << ",m=" << m << ")";
      break;
    case SpaceKind::DruryArveson: os << "drury-arveson(n=" << n << ",m=" << m << ")"; break;
    case SpaceKind::Dirichlet: os << "dirichlet(n=" << n << ",m=" << m << ")"; break;
  }
  return os.str();
}

// ---------------------------------------------------------------- SpectralProfile

SpectralProfile::SpectralProfile(int n, Family family, cplx factor, int lambda_power)
    : n_(n), family_(std::move(family)), factor_(factor), lambda_power_(lambda_power) {
  if (n < 1) throw DimensionError("SpectralProfile: n must be at least 1");
  if (lambda_power < 0) throw DomainError("SpectralProfile: negative lambda power");
  if (const auto* k = std::get_if<KernelFamily>(&family_)) {
    if (k->space.n != n || k->base.dim() != n) throw DimensionError("KernelFamily: dimension mismatch");
    if (!(k->base.h > 0.0)) throw DomainError("KernelFamily: base point must be interior");
  } else if (const auto* f = std::get_if<FiniteFamily>(&family_)) {
    for (std::size_t i = 0; i < f->terms.size(); ++i) {
      const auto& t = f->terms[i];
      if (static_cast<int>(t.alpha.size()) != n) throw DimensionError("FiniteFamily: multi-index length");
      for (int a : t.alpha)
        if (a < 0) throw DomainError("FiniteFamily: negative multi-index entry");
      for (std::size_t j = 0; j < i; ++j)
        if (f->terms[j].alpha == t.alpha) throw DomainError("FiniteFamily: repeated multi-index");
    }
  } else {
    const auto& s = std::get<SampledFamily>(family_);
    if (s.values.size() != s.rule.nodes.size()) throw DomainError("SampledFamily: one value per node");
    for (const auto& v : s.values)
      if (!v.trunc || v.trunc->n() != n) throw DimensionError("SampledFamily: dimension mismatch");
  }
}

bool SpectralProfile::is_dirichlet_kernel() const {
  const auto* k = std::get_if<KernelFamily>(&family_);
  return k && k->space.kind == SpaceKind::Dirichlet;
}

void SpectralProfile::conj_coefficients(cplx mu, const FockTruncation& trunc, std::vector<cplx>& out) const {
  if (trunc.n() != n_) throw DimensionError("conj_coefficients: dimension mismatch");
  out.assign(trunc.dim(), 0.0);
  const cplx scale = std::conj(factor_) * ipow(-mu, lambda_power_);
  if (scale == 0.0) return;
  if (const auto* k = std::get_if<KernelFamily>(&family_)) {
    const double g = k->space.pw_constant();
    const std::vector<cplx> row = bargmann::p0_row_conj(mu, conj_vec(k->base.z), -k->base.t, trunc);
    if (k->space.kind == SpaceKind::Dirichlet) {
      const cplx pre = scale / g * cpow(mu, -n_ - 1.0);
      const cplx e = std::exp(-k->base.h * mu);
      out[0] = pre * std::exp(-mu) *
               expm1(mu * cplx(1.0 - k->base.h - 0.25 * heisenberg::norm_sq(k->base.z), -k->base.t));
      for (int i = 1; i < trunc.dim(); ++i) out[i] = pre * e * row[i];
    } else {
      const cplx pre = scale / g * std::exp(-k->base.h * mu) * cpow(mu, k->space.nu + 1.0);
      for (int i = 0; i < trunc.dim(); ++i) out[i] = pre * row[i];
    }
  } else if (const auto* f = std::get_if<FiniteFamily>(&family_)) {
    for (const auto& t : f->terms) {
      const int i = trunc.index_of(t.alpha);
      if (i < 0) continue;
      out[i] = scale * std::conj(t.profile.coef) * cpow(mu, t.profile.power) * std::exp(-t.profile.decay * mu);
    }
  } else {
    const auto& s = std::get<SampledFamily>(family_);
    if (mu.imag() != 0.0) throw DomainError("SampledFamily: values are known only at real nodes");
    const auto it = std::find(s.rule.nodes.begin(), s.rule.nodes.end(), mu.real());
    if (it == s.rule.nodes.end()) throw DomainError("SampledFamily: mu is not a sample node");
    const FockVector& v = s.values[it - s.rule.nodes.begin()];
    for (int i = 0; i < v.trunc->dim(); ++i) {
      const int j = trunc.index_of((*v.trunc)[i]);
      if (j >= 0) out[j] = scale * std::conj(v.coeffs[i]);
    }
  }
}

FockVector SpectralProfile::value(double lambda, const TruncationPtr& trunc) const {
  FockVector v = FockVector::zero(trunc);
  if (lambda >= 0.0) return v;
  std::vector<cplx> a;
  conj_coefficients(cplx(-lambda, 0.0), *trunc, a);
  for (int i = 0; i < trunc->dim(); ++i) v.coeffs[i] = std::conj(a[i]);
  return v;
}

double SpectralProfile::hs_norm_sq(double lambda) const {
  if (lambda >= 0.0) return 0.0;
  int degree = 0;
  if (const auto* k = std::get_if<KernelFamily>(&family_)) {
    degree = fock::degree_for_tail(-0.5 * lambda * heisenberg::norm_sq(k->base.z), kSynthesisTail);
  } else if (const auto* f = std::get_if<FiniteFamily>(&family_)) {
    for (const auto& t : f->terms) degree = std::max(degree, fock::degree(t.alpha));
  } else {
    for (const auto& v : std::get<SampledFamily>(family_).values) degree = std::max(degree, v.trunc->max_degree());
  }
  return value(lambda, fock::truncation(n_, degree)).norm_sq();
}

int SpectralProfile::synthesis_degree(double abs_mu, const std::vector<cplx>& z) const {
  if (const auto* k = std::get_if<KernelFamily>(&family_)) {
    const double x = 0.5 * abs_mu * std::sqrt(heisenberg::norm_sq(z) * heisenberg::norm_sq(k->base.z));
    return fock::degree_for_tail(x, kSynthesisTail);
  }
  int degree = 0;
  if (const auto* f = std::get_if<FiniteFamily>(&family_)) {
    for (const auto& t : f->terms) degree = std::max(degree, fock::degree(t.alpha));
  } else {
    for (const auto& v : std::get<SampledFamily>(family_).values) degree = std::max(degree, v.trunc->max_degree());
  }
  return degree;
}

double SpectralProfile::small_exponent() const {
  double p = 0.0;
  if (const auto* k = std::get_if<KernelFamily>(&family_)) {
    if (k->space.kind == SpaceKind::Dirichlet) {
      p = -n_ - 1.0 + (heisenberg::norm_sq(k->base.z) > 0.0 ? 0.5 : 1.0);
    } else {
      p = k->space.nu + 1.0;
    }
  } else if (const auto* f = std::get_if<FiniteFamily>(&family_)) {
    p = std::numeric_limits<double>::infinity();
    for (const auto& t : f->terms) p = std::min(p, t.profile.power);
    if (f->terms.empty()) p = 0.0;
  }
  return p + lambda_power_;
}

double SpectralProfile::synthesis_exponent() const {
  double q = 0.0;
  if (const auto* k = std::get_if<KernelFamily>(&family_)) {
    q = k->space.kind == SpaceKind::Dirichlet ? 0.0 : n_ + k->space.nu + 1.0;
  } else if (const auto* f = std::get_if<FiniteFamily>(&family_)) {
    q = std::numeric_limits<double>::infinity();
    for (const auto& t : f->terms) q = std::min(q, t.profile.power + 0.5 * fock::degree(t.alpha) + n_);
    if (f->terms.empty()) q = 0.0;
  }
  return q + lambda_power_;
}

std::vector<cplx> SpectralProfile::synthesis_rates(const Horocyclic& p) const {
  if (p.dim() != n_) throw DimensionError("synthesis_rates: dimension mismatch");
  const cplx gauss(p.h + 0.25 * heisenberg::norm_sq(p.z), -p.t);
  if (const auto* k = std::get_if<KernelFamily>(&family_)) {
    std::vector<cplx> r{two_q(p, k->base)};
    if (k->space.kind == SpaceKind::Dirichlet) r.push_back(gauss + 1.0);
    return r;
  }
  if (const auto* f = std::get_if<FiniteFamily>(&family_)) {
    std::vector<cplx> r;
    for (const auto& t : f->terms) r.push_back(gauss + t.profile.decay);
    if (r.empty()) r.push_back(gauss);
    return r;
  }
  return {gauss};
}

SpectralProfile spectral_derivative(const SpectralProfile& tau, int m) {
  if (m < 0) throw DomainError("spectral_derivative: m must be non-negative");
  return SpectralProfile(tau.n(), tau.family(), tau.factor(), tau.lambda_power() + m);
}

// ---------------------------------------------------------------- synthesis

namespace {

struct RayIntegral {
  const SpectralProfile& tau;
  const Horocyclic& p;
  bool subtracted;
  bool fock_sum;

  // e^{-h mu} mu^n sum_alpha A_alpha(mu) B_alpha(mu; z, t), with the subtracted row for Dirichlet.
  cplx integrand(cplx mu) const {
    const auto* k = std::get_if<KernelFamily>(&tau.family());
    if (k && !fock_sum) return ipow(mu, tau.n()) * coherent(*k, mu);
    const auto* f = std::get_if<FiniteFamily>(&tau.family());
    if (f && f->terms.size() == 1) return ipow(mu, tau.n()) * single_term(f->terms[0], mu);
    return ipow(mu, tau.n()) * basis_sum(mu);
  }

  // One basis coefficient: A_alpha times the alpha entry of the conjugated row.
  cplx single_term(const FiniteTerm& term, cplx mu) const {
    const cplx a = std::conj(tau.factor()) * ipow(-mu, tau.lambda_power()) * std::conj(term.profile.coef) *
                   cpow(mu, term.profile.power) * std::exp(-term.profile.decay * mu);
    const int d = fock::degree(term.alpha);
    if (d == 0) return a * row0(mu);
    cplx b = std::exp(0.5 * d * std::log(0.5 * mu) - 0.5 * fock::log_factorial(term.alpha) +
                      mu * cplx(-p.h - 0.25 * heisenberg::norm_sq(p.z), p.t));
    for (int j = 0; j < tau.n(); ++j) b *= ipow(p.z[j], term.alpha[j]);
    return a * b;
  }

  // Row-0 term e^{-h mu} B_0, or its subtracted form e^{-h mu} B_0 - e^{-mu}.
  cplx row0(cplx mu) const {
    if (subtracted) return std::exp(-mu) * expm1(mu * cplx(1.0 - p.h - 0.25 * heisenberg::norm_sq(p.z), p.t));
    return std::exp(mu * cplx(-p.h - 0.25 * heisenberg::norm_sq(p.z), p.t));
  }

  cplx basis_sum(cplx mu) const {
    const int degree = tau.synthesis_degree(std::abs(mu), p.z);
    const TruncationPtr trunc = fock::truncation(tau.n(), degree);
    std::vector<cplx> a;
    tau.conj_coefficients(mu, *trunc, a);
    const std::vector<cplx> b = bargmann::p0_row_conj(mu, p.z, p.t, *trunc);
    const cplx eh = std::exp(-p.h * mu);
    cplx sum = a[0] == 0.0 ? cplx(0.0) : a[0] * row0(mu);
    for (int i = 1; i < trunc->dim(); ++i)
      if (a[i] != 0.0) sum += a[i] * eh * b[i];
    return sum;
  }

  // Both rows are coherent states of F^lambda, so the sum over alpha is the reproducing kernel
  // e^{(mu/2) z.conj(z0)}; the alpha = 0 term is split off where the Dirichlet subtraction acts.
  cplx coherent(const KernelFamily& k, cplx mu) const {
    const cplx scale = std::conj(tau.factor()) * ipow(-mu, tau.lambda_power()) / k.space.pw_constant();
    const cplx pairing = 0.5 * heisenberg::hermitian_dot(p.z, k.base.z);
    const cplx diag(0.25 * (heisenberg::norm_sq(p.z) + heisenberg::norm_sq(k.base.z)), -(p.t - k.base.t));
    if (k.space.kind != SpaceKind::Dirichlet) {
      const cplx pre = scale * cpow(mu, k.space.nu + 1.0);
      if (!subtracted) return pre * std::exp(-mu * cplx(p.h + k.base.h) - mu * diag + mu * pairing);
      // e^{-h mu} sum_alpha A_alpha B_alpha - A_0 e^{-mu}
      const cplx a0 = pre * std::exp(mu * cplx(-k.base.h - 0.25 * heisenberg::norm_sq(k.base.z), -k.base.t));
      return a0 * row0(mu) + pre * std::exp(-mu * cplx(p.h + k.base.h) - mu * diag) * expm1(mu * pairing);
    }
    const cplx pre = scale * cpow(mu, -tau.n() - 1.0);
    const cplx a0 =
        pre * std::exp(-mu) * expm1(mu * cplx(1.0 - k.base.h - 0.25 * heisenberg::norm_sq(k.base.z), -k.base.t));
    return a0 * row0(mu) + pre * std::exp(-mu * cplx(p.h + k.base.h) - mu * diag) * expm1(mu * pairing);
  }
};

cplx ray_synthesis(const SpectralProfile& tau, const Horocyclic& p, const SynthesisOptions& opt, bool subtracted) {
  if (p.dim() != tau.n()) throw DimensionError("synthesize: dimension mismatch");
  if (!(p.h > 0.0)) throw DomainError("synthesize: point must be interior (h > 0)");
  if (opt.node_count < 1) throw DomainError("synthesize: node_count must be positive");
  if (tau.factor() == 0.0) return 0.0;
  if (const auto* f = std::get_if<FiniteFamily>(&tau.family())) {
    if (f->terms.empty()) return 0.0;
    if (f->terms.size() > 1) {
      // the trace is linear in v; each term gets a rule matched to its own power and rate
      cplx sum = 0.0;
      for (const auto& t : f->terms)
        sum += ray_synthesis(SpectralProfile(tau.n(), FiniteFamily{{t}}, tau.factor(), tau.lambda_power()), p, opt,
                             subtracted);
      return sum;
    }
  }
  const bool sampled = std::holds_alternative<SampledFamily>(tau.family());

  double q = tau.synthesis_exponent();
  if (subtracted) {
    if (tau.is_dirichlet_kernel()) {
      q = tau.lambda_power();
    } else if (const auto* f = std::get_if<FiniteFamily>(&tau.family())) {
      q = std::numeric_limits<double>::infinity();
      for (const auto& t : f->terms) {
        const int d = fock::degree(t.alpha);
        q = std::min(q, t.profile.power + 0.5 * d + tau.n() + (d == 0 ? 1.0 : 0.0));
      }
      q += tau.lambda_power();
    } else if (!sampled) {
      q += 1.0;
    }
  }

  RayIntegral ray{tau, p, subtracted, opt.fock_sum};
  if (sampled) {
    const auto& s = std::get<SampledFamily>(tau.family());
    cplx sum = 0.0;
    for (std::size_t k = 0; k < s.rule.nodes.size(); ++k) {
      const double mu = s.rule.nodes[k];
      if (s.rule.weights[k] == 0.0) continue;
      const double undo = std::exp(s.rule.scale * mu - s.rule.exponent * std::log(mu));
      sum += s.rule.weights[k] * undo * ray.integrand(cplx(mu, 0.0));
    }
    return sum * two_pi_factor(tau.n());
  }
  if (!(q > -1.0)) throw DivergenceError("synthesize: integrand is not integrable at lambda = 0");

  std::vector<cplx> rates = tau.synthesis_rates(p);
  if (subtracted) {
    const std::vector<cplx> at_i = tau.synthesis_rates(i_chart(tau.n()));
    rates.insert(rates.end(), at_i.begin(), at_i.end());
  }
  double psi = 0.0;
  if (opt.rotate_contour) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const cplx& w : rates) {
      lo = std::min(lo, std::arg(w));
      hi = std::max(hi, std::arg(w));
    }
    psi = std::clamp(-0.5 * (lo + hi), -opt.max_rotation, opt.max_rotation);
  }
  const cplx dir = std::polar(1.0, psi);
  double s = std::numeric_limits<double>::infinity();
  for (const cplx& w : rates) s = std::min(s, (w * dir).real());
  if (!(s > 0.0)) throw DivergenceError("synthesize: integrand does not decay along the contour");

  auto run = [&](int nodes) {
    const quadrature::HalfLineRule rule = quadrature::gauss_laguerre(q, s, nodes);
    cplx sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      if (rule.weights[k] == 0.0) continue;
      const double x = rule.nodes[k];
      const double undo = std::exp(s * x - q * std::log(x));
      sum += rule.weights[k] * undo * ray.integrand(x * dir);
    }
    const cplx v = sum * dir * two_pi_factor(tau.n());
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NonFiniteError("synthesize: non-finite result");
    return v;
  };
  const cplx v = run(opt.node_count);
  if (!opt.check_resolution) return v;
  const cplx v2 = run(2 * opt.node_count);
  if (std::abs(v2 - v) > opt.tolerance * std::max(std::abs(v2), 1e-300))
    throw UnderResolvedError("synthesize: node doubling changed the result by " +
                             format_number(std::abs(v2 - v) / std::max(std::abs(v2), 1e-300)));
  return v2;
}

}  // namespace

cplx synthesize(const SpectralProfile& tau, const Horocyclic& p, const SynthesisOptions& opt) {
  return ray_synthesis(tau, p, opt, false);
}

cplx synthesize(const SpectralProfile& tau, const SiegelPoint& p, const SynthesisOptions& opt) {
  if (!(siegel::rho(p) > 0.0)) throw DomainError("synthesize: point must be interior (h > 0)");
  return synthesize(tau, siegel::psi(p), opt);
}

cplx synthesize_dirichlet(const SpectralProfile& tau, const Horocyclic& p, cplx c, const SynthesisOptions& opt) {
  return ray_synthesis(tau, p, opt, true) + c;
}

cplx synthesize_dirichlet(const SpectralProfile& tau, const SiegelPoint& p, cplx c, const SynthesisOptions& opt) {
  if (!(siegel::rho(p) > 0.0)) throw DomainError("synthesize_dirichlet: point must be interior (h > 0)");
  return synthesize_dirichlet(tau, siegel::psi(p), c, opt);
}

HolomorphicFunction from_profile(const SpectralProfile& tau, const SynthesisOptions& opt) {
  HolomorphicFunction f;
  f.value = [tau, opt](const Horocyclic& p) { return synthesize(tau, p, opt); };
  f.vertical_derivative = [tau, opt](const Horocyclic& p, int m) {
    return ipow(cplx(0.0, -1.0), m) * synthesize(spectral_derivative(tau, m), p, opt);
  };
  return f;
}

HolomorphicFunction from_dirichlet_profile(const SpectralProfile& tau, cplx c, const SynthesisOptions& opt) {
  HolomorphicFunction f;
  f.value = [tau, c, opt](const Horocyclic& p) { return synthesize_dirichlet(tau, p, c, opt); };
  f.vertical_derivative = [tau, c, opt](const Horocyclic& p, int m) {
    if (m == 0) return synthesize_dirichlet(tau, p, c, opt);
    return ipow(cplx(0.0, -1.0), m) * synthesize(spectral_derivative(tau, m), p, opt);
  };
  return f;
}

// ---------------------------------------------------------------- spectral-side norms

namespace {

// int_0^inf ||v(-mu)||^2 mu^extra * inner(mu) d mu over the families' natural rules.
double spectral_integral(const SpectralProfile& tau, double extra, int node_count,
                         const std::function<double(double)>& inner) {
  const int n = tau.n();
  if (node_count < 1) throw DomainError("l2nu_norm_sq: node_count must be positive");
  auto run = [&](double q, double s, const std::function<double(double)>& f) {
    if (!(q > -1.0)) throw DivergenceError("l2nu_norm_sq: integrand is not integrable at lambda = 0");
    if (!(s > 0.0)) throw DivergenceError("l2nu_norm_sq: integrand does not decay");
    const quadrature::HalfLineRule rule = quadrature::gauss_laguerre(q, s, node_count);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      if (rule.weights[k] == 0.0) continue;
      const double x = rule.nodes[k];
      sum += rule.weights[k] * std::exp(s * x - q * std::log(x)) * f(x) * inner(x);
    }
    return sum;
  };
  if (std::abs(tau.factor()) == 0.0) return 0.0;
  double total = 0.0;
  if (const auto* k = std::get_if<KernelFamily>(&tau.family())) {
    const double q = 2.0 * tau.small_exponent() + extra;
    const double s = 2.0 * (tau.is_dirichlet_kernel() ? std::min(k->base.h, 1.0) : k->base.h);
    total = run(q, s, [&](double mu) { return tau.hs_norm_sq(-mu) * std::pow(mu, extra); });
  } else if (const auto* f = std::get_if<FiniteFamily>(&tau.family())) {
    // the terms are orthogonal; each gets the rule matched to its own profile
    const double lp = tau.lambda_power();
    for (const auto& t : f->terms) {
      const double c2 = std::norm(tau.factor() * t.profile.coef);
      if (c2 == 0.0) continue;
      const double q = 2.0 * (t.profile.power + lp) + extra;
      total += run(q, 2.0 * t.profile.decay, [&](double mu) {
        return c2 * std::pow(mu, 2.0 * (t.profile.power + lp) + extra) * std::exp(-2.0 * t.profile.decay * mu);
      });
    }
  } else {
    const auto& s = std::get<SampledFamily>(tau.family());
    for (std::size_t k = 0; k < s.rule.nodes.size(); ++k) {
      if (s.rule.weights[k] == 0.0) continue;
      const double mu = s.rule.nodes[k];
      const double undo = std::exp(s.rule.scale * mu - s.rule.exponent * std::log(mu));
      total += s.rule.weights[k] * undo * tau.hs_norm_sq(-mu) * std::pow(mu, extra) * inner(mu);
    }
  }
  if (!std::isfinite(total)) throw NonFiniteError("l2nu_norm_sq: non-finite result");
  return total * two_pi_factor(n);
}

}  // namespace

double l2nu_norm_sq(const SpectralProfile& tau, double nu, int node_count) {
  return spectral_integral(tau, tau.n() - nu - 1.0, node_count, [](double) { return 1.0; });
}

double spectral_space_norm_sq(const SpectralProfile& tau, const SpaceTag& tag, int node_count) {
  if (tag.n != tau.n()) throw DimensionError("spectral_space_norm_sq: dimension mismatch");
  if (tag.kind == SpaceKind::Hardy) return l2nu_norm_sq(tau, -1.0, node_count);
  const SpectralProfile d = spectral_derivative(tau, tag.m);
  const double beta = tag.weight_exponent();
  // slice norm at height h is (2pi)^{-(n+1)} int ||v||^2 mu^{2m+n} e^{-2h mu} d mu; integrate h^beta over h first
  const auto inner = [beta](double mu) {
    const quadrature::HalfLineRule r = quadrature::gauss_laguerre(beta, 2.0 * mu, 4);
    double s = 0.0;
    for (double w : r.weights) s += w;
    return s * std::pow(mu, beta + 1.0);
  };
  // the factor mu^{beta+1} above keeps the outer rule's exponent equal to the L^2_nu one
  return spectral_integral(d, tau.n() - beta - 1.0, node_count, inner);
}

// ---------------------------------------------------------------- configuration space

std::string ConfigurationRule::describe() const {
  std::ostringstream os;
  os << "h:tan-half(order=" << h_order << ",scale=" << format_number(h_scale);
  if (h_decay > 0.0) os << ",decay=" << format_number(h_decay);
  if (h_power != 1.0) os << ",power=" << format_number(h_power);
  os << ") r:tan-half(order=" << r_order << ",shift=" << format_number(r_shift) << ") angle(order=" << angle_order
     << ") t:tan(order=" << t_order << ",shift=" << format_number(t_shift) << ")";
  return os.str();
}

ConfigurationRule ConfigurationRule::fast() {
  ConfigurationRule r;
  r.h_order = 24;
  r.r_order = 20;
  r.t_order = 32;
  r.angle_order = 6;
  return r;
}

namespace {

struct SphereNode {
  CVec omega;
  double weight;
};

std::vector<SphereNode> sphere_rule(int n, int order) {
  if (order < 1) throw DomainError("ConfigurationRule: angle_order must be positive");
  std::vector<SphereNode> out;
  const double dphi = 2.0 * kPi / order;
  if (n == 1) {
    for (int k = 0; k < order; ++k) out.push_back({CVec{std::polar(1.0, k * dphi)}, dphi});
    return out;
  }
  if (n == 2) {
    // Hopf coordinates: omega = (sqrt(1-s) e^{i a}, sqrt(s) e^{i b}), d sigma = ds da db / 2
    const quadrature::Rule1D s = quadrature::gauss_legendre(std::max(4, order / 2), 0.0, 1.0);
    for (std::size_t i = 0; i < s.size(); ++i)
      for (int a = 0; a < order; ++a)
        for (int b = 0; b < order; ++b)
          out.push_back({CVec{std::polar(std::sqrt(1.0 - s.nodes[i]), a * dphi), std::polar(std::sqrt(s.nodes[i]), b * dphi)},
                         0.5 * s.weights[i] * dphi * dphi});
    return out;
  }
  throw DimensionError("ConfigurationRule: only n = 1 and n = 2 are supported");
}

// u in (0, pi/2), h = scale tan u, weight h^beta, endpoint factor (pi/2 - u)^end at u = pi/2.
quadrature::Rule1D h_rule(int order, double scale, double beta, double end, double power) {
  if (!(beta > -1.0)) throw DivergenceError("configuration norm: weight h^beta is not integrable at h = 0");
  if (!(end > -1.0)) throw DivergenceError("configuration norm: h-decay too slow for an integrable tail");
  return quadrature::tan_half_jacobi(order, scale, beta, end, power);
}

template <class F>
cplx slice_sum(F&& f, double h, int n, const ConfigurationRule& rule, const std::vector<SphereNode>& sphere) {
  if (rule.center.dim() != n && rule.center.dim() != 0) throw DimensionError("ConfigurationRule: center dimension");
  const CVec zc = rule.center.dim() == n ? rule.center.z : CVec(n, 0.0);
  quadrature::AxisRule ra{"tan-half", rule.r_order, 1, 0.0, 0.0, 0.0, 1.0, 2.0 * n - 1.0};
  quadrature::AxisRule ta{"tan", rule.t_order, 1, 0.0, 0.0, 0.0, 1.0, 0.0};
  const quadrature::Rule1D rr = ra.realize(0.0, 2.0 * std::sqrt(h + rule.r_shift));
  const quadrature::Rule1D tu = ta.realize(0.0, 1.0);
  cplx total = 0.0;
  Horocyclic p{CVec(n), 0.0, h};
  for (std::size_t i = 0; i < rr.size(); ++i) {
    const double r = rr.nodes[i];
    const double ts = h + rule.t_shift + 0.25 * r * r;
    for (const auto& s : sphere) {
      for (int j = 0; j < n; ++j) p.z[j] = zc[j] + r * s.omega[j];
      const double t0 = rule.center.t - 0.5 * heisenberg::hermitian_dot(p.z, zc).imag();
      cplx acc = 0.0;
      for (std::size_t k = 0; k < tu.size(); ++k) {
        // tan rule realized at unit scale: node = tan u, weight = sec^2 u du
        p.t = t0 + ts * tu.nodes[k];
        acc += tu.weights[k] * f(p);
      }
      total += rr.weights[i] * s.weight * ts * acc;
    }
  }
  return total;
}

template <class F>
cplx chart_sum(F&& f, double beta, int n, const ConfigurationRule& rule) {
  const double end = rule.h_decay > 0.0 ? rule.h_power * (rule.h_decay - 1.0) - 1.0 : 0.0;
  const quadrature::Rule1D hr = h_rule(rule.h_order, rule.h_scale, beta, end, rule.h_power);
  const std::vector<SphereNode> sphere = sphere_rule(n, rule.angle_order);
  cplx total = 0.0, tail = 0.0;
  const std::size_t tail_start = hr.size() - std::max<std::size_t>(1, hr.size() / 8);
  for (std::size_t i = 0; i < hr.size(); ++i) {
    const cplx c = hr.weights[i] * slice_sum(f, hr.nodes[i], n, rule, sphere);
    total += c;
    if (i >= tail_start) tail += c;
  }
  if (!std::isfinite(total.real()) || !std::isfinite(total.imag()))
    throw NonFiniteError("configuration norm: non-finite quadrature sum");
  if (std::abs(tail) > 0.5 * std::abs(total) && std::abs(total) > 0.0)
    throw DivergenceError("configuration norm: outermost h-panel dominates; the integral looks divergent");
  return total;
}

}  // namespace

double integrate_chart(const std::function<double(const Horocyclic&)>& f, double beta, int n,
                       const ConfigurationRule& rule) {
  return chart_sum([&](const Horocyclic& p) { return cplx(f(p), 0.0); }, beta, n, rule).real();
}

cplx integrate_chart_complex(const std::function<cplx(const Horocyclic&)>& f, double beta, int n,
                             const ConfigurationRule& rule) {
  return chart_sum(f, beta, n, rule);
}

cplx integrate_slice(const std::function<cplx(const Horocyclic&)>& f, double h, int n, const ConfigurationRule& rule) {
  if (!(h > 0.0)) throw DomainError("integrate_slice: h must be positive");
  return slice_sum(f, h, n, rule, sphere_rule(n, rule.angle_order));
}

namespace {

struct HardyLimit {
  std::vector<double> heights;
  std::vector<cplx> slices;
  cplx extrapolated;
};

HardyLimit hardy_limit(const std::function<cplx(const Horocyclic&)>& f, int n, const ConfigurationRule& rule,
                       int levels, double h_max) {
  if (levels < 2) throw DomainError("hardy norm: need at least two heights");
  if (!(h_max > 0.0)) throw DomainError("hardy norm: h_max must be positive");
  HardyLimit out;
  const std::vector<SphereNode> sphere = sphere_rule(n, rule.angle_order);
  std::vector<std::vector<cplx>> table;
  for (int k = 0; k < levels; ++k) {
    const double h = h_max * std::ldexp(1.0, -k);
    out.heights.push_back(h);
    out.slices.push_back(slice_sum(f, h, n, rule, sphere));
    // Richardson in h with halving: R_{k,j} = (2^j R_{k,j-1} - R_{k-1,j-1}) / (2^j - 1)
    std::vector<cplx> row{out.slices.back()};
    for (int j = 1; j <= k; ++j) {
      const double p = std::ldexp(1.0, j);
      row.push_back((p * row[j - 1] - table[k - 1][j - 1]) / (p - 1.0));
    }
    table.push_back(row);
  }
  out.extrapolated = table.back().back();
  return out;
}

cplx weighted_pair(const HolomorphicFunction& f, const HolomorphicFunction& g, const SpaceTag& tag,
                   const ConfigurationRule& rule, bool same) {
  const int n = tag.n;
  const int m = tag.kind == SpaceKind::Bergman ? 0 : tag.m;
  auto eval = [m](const HolomorphicFunction& F, const Horocyclic& p) {
    if (m == 0) return F.value(p);
    if (!F.vertical_derivative) throw DomainError("space norm: vertical derivative required");
    return F.vertical_derivative(p, m);
  };
  if (tag.kind == SpaceKind::Hardy) {
    const auto fn = [&](const Horocyclic& p) {
      const cplx a = f.value(p);
      return same ? cplx(std::norm(a), 0.0) : a * std::conj(g.value(p));
    };
    return hardy_limit(fn, n, rule, 6, 0.25).extrapolated;
  }
  const auto fn = [&](const Horocyclic& p) {
    const cplx a = eval(f, p);
    return same ? cplx(std::norm(a), 0.0) : a * std::conj(eval(g, p));
  };
  cplx v = chart_sum(fn, tag.weight_exponent(), n, rule);
  if (tag.kind == SpaceKind::Dirichlet) {
    const Horocyclic ip = i_chart(n);
    const cplx a = f.value(ip);
    v += same ? cplx(std::norm(a), 0.0) : a * std::conj(g.value(ip));
  }
  return v;
}

}  // namespace

cplx space_inner_product(const HolomorphicFunction& f, const HolomorphicFunction& g, const SpaceTag& tag,
                         const ConfigurationRule& rule) {
  return weighted_pair(f, g, tag, rule, false);
}

double space_norm_sq(const HolomorphicFunction& f, const SpaceTag& tag, const ConfigurationRule& rule) {
  return weighted_pair(f, f, tag, rule, true).real();
}

HardyResult hardy_norm_sq(const HolomorphicFunction& f, int n, const ConfigurationRule& rule, int levels,
                          double h_max) {
  const auto fn = [&](const Horocyclic& p) { return cplx(std::norm(f.value(p)), 0.0); };
  const HardyLimit l = hardy_limit(fn, n, rule, levels, h_max);
  HardyResult r;
  r.heights = l.heights;
  for (const cplx& s : l.slices) r.slice_norms_sq.push_back(s.real());
  r.extrapolated = l.extrapolated.real();
  r.sup_on_grid = *std::max_element(r.slice_norms_sq.begin(), r.slice_norms_sq.end());
  return r;
}

}  // namespace pw::spectral
