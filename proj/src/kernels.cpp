#include "pw/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "pw/errors.hpp"

namespace pw::kernels {

namespace {

constexpr cplx kI(0.0, 1.0);

void check_dims(const SiegelPoint& a, const SiegelPoint& b) {
  if (a.dim() != b.dim()) throw DimensionError("kernel: points of different dimension");
}

cplx safe_q(const SiegelPoint& omega, const SiegelPoint& zeta, bool allow_boundary) {
  const double ro = siegel::rho(omega), rz = siegel::rho(zeta);
  if (allow_boundary ? (ro < -siegel::kBoundaryBand || rz < -siegel::kBoundaryBand || !(ro + rz > 0.0))
                     : !(ro > 0.0 && rz > 0.0))
    throw DomainError("kernel: points must lie in the open half-space");
  const cplx q = q_pairing(omega, zeta);
  if (!(q.real() > 0.0)) throw DomainError("kernel: Q(omega, zeta) has non-positive real part");
  return q;
}

// log(Q(w,i) Q(i,z) / Q(w,z)): principal branch when the product has positive real part,
// otherwise the sum of principal factor logs (each factor has positive real part).
cplx dirichlet_log(const SiegelPoint& omega, const SiegelPoint& zeta, const EvalOptions& opt) {
  const SiegelPoint ip = siegel::i_point(omega.dim());
  const cplx a = safe_q(omega, ip, false), b = safe_q(ip, zeta, false), c = safe_q(omega, zeta, false);
  const cplx x = a * b / c;
  if (x.real() > 0.0) return std::log(x);
  if (!opt.track_branch) throw DomainError("kernel: logarithm argument has non-positive real part");
  return std::log(a) + std::log(b) - std::log(c);
}

// d^j/dx^j x^{-p} = (-p)(-p-1)...(-p-j+1) x^{-p-j}
double falling(double p, int j) {
  double f = 1.0;
  for (int i = 0; i < j; ++i) f *= -p - i;
  return f;
}

double log_factorial(int k) { return log_gamma(k + 1.0); }

}  // namespace

cplx q_pairing(const SiegelPoint& omega, const SiegelPoint& zeta) {
  check_dims(omega, zeta);
  cplx dot = 0.0;
  for (int j = 0; j < omega.dim(); ++j) dot += omega.zp[j] * std::conj(zeta.zp[j]);
  return (omega.last - std::conj(zeta.last)) / (2.0 * kI) - 0.25 * dot;
}

KernelId KernelId::szego(int n) {
  spectral::SpaceTag::hardy(n);
  return {KernelKind::Szego, n, -1.0, 0, false};
}

KernelId KernelId::bergman(int n, double nu) {
  spectral::SpaceTag::bergman(n, nu);
  return {KernelKind::Bergman, n, nu, 0, false};
}

KernelId KernelId::weighted_dirichlet(int n, double nu, int m) {
  if (!(nu > -n - 2.0 && nu < -1.0)) throw DomainError("weighted Dirichlet kernel: nu must lie in (-n-2, -1)");
  spectral::SpaceTag::weighted_dirichlet(n, nu, m);
  return {KernelKind::WeightedDirichlet, n, nu, m, false};
}

KernelId KernelId::dirichlet_log(int n, int m, bool dotted) {
  spectral::SpaceTag::dirichlet(n, m);
  return {KernelKind::DirichletLog, n, -n - 2.0, m, dotted};
}

KernelId KernelId::ball_dirichlet(int n) {
  if (n < 1) throw DomainError("ball Dirichlet kernel: n must be positive");
  return {KernelKind::BallDirichlet, n, 0.0, 0, true};
}

GammaExpr KernelId::constant_expr() const {
  const double n1 = n + 1.0;
  GammaExpr g;
  switch (kind) {
    case KernelKind::Szego:
      g.times_gamma(n1).times_power("4π", 4.0 * kPi, -n1);
      break;
    case KernelKind::Bergman:
      g.times_gamma(n + 2.0 + nu).times_gamma(nu + 1.0, -1).times_power("4π", 4.0 * kPi, -n1);
      break;
    case KernelKind::WeightedDirichlet:
      g.times_power("4", 4.0, m)
          .times_gamma(n + 2.0 + nu)
          .times_gamma(2.0 * m + nu + 1.0, -1)
          .times_power("4π", 4.0 * kPi, -n1);
      break;
    case KernelKind::DirichletLog:
      g.times_power("2", 2.0, 2.0 * m - n1).times_gamma(2.0 * m - n1, -1).times_power("2π", 2.0 * kPi, -n1);
      break;
    case KernelKind::BallDirichlet:
      g.times_gamma(n + 2.0).times_power("π", kPi, -n1);
      break;
  }
  return g;
}

double KernelId::constant() const { return constant_expr().value(); }

double KernelId::power() const {
  switch (kind) {
    case KernelKind::Szego:
      return n + 1.0;
    case KernelKind::Bergman:
    case KernelKind::WeightedDirichlet:
      return n + 2.0 + nu;
    default:
      return 0.0;
  }
}

std::string KernelId::name() const {
  std::ostringstream os;
  switch (kind) {
    case KernelKind::Szego:
      os << "szego(n=" << n << ")";
      break;
    case KernelKind::Bergman:
      os << "bergman(n=" << n << ", nu=" << format_number(nu) << ")";
      break;
    case KernelKind::WeightedDirichlet:
      os << "weighted-dirichlet(n=" << n << ", nu=" << format_number(nu) << ", m=" << m << ")";
      break;
    case KernelKind::DirichletLog:
      os << (dotted ? "dirichlet-dotted" : "dirichlet") << "(n=" << n << ", m=" << m << ")";
      break;
    case KernelKind::BallDirichlet:
      os << "ball-dirichlet(n=" << n << ")";
      break;
  }
  return os.str();
}

spectral::SpaceTag KernelId::space() const {
  switch (kind) {
    case KernelKind::Szego:
      return spectral::SpaceTag::hardy(n);
    case KernelKind::Bergman:
      return spectral::SpaceTag::bergman(n, nu);
    case KernelKind::WeightedDirichlet:
      return spectral::SpaceTag::weighted_dirichlet(n, nu, m);
    case KernelKind::DirichletLog:
      return spectral::SpaceTag::dirichlet(n, m);
    case KernelKind::BallDirichlet:
      break;
  }
  throw DomainError("ball Dirichlet kernel has no space on the half-space");
}

cplx kernel_eval(const KernelId& id, const SiegelPoint& omega, const SiegelPoint& zeta, const EvalOptions& opt) {
  check_dims(omega, zeta);
  if (omega.dim() != id.n) throw DimensionError("kernel_eval: point dimension differs from n");
  switch (id.kind) {
    case KernelKind::Szego:
    case KernelKind::Bergman:
    case KernelKind::WeightedDirichlet: {
      const cplx q = safe_q(omega, zeta, id.kind == KernelKind::Szego);
      return id.constant() * cpow(q, -id.power());
    }
    case KernelKind::DirichletLog: {
      const cplx k = id.constant() * dirichlet_log(omega, zeta, opt);
      return id.dotted ? k : 1.0 + k;
    }
    case KernelKind::BallDirichlet:
      break;
  }
  throw DomainError("kernel_eval: the ball kernel takes ball points (ball_kernel_eval)");
}

cplx kernel_eval(const KernelId& id, const Horocyclic& omega, const Horocyclic& zeta, const EvalOptions& opt) {
  return kernel_eval(id, siegel::psi_inv(omega), siegel::psi_inv(zeta), opt);
}

cplx kernel_vertical_derivative(const KernelId& id, const SiegelPoint& omega, const SiegelPoint& zeta, int j) {
  if (j < 0) throw DomainError("kernel derivative: order must be non-negative");
  if (j == 0) return kernel_eval(id, omega, zeta);
  const cplx d = std::pow(2.0 * kI, -j);  // dQ/d omega_{n+1} = 1/(2i)
  switch (id.kind) {
    case KernelKind::Szego:
    case KernelKind::Bergman:
    case KernelKind::WeightedDirichlet: {
      const double p = id.power();
      const cplx q = safe_q(omega, zeta, id.kind == KernelKind::Szego);
      return id.constant() * falling(p, j) * d * cpow(q, -p - j);
    }
    case KernelKind::DirichletLog: {
      // d^j log Q = (-1)^{j-1} (j-1)! (2i)^{-j} Q^{-j}
      const SiegelPoint ip = siegel::i_point(omega.dim());
      const cplx qa = safe_q(omega, ip, false), qc = safe_q(omega, zeta, false);
      const double f = ((j - 1) % 2 ? -1.0 : 1.0) * std::exp(log_factorial(j - 1));
      return id.constant() * f * d * (cpow(qa, -j) - cpow(qc, -j));
    }
    case KernelKind::BallDirichlet:
      break;
  }
  throw DomainError("kernel derivative: not defined for the ball kernel");
}

cplx ball_kernel_eval(int n, const CVec& omega, const CVec& zeta) {
  if (static_cast<int>(omega.size()) != n + 1 || static_cast<int>(zeta.size()) != n + 1)
    throw DimensionError("ball kernel: points must lie in C^{n+1}");
  if (heisenberg::norm_sq(omega) >= 1.0 || heisenberg::norm_sq(zeta) >= 1.0)
    throw DomainError("ball kernel: points must lie in the open unit ball");
  return KernelId::ball_dirichlet(n).constant() * -std::log(1.0 - heisenberg::hermitian_dot(omega, zeta));
}

spectral::HolomorphicFunction kernel_function(const KernelId& id, const Horocyclic& zeta) {
  const SiegelPoint zp = siegel::psi_inv(zeta);
  spectral::HolomorphicFunction f;
  f.value = [id, zp](const Horocyclic& w) { return kernel_eval(id, siegel::psi_inv(w), zp); };
  f.vertical_derivative = [id, zp](const Horocyclic& w, int j) {
    return kernel_vertical_derivative(id, siegel::psi_inv(w), zp, j);
  };
  return f;
}

spectral::ConfigurationRule kernel_rule(const KernelId& id, const Horocyclic& a, const Horocyclic& b, bool fast) {
  if (a.dim() != b.dim()) throw DimensionError("kernel_rule: points of different dimension");
  spectral::ConfigurationRule r;
  if (fast) {
    r.h_order = 16, r.r_order = 16, r.t_order = 24, r.angle_order = 8;
  } else {
    r.h_order = 24, r.r_order = 24, r.t_order = 32, r.angle_order = 8;
  }
  r.center.z.resize(a.dim());
  for (int j = 0; j < a.dim(); ++j) r.center.z[j] = 0.5 * (a.z[j] + b.z[j]);
  r.center.t = 0.5 * (a.t + b.t);
  const double scale = std::sqrt(a.h * b.h);
  r.h_scale = r.r_shift = r.t_shift = scale;
  switch (id.kind) {
    case KernelKind::Bergman:
    case KernelKind::WeightedDirichlet:
      r.h_decay = id.n + 3.0 + id.nu;
      break;
    case KernelKind::DirichletLog:
      // the Q^{-m} difference only gains h^{-1/2}, so the tail expands in half-integer powers
      r.h_decay = 2.0;
      r.h_power = 2.0;
      break;
    default:
      r.h_decay = 0.0;
  }
  return r;
}

CheckResult reproducing_check(const KernelId& id, const Horocyclic& zeta, const Horocyclic& w0,
                              const spectral::ConfigurationRule& rule) {
  const spectral::SpaceTag tag = id.space();
  CheckResult r;
  r.lhs = spectral::space_inner_product(kernel_function(id, w0), kernel_function(id, zeta), tag, rule);
  r.rhs = kernel_eval(id, zeta, w0);
  r.rel_error = std::abs(r.lhs - r.rhs) / std::abs(r.rhs);
  return r;
}

CheckResult constant_reproducing_check(const KernelId& id, const Horocyclic& zeta, cplx c,
                                       const spectral::ConfigurationRule& rule) {
  if (id.kind != KernelKind::DirichletLog || id.dotted)
    throw DomainError("constant reproducing check needs the non-dotted Dirichlet kernel");
  spectral::HolomorphicFunction f;
  f.value = [c](const Horocyclic&) { return c; };
  f.vertical_derivative = [c](const Horocyclic&, int j) { return j == 0 ? c : cplx(0.0); };
  CheckResult r;
  r.lhs = spectral::space_inner_product(f, kernel_function(id, zeta), id.space(), rule);
  r.rhs = c;
  r.rel_error = std::abs(r.lhs - r.rhs) / std::abs(c);
  return r;
}

double dirichlet_distance(const KernelId& id, const SiegelPoint& omega, const SiegelPoint& zeta) {
  if (id.kind != KernelKind::DirichletLog) throw DomainError("dirichlet_distance: needs the Dirichlet kernel");
  KernelId d = id;
  d.dotted = true;
  return (kernel_eval(d, omega, omega) + kernel_eval(d, zeta, zeta) - 2.0 * kernel_eval(d, omega, zeta).real()).real();
}

CheckResult mobius_invariance_check(const KernelId& id, const siegel::Automorphism& phi, const SiegelPoint& zeta,
                                    const SiegelPoint& omega) {
  CheckResult r;
  r.lhs = dirichlet_distance(id, siegel::apply(phi, zeta), siegel::apply(phi, omega));
  r.rhs = dirichlet_distance(id, zeta, omega);
  r.rel_error = std::abs(r.lhs - r.rhs) / std::abs(r.rhs);
  return r;
}

CheckResult mobius_cross_check(const KernelId& id, const siegel::Automorphism& phi, const SiegelPoint& a,
                               const SiegelPoint& b, const SiegelPoint& c, const SiegelPoint& d) {
  if (id.kind != KernelKind::DirichletLog) throw DomainError("mobius_cross_check: needs the Dirichlet kernel");
  const auto cross = [&](const SiegelPoint& pa, const SiegelPoint& pb, const SiegelPoint& pc, const SiegelPoint& pd) {
    return kernel_eval(id, pa, pb) - kernel_eval(id, pa, pc) - kernel_eval(id, pd, pb) + kernel_eval(id, pd, pc);
  };
  CheckResult r;
  r.lhs = cross(siegel::apply(phi, a), siegel::apply(phi, b), siegel::apply(phi, c), siegel::apply(phi, d));
  r.rhs = cross(a, b, c, d);
  r.rel_error = std::abs(r.lhs - r.rhs) / std::abs(r.rhs);
  return r;
}

CayleyResult cayley_transfer_check(int m, const CVec& omega_ball, const CVec& zeta_ball) {
  const int n = static_cast<int>(omega_ball.size()) - 1;
  const KernelId id = KernelId::dirichlet_log(n, m, true);
  const SiegelPoint a = siegel::cayley(omega_ball), b = siegel::cayley(zeta_ball);
  CayleyResult r;
  r.ball = ball_kernel_eval(n, omega_ball, zeta_ball);
  r.transferred = KernelId::ball_dirichlet(n).constant() / id.constant() * kernel_eval(id, a, b);
  const double diff = std::abs(r.ball - r.transferred);
  r.log_rel_error = diff == 0.0 ? 0.0 : diff / std::abs(r.ball);
  const SiegelPoint ip = siegel::i_point(n);
  const cplx lhs = 1.0 / (1.0 - heisenberg::hermitian_dot(omega_ball, zeta_ball));
  const cplx rhs = q_pairing(a, ip) * q_pairing(ip, b) / q_pairing(a, b);
  r.exp_rel_error = std::abs(lhs - rhs) / std::abs(lhs);
  return r;
}

namespace {
void check_beta_chain(double a, double b, int n) {
  if (n < 1) throw DomainError("beta_chain: n must be positive");
  if (!(a > -1.0)) throw DivergenceError("beta_chain: the integral is infinite for a <= -1");
  if (!(b > 0.0)) throw DivergenceError("beta_chain: the integral is infinite for b <= 0");
}
}  // namespace

GammaExpr beta_chain_constant_expr(double a, double b, int n) {
  check_beta_chain(a, b, n);
  const double p = a + b + n + 2.0;
  // s-integral B(1/2, (p-1)/2), r-integral B(n, p-1-n), k-integral B(a+1, b); Gamma(a+b+1) cancels
  GammaExpr g;
  g.times_power("2", 2.0, p)
      .times_power("4π", 4.0 * kPi, n)
      .times_gamma(0.5)
      .times_gamma(0.5 * (p - 1.0))
      .times_gamma(a + 1.0)
      .times_gamma(b)
      .times_gamma(0.5 * p, -1)
      .times_gamma(p - 1.0, -1);
  return g;
}

double beta_chain_constant(double a, double b, int n) {
  check_beta_chain(a, b, n);
  const double p = a + b + n + 2.0;
  return std::exp(p * std::log(2.0) + log_beta(0.5, 0.5 * (p - 1.0)) + n * std::log(4.0 * kPi) - log_gamma(n) +
                  log_beta(n, p - 1.0 - n) + log_beta(a + 1.0, b));
}

double beta_chain_nested_quadrature(double a, double b, int n, int order) {
  check_beta_chain(a, b, n);
  const double p = a + b + n + 2.0;
  const double h = 1.0;
  const quadrature::Rule1D kr = quadrature::tan_half_jacobi(order, h, a, b - 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < kr.size(); ++i) {
    const double c = h + kr.nodes[i];
    const quadrature::Rule1D rr = quadrature::tan_half_jacobi(order, 2.0 * std::sqrt(c), 2.0 * n - 1.0, 2.0 * p - 2.0 * n - 3.0);
    double inner = 0.0;
    for (std::size_t j = 0; j < rr.size(); ++j) {
      const double A = c + 0.25 * rr.nodes[j] * rr.nodes[j];
      const quadrature::Rule1D sr = quadrature::tan_jacobi(order, 0.0, A, p - 2.0);
      double s_sum = 0.0;
      for (std::size_t l = 0; l < sr.size(); ++l) s_sum += sr.weights[l] * std::pow(A * A + sr.nodes[l] * sr.nodes[l], -0.5 * p);
      inner += rr.weights[j] * s_sum;
    }
    total += kr.weights[i] * inner;
  }
  const double sphere = 2.0 * std::pow(kPi, n) / std::exp(log_gamma(n));
  return std::pow(2.0, p) * sphere * total * std::pow(h, b);
}

quadrature::MonteCarloResult beta_chain_monte_carlo(double a, double b, const Horocyclic& zeta, std::uint64_t samples,
                                                 std::uint64_t seed) {
  const int n = zeta.dim();
  check_beta_chain(a, b, n);
  if (!(zeta.h > 0.0)) throw DomainError("beta_chain: zeta must be interior");
  const double p = a + b + n + 2.0;
  const SiegelPoint zp = siegel::psi_inv(zeta);
  // Proposals with heavier tails than the integrand: k ~ beta-prime(a+1, 3b/4) scaled by h;
  // u = |w - z|^2/4 ~ beta-prime(n, 3(p-1-n)/4) scaled by h + k; s Cauchy with scale h + k + u.
  const double ak = a + 1.0, bk = 0.75 * b;
  const double au = n, bu = 0.75 * (p - 1.0 - n);
  const double log_bk = log_beta(ak, bk), log_bu = log_beta(au, bu);
  const double log_sphere = std::log(2.0) + n * std::log(kPi) - log_gamma(n);
  const auto beta_prime = [](quadrature::CounterRng& rng, double x, double y) {
    std::gamma_distribution<double> gx(x), gy(y);
    return gx(rng) / gy(rng);
  };
  const auto sampler = [&](quadrature::CounterRng& rng) {
    quadrature::Sample s;
    const double k = zeta.h * beta_prime(rng, ak, bk);
    const double c = zeta.h + k;
    const double u = c * beta_prime(rng, au, bu);
    std::normal_distribution<double> g;
    std::vector<double> dir(2 * n);
    double nn = 0.0;
    for (double& d : dir) {
      d = g(rng);
      nn += d * d;
    }
    const double r = 2.0 * std::sqrt(u), scale = r / std::sqrt(nn);
    s.x.assign(2 * n + 2, 0.0);
    s.x[0] = k;
    cplx wz = 0.0;
    for (int j = 0; j < n; ++j) {
      const cplx w = zeta.z[j] + scale * cplx(dir[2 * j], dir[2 * j + 1]);
      s.x[1 + 2 * j] = w.real();
      s.x[2 + 2 * j] = w.imag();
      wz += w * std::conj(zeta.z[j]);
    }
    const double A = c + u;
    const double s0 = zeta.t - 0.5 * wz.imag();
    const double v = std::tan(kPi * (rng.uniform_open() - 0.5));
    s.x[2 * n + 1] = s0 + A * v;
    const double log_qk = (ak - 1.0) * std::log(k / zeta.h) - (ak + bk) * std::log1p(k / zeta.h) - std::log(zeta.h) - log_bk;
    const double log_qu = (au - 1.0) * std::log(u / c) - (au + bu) * std::log1p(u / c) - std::log(c) - log_bu;
    // dw = |S^{2n-1}| 2^{2n-1} u^{n-1} du over the sphere
    const double log_qw = log_qu - log_sphere - (2.0 * n - 1.0) * std::log(2.0) - (n - 1.0) * std::log(u);
    const double log_qs = -std::log(kPi * A * (1.0 + v * v));
    s.density = std::exp(log_qk + log_qw + log_qs);
    return s;
  };
  const auto integrand = [&](const std::vector<double>& x) {
    CVec w(n);
    for (int j = 0; j < n; ++j) w[j] = cplx(x[1 + 2 * j], x[2 + 2 * j]);
    const SiegelPoint om = siegel::psi_inv(w, x[2 * n + 1], x[0]);
    return cplx(std::pow(x[0], a) * std::pow(std::abs(q_pairing(zp, om)), -p), 0.0);
  };
  return quadrature::monte_carlo(sampler, integrand, samples, seed);
}

DifferenceIntegral dirichlet_difference_integral(int n, int m, const SiegelPoint& zeta,
                                                 const spectral::ConfigurationRule& rule) {
  if (zeta.dim() != n) throw DimensionError("difference integral: point dimension differs from n");
  if (!(2.0 * m > n + 1.0)) throw DivergenceError("difference integral: needs 2m > n + 1");
  const SiegelPoint ip = siegel::i_point(n);
  const auto f = [&](const Horocyclic& w) {
    const SiegelPoint om = siegel::psi_inv(w);
    return std::norm(cpow(q_pairing(zeta, om), -m) - cpow(q_pairing(ip, om), -m));
  };
  DifferenceIntegral r;
  r.integral = spectral::integrate_chart(f, 2.0 * m - n - 2.0, n, rule);
  const double size = heisenberg::norm_sq(zeta.zp) + std::norm(zeta.last);
  r.ratio = r.integral * siegel::rho(zeta) / std::pow(1.0 + size, 2.0 * m + 1.0);
  return r;
}

namespace {
template <class K>
GramResult gram(std::size_t N, K&& k) {
  if (N == 0) throw DomainError("gram_matrix: empty point set");
  GramResult g;
  Eigen::MatrixXcd M(N, N);
  g.matrix.resize(N * N);
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t l = 0; l < N; ++l) g.matrix[j * N + l] = M(j, l) = k(j, l);
  g.hermitian_defect = (M - M.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
  g.min_eigenvalue = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(H, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  g.trace = H.trace().real();
  return g;
}
}  // namespace

GramResult gram_matrix(const KernelId& id, const std::vector<SiegelPoint>& points) {
  return gram(points.size(), [&](std::size_t j, std::size_t l) { return kernel_eval(id, points[j], points[l]); });
}

GramResult ball_gram_matrix(int n, const std::vector<CVec>& points) {
  return gram(points.size(), [&](std::size_t j, std::size_t l) { return ball_kernel_eval(n, points[j], points[l]); });
}

}  // namespace pw::kernels
