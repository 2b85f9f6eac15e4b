#include "pw/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "pw/errors.hpp"
#include "pw/special.hpp"

namespace pw::quadrature {

namespace {

// Three-term recurrence of monic orthogonal polynomials:
//   p_{k+1}(x) = (x - a[k]) p_k(x) - b[k] p_{k-1}(x),  b[0] = total mass mu0.
// a has N entries, b has N+1 (b[N] is needed to evaluate p_N).
struct Recurrence {
  std::vector<double> a;
  std::vector<double> b;
};

struct OrthoEval {
  double q;      // orthonormal q_N(x), scaled by exp(-log_scale)
  double dq;     // q_N'(x), same scaling
  double sum;    // sum_{k<N} q_k(x)^2, scaled by exp(-2 log_scale)
  double log_scale;
};

OrthoEval evaluate_orthonormal(const Recurrence& r, double x) {
  const std::size_t n = r.a.size();
  double q_prev = 0.0, dq_prev = 0.0;
  double q = 1.0 / std::sqrt(r.b[0]), dq = 0.0;
  double sum = 0.0, log_scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += q * q;
    const double sb_next = std::sqrt(r.b[k + 1]);
    const double sb = k == 0 ? 0.0 : std::sqrt(r.b[k]);
    const double q_next = ((x - r.a[k]) * q - sb * q_prev) / sb_next;
    const double dq_next = (q + (x - r.a[k]) * dq - sb * dq_prev) / sb_next;
    q_prev = q;
    dq_prev = dq;
    q = q_next;
    dq = dq_next;
    const double big = std::max(std::abs(q), std::abs(q_prev));
    if (big > 1e100) {
      q *= 1e-100;
      q_prev *= 1e-100;
      dq *= 1e-100;
      dq_prev *= 1e-100;
      sum *= 1e-200;
      log_scale += 100.0 * std::log(10.0);
    }
  }
  return {q, dq, sum, log_scale};
}

// Golub-Welsch nodes, polished by Newton on the recurrence; Christoffel weights.
Rule1D golub_welsch(const Recurrence& r) {
  const int n = static_cast<int>(r.a.size());
  Rule1D rule;
  if (n == 1) {
    rule.nodes = {r.a[0]};
  } else {
    Eigen::VectorXd diag(n), sub(n - 1);
    for (int k = 0; k < n; ++k) diag[k] = r.a[k];
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(r.b[k]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NonFiniteError("golub_welsch: eigensolver failed");
    rule.nodes.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  }
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = rule.nodes[i];
    for (int it = 0; it < 3; ++it) {
      const OrthoEval e = evaluate_orthonormal(r, x);
      if (e.dq == 0.0) break;
      const double dx = e.q / e.dq;
      x -= dx;
      if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    rule.nodes[i] = x;
    const OrthoEval e = evaluate_orthonormal(r, x);
    rule.weights[i] = std::exp(-2.0 * e.log_scale) / e.sum;
  }
  return rule;
}

Recurrence laguerre_recurrence(int n, double a) {
  Recurrence r;
  r.a.resize(n);
  r.b.resize(n + 1);
  r.b[0] = std::exp(std::lgamma(a + 1.0));
  for (int k = 0; k < n; ++k) r.a[k] = 2.0 * k + a + 1.0;
  for (int k = 1; k <= n; ++k) r.b[k] = k * (k + a);
  return r;
}

Recurrence jacobi_recurrence(int n, double al, double be) {
  Recurrence r;
  r.a.resize(n);
  r.b.resize(n + 1);
  const double s = al + be;
  r.b[0] = std::exp((s + 1.0) * std::log(2.0) + std::lgamma(al + 1.0) + std::lgamma(be + 1.0) -
                    std::lgamma(s + 2.0));
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      r.a[k] = (be - al) / (s + 2.0);
    } else {
      const double c = 2.0 * k + s;
      r.a[k] = (be * be - al * al) / (c * (c + 2.0));
    }
  }
  for (int k = 1; k <= n; ++k) {
    if (k == 1) {
      r.b[k] = 4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + s) * (2.0 + s) * (3.0 + s));
    } else {
      const double c = 2.0 * k + s;
      r.b[k] = 4.0 * k * (k + al) * (k + be) * (k + s) / (c * c * (c + 1.0) * (c - 1.0));
    }
  }
  return r;
}

Recurrence hermite_recurrence(int n) {
  Recurrence r;
  r.a.assign(n, 0.0);
  r.b.resize(n + 1);
  r.b[0] = 1.0;  // normalized to a probability density
  for (int k = 1; k <= n; ++k) r.b[k] = k;
  return r;
}

std::mutex cache_mutex;

const Rule1D& cached_jacobi(int n, double al, double be) {
  static std::map<std::tuple<int, double, double>, Rule1D> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto key = std::make_tuple(n, al, be);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, golub_welsch(jacobi_recurrence(n, al, be))).first;
  return it->second;
}

void check_count(int n, const char* who) {
  if (n <= 0) throw DomainError(std::string(who) + ": node_count must be positive");
}

}  // namespace

HalfLineRule gauss_laguerre(double exponent, double scale, int node_count) {
  check_count(node_count, "gauss_laguerre");
  if (!(exponent > -1.0)) throw DomainError("gauss_laguerre: exponent must exceed -1 (weight not integrable)");
  if (!(scale > 0.0)) throw DomainError("gauss_laguerre: scale must be positive");
  static std::map<std::pair<int, double>, Rule1D> cache;
  Rule1D base;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto key = std::make_pair(node_count, exponent);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, golub_welsch(laguerre_recurrence(node_count, exponent))).first;
    base = it->second;
  }
  HalfLineRule rule;
  rule.exponent = exponent;
  rule.scale = scale;
  rule.node_count = node_count;
  rule.nodes.resize(node_count);
  rule.weights.resize(node_count);
  const double wscale = std::pow(scale, -(exponent + 1.0));
  for (int i = 0; i < node_count; ++i) {
    rule.nodes[i] = base.nodes[i] / scale;
    rule.weights[i] = base.weights[i] * wscale;
  }
  return rule;
}

cplx integrate_halfline(const HalfLineRule& rule, const std::function<cplx(double)>& f) {
  cplx sum = 0.0;
  for (int i = 0; i < rule.node_count; ++i) {
    const cplx v = f(rule.nodes[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NonFiniteError("integrate_halfline: non-finite integrand at node " + format_number(rule.nodes[i]));
    sum += rule.weights[i] * v;
  }
  return sum;
}

Rule1D gauss_legendre(int node_count, double lo, double hi) {
  check_count(node_count, "gauss_legendre");
  const Rule1D& base = cached_jacobi(node_count, 0.0, 0.0);
  Rule1D rule = base;
  const double half = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.nodes[i] = lo + half * (base.nodes[i] + 1.0);
    rule.weights[i] = half * base.weights[i];
  }
  return rule;
}

Rule1D gauss_jacobi(int node_count, double alpha, double beta) {
  check_count(node_count, "gauss_jacobi");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");
  return cached_jacobi(node_count, alpha, beta);
}

Rule1D tan_half_jacobi(int node_count, double scale, double beta, double end, double power) {
  if (!(power > 0.0)) throw DomainError("tan_half_jacobi: power must be positive");
  const double b0 = power * (beta + 1.0) - 1.0;
  const Rule1D& g = gauss_jacobi(node_count, end, b0);
  const double q = 0.25 * kPi;
  Rule1D out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double u = q * (1.0 + g.nodes[i]);
    const double v = q * (1.0 - g.nodes[i]);
    const double c = std::cos(u);
    const double tn = std::tan(u);
    const double x = scale * std::pow(tn, power);
    // x^beta dx/du = power scale^{beta+1} tan^{b0} u sec^2 u, and tan u / u is smooth
    const double w = g.weights[i] * std::pow(q, b0 + end + 1.0) * power * std::pow(scale, beta + 1.0) *
                     std::pow(tn / u, b0) * std::pow(v, -end) / (c * c);
    out.nodes.push_back(x);
    out.weights.push_back(w);
  }
  return out;
}

Rule1D tan_jacobi(int node_count, double origin, double scale, double end) {
  const Rule1D& g = gauss_jacobi(node_count, end, end);
  const double q = 0.5 * kPi;
  Rule1D out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double u = q * g.nodes[i];
    const double c = std::cos(u);
    const double w = g.weights[i] * q * std::pow(q, 2.0 * end) *
                     std::pow((q - u) * (q + u), -end) * scale / (c * c);
    out.nodes.push_back(origin + scale * std::tan(u));
    out.weights.push_back(w);
  }
  return out;
}

Rule1D gauss_hermite(int node_count, double variance) {
  check_count(node_count, "gauss_hermite");
  if (!(variance > 0.0)) throw DomainError("gauss_hermite: variance must be positive");
  static std::map<int, Rule1D> cache;
  Rule1D rule;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(node_count);
    if (it == cache.end()) it = cache.emplace(node_count, golub_welsch(hermite_recurrence(node_count))).first;
    rule = it->second;
  }
  const double sd = std::sqrt(variance);
  for (auto& x : rule.nodes) x *= sd;
  return rule;
}

GaussianRule gaussian_rule(int dimension, int node_count, double variance) {
  if (dimension <= 0) throw DomainError("gaussian_rule: dimension must be positive");
  return {dimension, variance, node_count, gauss_hermite(node_count, variance)};
}

namespace {

// Iterate over a tensor grid of independent 1-D rules.
cplx tensor_sum(const std::vector<const Rule1D*>& axes, const std::function<cplx(const std::vector<double>&)>& f) {
  const std::size_t d = axes.size();
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> x(d);
  for (const auto* a : axes)
    if (a->size() == 0) return 0.0;
  cplx sum = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      x[k] = axes[k]->nodes[idx[k]];
      w *= axes[k]->weights[idx[k]];
    }
    const cplx v = f(x);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NonFiniteError("tensor quadrature: non-finite integrand");
    sum += w * v;
    std::size_t k = 0;
    while (k < d && ++idx[k] == axes[k]->size()) idx[k++] = 0;
    if (k == d) break;
  }
  return sum;
}

}  // namespace

cplx integrate_gaussian(const GaussianRule& rule, const std::function<cplx(const std::vector<double>&)>& f) {
  std::vector<const Rule1D*> axes(rule.dimension, &rule.axis);
  return tensor_sum(axes, f);
}

Rule1D AxisRule::realize() const { return realize(origin, scale); }

Rule1D AxisRule::realize(double org, double sc) const {
  if (order <= 0 || panels <= 0) throw DomainError("AxisRule: order and panels must be positive");
  Rule1D out;
  auto append = [&](double x, double w) {
    out.nodes.push_back(x);
    out.weights.push_back(w);
  };
  if (mapping == "periodic") {
    const double step = (hi - lo) / order;
    for (int j = 0; j < order; ++j) append(lo + j * step, step);
    return out;
  }
  if (mapping == "legendre") {
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const Rule1D r = gauss_legendre(order, lo + p * width, lo + (p + 1) * width);
      for (std::size_t i = 0; i < r.size(); ++i) append(r.nodes[i], r.weights[i]);
    }
    return out;
  }
  if (mapping == "jacobi") {
    const Rule1D& g = gauss_jacobi(order, 0.0, exponent);
    const double half = 0.5 * (hi - lo);
    const double f = std::pow(half, exponent + 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) append(lo + half * (g.nodes[i] + 1.0), f * g.weights[i]);
    return out;
  }
  if (!(sc > 0.0)) throw DomainError("AxisRule: tan mappings need a positive scale");
  if (mapping == "tan") {
    const double width = kPi / panels;
    for (int p = 0; p < panels; ++p) {
      const Rule1D r = gauss_legendre(order, -0.5 * kPi + p * width, -0.5 * kPi + (p + 1) * width);
      for (std::size_t i = 0; i < r.size(); ++i) {
        const double c = std::cos(r.nodes[i]);
        append(org + sc * std::tan(r.nodes[i]), r.weights[i] * sc / (c * c));
      }
    }
    return out;
  }
  if (mapping == "tan-half") {
    // u in (0, pi/2); first panel integrates u^exponent exactly, the others carry it explicitly.
    const double width = 0.5 * kPi / panels;
    const double be = exponent;
    const Rule1D& g = gauss_jacobi(order, 0.0, be);
    const double half = 0.5 * width;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double u = half * (g.nodes[i] + 1.0);
      const double c = std::cos(u);
      const double tu = std::tan(u);
      const double w = g.weights[i] * std::pow(half, be + 1.0) * std::pow(sc, be + 1.0) * std::pow(tu / u, be) / (c * c);
      append(org + sc * tu, w);
    }
    for (int p = 1; p < panels; ++p) {
      const Rule1D r = gauss_legendre(order, p * width, (p + 1) * width);
      for (std::size_t i = 0; i < r.size(); ++i) {
        const double c = std::cos(r.nodes[i]);
        const double x = sc * std::tan(r.nodes[i]);
        append(org + x, r.weights[i] * sc / (c * c) * std::pow(x, be));
      }
    }
    return out;
  }
  throw DomainError("AxisRule: unknown mapping '" + mapping + "'");
}

cplx integrate_box(const BoxRule& rule, const std::function<cplx(const std::vector<double>&)>& f) {
  if (rule.axes.empty()) throw DomainError("integrate_box: empty rule");
  std::vector<Rule1D> realized;
  realized.reserve(rule.axes.size());
  for (const auto& a : rule.axes) realized.push_back(a.realize());
  std::vector<const Rule1D*> axes;
  for (const auto& r : realized) axes.push_back(&r);
  return tensor_sum(axes, f);
}

MonteCarloResult monte_carlo(const std::function<Sample(CounterRng&)>& sampler,
                             const std::function<cplx(const std::vector<double>&)>& f,
                             std::uint64_t sample_count, std::uint64_t seed) {
  if (sample_count == 0) throw DomainError("monte_carlo: sample_count must be positive");
  cplx mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 0; i < sample_count; ++i) {
    CounterRng rng(seed, i);
    const Sample s = sampler(rng);
    if (!(s.density > 0.0)) throw DomainError("monte_carlo: sampler returned non-positive density");
    const cplx v = f(s.x) / s.density;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NonFiniteError("monte_carlo: non-finite sample");
    const cplx delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += std::real(delta * std::conj(v - mean));
  }
  const double var = sample_count > 1 ? m2 / static_cast<double>(sample_count - 1) : 0.0;
  return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(sample_count)), sample_count};
}

}  // namespace pw::quadrature
