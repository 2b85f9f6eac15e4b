#include "pw/fock.hpp"

#include <cmath>
#include <mutex>

#include "pw/errors.hpp"
#include "pw/heisenberg.hpp"
#include "pw/quadrature.hpp"
#include "pw/special.hpp"

namespace pw::fock {

int degree(const MultiIndex& a) {
  int d = 0;
  for (int x : a) d += x;
  return d;
}

double log_factorial(const MultiIndex& a) {
  double s = 0.0;
  for (int x : a) s += std::lgamma(x + 1.0);
  return s;
}

namespace {

void enumerate(int n, int remaining, MultiIndex& cur, std::vector<MultiIndex>& out) {
  const int pos = static_cast<int>(cur.size());
  if (pos == n - 1) {
    cur.push_back(remaining);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    cur.push_back(k);
    enumerate(n, remaining - k, cur, out);
    cur.pop_back();
  }
}

}  // namespace

FockTruncation::FockTruncation(int n, int max_degree) : n_(n), m_(max_degree) {
  if (n < 1) throw DomainError("FockTruncation: n must be positive");
  if (max_degree < 0) throw DomainError("FockTruncation: max degree must be non-negative");
  MultiIndex cur;
  for (int d = 0; d <= max_degree; ++d) enumerate(n, d, cur, basis_);
  for (int i = 0; i < dim(); ++i) index_.emplace(basis_[i], i);
}

int FockTruncation::index_of(const MultiIndex& a) const {
  auto it = index_.find(a);
  return it == index_.end() ? -1 : it->second;
}

int FockTruncation::prefix_dim(int d) const {
  // binomial(n + d, n)
  double b = 1.0;
  for (int j = 1; j <= n_; ++j) b = b * (d + j) / j;
  return static_cast<int>(std::lround(b));
}

TruncationPtr truncation(int n, int max_degree) {
  static std::mutex m;
  static std::map<std::pair<int, int>, TruncationPtr> cache;
  std::lock_guard<std::mutex> lock(m);
  auto key = std::make_pair(n, max_degree);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_shared<FockTruncation>(n, max_degree)).first;
  return it->second;
}

double FockVector::norm_sq() const {
  double s = 0.0;
  for (const auto& c : coeffs) s += std::norm(c);
  return s;
}

double log_monomial_norm_sq(const MultiIndex& a, double lambda) {
  if (lambda == 0.0) throw DomainError("monomial_norm_sq: lambda must be non-zero");
  return log_factorial(a) + degree(a) * std::log(2.0 / std::abs(lambda));
}

double monomial_norm_sq(const MultiIndex& a, double lambda) { return std::exp(log_monomial_norm_sq(a, lambda)); }

cplx inner_product(const FockVector& f, const FockVector& g) {
  if (f.trunc != g.trunc && (f.trunc->n() != g.trunc->n() || f.trunc->max_degree() != g.trunc->max_degree()))
    throw DimensionError("inner_product: truncation mismatch");
  if (f.coeffs.size() != g.coeffs.size()) throw DimensionError("inner_product: length mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) s += f.coeffs[i] * std::conj(g.coeffs[i]);
  return s;
}

cplx evaluate(const FockVector& f, double lambda, const std::vector<cplx>& z) {
  const auto& tr = *f.trunc;
  if (static_cast<int>(z.size()) != tr.n()) throw DimensionError("evaluate: point dimension mismatch");
  cplx s = 0.0;
  for (int i = 0; i < tr.dim(); ++i) {
    if (f.coeffs[i] == cplx(0.0)) continue;
    cplx mono = 1.0;
    for (int j = 0; j < tr.n(); ++j) mono *= std::pow(z[j], tr[i][j]);
    s += f.coeffs[i] * mono * std::exp(-0.5 * log_monomial_norm_sq(tr[i], lambda));
  }
  return s;
}

cplx inner_product_quadrature(const FockVector& f, const FockVector& g, double lambda, int node_count) {
  if (lambda == 0.0) throw DomainError("inner_product_quadrature: lambda must be non-zero");
  const int n = f.trunc->n();
  if (2 * node_count - 1 < 2 * std::max(f.trunc->max_degree(), g.trunc->max_degree()))
    throw UnderResolvedError("inner_product_quadrature: node count below integrand degree");
  const auto rule = quadrature::gaussian_rule(2 * n, node_count, 1.0 / std::abs(lambda));
  return quadrature::integrate_gaussian(rule, [&](const std::vector<double>& x) {
    std::vector<cplx> z(n);
    for (int j = 0; j < n; ++j) z[j] = cplx(x[2 * j], x[2 * j + 1]);
    return evaluate(f, lambda, z) * std::conj(evaluate(g, lambda, z));
  });
}

cplx reproducing_kernel(const std::vector<cplx>& z, const std::vector<cplx>& w, double lambda) {
  if (lambda == 0.0) throw DomainError("reproducing_kernel: lambda must be non-zero");
  return std::exp(0.5 * std::abs(lambda) * heisenberg::hermitian_dot(z, w));
}

cplx reproducing_kernel_partial(const std::vector<cplx>& z, const std::vector<cplx>& w, double lambda, int max_degree) {
  const auto t = truncation(static_cast<int>(z.size()), max_degree);
  cplx s = 0.0;
  for (int i = 0; i < t->dim(); ++i) {
    const double nrm = std::exp(-0.5 * log_monomial_norm_sq((*t)[i], lambda));
    cplx a = nrm, b = nrm;
    for (int j = 0; j < t->n(); ++j) {
      a *= std::pow(z[j], (*t)[i][j]);
      b *= std::pow(w[j], (*t)[i][j]);
    }
    s += a * std::conj(b);
  }
  return s;
}

double kernel_tail_bound(double x, int max_degree) { return std::exp(x) * poisson_tail(x, max_degree); }

int degree_for_tail(double x, double rel_tol) {
  if (x <= 0.0) return 0;
  if (poisson_tail(x, 0) <= rel_tol) return 0;
  int lo = 0, hi = 1;
  while (poisson_tail(x, hi) > rel_tol) {
    lo = hi;
    hi *= 2;
  }
  // tail(lo) > rel_tol >= tail(hi)
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (poisson_tail(x, mid) > rel_tol ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace pw::fock
