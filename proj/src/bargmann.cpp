#include "pw/bargmann.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "pw/errors.hpp"
#include "pw/quadrature.hpp"
#include "pw/special.hpp"

namespace pw::bargmann {

using fock::FockTruncation;
using fock::FockVector;
using fock::MultiIndex;

int default_node_count(int max_degree) { return max_degree + 24; }

namespace {

// One-variable matrix d[a][b] = <sigma e_b, e_a> for the action
// F(w) -> e^{-(lambda/2) w conj(z) - (lambda/4)|z|^2} F(w + z) on F^lambda(C), lambda > 0,
// by two-dimensional Gauss-Hermite quadrature.
std::vector<cplx> displacement_1d(double lambda, cplx z, int m, int node_count) {
  const auto axis = quadrature::gauss_hermite(node_count, 1.0 / lambda);
  const int d = m + 1;
  std::vector<double> inv_norm(d);
  for (int k = 0; k < d; ++k) inv_norm[k] = std::exp(-0.5 * fock::log_monomial_norm_sq({k}, lambda));
  std::vector<cplx> out(static_cast<std::size_t>(d) * d, 0.0);
  std::vector<cplx> shifted(d), base(d);
  const double pre = -0.25 * lambda * std::norm(z);
  for (std::size_t i = 0; i < axis.size(); ++i) {
    for (std::size_t k = 0; k < axis.size(); ++k) {
      const cplx w(axis.nodes[i], axis.nodes[k]);
      const cplx factor = axis.weights[i] * axis.weights[k] * std::exp(pre - 0.5 * lambda * w * std::conj(z));
      cplx ps = 1.0, pb = 1.0;
      for (int a = 0; a < d; ++a) {
        shifted[a] = ps * inv_norm[a];
        base[a] = std::conj(pb * inv_norm[a]);
        ps *= w + z;
        pb *= w;
      }
      for (int a = 0; a < d; ++a) {
        const cplx ca = factor * base[a];
        for (int b = 0; b < d; ++b) out[static_cast<std::size_t>(a) * d + b] += ca * shifted[b];
      }
    }
  }
  return out;
}

// The action and the Gaussian weight factor over coordinates, so the matrix is the
// tensor product of one-variable matrices times the central phase e^{i lambda t}.
RepMatrix rep_positive(double lambda, const Element& g, const fock::TruncationPtr& trunc, int node_count) {
  const FockTruncation& tr = *trunc;
  const int n = tr.n();
  const int m = tr.max_degree();
  const int dim = tr.dim();
  std::vector<std::vector<cplx>> one(n);
  for (int j = 0; j < n; ++j) one[j] = displacement_1d(lambda, g.z[j], m, node_count);
  const cplx phase = std::exp(cplx(0.0, lambda * g.t));
  RepMatrix out{lambda, g, trunc, std::vector<cplx>(static_cast<std::size_t>(dim) * dim)};
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      cplx v = phase;
      for (int j = 0; j < n; ++j) v *= one[j][static_cast<std::size_t>(tr[a][j]) * (m + 1) + tr[b][j]];
      out.entries[static_cast<std::size_t>(a) * dim + b] = v;
    }
  return out;
}

}  // namespace

RepMatrix rep_matrix(double lambda, const Element& g, const fock::TruncationPtr& trunc, int node_count) {
  if (lambda == 0.0) throw DomainError("rep_matrix: lambda must be non-zero");
  if (g.dim() != trunc->n()) throw DimensionError("rep_matrix: group element dimension mismatch");
  if (node_count == 0) node_count = default_node_count(trunc->max_degree());
  // The polynomial part of the integrand has degree <= 2M per real axis.
  if (node_count < trunc->max_degree() + 1)
    throw UnderResolvedError("rep_matrix: quadrature order below integrand degree");
  if (lambda > 0.0) return rep_positive(lambda, g, trunc, node_count);
  Element conj_g{g.z, -g.t};
  for (auto& c : conj_g.z) c = std::conj(c);
  RepMatrix m = rep_positive(-lambda, conj_g, trunc, node_count);
  m.lambda = lambda;
  m.g = g;
  return m;
}

FockVector p0_row(double lambda, const Element& g, const fock::TruncationPtr& trunc) {
  if (!(lambda < 0.0)) throw DomainError("p0_row: lambda must be negative");
  const FockTruncation& tr = *trunc;
  if (g.dim() != tr.n()) throw DimensionError("p0_row: dimension mismatch");
  FockVector v = FockVector::zero(trunc);
  const double mu = -lambda;
  const cplx phase = std::exp(cplx(-0.25 * mu * heisenberg::norm_sq(g.z), lambda * g.t));
  for (int i = 0; i < tr.dim(); ++i) {
    const MultiIndex& a = tr[i];
    cplx mono = 1.0;
    for (int j = 0; j < tr.n(); ++j) mono *= std::pow(std::conj(g.z[j]), a[j]);
    const double scale = std::exp(-0.5 * fock::log_factorial(a) + 0.5 * fock::degree(a) * std::log(0.5 * mu));
    v.coeffs[i] = scale * phase * mono;
  }
  return v;
}

std::vector<cplx> p0_row_conj(cplx mu, const std::vector<cplx>& z, double t, const FockTruncation& tr) {
  if (static_cast<int>(z.size()) != tr.n()) throw DimensionError("p0_row_conj: dimension mismatch");
  const int n = tr.n();
  const int m = tr.max_degree();
  const cplx phase = std::exp(mu * cplx(-0.25 * heisenberg::norm_sq(z), t));
  // powers of sqrt(mu/2) z_j, principal branch
  const cplx root = std::sqrt(0.5 * mu);
  std::vector<std::vector<cplx>> p(n, std::vector<cplx>(m + 1));
  for (int j = 0; j < n; ++j) {
    p[j][0] = 1.0;
    for (int k = 1; k <= m; ++k) p[j][k] = p[j][k - 1] * root * z[j] / std::sqrt(static_cast<double>(k));
  }
  std::vector<cplx> out(tr.dim());
  for (int i = 0; i < tr.dim(); ++i) {
    cplx v = phase;
    for (int j = 0; j < n; ++j) v *= p[j][tr[i][j]];
    out[i] = v;
  }
  return out;
}

double p0_row_tail(double lambda, const Element& g, int max_degree) {
  return poisson_tail(0.5 * std::abs(lambda) * heisenberg::norm_sq(g.z), max_degree);
}

namespace {

// Bound on |<D e_b, e_a>|^2 in one complex variable: x^k max! / (min! k!^2), k = |a - b|.
double entry_bound(double x, int a, int b) {
  const int hi = std::max(a, b), lo = std::min(a, b), k = hi - lo;
  if (x == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(x) + std::lgamma(hi + 1.0) - std::lgamma(lo + 1.0) - 2.0 * std::lgamma(k + 1.0));
}

}  // namespace

double column_tail_bound(double lambda, const Element& g, const MultiIndex& b, int max_degree) {
  const int n = g.dim();
  const int cut = max_degree / n;  // |alpha| > M forces alpha_j > M/n for some j
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = 0.5 * std::abs(lambda) * std::norm(g.z[j]);
    double s = 0.0;
    for (int a = cut + 1; a < cut + 4000; ++a) {
      const double term = entry_bound(x, a, b[j]);
      s += term;
      if (a > b[j] + x + 10 && term < 1e-30 * std::max(s, 1e-300)) break;
    }
    total += s;
  }
  return total;
}

double homomorphism_residual(double lambda, const Element& a, const Element& b, int block_degree) {
  const int n = a.dim();
  const auto block = fock::truncation(n, block_degree);
  int inner = block_degree;
  auto worst_tail = [&](int m) {
    double w = 0.0;
    for (const auto& beta : block->basis()) {
      w = std::max(w, column_tail_bound(lambda, b, beta, m));
      w = std::max(w, column_tail_bound(lambda, inv(a), beta, m));
    }
    return w;
  };
  while (worst_tail(inner) > 1e-20) inner += n;
  const auto big = fock::truncation(n, inner);
  const RepMatrix ma = rep_matrix(lambda, a, big);
  const RepMatrix mb = rep_matrix(lambda, b, big);
  const RepMatrix mab = rep_matrix(lambda, heisenberg::mul(a, b), block);
  const int d = big->dim();
  double worst = 0.0;
  for (int i = 0; i < block->dim(); ++i)
    for (int k = 0; k < block->dim(); ++k) {
      cplx s = 0.0;
      for (int g = 0; g < d; ++g) s += ma(i, g) * mb(g, k);
      worst = std::max(worst, std::abs(s - mab(i, k)));
    }
  return worst;
}

std::vector<cplx> dsigma_matrix(double lambda, Field field, int j, const FockTruncation& tr) {
  const int dim = tr.dim();
  std::vector<cplx> m(static_cast<std::size_t>(dim) * dim, 0.0);
  if (field == Field::T) {
    for (int i = 0; i < dim; ++i) m[static_cast<std::size_t>(i) * dim + i] = cplx(0.0, lambda);
    return m;
  }
  const double al = std::abs(lambda);
  const bool derivative = (field == Field::ZbarRight) == (lambda < 0.0);
  // multiplication coefficient: Zbar, lambda > 0 -> -lambda/2; Z, lambda < 0 -> lambda/2
  const double c = field == Field::ZbarRight ? -0.5 * lambda : 0.5 * lambda;
  for (int b = 0; b < dim; ++b) {
    MultiIndex beta = tr[b];
    if (derivative) {
      if (beta[j] == 0) continue;
      const double v = std::sqrt(beta[j] * al / 2.0);
      beta[j] -= 1;
      const int a = tr.index_of(beta);
      m[static_cast<std::size_t>(a) * dim + b] = v;
    } else {
      const double v = c * std::sqrt((beta[j] + 1) * 2.0 / al);
      beta[j] += 1;
      const int a = tr.index_of(beta);
      if (a >= 0) m[static_cast<std::size_t>(a) * dim + b] = v;
    }
  }
  return m;
}

double dsigma_check(double lambda, Field field, int j, const fock::TruncationPtr& trunc, double step) {
  if (step < 1e-10) throw DomainError("dsigma_check: step below 1e-10 loses all digits to cancellation");
  const int n = trunc->n();
  if (j < 0 || j >= n) throw DomainError("dsigma_check: coordinate index out of range");
  const int dim = trunc->dim();
  // derivative along the one-parameter subgroup s -> [s v, s c]
  auto derivative = [&](cplx v, double c) {
    auto at = [&](double s) {
      Element g = Element::identity(n);
      g.z[j] = s * v;
      g.t = s * c;
      return rep_matrix(lambda, g, trunc);
    };
    auto central = [&](double h) {
      const RepMatrix p = at(h), q = at(-h);
      std::vector<cplx> d(p.entries.size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = (p.entries[i] - q.entries[i]) / (2.0 * h);
      return d;
    };
    const auto d1 = central(step), d2 = central(0.5 * step);
    std::vector<cplx> r(d1.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (4.0 * d2[i] - d1[i]) / 3.0;
    return r;
  };
  std::vector<cplx> fd;
  if (field == Field::T) {
    fd = derivative(0.0, 1.0);
  } else {
    const auto dx = derivative(1.0, 0.0), dy = derivative(cplx(0.0, 1.0), 0.0);
    const cplx sgn = field == Field::ZbarRight ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
    fd.resize(dx.size());
    for (std::size_t i = 0; i < fd.size(); ++i) fd[i] = 0.5 * (dx[i] + sgn * dy[i]);
  }
  const auto exact = dsigma_matrix(lambda, field, j, *trunc);
  double worst = 0.0;
  for (int i = 0; i < dim * dim; ++i) worst = std::max(worst, std::abs(fd[i] - exact[i]));
  return worst;
}

void dump_binary(const RepMatrix& m, const std::string& path) {
  static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParseError("dump_binary: cannot open " + path);
  for (const auto& c : m.entries) {
    const double parts[2] = {c.real(), c.imag()};
    os.write(reinterpret_cast<const char*>(parts), sizeof(parts));
  }
}

std::vector<cplx> load_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("load_binary: cannot open " + path);
  std::vector<cplx> out;
  double parts[2];
  while (is.read(reinterpret_cast<char*>(parts), sizeof(parts))) out.emplace_back(parts[0], parts[1]);
  return out;
}

}  // namespace pw::bargmann
