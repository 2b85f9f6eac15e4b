#pragma once

#include <complex>
#include <map>
#include <memory>
#include <vector>

namespace pw::fock {

using cplx = std::complex<double>;
using MultiIndex = std::vector<int>;

int degree(const MultiIndex& a);
// log(alpha!) via log-Gamma.
double log_factorial(const MultiIndex& a);

// Multi-indices of length n with |alpha| <= M in graded-lexicographic order:
// by total degree, and within a degree lexicographically descending, e.g. for n = 2:
// (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
class FockTruncation {
 public:
  FockTruncation(int n, int max_degree);
  int n() const { return n_; }
  int max_degree() const { return m_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const MultiIndex& operator[](int i) const { return basis_[i]; }
  const std::vector<MultiIndex>& basis() const { return basis_; }
  // -1 when alpha is not in the truncation.
  int index_of(const MultiIndex& a) const;
  // Number of indices with |alpha| <= d (a prefix of the enumeration).
  int prefix_dim(int d) const;

 private:
  int n_, m_;
  std::vector<MultiIndex> basis_;
  std::map<MultiIndex, int> index_;
};

using TruncationPtr = std::shared_ptr<const FockTruncation>;
// Shared, cached truncation objects.
TruncationPtr truncation(int n, int max_degree);

// Coefficients in the orthonormal basis e_alpha = z^alpha / ||z^alpha||.
struct FockVector {
  TruncationPtr trunc;
  std::vector<cplx> coeffs;

  static FockVector zero(TruncationPtr t) { return {t, std::vector<cplx>(t->dim(), 0.0)}; }
  static FockVector unit(TruncationPtr t, int i) {
    FockVector v = zero(t);
    v.coeffs.at(i) = 1.0;
    return v;
  }
  double norm_sq() const;
};

// ||z^alpha||^2 = alpha! (2/|lambda|)^{|alpha|}
double monomial_norm_sq(const MultiIndex& a, double lambda);
double log_monomial_norm_sq(const MultiIndex& a, double lambda);

cplx inner_product(const FockVector& f, const FockVector& g);

// Value at z of the function with the given coefficients in F^lambda.
cplx evaluate(const FockVector& f, double lambda, const std::vector<cplx>& z);

// Defining Gaussian integral (|lambda|/2pi)^n int f conj(g) e^{-|lambda||z|^2/2} dz
// evaluated by a tensor Gauss-Hermite rule with node_count nodes per real axis.
cplx inner_product_quadrature(const FockVector& f, const FockVector& g, double lambda, int node_count);

// e^{(|lambda|/2) z.w̄}
cplx reproducing_kernel(const std::vector<cplx>& z, const std::vector<cplx>& w, double lambda);
// sum_{|alpha| <= M} e_alpha(z) conj(e_alpha(w))
cplx reproducing_kernel_partial(const std::vector<cplx>& z, const std::vector<cplx>& w, double lambda, int max_degree);
// Bound on |kernel - partial| from the tail of exp(x), x = (|lambda|/2)|z||w|.
double kernel_tail_bound(double x, int max_degree);
// Smallest M whose tail bound is at most rel_tol * e^{x}.
int degree_for_tail(double x, double rel_tol);

}  // namespace pw::fock
