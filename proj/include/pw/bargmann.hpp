#pragma once

#include <complex>
#include <string>
#include <vector>

#include "pw/fock.hpp"
#include "pw/heisenberg.hpp"

namespace pw::bargmann {

using cplx = std::complex<double>;
using heisenberg::Element;

// Matrix of sigma_lambda[z,t] on a Fock truncation: entry (a, b) = <sigma e_b, e_a>.
// Adjoint convention: sigma[z,t]* = sigma[-z,-t].
struct RepMatrix {
  double lambda = 0.0;
  Element g;
  fock::TruncationPtr trunc;
  std::vector<cplx> entries;  // row-major, dim x dim

  int dim() const { return trunc->dim(); }
  cplx operator()(int a, int b) const { return entries[static_cast<std::size_t>(a) * dim() + b]; }
};

// Default Gauss-Hermite nodes per real axis for a truncation of degree M.
int default_node_count(int max_degree);

// Entries by tensor Gauss-Hermite quadrature of the defining action; lambda < 0 goes
// through sigma_lambda[z,t] = sigma_{-lambda}[z̄,-t]. node_count = 0 picks the default.
RepMatrix rep_matrix(double lambda, const Element& g, const fock::TruncationPtr& trunc, int node_count = 0);

// Row 0 of sigma_lambda[z,t] (lambda < 0), closed form:
// (1/sqrt(alpha!)) (|lambda|/2)^{|alpha|/2} e^{i lambda t + lambda |z|^2/4} conj(z)^alpha.
fock::FockVector p0_row(double lambda, const Element& g, const fock::TruncationPtr& trunc);

// Analytic continuation in mu of the conjugated row at lambda = -mu:
// (1/sqrt(alpha!)) (mu/2)^{|alpha|/2} e^{i mu t - mu |z|^2/4} z^alpha, principal branches.
std::vector<cplx> p0_row_conj(cplx mu, const std::vector<cplx>& z, double t, const fock::FockTruncation& trunc);

// 1 - ||truncated row||^2 for the untruncated unit row: exp(-x) sum_{k>M} x^k/k!, x = |lambda||z|^2/2.
double p0_row_tail(double lambda, const Element& g, int max_degree);

// Upper bound on sum_{|a| > M} |<sigma e_b, e_a>|^2 (column tail) from the Laguerre bound
// |L_k^{(j)}(x)| <= binom(k+j, k) e^{x/2}.
double column_tail_bound(double lambda, const Element& g, const fock::MultiIndex& b, int max_degree);

// Max entry error of rep(a) rep(b) - rep(ab) on the block |alpha|,|beta| <= block_degree.
// The inner product runs over a larger truncation chosen from column_tail_bound.
double homomorphism_residual(double lambda, const Element& a, const Element& b, int block_degree);

enum class Field { T, ZbarRight, ZRight };

// Max entry residual between central differences (with one Richardson step) of
// s -> rep_matrix(lambda, exp(sV)) at s = 0 and the closed-form d sigma_lambda(V).
double dsigma_check(double lambda, Field field, int j, const fock::TruncationPtr& trunc, double step = 1e-4);

// Closed-form matrix of d sigma_lambda(V) on the truncation.
std::vector<cplx> dsigma_matrix(double lambda, Field field, int j, const fock::FockTruncation& trunc);

// Raw dump: row-major little-endian (re, im) binary64 pairs.
void dump_binary(const RepMatrix& m, const std::string& path);
std::vector<cplx> load_binary(const std::string& path);

}  // namespace pw::bargmann
