#include "doctest.h"
#include "pw/errors.hpp"
#include "pw/fock.hpp"
#include "pw/quadrature.hpp"
#include "test_support.hpp"

using namespace pw::fock;
using testsupport::Random;

TEST_CASE("graded-lex enumeration") {
  const FockTruncation t(2, 2);
  CHECK(t.dim() == 6);
  const std::vector<MultiIndex> expect = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  CHECK(t.basis() == expect);
  for (int n : {1, 2, 3})
    for (int M : {0, 3, 7}) {
      const FockTruncation tr(n, M);
      CHECK(tr.dim() == tr.prefix_dim(M));
      for (int i = 1; i < tr.dim(); ++i) {
        const bool ordered = degree(tr[i - 1]) < degree(tr[i]) || (degree(tr[i - 1]) == degree(tr[i]) && tr[i - 1] > tr[i]);
        CHECK(ordered);
        CHECK(tr.index_of(tr[i]) == i);
      }
    }
  CHECK(t.index_of({3, 0}) == -1);
}

TEST_CASE("monomial norms") {
  CHECK(monomial_norm_sq({0}, -3.0) == 1.0);
  CHECK(testsupport::rel(monomial_norm_sq({3}, -2.0), 6.0) < 1e-14);
  CHECK(testsupport::rel(monomial_norm_sq({1, 2}, -4.0), 0.25) < 1e-14);
  // no overflow far beyond 20!
  CHECK(std::isfinite(log_monomial_norm_sq({60, 40}, 1.0)));
  CHECK_THROWS_AS(monomial_norm_sq({1}, 0.0), pw::DomainError);
}

TEST_CASE("orthonormality under the Gaussian inner product") {
  for (int n : {1, 2}) {
    const auto t = truncation(n, n == 1 ? 6 : 4);
    for (double lambda : {-2.0, 0.7}) {
      double worst = 0;
      for (int i = 0; i < t->dim(); ++i)
        for (int j = 0; j < t->dim(); ++j) {
          const cplx g = inner_product_quadrature(FockVector::unit(t, i), FockVector::unit(t, j), lambda, 8);
          worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
          CHECK(inner_product(FockVector::unit(t, i), FockVector::unit(t, j)) == cplx(i == j ? 1.0 : 0.0));
        }
      CHECK(worst < 1e-10);
    }
  }
}

TEST_CASE("coefficient vs quadrature inner products") {
  Random r(20);
  for (int n : {1, 2}) {
    const auto t = truncation(n, n == 1 ? 6 : 4);
    for (int k = 0; k < 5; ++k) {
      FockVector f = FockVector::zero(t), g = FockVector::zero(t);
      for (auto& c : f.coeffs) c = r.complex_in_disc(1.0);
      for (auto& c : g.coeffs) c = r.complex_in_disc(1.0);
      const double lambda = r.uniform(-3.0, -0.5);
      CHECK(std::abs(inner_product(f, g) - inner_product_quadrature(f, g, lambda, 8)) < 1e-10);
      CHECK(inner_product(f, f).real() >= 0.0);
    }
  }
  const auto t = truncation(1, 6);
  CHECK_THROWS_AS(inner_product_quadrature(FockVector::unit(t, 0), FockVector::unit(t, 0), -1.0, 5), pw::UnderResolvedError);
}

TEST_CASE("reproducing kernel") {
  CHECK(reproducing_kernel({0.0}, {0.0}, -1.0) == cplx(1.0));
  Random r(21);
  for (int k = 0; k < 50; ++k) {
    const auto z = r.cvec(2, 0.7), w = r.cvec(2, 0.7);
    const cplx a = reproducing_kernel(z, w, -2.0), b = reproducing_kernel(w, z, -2.0);
    CHECK(std::abs(a - std::conj(b)) < 1e-15);
    // tail bound with x = (|lambda|/2)|z||w|
    const double x = std::sqrt(pw::heisenberg::norm_sq(z) * pw::heisenberg::norm_sq(w));
    const cplx p = reproducing_kernel_partial(z, w, -2.0, 20);
    CHECK(std::abs(p - a) <= kernel_tail_bound(x, 20) + 1e-14 * std::abs(a));
    CHECK(std::abs(reproducing_kernel_partial(z, w, -2.0, 3) - a) <= kernel_tail_bound(x, 3) + 1e-14 * std::abs(a));
  }
  CHECK(degree_for_tail(0.0, 1e-16) == 0);
}

TEST_CASE("reproducing property on polynomials") {
  // <f, K_w> by quadrature equals f(w)
  Random r(22);
  for (int n : {1, 2}) {
    const double lambda = -1.5;
    const auto t = truncation(n, 4);
    FockVector f = FockVector::zero(t);
    for (auto& c : f.coeffs) c = r.complex_in_disc(1.0);
    const auto w = r.cvec(n, 0.8);
    const auto rule = pw::quadrature::gaussian_rule(2 * n, 30, 1.0 / std::abs(lambda));
    const cplx v = pw::quadrature::integrate_gaussian(rule, [&](const std::vector<double>& x) {
      std::vector<cplx> z(n);
      for (int j = 0; j < n; ++j) z[j] = cplx(x[2 * j], x[2 * j + 1]);
      return evaluate(f, lambda, z) * std::conj(reproducing_kernel(z, w, lambda));
    });
    CHECK(std::abs(v - evaluate(f, lambda, w)) < 1e-9);
  }
}
