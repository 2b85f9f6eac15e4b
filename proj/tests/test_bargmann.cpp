#include <cstdio>

#include "doctest.h"
#include "pw/bargmann.hpp"
#include "pw/errors.hpp"
#include "pw/quadrature.hpp"
#include "test_support.hpp"

using namespace pw::bargmann;
using pw::fock::truncation;
using testsupport::Random;

namespace {

// Independent evaluation of the lambda < 0 action
// sigma_lambda[z,t]F(w) = e^{i lambda t + (lambda/2) w.z + (lambda/4)|z|^2} F(w + z̄)
// integrated against the Gaussian weight, entry by entry.
cplx negative_entry(double lambda, const Element& g, const pw::fock::TruncationPtr& tr, int a, int b) {
  const int n = tr->n();
  const auto rule = pw::quadrature::gaussian_rule(2 * n, n == 1 ? 40 : 20, 1.0 / std::abs(lambda));
  const auto ea = pw::fock::FockVector::unit(tr, a), eb = pw::fock::FockVector::unit(tr, b);
  return pw::quadrature::integrate_gaussian(rule, [&](const std::vector<double>& x) {
    std::vector<cplx> w(n), shifted(n);
    cplx wz = 0;
    for (int j = 0; j < n; ++j) {
      w[j] = cplx(x[2 * j], x[2 * j + 1]);
      shifted[j] = w[j] + std::conj(g.z[j]);
      wz += w[j] * g.z[j];
    }
    const cplx e = std::exp(cplx(0.25 * lambda * pw::heisenberg::norm_sq(g.z), lambda * g.t) + 0.5 * lambda * wz);
    return e * pw::fock::evaluate(eb, lambda, shifted) * std::conj(pw::fock::evaluate(ea, lambda, w));
  });
}

}  // namespace

TEST_CASE("identity element") {
  for (int n : {1, 2}) {
    const auto tr = truncation(n, 4);
    for (double lambda : {1.3, -0.8}) {
      const RepMatrix m = rep_matrix(lambda, Element::identity(n), tr);
      for (int a = 0; a < tr->dim(); ++a)
        for (int b = 0; b < tr->dim(); ++b) CHECK(std::abs(m(a, b) - (a == b ? 1.0 : 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("entry (0,0)") {
  Random r(30);
  for (int k = 0; k < 5; ++k) {
    const Element g{r.cvec(1, 1.0), r.uniform(-2, 2)};
    const double lambda = r.uniform(0.2, 3.0);
    const RepMatrix m = rep_matrix(lambda, g, truncation(1, 6));
    const cplx expect = std::exp(cplx(-lambda * pw::heisenberg::norm_sq(g.z) / 4, lambda * g.t));
    CHECK(std::abs(m(0, 0) - expect) < 1e-13);
  }
}

TEST_CASE("homomorphism on the low-degree block") {
  Random r(31);
  for (int k = 0; k < 3; ++k) {
    const Element a{r.cvec(1, 1.0), r.uniform(-1, 1)}, b{r.cvec(1, 1.0), r.uniform(-1, 1)};
    for (double lambda : {1.0, -1.0, 2.5})
      CHECK(homomorphism_residual(lambda, a, b, 10) < 1e-8);
  }
  const Element a{r.cvec(2, 0.7), 0.3}, b{r.cvec(2, 0.7), -0.4};
  CHECK(homomorphism_residual(-1.0, a, b, 3) < 1e-8);
}

TEST_CASE("unitarity of low-degree columns within the tail bound") {
  Random r(32);
  const auto tr = truncation(1, 10);
  for (int k = 0; k < 4; ++k) {
    const Element g{r.cvec(1, 1.0), r.uniform(-1, 1)};
    const double lambda = k % 2 ? -1.2 : 0.9;
    const RepMatrix m = rep_matrix(lambda, g, tr);
    for (int b = 0; b < tr->dim(); ++b) {
      if (pw::fock::degree((*tr)[b]) > 5) continue;
      double s = 0;
      for (int a = 0; a < tr->dim(); ++a) s += std::norm(m(a, b));
      CHECK(s <= 1.0 + 1e-12);
      CHECK(1.0 - s <= column_tail_bound(lambda, g, (*tr)[b], 10) + 1e-12);
    }
  }
}

TEST_CASE("conjugation law against an independent lambda < 0 evaluation") {
  Random r(33);
  for (int n : {1, 2}) {
    const auto tr = truncation(n, n == 1 ? 4 : 2);
    const Element g{r.cvec(n, 0.8), r.uniform(-1, 1)};
    const double lambda = -1.4;
    const RepMatrix m = rep_matrix(lambda, g, tr);
    double worst = 0;
    for (int a = 0; a < tr->dim(); ++a)
      for (int b = 0; b < tr->dim(); ++b) worst = std::max(worst, std::abs(m(a, b) - negative_entry(lambda, g, tr, a, b)));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("p0_row") {
  const auto tr = truncation(2, 5);
  const auto e0 = p0_row(-1.0, Element::identity(2), tr);
  CHECK(e0.coeffs[0] == cplx(1.0));
  for (int i = 1; i < tr->dim(); ++i) CHECK(e0.coeffs[i] == cplx(0.0));
  Random r(34);
  for (int k = 0; k < 20; ++k) {
    const Element g{r.cvec(2, 1.2), r.uniform(-2, 2)};
    const double lambda = r.uniform(-3, -0.1);
    for (int M : {2, 6, 30}) {
      const auto row = p0_row(lambda, g, truncation(2, M));
      const double tail = p0_row_tail(lambda, g, M);
      CHECK(row.norm_sq() >= 1.0 - tail - 1e-14);
      CHECK(std::abs(row.norm_sq() + tail - 1.0) < 1e-13);
    }
  }
  // agrees with row 0 of the quadrature matrix
  const Element g{{cplx(0.4, -0.3)}, 0.6};
  const auto t1 = truncation(1, 8);
  const RepMatrix m = rep_matrix(-1.7, g, t1);
  const auto row = p0_row(-1.7, g, t1);
  for (int b = 0; b < t1->dim(); ++b) CHECK(std::abs(m(0, b) - row.coeffs[b]) < 1e-12);
  // analytic continuation is the conjugate on the real axis
  const auto cont = p0_row_conj(cplx(1.7, 0.0), g.z, g.t, *t1);
  for (int b = 0; b < t1->dim(); ++b) CHECK(std::abs(cont[b] - std::conj(row.coeffs[b])) < 1e-14);
  CHECK_THROWS_AS(p0_row(0.5, g, t1), pw::DomainError);
}

TEST_CASE("differentiated representation") {
  const auto tr = truncation(1, 6);
  for (double lambda : {1.5, -1.5, -0.4}) {
    CHECK(dsigma_check(lambda, Field::T, 0, tr) < 1e-6);
    CHECK(dsigma_check(lambda, Field::ZbarRight, 0, tr) < 1e-6);
    CHECK(dsigma_check(lambda, Field::ZRight, 0, tr) < 1e-6);
  }
  const auto t2 = truncation(2, 3);
  CHECK(dsigma_check(-1.0, Field::ZbarRight, 1, t2) < 1e-6);
  CHECK(dsigma_check(1.0, Field::ZbarRight, 0, t2) < 1e-6);
  CHECK_THROWS_AS(dsigma_check(1.0, Field::T, 0, tr, 1e-12), pw::DomainError);
}

TEST_CASE("errors and dumps") {
  const auto tr = truncation(1, 6);
  CHECK_THROWS_AS(rep_matrix(0.0, Element::identity(1), tr), pw::DomainError);
  CHECK_THROWS_AS(rep_matrix(1.0, Element::identity(1), tr, 4), pw::UnderResolvedError);
  const RepMatrix m = rep_matrix(1.0, Element{{cplx(0.2, 0.1)}, 0.3}, tr);
  const std::string path = "bargmann_dump_test.bin";
  dump_binary(m, path);
  const auto back = load_binary(path);
  std::remove(path.c_str());
  CHECK(back == m.entries);
}
