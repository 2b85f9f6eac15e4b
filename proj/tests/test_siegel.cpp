#include "doctest.h"
#include "pw/errors.hpp"
#include "pw/quadrature.hpp"
#include "pw/siegel.hpp"
#include "test_support.hpp"

using namespace pw::siegel;
using pw::heisenberg::Element;
using testsupport::Random;

namespace {

double point_diff(const SiegelPoint& a, const SiegelPoint& b) {
  double s = std::abs(a.last - b.last);
  for (std::size_t j = 0; j < a.zp.size(); ++j) s += std::abs(a.zp[j] - b.zp[j]);
  return s;
}

double point_mag(const SiegelPoint& a) {
  double s = std::abs(a.last);
  for (auto c : a.zp) s += std::abs(c);
  return s;
}

Unitary random_unitary(Random& r, int n) {
  // Gram-Schmidt on a random complex matrix
  std::vector<std::vector<cplx>> cols(n, std::vector<cplx>(n));
  for (auto& c : cols) c = r.cvec(n, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      cplx d = 0;
      for (int i = 0; i < n; ++i) d += std::conj(cols[k][i]) * cols[j][i];
      for (int i = 0; i < n; ++i) cols[j][i] -= d * cols[k][i];
    }
    double nn = 0;
    for (auto c : cols[j]) nn += std::norm(c);
    for (auto& c : cols[j]) c /= std::sqrt(nn);
  }
  std::vector<cplx> u(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) u[i * n + j] = cols[j][i];
  return make_unitary(n, u);
}

Automorphism random_generator(Random& r, int n, int which) {
  switch (which % 4) {
    case 0: return {Translation{Element{r.cvec(n, 1.5), r.uniform(-2, 2)}}};
    case 1: return {Dilation{r.uniform(0.3, 3.0)}};
    case 2: return {random_unitary(r, n)};
    default: return {Inversion{}};
  }
}

}  // namespace

TEST_CASE("rho and psi") {
  CHECK(rho(i_point(1)) == 1.0);
  CHECK(rho(i_point(2)) == 1.0);
  const Horocyclic c = psi(i_point(2));
  CHECK(c.t == 0.0);
  CHECK(c.h == 1.0);
  Random r(10);
  for (int n : {1, 2}) {
    for (int k = 0; k < 1000; ++k) {
      const Horocyclic hc = r.horocyclic(n);
      const SiegelPoint p = psi_inv(hc);
      CHECK(std::abs(rho(p) - hc.h) < 1e-14 * (1 + std::abs(p.last)));
      const SiegelPoint q = psi_inv(psi(p));
      CHECK(point_diff(p, q) <= 1e-14 * point_mag(p));
      const SiegelPoint b = psi_inv(hc.z, hc.t, 0.0);
      CHECK(std::abs(rho(b)) < 1e-14 * (1 + std::abs(b.last)));
      CHECK(psi(b).h == 0.0);
    }
  }
  CHECK_THROWS_AS(psi(SiegelPoint{{cplx(0)}, cplx(0, -1)}), pw::DomainError);
}

TEST_CASE("cayley transform") {
  CHECK(point_diff(cayley({0.0, 0.0}), i_point(1)) == 0.0);
  Random r(11);
  for (int n : {1, 2}) {
    for (int k = 0; k < 500; ++k) {
      const auto w = r.ball(n + 1, 0.999);
      const SiegelPoint p = cayley(w);
      CHECK(rho(p) > 0.0);
      const auto back = cayley_inv(p);
      double d = 0;
      for (int j = 0; j <= n; ++j) d += std::abs(back[j] - w[j]);
      CHECK(d < 1e-13);
    }
  }
  CHECK_THROWS_AS(cayley({0.0, 1.0}), pw::DomainError);
}

TEST_CASE("automorphism generators") {
  Random r(12);
  for (int n : {1, 2}) {
    for (int k = 0; k < 300; ++k) {
      const SiegelPoint p = r.interior(n);
      const Element g{r.cvec(n, 2.0), r.uniform(-3, 3)};
      CHECK(std::abs(rho(apply({Translation{g}}, p)) - rho(p)) < 1e-13 * (1 + std::abs(p.last) + pw::heisenberg::norm_sq(g.z)));
      const double delta = r.uniform(0.2, 4.0);
      CHECK(testsupport::rel(rho(apply({Dilation{delta}}, p)), delta * delta * rho(p)) < 1e-13);
      CHECK(testsupport::rel(rho(apply({random_unitary(r, n)}, p)), rho(p)) < 1e-12);
      const SiegelPoint v = apply({Inversion{}}, p);
      CHECK(rho(v) > 0.0);
      CHECK(point_diff(apply({Inversion{}}, v), p) < 1e-13 * point_mag(p));
    }
  }
  CHECK_THROWS_AS(apply({Inversion{}}, SiegelPoint{{cplx(0)}, cplx(0)}), pw::DomainError);
  CHECK_THROWS_AS(make_unitary(1, {cplx(2.0)}), pw::DomainError);
}

TEST_CASE("composition is the fold of applies") {
  Random r(13);
  for (int n : {1, 2}) {
    for (int k = 0; k < 200; ++k) {
      Composition c;
      for (int j = 0; j < 4; ++j) c.parts.push_back(random_generator(r, n, j + k));
      const SiegelPoint p = r.interior(n);
      SiegelPoint q = p;
      for (const auto& part : c.parts) q = apply(part, q);
      const SiegelPoint s = apply({c}, p);
      CHECK(point_diff(s, q) <= 1e-13 * point_mag(q));
      CHECK(rho(s) > 0.0);
    }
  }
}

TEST_CASE("Cayley conjugation keeps images in the half-space") {
  Random r(14);
  for (int k = 0; k < 300; ++k) {
    const SiegelPoint p = cayley(r.ball(2, 0.99));
    for (int j = 0; j < 4; ++j) CHECK(rho(apply(random_generator(r, 1, j), p)) > 0.0);
  }
}

TEST_CASE("translations restrict to the group law on the boundary") {
  Random r(15);
  for (int n : {1, 2}) {
    for (int k = 0; k < 300; ++k) {
      const Element ws{r.cvec(n, 2.0), r.uniform(-2, 2)};
      const Element zt{r.cvec(n, 2.0), r.uniform(-2, 2)};
      const Horocyclic img = psi(apply({Translation{zt}}, psi_inv(ws.z, ws.t, 0.0)));
      const Element prod = pw::heisenberg::mul(ws, zt);
      CHECK(std::abs(img.t - prod.t) < 1e-13 * (1 + std::abs(prod.t)));
      for (int j = 0; j < n; ++j) CHECK(std::abs(img.z[j] - prod.z[j]) < 1e-14);
      CHECK(std::abs(img.h) < 1e-12);
    }
  }
}

TEST_CASE("tent volume and covariance") {
  // the unit ball of the homogeneous metric at n = 1 has volume 2 pi^2
  CHECK(testsupport::rel(heisenberg_unit_ball_volume(1), 2 * pw::kPi * pw::kPi) < 1e-13);
  for (int n : {1, 2}) CHECK(testsupport::rel(tent_volume(n, 2.0) / tent_volume(n, 1.0), std::pow(2.0, 2 * n + 4)) < 1e-14);
  // Monte Carlo cross-check of the n = 2 ball volume inside the box |z_j| < 2, |t| < 1
  using namespace pw::quadrature;
  auto sampler = [](CounterRng& rng) {
    std::vector<double> x(5);
    for (int j = 0; j < 4; ++j) x[j] = 4 * rng.uniform() - 2;
    x[4] = 2 * rng.uniform() - 1;
    return Sample{x, 1.0 / (256.0 * 2.0)};
  };
  auto inside = [](const std::vector<double>& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    return cplx(r2 * r2 / 16 + x[4] * x[4] < 1 ? 1.0 : 0.0);
  };
  const auto mc = monte_carlo(sampler, inside, 400000, 3);
  CHECK(std::abs(mc.estimate.real() - heisenberg_unit_ball_volume(2)) < 4 * mc.standard_error);

  Random r(16);
  for (int k = 0; k < 500; ++k) {
    const Horocyclic c = r.horocyclic(1, 1.0, 1.0, 1.5, 2.5);
    const double rad = r.uniform(0.3, 1.2);
    const SiegelPoint q = psi_inv(r.horocyclic(1, 1.5, 1.5, 0.1, 4.0));
    const bool in = in_tent(c, rad, q);
    const Element g{r.cvec(1, 1.0), r.uniform(-1, 1)};
    const Automorphism tr{Translation{g}};
    CHECK(in_tent(psi(apply(tr, psi_inv(c))), rad, apply(tr, q)) == in);
    const double delta = r.uniform(0.5, 2.0);
    const Automorphism dl{Dilation{delta}};
    CHECK(in_tent(psi(apply(dl, psi_inv(c))), rad * delta, apply(dl, q)) == in);
  }
}
