#include "doctest.h"
#include "pw/errors.hpp"
#include "pw/heisenberg.hpp"
#include "pw/quadrature.hpp"
#include "test_support.hpp"

using namespace pw::heisenberg;
using testsupport::Random;

namespace {

double element_diff(const Element& a, const Element& b) {
  double s = std::abs(a.t - b.t);
  for (std::size_t j = 0; j < a.z.size(); ++j) s += std::abs(a.z[j] - b.z[j]);
  return s;
}

double magnitude(const Element& a) { return 1.0 + std::abs(a.t) + norm_sq(a.z); }

Element random_element(Random& r, int n, double scale = 2.0) { return {r.cvec(n, scale), r.uniform(-scale, scale)}; }

}  // namespace

TEST_CASE("product examples") {
  const Element e = Element::identity(1);
  const Element a{{cplx(0.3, -1.2)}, 0.7};
  CHECK(element_diff(mul(e, a), a) == 0.0);
  const Element p = mul(Element{{cplx(1, 0)}, 0}, Element{{cplx(0, 1)}, 0});
  CHECK(std::abs(p.z[0] - cplx(1, 1)) < 1e-15);
  CHECK(std::abs(p.t - 0.5) < 1e-15);
  CHECK_THROWS_AS(mul(Element::identity(1), Element::identity(2)), pw::DimensionError);
}

TEST_CASE("inverse examples") {
  Random r(1);
  for (int n : {1, 2}) {
    const Element a = random_element(r, n);
    CHECK(element_diff(mul(a, inv(a)), Element::identity(n)) < 1e-14);
    CHECK(element_diff(inv(inv(a)), a) == 0.0);
  }
  const Element z0{{cplx(1, 2)}, 0.0};
  CHECK(element_diff(inv(z0), Element{{cplx(-1, -2)}, 0.0}) == 0.0);
  CHECK(element_diff(inv(Element::identity(2)), Element::identity(2)) == 0.0);
}

TEST_CASE("group axioms on random triples") {
  Random r(2);
  for (int n : {1, 2}) {
    for (int k = 0; k < 1000; ++k) {
      const Element a = random_element(r, n), b = random_element(r, n), c = random_element(r, n);
      const Element lhs = mul(mul(a, b), c), rhs = mul(a, mul(b, c));
      const double scale = magnitude(a) + magnitude(b) + magnitude(c);
      CHECK(element_diff(lhs, rhs) <= 1e-14 * scale);
      CHECK(element_diff(mul(inv(a), a), Element::identity(n)) <= 1e-14 * magnitude(a));
    }
  }
}

TEST_CASE("homogeneous norm") {
  CHECK(homogeneous_norm(Element::identity(2)) == 0.0);
  const Element z{{cplx(3, 4)}, 0.0};
  CHECK(std::abs(homogeneous_norm(z) - 2.5) < 1e-15);
  Random r(3);
  for (int n : {1, 2}) {
    for (int k = 0; k < 1000; ++k) {
      const Element a = random_element(r, n), b = random_element(r, n);
      const double delta = r.uniform(0.1, 5.0);
      CHECK(homogeneous_norm(a) > 0.0);
      CHECK(homogeneous_norm(mul(a, b)) <= homogeneous_norm(a) + homogeneous_norm(b) + 1e-14);
      CHECK(std::abs(homogeneous_norm(dilate(delta, a)) - delta * homogeneous_norm(a)) <=
            1e-14 * delta * homogeneous_norm(a));
    }
  }
}

TEST_CASE("distance and balls") {
  Random r(4);
  for (int k = 0; k < 200; ++k) {
    const Element a = random_element(r, 2), b = random_element(r, 2);
    CHECK(distance(a, a) == 0.0);
    // simultaneous inversion: |a b^{-1}| = |b a^{-1}|
    CHECK(std::abs(distance(a, b) - distance(b, a)) < 1e-13 * (1 + distance(a, b)));
    const double d = distance(a, b);
    CHECK(!in_ball(a, d * 0.999, b));
    CHECK(in_ball(a, d * 1.001, b));
    CHECK(in_ball(a, d * 2.0, b));
  }
}

TEST_CASE("dilations") {
  const Element a{{cplx(1, 0)}, 1.0};
  CHECK(element_diff(dilate(1.0, a), a) == 0.0);
  CHECK(element_diff(dilate(2.0, a), Element{{cplx(2, 0)}, 4.0}) == 0.0);
  CHECK_THROWS_AS(dilate(0.0, a), pw::DomainError);
}

TEST_CASE("Lebesgue measure is left-invariant") {
  using namespace pw::quadrature;
  auto bump = [](const Element& g) { return std::exp(-norm_sq(g.z) - g.t * g.t); };
  BoxRule box{{AxisRule{"legendre", 12, 12, -9, 9}, AxisRule{"legendre", 12, 12, -9, 9}, AxisRule{"legendre", 12, 12, -12, 12}}};
  auto integral_of = [&](const Element& a) {
    return integrate_box(box, [&](const std::vector<double>& x) {
             return cplx(bump(mul(a, Element{{cplx(x[0], x[1])}, x[2]})));
           }).real();
  };
  const double base = integral_of(Element::identity(1));
  CHECK(testsupport::rel(base, std::pow(pw::kPi, 1.5)) < 1e-10);
  Random r(5);
  for (int k = 0; k < 3; ++k) {
    const Element a = random_element(r, 1, 1.5);
    CHECK(testsupport::rel(integral_of(a), base) < 1e-8);
  }
}
