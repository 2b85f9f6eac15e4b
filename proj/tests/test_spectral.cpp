#include <chrono>

#include "doctest.h"
#include "pw/errors.hpp"
#include "pw/spectral.hpp"
#include "test_support.hpp"

using namespace pw::spectral;
using pw::kPi;
using pw::siegel::SiegelPoint;
using testsupport::crel;
using testsupport::Random;
using testsupport::rel;

namespace {

// Q(w, z) = (w_{n+1} - conj z_{n+1})/(2i) - (1/4) w'.conj z'
cplx q_oracle(const SiegelPoint& w, const SiegelPoint& z) {
  cplx d = 0;
  for (std::size_t j = 0; j < w.zp.size(); ++j) d += w.zp[j] * std::conj(z.zp[j]);
  return (w.last - std::conj(z.last)) / cplx(0, 2) - 0.25 * d;
}

double gamma_fn(double x) { return std::tgamma(x); }

// int_0^inf e^{-2Q mu} mu^{n+nu+1} d mu / (G (2pi)^{n+1})
cplx kernel_oracle(const SpaceTag& s, const Horocyclic& w, const Horocyclic& z) {
  const int n = s.n;
  const double p = n + 2 + s.nu;
  const cplx q2 = 2.0 * q_oracle(pw::siegel::psi_inv(w), pw::siegel::psi_inv(z));
  return gamma_fn(p) / s.pw_constant() * std::pow(2 * kPi, -(n + 1)) * std::pow(q2, -p);
}

// Frullani integrals of the subtracted Dirichlet integrand.
cplx dirichlet_oracle(const SpaceTag& s, const Horocyclic& w, const Horocyclic& z, cplx c) {
  const int n = s.n;
  const SiegelPoint W = pw::siegel::psi_inv(w), Z = pw::siegel::psi_inv(z), I = pw::siegel::i_point(n);
  const double gam = std::pow(2 * kPi, -(n + 1)) / s.pw_constant();
  return gam * (std::log(q_oracle(W, I)) + std::log(q_oracle(I, Z)) - std::log(q_oracle(W, Z)) - std::log(q_oracle(I, I))) + c;
}

// Term-wise Gamma integrals for a finite family.
cplx finite_oracle(int n, const FiniteFamily& f, const Horocyclic& p) {
  cplx sum = 0;
  for (const auto& t : f.terms) {
    const int d = pw::fock::degree(t.alpha);
    const double e = t.profile.power + 0.5 * d + n + 1;
    const cplx w(t.profile.decay + p.h + 0.25 * pw::heisenberg::norm_sq(p.z), -p.t);
    cplx zalpha = 1;
    double fact = 1;
    for (int j = 0; j < n; ++j) {
      zalpha *= std::pow(p.z[j], t.alpha[j]);
      fact *= gamma_fn(t.alpha[j] + 1.0);
    }
    sum += std::conj(t.profile.coef) * gamma_fn(e) * std::pow(2.0, -0.5 * d) / std::sqrt(fact) * zalpha * std::pow(w, -e);
  }
  return sum * std::pow(2 * kPi, -(n + 1));
}

ConfigurationRule small_rule(const Horocyclic& center, double scale, double decay) {
  ConfigurationRule r;
  r.h_order = 16, r.r_order = 16, r.t_order = 24, r.angle_order = 8;
  r.center = center;
  r.h_scale = r.r_shift = r.t_shift = scale;
  r.h_decay = decay;
  return r;
}

const SynthesisOptions kNormSynthesis{8};

FiniteFamily sample_finite(int n) {
  FiniteFamily f;
  if (n == 1) {
    f.terms = {{{0}, {1.0, 0.5, 1.0}}, {{1}, {cplx(0, 0.3), 0.0, 0.7}}, {{2}, {cplx(0.2, -0.1), 1.0, 1.5}}};
  } else {
    f.terms = {{{0, 0}, {1.0, 0.5, 1.0}}, {{1, 0}, {cplx(0, 0.3), 0.0, 0.7}}, {{1, 1}, {cplx(0.2, -0.1), 1.0, 1.5}}};
  }
  return f;
}

}  // namespace

TEST_CASE("space tags validate their parameter ranges") {
  CHECK_NOTHROW(SpaceTag::bergman(1, 0.0));
  CHECK_THROWS_AS(SpaceTag::bergman(1, -1.0), pw::DomainError);
  CHECK_NOTHROW(SpaceTag::weighted_dirichlet(1, -1.5, 1));
  CHECK_THROWS_AS(SpaceTag::weighted_dirichlet(1, -0.5, 1), pw::DomainError);
  CHECK_THROWS_AS(SpaceTag::weighted_dirichlet(1, -3.0, 2), pw::DomainError);
  CHECK_THROWS_AS(SpaceTag::weighted_dirichlet(2, -3.5, 1), pw::DomainError);
  CHECK_NOTHROW(SpaceTag::drury_arveson(1, 1));
  CHECK_THROWS_AS(SpaceTag::drury_arveson(2, 1), pw::DomainError);
  CHECK_NOTHROW(SpaceTag::dirichlet(1, 2));
  CHECK_THROWS_AS(SpaceTag::dirichlet(1, 1), pw::DomainError);
  CHECK_THROWS_AS(SpaceTag::dirichlet(2, 1), pw::DomainError);
  CHECK(SpaceTag::hardy(1).pw_constant() == 1.0);
  CHECK(rel(SpaceTag::bergman(1, 0.0).pw_constant(), 0.5) < 1e-15);
  CHECK(rel(SpaceTag::dirichlet(1, 2).pw_constant(), 0.25) < 1e-15);
  CHECK(rel(SpaceTag::weighted_dirichlet(1, -1.5, 2).pw_constant(), gamma_fn(3.5) / std::pow(2.0, 3.5)) < 1e-14);
}

TEST_CASE("L2_nu norm of closed-form profiles") {
  for (int n : {1, 2}) {
    for (double nu : {-1.0, -0.5, 0.0, 0.7}) {
      // v(lambda) = e^{lambda} e_0
      SpectralProfile tau(n, FiniteFamily{{{pw::fock::MultiIndex(n, 0), {1.0, 0.0, 1.0}}}});
      const double expect = gamma_fn(n - nu) / (std::pow(2 * kPi, n + 1) * std::pow(2.0, n - nu));
      CHECK(rel(l2nu_norm_sq(tau, nu), expect) < 1e-12);
    }
    CHECK(l2nu_norm_sq(SpectralProfile::zero(n), 0.0) == 0.0);
    SpectralProfile tau(n, FiniteFamily{{{pw::fock::MultiIndex(n, 0), {1.0, 0.0, 1.0}}}});
    CHECK_THROWS_AS(l2nu_norm_sq(tau, n + 0.0), pw::DivergenceError);
  }
}

TEST_CASE("kernel family norms scale with the height of the base point") {
  Random rng(11);
  for (int n : {1, 2}) {
    for (double nu : {0.0, 1.5}) {
      const SpaceTag s = SpaceTag::bergman(n, nu);
      Horocyclic b = rng.horocyclic(n);
      const double a = l2nu_norm_sq(SpectralProfile(n, KernelFamily{s, b}), nu);
      // reproducing self-norm G ||tau||^2 = K(b, b)
      CHECK(rel(s.pw_constant() * a, kernel_oracle(s, b, b).real()) < 1e-12);
      b.h *= 2;
      const double a2 = l2nu_norm_sq(SpectralProfile(n, KernelFamily{s, b}), nu);
      CHECK(rel(a2 / a, std::pow(2.0, -(n + 2 + nu))) < 1e-12);
    }
  }
}

TEST_CASE("synthesis of kernel families reproduces the closed-form kernels") {
  Random rng(3);
  for (int n : {1, 2}) {
    const std::vector<SpaceTag> tags = {SpaceTag::hardy(n), SpaceTag::bergman(n, 0.0), SpaceTag::bergman(n, 2.5),
                                        SpaceTag::weighted_dirichlet(n, -1.5, 1), SpaceTag::drury_arveson(n, n)};
    for (const auto& s : tags) {
      for (int k = 0; k < 20; ++k) {
        const Horocyclic b = rng.horocyclic(n), p = rng.horocyclic(n);
        const SpectralProfile tau(n, KernelFamily{s, b});
        const cplx want = kernel_oracle(s, p, b);
        CHECK(crel(synthesize(tau, p), want) < 1e-10);
        CHECK(crel(synthesize(tau, pw::siegel::psi_inv(p)), want) < 1e-10);
        if (k < 3) {
          SynthesisOptions o;
          o.fock_sum = true;
          o.check_resolution = true;
          CHECK(crel(synthesize(tau, p, o), want) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("synthesis on the real axis agrees with the rotated contour") {
  Random rng(5);
  const SpaceTag s = SpaceTag::bergman(1, 0.0);
  for (int k = 0; k < 10; ++k) {
    const Horocyclic b = rng.horocyclic(1), p = rng.horocyclic(1, 1.0, 0.3);
    const SpectralProfile tau(1, KernelFamily{s, b});
    SynthesisOptions o;
    o.rotate_contour = false;
    o.node_count = 64;
    CHECK(crel(synthesize(tau, p, o), kernel_oracle(s, p, b)) < 1e-8);
  }
}

TEST_CASE("finite families synthesize to sums of Gamma integrals") {
  Random rng(8);
  for (int n : {1, 2}) {
    const FiniteFamily f = sample_finite(n);
    const SpectralProfile tau(n, f);
    for (int k = 0; k < 20; ++k) {
      const Horocyclic p = rng.horocyclic(n);
      SynthesisOptions o;
      o.node_count = 48;
      o.check_resolution = true;
      o.tolerance = 1e-9;
      CHECK(crel(synthesize(tau, p, o), finite_oracle(n, f, p)) < 1e-9);
    }
    CHECK(synthesize(SpectralProfile::zero(n), rng.horocyclic(n)) == 0.0);
  }
}

TEST_CASE("under-resolved and divergent synthesis is reported") {
  FiniteFamily f{{{{0}, {1.0, 0.3, 0.05}}, {{1}, {1.0, 2.7, 40.0}}}};
  SynthesisOptions o;
  o.node_count = 2;
  o.check_resolution = true;
  CHECK_THROWS_AS(synthesize(SpectralProfile(1, f), Horocyclic{{0.5}, 3.0, 0.1}, o), pw::UnderResolvedError);
  FiniteFamily bad{{{{0}, {1.0, -2.5, 1.0}}}};
  CHECK_THROWS_AS(synthesize(SpectralProfile(1, bad), Horocyclic{{0.0}, 0.0, 1.0}), pw::DivergenceError);
  CHECK_THROWS_AS(synthesize(SpectralProfile(1, f), Horocyclic{{0.0}, 0.0, 0.0}), pw::DomainError);
  CHECK_THROWS_AS(synthesize(SpectralProfile(1, f), Horocyclic{{0.0, 0.0}, 0.0, 1.0}), pw::DimensionError);
}

TEST_CASE("sampled profiles synthesize like the family they sample") {
  const FiniteFamily f = sample_finite(1);
  const SpectralProfile tau(1, f);
  SampledFamily s;
  s.rule = pw::quadrature::gauss_laguerre(1.5, 1.4, 60);
  const auto trunc = pw::fock::truncation(1, 2);
  for (double mu : s.rule.nodes) s.values.push_back(tau.value(-mu, trunc));
  const SpectralProfile sampled(1, s);
  Random rng(21);
  for (int k = 0; k < 10; ++k) {
    const Horocyclic p = rng.horocyclic(1, 1.0, 0.5, 0.5, 2.0);
    CHECK(crel(synthesize(sampled, p), finite_oracle(1, f, p)) < 1e-7);
  }
  // the L^2_0 integrand of this family behaves like mu^0 e^{-1.4 mu} at its slowest
  SampledFamily s2;
  s2.rule = pw::quadrature::gauss_laguerre(0.0, 1.4, 60);
  for (double mu : s2.rule.nodes) s2.values.push_back(tau.value(-mu, trunc));
  CHECK(rel(l2nu_norm_sq(SpectralProfile(1, s2), 0.0), l2nu_norm_sq(tau, 0.0)) < 1e-6);
}

TEST_CASE("Dirichlet synthesis with the subtracted term") {
  Random rng(13);
  for (int n : {1, 2}) {
    for (int m : {n == 1 ? 2 : 2, 3}) {
      const SpaceTag s = SpaceTag::dirichlet(n, m);
      for (int k = 0; k < 15; ++k) {
        const Horocyclic b = rng.horocyclic(n), p = rng.horocyclic(n);
        const SpectralProfile tau(n, KernelFamily{s, b});
        const cplx c(0.3, -0.4);
        CHECK(crel(synthesize_dirichlet(tau, p, c), dirichlet_oracle(s, p, b, c)) < 1e-9);
        if (k < 3) {
          SynthesisOptions o;
          o.fock_sum = true;
          CHECK(crel(synthesize_dirichlet(tau, p, c, o), dirichlet_oracle(s, p, b, c)) < 1e-9);
        }
        const Horocyclic i{pw::heisenberg::CVec(n, 0.0), 0.0, 1.0};
        CHECK(synthesize_dirichlet(tau, i, c) == c);
      }
      CHECK(synthesize_dirichlet(SpectralProfile::zero(n), rng.horocyclic(n), cplx(2, 1)) == cplx(2, 1));
    }
  }
}

TEST_CASE("spectral derivative matches finite differences in h") {
  Random rng(17);
  const SpectralProfile k(1, KernelFamily{SpaceTag::bergman(1, 0.5), rng.horocyclic(1)});
  const SpectralProfile f(1, sample_finite(1));
  for (const auto* tau : {&k, &f}) {
    CHECK(synthesize(spectral_derivative(*tau, 0), Horocyclic{{0.2}, 0.1, 0.8}) ==
          synthesize(*tau, Horocyclic{{0.2}, 0.1, 0.8}));
    for (int j = 0; j < 5; ++j) {
      Horocyclic p = rng.horocyclic(1);
      const double eps = 1e-4;
      Horocyclic a = p, b = p;
      a.h += eps;
      b.h -= eps;
      const cplx fd = (synthesize(*tau, a) - synthesize(*tau, b)) / (2 * eps);
      const cplx d1 = synthesize(spectral_derivative(*tau, 1), p);
      CHECK(crel(d1, fd) < 1e-6);
      CHECK(crel(synthesize(spectral_derivative(spectral_derivative(*tau, 1), 1), p),
                 synthesize(spectral_derivative(*tau, 2), p)) < 1e-14);
    }
  }
}

TEST_CASE("synthesized functions satisfy the Cauchy-Riemann reductions") {
  Random rng(19);
  for (int n : {1, 2}) {
    const SpectralProfile k(n, KernelFamily{SpaceTag::bergman(n, 0.0), rng.horocyclic(n)});
    const SpectralProfile f(n, sample_finite(n));
    for (const auto* tau : {&k, &f}) {
      for (int j = 0; j < 5; ++j) {
        const Horocyclic p = rng.horocyclic(n);
        const double e = 1e-4;
        auto F = [&](Horocyclic q) { return synthesize(*tau, q); };
        Horocyclic tp = p, tm = p, hp = p, hm = p;
        tp.t += e, tm.t -= e, hp.h += e, hm.h -= e;
        const cplx dt = (F(tp) - F(tm)) / (2 * e), dh = (F(hp) - F(hm)) / (2 * e);
        CHECK(std::abs(cplx(0, 1) * dt - dh) < 1e-6 * std::abs(dh));
        for (int i = 0; i < n; ++i) {
          Horocyclic xp = p, xm = p, yp = p, ym = p;
          xp.z[i] += e, xm.z[i] -= e, yp.z[i] += cplx(0, e), ym.z[i] -= cplx(0, e);
          const cplx dzbar = 0.5 * ((F(xp) - F(xm)) / (2 * e) + cplx(0, 1) * (F(yp) - F(ym)) / (2 * e));
          CHECK(std::abs(dzbar - cplx(0, 0.25) * p.z[i] * dt) < 1e-6 * std::abs(dt));
        }
      }
    }
  }
}

TEST_CASE("Bergman norms by configuration quadrature") {
  const Horocyclic b{{cplx(0.3, -0.2)}, 0.4, 0.7};
  const SpaceTag s = SpaceTag::bergman(1, 0.0);
  const SpectralProfile tau(1, KernelFamily{s, b});
  const double spectral = s.pw_constant() * l2nu_norm_sq(tau, 0.0);
  CHECK(rel(spectral_space_norm_sq(tau, s), spectral) < 1e-12);

  // rule centered away from the base point so the integrand is not radial
  const ConfigurationRule r = small_rule(Horocyclic{{cplx(0.1, 0.1)}, 0.0, 0.0}, 0.8, 4.0);
  CHECK(rel(space_norm_sq(from_profile(tau, kNormSynthesis), s, r), spectral) < 1e-6);

  const SpectralProfile f(1, sample_finite(1));
  const ConfigurationRule rf = small_rule(Horocyclic{{0.0}, 0.0, 0.0}, 1.0, 2.0);
  CHECK(rel(space_norm_sq(from_profile(f, kNormSynthesis), s, rf), s.pw_constant() * l2nu_norm_sq(f, 0.0)) < 1e-8);

  CHECK(space_norm_sq(from_profile(SpectralProfile::zero(1)), s, ConfigurationRule::fast()) == 0.0);

  // inner product of two kernels is the kernel value
  const Horocyclic b2{{cplx(-0.2, 0.1)}, -0.3, 1.1};
  const SpectralProfile tau2(1, KernelFamily{s, b2});
  const ConfigurationRule ri = small_rule(Horocyclic{{cplx(0.05, -0.05)}, 0.2, 0.0}, 0.8, 4.0);
  const cplx ip = space_inner_product(from_profile(tau2, kNormSynthesis), from_profile(tau, kNormSynthesis), s, ri);
  CHECK(crel(ip, kernel_oracle(s, b, b2)) < 1e-5);
}

TEST_CASE("weighted Dirichlet norms are m-independent up to the Gamma constants") {
  const Horocyclic b{{cplx(0.2, 0.1)}, 0.3, 0.9};
  for (double nu : {-1.5, -2.0}) {
    const SpaceTag s1 = SpaceTag::weighted_dirichlet(1, nu, 1);
    const SpectralProfile tau(1, KernelFamily{s1, b});
    const double l2 = l2nu_norm_sq(tau, nu);
    const ConfigurationRule r = small_rule(b, b.h, 4.0 + nu);
    for (int m : {1, 2}) {
      const SpaceTag s = SpaceTag::weighted_dirichlet(1, nu, m);
      CHECK(rel(spectral_space_norm_sq(tau, s), s.pw_constant() * l2) < 1e-10);
      CHECK(rel(space_norm_sq(from_profile(tau, kNormSynthesis), s, r), s.pw_constant() * l2) < 1e-4);
    }
  }
}

TEST_CASE("Dirichlet norm identity") {
  const Horocyclic b{{cplx(0.2, -0.3)}, 0.5, 0.6};
  const SpaceTag s = SpaceTag::dirichlet(1, 2);
  const SpectralProfile tau(1, KernelFamily{s, b});
  const cplx c(0.7, 0.2);
  const double l2 = l2nu_norm_sq(tau, s.nu);
  // the tail expands in powers of h^{-1/2}; h = scale tan^2 u keeps it smooth
  ConfigurationRule r = small_rule(b, 0.8, 2.0);
  r.h_power = 2.0;
  const double lhs = space_norm_sq(from_dirichlet_profile(tau, c, kNormSynthesis), s, r);
  CHECK(rel(lhs, s.pw_constant() * l2 + std::norm(c)) < 1e-7);
  CHECK(rel(spectral_space_norm_sq(tau, s), s.pw_constant() * l2) < 1e-10);
}

TEST_CASE("Hardy slices of the Szego kernel") {
  const Horocyclic b{{cplx(0.1, 0.2)}, -0.3, 0.8};
  const SpectralProfile tau(1, KernelFamily{SpaceTag::hardy(1), b});
  ConfigurationRule r;
  r.r_order = 32, r.t_order = 48, r.angle_order = 4;
  r.center = b, r.r_shift = b.h, r.t_shift = b.h;
  const HardyResult hr = hardy_norm_sq(from_profile(tau), 1, r);
  for (std::size_t k = 1; k < hr.slice_norms_sq.size(); ++k) CHECK(hr.slice_norms_sq[k] > hr.slice_norms_sq[k - 1]);
  const double spectral = l2nu_norm_sq(tau, -1.0);
  CHECK(rel(hr.extrapolated, spectral) < 1e-4);
  CHECK(hr.sup_on_grid <= spectral);
  // each slice against its own spectral value (2pi)^{-2} int e^{-2(h+h0) mu} mu d mu
  for (std::size_t k = 0; k < hr.heights.size(); ++k)
    CHECK(rel(hr.slice_norms_sq[k], std::pow(2 * kPi, -2) / std::pow(2 * (hr.heights[k] + b.h), 2)) < 1e-8);
}

TEST_CASE("n = 2 Bergman identity smoke test") {
  const Horocyclic b{{cplx(0.1, 0.0), cplx(0.0, -0.1)}, 0.2, 0.8};
  const SpaceTag s = SpaceTag::bergman(2, 0.0);
  const SpectralProfile tau(2, KernelFamily{s, b});
  ConfigurationRule r = small_rule(b, b.h, 5.0);
  r.angle_order = 2;  // the integrand depends on z only through |z - z0| when centered at the base
  CHECK(rel(space_norm_sq(from_profile(tau, kNormSynthesis), s, r), s.pw_constant() * l2nu_norm_sq(tau, 0.0)) < 1e-3);
}

TEST_CASE("dilations scale Bergman norms with the nu-dependent exponent") {
  // F o D_delta for F = K(., b) is delta^{-(n+2+nu)} K(., D_{1/delta} b), whose squared norm scales by
  // delta^{-(2n+4+2nu)}; both sides are computed by quadrature.
  const SpaceTag s = SpaceTag::bergman(1, 0.5);
  const Horocyclic b{{cplx(0.2, 0.1)}, 0.1, 0.9};
  const SpectralProfile tau(1, KernelFamily{s, b});
  const HolomorphicFunction F = from_profile(tau, kNormSynthesis);
  const double delta = 1.7;
  HolomorphicFunction G;
  G.value = [&](const Horocyclic& p) {
    Horocyclic q = p;
    for (auto& z : q.z) z *= delta;
    q.t *= delta * delta, q.h *= delta * delta;
    return F.value(q);
  };
  const ConfigurationRule r = small_rule(b, b.h, 4.5);
  const double nf = space_norm_sq(F, s, r);
  ConfigurationRule rg = r;
  rg.center = Horocyclic{{b.z[0] / delta}, b.t / (delta * delta), 0.0};
  rg.h_scale = rg.r_shift = rg.t_shift = b.h / (delta * delta);
  const double ng = space_norm_sq(G, s, rg);
  CHECK(rel(ng / nf, std::pow(delta, -(2 * 1 + 4 + 2 * 0.5))) < 1e-4);
}
