#include "pw/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

#include "pw/bargmann.hpp"
#include "pw/drury_arveson.hpp"
#include "pw/errors.hpp"
#include "pw/fock.hpp"
#include "pw/heisenberg.hpp"
#include "pw/kernels.hpp"
#include "pw/siegel.hpp"
#include "pw/special.hpp"
#include "pw/spectral.hpp"

namespace pw::verify {

namespace {

using heisenberg::CVec;
using heisenberg::Element;
using siegel::Horocyclic;
using siegel::SiegelPoint;
using spectral::ConfigurationRule;
using spectral::SpaceTag;
using spectral::SpectralProfile;

double rel(cplx a, cplx b) {
  const double d = std::abs(b);
  return std::abs(a - b) / (d > 0.0 ? d : 1.0);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  cplx disc(double r) {
    while (true) {
      const cplx c(uniform(-r, r), uniform(-r, r));
      if (std::abs(c) < r) return c;
    }
  }
  CVec cvec(int n, double r) {
    CVec v(n);
    for (auto& c : v) c = disc(r);
    return v;
  }
  Element element(int n, double zr = 1.5, double tr = 2.0) { return {cvec(n, zr), uniform(-tr, tr)}; }
  Horocyclic horocyclic(int n, double zr = 1.0, double tr = 2.0, double hlo = 0.2, double hhi = 3.0) {
    return {cvec(n, zr), uniform(-tr, tr), uniform(hlo, hhi)};
  }
  SiegelPoint interior(int n) { return siegel::psi_inv(horocyclic(n)); }
  CVec ball(int dim, double r) {
    while (true) {
      CVec v = cvec(dim, r);
      if (heisenberg::norm_sq(v) < r * r) return v;
    }
  }
  siegel::Unitary unitary(int n) {
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = cplx(std::normal_distribution<double>()(eng), std::normal_distribution<double>()(eng));
    const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ();
    std::vector<cplx> u(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) u[static_cast<std::size_t>(i) * n + j] = q(i, j);
    return siegel::make_unitary(n, u);
  }
  siegel::Automorphism generator(int n, int kind) {
    switch (kind) {
      case 0: return {siegel::Translation{element(n)}};
      case 1: return {siegel::Dilation{uniform(0.3, 3.0)}};
      case 2: return {unitary(n)};
      default: return {siegel::Inversion{}};
    }
  }
};

struct Task {
  std::string id;
  std::string identity;
  std::function<CheckRecord(Rng&)> run;
  bool fixed_tolerance = false;  // pass/fail criteria that a --tol override must not loosen
};

CheckRecord result(cplx lhs, cplx rhs, double err, double tol, std::string rule = {}, std::string note = {}) {
  CheckRecord r;
  r.lhs = lhs, r.rhs = rhs, r.rel_error = err, r.tolerance = tol;
  r.rule = std::move(rule), r.note = std::move(note);
  return r;
}

CheckRecord compare(cplx lhs, cplx rhs, double tol, std::string rule = {}, std::string note = {}) {
  return result(lhs, rhs, rel(lhs, rhs), tol, std::move(rule), std::move(note));
}

CheckRecord run_one(const Task& t, const Config& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(cfg.seed ^ fnv1a(t.id));
  CheckRecord r;
  try {
    r = t.run(rng);
  } catch (const std::exception& e) {
    r = CheckRecord{};
    r.rel_error = std::nan("");
    r.error = e.what();
  }
  r.id = t.id;
  r.identity = t.identity;
  if (!r.reported_only && !t.fixed_tolerance && cfg.tol > 0.0) r.tolerance = cfg.tol;
  r.pass = r.reported_only || (r.error.empty() && std::isfinite(r.rel_error) && r.rel_error <= r.tolerance);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CheckRecord> run_tasks(const std::vector<Task>& tasks, const Config& cfg) {
  std::vector<CheckRecord> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < tasks.size();) out[i] = run_one(tasks[i], cfg);
  };
  std::size_t count = cfg.threads > 0 ? static_cast<std::size_t>(cfg.threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  count = std::max<std::size_t>(1, std::min(count, tasks.size()));
  std::vector<std::future<void>> pool;
  for (std::size_t k = 0; k < count; ++k) pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool) f.get();
  std::sort(out.begin(), out.end(), [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
  return out;
}

Horocyclic i_horocyclic(int n) { return {CVec(n, 0.0), 0.0, 1.0}; }

// A generic point for kernel bases: small z offsets, moderate t and h.
Horocyclic base_point(int n, cplx z0, double t, double h) {
  CVec z(n, 0.0);
  z[0] = z0;
  if (n > 1) z[1] = cplx(-0.1 * z0.imag(), 0.1 * z0.real());
  return {z, t, h};
}

// Tensor rule around `center`. Kernel families centred at their base point are radial in z, so
// two angle nodes suffice there.
ConfigurationRule config_rule(const Horocyclic& center, double scale, double decay, const Config& cfg,
                              bool radial) {
  ConfigurationRule r;
  r.h_order = cfg.fast ? 12 : 16;
  r.r_order = cfg.fast ? 12 : 16;
  r.t_order = cfg.fast ? 16 : 24;
  r.angle_order = radial ? 2 : (cfg.n == 1 ? (cfg.fast ? 6 : 8) : 4);
  r.center = center;
  r.h_scale = r.r_shift = r.t_shift = scale;
  r.h_decay = decay;
  return r;
}

const spectral::SynthesisOptions kNormSynthesis{8};

spectral::FiniteFamily sample_finite(int n) {
  spectral::FiniteFamily f;
  if (n == 1) {
    f.terms = {{{0}, {1.0, 0.5, 1.0}}, {{1}, {cplx(0, 0.3), 0.0, 0.7}}, {{2}, {cplx(0.2, -0.1), 1.0, 1.5}}};
  } else {
    f.terms = {{{0, 0}, {1.0, 0.5, 1.0}}, {{1, 0}, {cplx(0, 0.3), 0.0, 0.7}}, {{1, 1}, {cplx(0.2, -0.1), 1.0, 1.5}}};
  }
  return f;
}

// Smallest derivative orders m >= 1 with 2m + nu > -1.
std::vector<int> valid_orders(double nu, int count) {
  std::vector<int> ms;
  for (int m = 1; static_cast<int>(ms.size()) < count; ++m)
    if (2.0 * m + nu > -1.0) ms.push_back(m);
  return ms;
}

double elem_diff(const Element& a, const Element& b) {
  double d = std::abs(a.t - b.t);
  for (std::size_t j = 0; j < a.z.size(); ++j) d = std::max(d, std::abs(a.z[j] - b.z[j]));
  return d;
}

double elem_size(const Element& a) { return std::abs(a.t) + heisenberg::norm_sq(a.z); }

// ---------------------------------------------------------------- group

void group_tasks(const Config& cfg, std::vector<Task>& tasks) {
  const int n = cfg.n;
  const int trials = cfg.fast ? 50 : 200;
  tasks.push_back({"group.associativity", "(ab)c = a(bc) on the Heisenberg group", [=](Rng& r) {
                     double worst = 0;
                     for (int k = 0; k < trials; ++k) {
                       const Element a = r.element(n), b = r.element(n), c = r.element(n);
                       const double scale = 1 + elem_size(a) + elem_size(b) + elem_size(c);
                       worst = std::max(worst, elem_diff(heisenberg::mul(heisenberg::mul(a, b), c),
                                                         heisenberg::mul(a, heisenberg::mul(b, c))) / scale);
                     }
                     return result(worst, 0.0, worst, 1e-14, num(trials) + " random triples");
                   }});
  tasks.push_back({"group.identity_inverse", "ae = ea = a and a a^{-1} = a^{-1} a = e", [=](Rng& r) {
                     double worst = 0;
                     const Element e = Element::identity(n);
                     for (int k = 0; k < trials; ++k) {
                       const Element a = r.element(n);
                       const double scale = 1 + elem_size(a);
                       worst = std::max({worst, elem_diff(heisenberg::mul(a, e), a) / scale,
                                         elem_diff(heisenberg::mul(e, a), a) / scale,
                                         elem_diff(heisenberg::mul(a, heisenberg::inv(a)), e) / scale,
                                         elem_diff(heisenberg::mul(heisenberg::inv(a), a), e) / scale});
                     }
                     return result(worst, 0.0, worst, 1e-14, num(trials) + " random elements");
                   }});
  tasks.push_back({"group.norm_homogeneity", "|D_delta a| = delta |a| for the homogeneous norm", [=](Rng& r) {
                     double worst = 0;
                     for (int k = 0; k < trials; ++k) {
                       const Element a = r.element(n);
                       const double delta = std::exp(r.uniform(-2.0, 2.0));
                       const double lhs = heisenberg::homogeneous_norm(heisenberg::dilate(delta, a));
                       worst = std::max(worst, rel(lhs, delta * heisenberg::homogeneous_norm(a)));
                     }
                     return result(worst, 0.0, worst, 1e-14, num(trials) + " random elements and dilations");
                   }});
  tasks.push_back({"group.norm_symmetry", "|a^{-1}| = |a|", [=](Rng& r) {
                     double worst = 0;
                     for (int k = 0; k < trials; ++k) {
                       const Element a = r.element(n);
                       worst = std::max(worst, rel(heisenberg::homogeneous_norm(heisenberg::inv(a)),
                                                   heisenberg::homogeneous_norm(a)));
                     }
                     return result(worst, 0.0, worst, 1e-14, num(trials) + " random elements");
                   }});
  tasks.push_back({"group.dilation_automorphism", "D_delta(ab) = D_delta(a) D_delta(b)", [=](Rng& r) {
                     double worst = 0;
                     for (int k = 0; k < trials; ++k) {
                       const Element a = r.element(n), b = r.element(n);
                       const double delta = std::exp(r.uniform(-1.0, 1.0));
                       const Element lhs = heisenberg::dilate(delta, heisenberg::mul(a, b));
                       const Element rhs = heisenberg::mul(heisenberg::dilate(delta, a), heisenberg::dilate(delta, b));
                       worst = std::max(worst, elem_diff(lhs, rhs) / (1 + elem_size(rhs)));
                     }
                     return result(worst, 0.0, worst, 1e-14, num(trials) + " random pairs");
                   }});
  tasks.push_back({"group.boundary_translation", "translation of the boundary acts by the group law", [=](Rng& r) {
                     double worst = 0;
                     for (int k = 0; k < trials; ++k) {
                       const Element g = r.element(n), w = r.element(n);
                       const Horocyclic img = siegel::psi(siegel::apply({siegel::Translation{g}}, siegel::psi_inv(w.z, w.t, 0.0)));
                       const Element prod = heisenberg::mul(w, g);
                       worst = std::max(worst, elem_diff(Element{img.z, img.t}, prod) / (1 + elem_size(prod)));
                     }
                     return result(worst, 0.0, worst, 1e-13, num(trials) + " random pairs");
                   }});
  tasks.push_back({"group.automorphisms_preserve_domain", "generators and their compositions map U into U", [=](Rng& r) {
                     int bad = 0;
                     double min_rho = INFINITY;
                     for (int k = 0; k < trials; ++k) {
                       siegel::Composition comp;
                       for (int j = 0; j < 3; ++j) comp.parts.push_back(r.generator(n, static_cast<int>(r.uniform(0, 4))));
                       const SiegelPoint p = siegel::cayley(r.ball(n + 1, 0.99));
                       const double rho = siegel::rho(siegel::apply({comp}, p));
                       min_rho = std::min(min_rho, rho);
                       if (!(rho > 0.0)) ++bad;
                     }
                     return result(min_rho, 0.0, static_cast<double>(bad) / trials, 0.0,
                                   num(trials) + " random three-fold compositions", "lhs is the smallest image rho");
                   },
                   true});
  tasks.push_back({"group.rho_transformation", "rho is preserved by translations and unitaries and scales by delta^2 under dilations",
                   [=](Rng& r) {
                     double worst = 0;
                     for (int k = 0; k < trials; ++k) {
                       const SiegelPoint p = r.interior(n);
                       const double rho = siegel::rho(p), delta = r.uniform(0.2, 4.0);
                       worst = std::max({worst, rel(siegel::rho(siegel::apply(r.generator(n, 0), p)), rho) / (1 + std::abs(p.last) / rho),
                                         rel(siegel::rho(siegel::apply({siegel::Dilation{delta}}, p)), delta * delta * rho),
                                         rel(siegel::rho(siegel::apply(r.generator(n, 2), p)), rho)});
                     }
                     return result(worst, 0.0, worst, 1e-12, num(trials) + " random points");
                   }});
  tasks.push_back({"group.cayley_roundtrip", "C^{-1}(C(w)) = w on the unit ball", [=](Rng& r) {
                     double worst = 0;
                     for (int k = 0; k < trials; ++k) {
                       const CVec w = r.ball(n + 1, 0.99);
                       const CVec back = siegel::cayley_inv(siegel::cayley(w));
                       double d = 0;
                       for (int j = 0; j <= n; ++j) d += std::abs(back[j] - w[j]);
                       worst = std::max(worst, d);
                     }
                     return result(worst, 0.0, worst, 1e-13, num(trials) + " points with |w| < 0.99");
                   }});
  tasks.push_back({"group.tent_volume_scaling", "|T(B_r)| = r^{2n+4} |T(B_1)|", [=](Rng&) {
                     const double ratio = siegel::tent_volume(n, 2.0) / siegel::tent_volume(n, 1.0);
                     return compare(ratio, std::pow(2.0, 2 * n + 4), 1e-14, "radial Gauss-Jacobi");
                   }});
}

// ---------------------------------------------------------------- fock

void fock_tasks(const Config& cfg, std::vector<Task>& tasks) {
  const int n = cfg.n;
  const int deg = n == 1 ? 6 : 4;
  tasks.push_back({"fock.orthonormality", "monomials e_alpha are orthonormal in F^lambda (quadrature inner product)", [=](Rng&) {
                     const auto t = fock::truncation(n, deg);
                     double worst = 0;
                     for (double lambda : {-2.0, 0.7})
                       for (int i = 0; i < t->dim(); ++i)
                         for (int j = 0; j < t->dim(); ++j) {
                           const cplx g = fock::inner_product_quadrature(fock::FockVector::unit(t, i), fock::FockVector::unit(t, j), lambda, 8);
                           worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
                         }
                     return result(worst, 0.0, worst, 1e-10, "Gauss-Laguerre x trapezoid, 8 nodes per axis, degree <= " + num(deg));
                   }});
  tasks.push_back({"fock.coefficient_inner_product", "coefficient inner product equals the Gaussian integral", [=](Rng& r) {
                     const auto t = fock::truncation(n, deg);
                     double worst = 0;
                     for (int k = 0; k < 5; ++k) {
                       fock::FockVector f = fock::FockVector::zero(t), g = fock::FockVector::zero(t);
                       for (auto& c : f.coeffs) c = r.disc(1.0);
                       for (auto& c : g.coeffs) c = r.disc(1.0);
                       const double lambda = r.uniform(-3.0, -0.5);
                       worst = std::max(worst, std::abs(fock::inner_product(f, g) - fock::inner_product_quadrature(f, g, lambda, 8)));
                     }
                     return result(worst, 0.0, worst, 1e-10, "5 random vector pairs, 8 nodes per axis");
                   }});
  tasks.push_back({"fock.kernel_tail_bound", "truncated reproducing kernel lies within its analytic tail bound", [=](Rng& r) {
                     double worst = 0;
                     for (int k = 0; k < 50; ++k) {
                       const CVec z = r.cvec(n, 0.7), w = r.cvec(n, 0.7);
                       const cplx a = fock::reproducing_kernel(z, w, -2.0);
                       const double x = std::sqrt(heisenberg::norm_sq(z) * heisenberg::norm_sq(w));
                       for (int M : {3, 20}) {
                         const cplx p = fock::reproducing_kernel_partial(z, w, -2.0, M);
                         worst = std::max(worst, std::abs(p - a) / (fock::kernel_tail_bound(x, M) + 1e-14 * std::abs(a)));
                       }
                     }
                     return result(worst, 1.0, worst, 1.0, "50 random pairs, degrees 3 and 20",
                                   "rel_error is the error divided by the bound");
                   },
                   true});
  tasks.push_back({"fock.kernel_hermitian", "K(z,w) = conj K(w,z)", [=](Rng& r) {
                     double worst = 0;
                     for (int k = 0; k < 50; ++k) {
                       const CVec z = r.cvec(n, 0.7), w = r.cvec(n, 0.7);
                       worst = std::max(worst, rel(fock::reproducing_kernel(z, w, -2.0), std::conj(fock::reproducing_kernel(w, z, -2.0))));
                     }
                     return result(worst, 0.0, worst, 1e-14, "50 random pairs");
                   }});
}

// ---------------------------------------------------------------- bargmann

void bargmann_tasks(const Config& cfg, std::vector<Task>& tasks) {
  const int n = cfg.n;
  tasks.push_back({"bargmann.homomorphism", "sigma_lambda[ab] = sigma_lambda[a] sigma_lambda[b] on the low-degree block", [=](Rng& r) {
                     double worst = 0;
                     const int block = n == 1 ? 10 : 3;
                     const int count = n == 1 ? 3 : 1;
                     for (int k = 0; k < count; ++k) {
                       const Element a = r.element(n, n == 1 ? 1.0 : 0.7, 1.0), b = r.element(n, n == 1 ? 1.0 : 0.7, 1.0);
                       for (double lambda : {1.0, -1.0, 2.5}) worst = std::max(worst, bargmann::homomorphism_residual(lambda, a, b, block));
                     }
                     return result(worst, 0.0, worst, 1e-8, "block degree " + num(block) + ", lambda in {1, -1, 2.5}");
                   }});
  const std::vector<std::pair<std::string, bargmann::Field>> fields{
      {"T", bargmann::Field::T}, {"Zbar", bargmann::Field::ZbarRight}, {"Z", bargmann::Field::ZRight}};
  for (const auto& [label, field] : fields) {
    tasks.push_back({"bargmann.dsigma_" + label,
                     "differentiated representation of the " + label + " field matches finite differences",
                     [=, field = field](Rng&) {
                       const auto tr = fock::truncation(n, n == 1 ? 6 : 3);
                       double worst = 0;
                       for (double lambda : {1.5, -1.5, -0.4})
                         for (int j = 0; j < (field == bargmann::Field::T ? 1 : n); ++j)
                           worst = std::max(worst, bargmann::dsigma_check(lambda, field, j, tr));
                       return result(worst, 0.0, worst, 1e-6, "central differences, step 1e-4");
                     }});
  }
  tasks.push_back({"bargmann.p0_row_tail", "|P_0 sigma_lambda[z,t]|^2 truncated at degree M plus the analytic tail equals 1", [=](Rng& r) {
                     double worst = 0;
                     for (int k = 0; k < 20; ++k) {
                       const Element g = r.element(n, 1.2, 2.0);
                       const double lambda = r.uniform(-3, -0.1);
                       for (int M : {2, 6, 30}) {
                         const double s = bargmann::p0_row(lambda, g, fock::truncation(n, M)).norm_sq();
                         worst = std::max(worst, std::abs(s + bargmann::p0_row_tail(lambda, g, M) - 1.0));
                       }
                     }
                     return result(worst, 0.0, worst, 1e-13, "20 random (g, lambda), M in {2, 6, 30}");
                   }});
  tasks.push_back({"bargmann.column_unitarity", "unitarity defect of low-degree columns is within the column tail bound", [=](Rng& r) {
                     const int M = n == 1 ? 10 : 6;
                     const auto tr = fock::truncation(n, M);
                     double worst = 0;
                     for (int k = 0; k < 4; ++k) {
                       const Element g = r.element(n, 1.0, 1.0);
                       const double lambda = k % 2 ? -1.2 : 0.9;
                       const bargmann::RepMatrix m = bargmann::rep_matrix(lambda, g, tr);
                       for (int b = 0; b < tr->dim(); ++b) {
                         if (fock::degree((*tr)[b]) > M / 2) continue;
                         double s = 0;
                         for (int a = 0; a < tr->dim(); ++a) s += std::norm(m(a, b));
                         worst = std::max(worst, (1.0 - s) / (bargmann::column_tail_bound(lambda, g, (*tr)[b], M) + 1e-12));
                       }
                     }
                     return result(worst, 1.0, worst, 1.0, "truncation degree " + num(M),
                                   "rel_error is the defect divided by the bound");
                   },
                   true});
  tasks.push_back({"bargmann.identity", "sigma_lambda[e] is the identity", [=](Rng&) {
                     const auto tr = fock::truncation(n, 4);
                     double worst = 0;
                     for (double lambda : {1.3, -0.8}) {
                       const bargmann::RepMatrix m = bargmann::rep_matrix(lambda, Element::identity(n), tr);
                       for (int a = 0; a < tr->dim(); ++a)
                         for (int b = 0; b < tr->dim(); ++b) worst = std::max(worst, std::abs(m(a, b) - (a == b ? 1.0 : 0.0)));
                     }
                     return result(worst, 0.0, worst, 1e-12, "degree 4");
                   }});
}

// ---------------------------------------------------------------- paley-wiener

// Configuration-space norm against the Gamma constant times the L^2_nu norm.
CheckRecord norm_identity(const SpectralProfile& tau, const SpaceTag& s, const ConfigurationRule& r, double tol) {
  const double lhs = spectral::space_norm_sq(spectral::from_profile(tau, kNormSynthesis), s, r);
  const double rhs = s.pw_constant() * spectral::l2nu_norm_sq(tau, s.nu);
  return compare(lhs, rhs, tol, r.describe(), "constant " + s.pw_constant_expr());
}

CheckRecord spectral_identity(const SpectralProfile& tau, const SpaceTag& s, double tol) {
  const double lhs = spectral::spectral_space_norm_sq(tau, s);
  const double rhs = s.pw_constant() * spectral::l2nu_norm_sq(tau, s.nu);
  return compare(lhs, rhs, tol, "slice Plancherel + Gauss-Laguerre in h, 64 nodes", "constant " + s.pw_constant_expr());
}

CheckRecord hardy_check(int n, const Horocyclic& b, const Config& cfg, bool monotone) {
  const SpectralProfile tau(n, spectral::KernelFamily{SpaceTag::hardy(n), b});
  ConfigurationRule r;
  r.r_order = cfg.fast ? 24 : 32, r.t_order = cfg.fast ? 36 : 48, r.angle_order = n == 1 ? 4 : 2;
  r.center = b, r.r_shift = b.h, r.t_shift = b.h;
  const spectral::HardyResult hr = spectral::hardy_norm_sq(spectral::from_profile(tau), n, r);
  CheckRecord rec;
  if (monotone) {
    int bad = 0;
    for (std::size_t k = 1; k < hr.slice_norms_sq.size(); ++k)
      if (!(hr.slice_norms_sq[k] > hr.slice_norms_sq[k - 1])) ++bad;
    rec = result(hr.slice_norms_sq.back(), hr.slice_norms_sq.front(), bad, 0.0, r.describe(),
                 "lhs is the slice norm at the smallest height, rhs at the largest; rel_error counts violations");
  } else {
    rec = compare(hr.extrapolated, spectral::l2nu_norm_sq(tau, -1.0), 1e-4, r.describe(),
                  "Richardson extrapolation over h = 2^{-k} h_max");
  }
  for (std::size_t k = 0; k < hr.heights.size(); ++k) rec.series.emplace_back(hr.heights[k], hr.slice_norms_sq[k]);
  return rec;
}

// Space selected by (n, nu, m): nu > -1 Bergman, -1 Hardy, (-n-2, -1) weighted Dirichlet,
// -n-2 Dirichlet.
SpaceTag user_space(const Config& cfg) {
  const double nu = cfg.nu;
  if (nu > -1.0) return SpaceTag::bergman(cfg.n, nu);
  if (nu == -1.0) return SpaceTag::hardy(cfg.n);
  if (nu == -cfg.n - 2.0) return SpaceTag::dirichlet(cfg.n, cfg.m);
  return SpaceTag::weighted_dirichlet(cfg.n, nu, cfg.m);
}

void paley_wiener_tasks(const Config& cfg, std::vector<Task>& tasks) {
  const int n = cfg.n;
  const Horocyclic i = i_horocyclic(n);
  tasks.push_back({"paley-wiener.bergman.kernel", "A^2_0 norm of the synthesized kernel at i equals Gamma(nu+1)/2^{nu+1} ||tau||^2_{L^2_nu}",
                   [=](Rng&) {
                     const SpaceTag s = SpaceTag::bergman(n, 0.0);
                     const SpectralProfile tau(n, spectral::KernelFamily{s, i});
                     return norm_identity(tau, s, config_rule(i, 1.0, n + 3.0, cfg, true), 1e-4);
                   }});
  tasks.push_back({"paley-wiener.bergman.finite", "A^2_0 norm of a synthesized finite family equals Gamma(nu+1)/2^{nu+1} ||tau||^2_{L^2_nu}",
                   [=](Rng&) {
                     const SpaceTag s = SpaceTag::bergman(n, 0.0);
                     const SpectralProfile tau(n, sample_finite(n));
                     return norm_identity(tau, s, config_rule(Horocyclic{CVec(n, 0.0), 0.0, 0.0}, 1.0, 2.0, cfg, false), 1e-4);
                   }});
  tasks.push_back({"paley-wiener.bergman.spectral", "spectral-side A^2_0 norm of the kernel at i equals the Gamma constant times ||tau||^2",
                   [=](Rng&) {
                     const SpaceTag s = SpaceTag::bergman(n, 0.0);
                     return spectral_identity(SpectralProfile(n, spectral::KernelFamily{s, i}), s, 1e-10);
                   }});

  // weighted Dirichlet at the Drury-Arveson weight and at -1.5: m-independence of the norm
  const Horocyclic b = base_point(n, cplx(0.2, 0.1), 0.3, 0.9);
  for (double nu : {-n - 1.0, -1.5}) {
    const std::vector<int> ms = valid_orders(nu, 2);
    for (int m : ms) {
      const std::string stem = "paley-wiener.weighted_dirichlet.nu=" + num(nu) + ".m=" + num(m);
      const std::string what = "D_{" + num(nu) + ",(" + num(m) + ")} norm of a kernel family equals the m-dependent Gamma constant times ||tau||^2";
      tasks.push_back({stem + ".quadrature", what + " (configuration quadrature)", [=](Rng&) {
                         const SpectralProfile tau(n, spectral::KernelFamily{SpaceTag::weighted_dirichlet(n, nu, ms[0]), b});
                         return norm_identity(tau, SpaceTag::weighted_dirichlet(n, nu, m), config_rule(b, b.h, n + 3.0 + nu, cfg, true), 1e-3);
                       }});
      tasks.push_back({stem + ".spectral", what + " (spectral side)", [=](Rng&) {
                         const SpectralProfile tau(n, spectral::KernelFamily{SpaceTag::weighted_dirichlet(n, nu, ms[0]), b});
                         return spectral_identity(tau, SpaceTag::weighted_dirichlet(n, nu, m), 1e-10);
                       }});
    }
  }

  // Cauchy-Riemann reductions of synthesized functions under central differences
  for (const std::string which : {"h", "z"}) {
    tasks.push_back({"paley-wiener.cauchy_riemann." + which,
                     which == "h" ? "i dF/dt = dF/dh for synthesized kernel and finite families"
                                  : "dF/dzbar_j = (i/4) z_j dF/dt for synthesized kernel and finite families",
                     [=](Rng& r) {
                       const SpectralProfile k(n, spectral::KernelFamily{SpaceTag::bergman(n, 0.0), r.horocyclic(n)});
                       const SpectralProfile f(n, sample_finite(n));
                       double worst = 0;
                       for (const SpectralProfile* tau : {&k, &f}) {
                         for (int j = 0; j < 5; ++j) {
                           const Horocyclic p = r.horocyclic(n);
                           const double e = 1e-4;
                           auto F = [&](const Horocyclic& q) { return spectral::synthesize(*tau, q); };
                           Horocyclic tp = p, tm = p, hp = p, hm = p;
                           tp.t += e, tm.t -= e, hp.h += e, hm.h -= e;
                           const cplx dt = (F(tp) - F(tm)) / (2 * e), dh = (F(hp) - F(hm)) / (2 * e);
                           if (which == "h") {
                             worst = std::max(worst, std::abs(cplx(0, 1) * dt - dh) / std::abs(dh));
                             continue;
                           }
                           for (int q = 0; q < n; ++q) {
                             Horocyclic xp = p, xm = p, yp = p, ym = p;
                             xp.z[q] += e, xm.z[q] -= e, yp.z[q] += cplx(0, e), ym.z[q] -= cplx(0, e);
                             const cplx dzbar = 0.5 * ((F(xp) - F(xm)) / (2 * e) + cplx(0, 1) * (F(yp) - F(ym)) / (2 * e));
                             worst = std::max(worst, std::abs(dzbar - cplx(0, 0.25) * p.z[q] * dt) / std::abs(dt));
                           }
                         }
                       }
                       return result(worst, 0.0, worst, 1e-6, "central differences, step 1e-4, 10 random points");
                     }});
  }

  const Horocyclic hb = base_point(n, cplx(0.1, 0.2), -0.3, 0.8);
  tasks.push_back({"paley-wiener.hardy.extrapolation", "boundary limit of the h-slice L^2 norms equals the spectral H^2 norm",
                   [=](Rng&) { return hardy_check(n, hb, cfg, false); }});
  tasks.push_back({"paley-wiener.hardy.monotone", "h-slice L^2 norms increase as h decreases",
                   [=](Rng&) { return hardy_check(n, hb, cfg, true); }, true});

  tasks.push_back({"paley-wiener.dilation_scaling", "||F o D_delta||^2 = delta^{-(2n+4+2nu)} ||F||^2 in A^2_nu", [=](Rng&) {
                     const double nu = 0.5, delta = 1.7;
                     const SpaceTag s = SpaceTag::bergman(n, nu);
                     const Horocyclic bd = base_point(n, cplx(0.2, 0.1), 0.1, 0.9);
                     const spectral::HolomorphicFunction F = spectral::from_profile(SpectralProfile(n, spectral::KernelFamily{s, bd}), kNormSynthesis);
                     spectral::HolomorphicFunction G;
                     G.value = [&](const Horocyclic& p) {
                       Horocyclic q = p;
                       for (auto& z : q.z) z *= delta;
                       q.t *= delta * delta, q.h *= delta * delta;
                       return F.value(q);
                     };
                     const ConfigurationRule r = config_rule(bd, bd.h, n + 3.0 + nu, cfg, true);
                     ConfigurationRule rg = r;
                     rg.center = bd;
                     for (auto& z : rg.center.z) z /= delta;
                     rg.center.t /= delta * delta, rg.center.h = 0.0;
                     rg.h_scale = rg.r_shift = rg.t_shift = bd.h / (delta * delta);
                     // different node counts, so the two sums are not images of each other
                     rg.h_order += 4, rg.r_order += 4, rg.t_order += 8;
                     const double ratio = spectral::space_norm_sq(G, s, rg) / spectral::space_norm_sq(F, s, r);
                     const double stated = std::pow(delta, -(2.0 * n + 4));
                     return compare(ratio, std::pow(delta, -(2.0 * n + 4 + 2 * nu)), 1e-4, r.describe(),
                                    "nu = 0.5, delta = 1.7; the nu-free exponent -(2n+4) would give " + num(stated));
                   }});

  tasks.push_back({"paley-wiener.user_space", "norm identity in the space selected by --nu/--m (spectral side)", [=](Rng&) {
                     const SpaceTag s = user_space(cfg);
                     if (s.kind == spectral::SpaceKind::Hardy) return hardy_check(n, hb, cfg, false);
                     const Horocyclic ub = base_point(n, cplx(0.1, -0.2), 0.2, 0.8);
                     return spectral_identity(SpectralProfile(n, spectral::KernelFamily{s, ub}), s, 1e-10);
                   }});
}

// ---------------------------------------------------------------- dirichlet

void dirichlet_tasks(const Config& cfg, std::vector<Task>& tasks) {
  const int n = cfg.n;
  const int m = 2;
  const Horocyclic b = base_point(n, cplx(0.2, -0.3), 0.5, 0.6);
  const cplx c(0.7, 0.2);
  auto rule = [=] {
    ConfigurationRule r = config_rule(b, 0.8, 2.0, cfg, false);
    r.h_power = 2.0;
    return r;
  };
  tasks.push_back({"dirichlet.norm_identity", "||F||^2_D = Gamma constant x ||tau||^2 + |F(i)|^2 for a synthesized Dirichlet kernel family",
                   [=](Rng&) {
                     const SpaceTag s = SpaceTag::dirichlet(n, m);
                     const SpectralProfile tau(n, spectral::KernelFamily{s, b});
                     const ConfigurationRule r = rule();
                     const double lhs = spectral::space_norm_sq(spectral::from_dirichlet_profile(tau, c, kNormSynthesis), s, r);
                     const double rhs = s.pw_constant() * spectral::l2nu_norm_sq(tau, s.nu) + std::norm(c);
                     return compare(lhs, rhs, 1e-3, r.describe(), "c = F(i) = 0.7+0.2i, m = 2, constant " + s.pw_constant_expr());
                   }});
  tasks.push_back({"dirichlet.value_at_i", "subtracted synthesis returns c at i", [=](Rng&) {
                     const SpectralProfile tau(n, spectral::KernelFamily{SpaceTag::dirichlet(n, m), b});
                     return compare(spectral::synthesize_dirichlet(tau, i_horocyclic(n), c), c, 1e-14, "rotated-ray Gauss-Laguerre, 32 nodes");
                   }});
  tasks.push_back({"dirichlet.spectral", "spectral-side Dirichlet seminorm equals the Gamma constant times ||tau||^2", [=](Rng&) {
                     const SpaceTag s = SpaceTag::dirichlet(n, m);
                     return spectral_identity(SpectralProfile(n, spectral::KernelFamily{s, b}), s, 1e-10);
                   }});
  const Horocyclic z = base_point(n, cplx(0.2, -0.1), 0.3, 0.9), w0 = base_point(n, cplx(-0.1, 0.2), -0.2, 1.1);
  tasks.push_back({"dirichlet.kernel_reproducing", "<K(., w0), K(., zeta)>_D = K(zeta, w0) for the logarithmic kernel", [=](Rng&) {
                     const kernels::KernelId d = kernels::KernelId::dirichlet_log(n, m);
                     const ConfigurationRule r = kernels::kernel_rule(d, z, w0, cfg.fast);
                     const kernels::CheckResult res = kernels::reproducing_check(d, z, w0, r);
                     return result(res.lhs, res.rhs, res.rel_error, 1e-3, r.describe());
                   }});
  tasks.push_back({"dirichlet.constant_reproducing", "<c, K(., zeta)>_D = c", [=](Rng&) {
                     const kernels::KernelId d = kernels::KernelId::dirichlet_log(n, m);
                     const ConfigurationRule r = kernels::kernel_rule(d, z, z, true);
                     const kernels::CheckResult res = kernels::constant_reproducing_check(d, z, cplx(0.4, -0.3), r);
                     return result(res.lhs, res.rhs, res.rel_error, 1e-8, r.describe());
                   }});
  tasks.push_back({"dirichlet.dotted_gram", "dotted Dirichlet norm of a kernel combination equals its Gram form", [=](Rng&) {
                     const kernels::KernelId id = kernels::KernelId::dirichlet_log(n, m, true);
                     const std::vector<Horocyclic> pts{base_point(n, cplx(0.2, 0.1), 0.3, 0.8), base_point(n, cplx(-0.3, 0.0), -0.4, 1.2)};
                     const std::vector<cplx> alpha{cplx(1.0, 0.5), cplx(-0.7, 0.2)};
                     std::vector<spectral::HolomorphicFunction> ks;
                     for (const auto& p : pts) ks.push_back(kernels::kernel_function(id, p));
                     spectral::HolomorphicFunction f;
                     f.value = [&](const Horocyclic& w) { return alpha[0] * ks[0].value(w) + alpha[1] * ks[1].value(w); };
                     f.vertical_derivative = [&](const Horocyclic& w, int j) {
                       return alpha[0] * ks[0].vertical_derivative(w, j) + alpha[1] * ks[1].vertical_derivative(w, j);
                     };
                     cplx gram = 0;
                     for (int j = 0; j < 2; ++j)
                       for (int k = 0; k < 2; ++k) gram += std::conj(alpha[j]) * alpha[k] * kernels::kernel_eval(id, pts[j], pts[k]);
                     const ConfigurationRule r = kernels::kernel_rule(id, pts[0], pts[1], cfg.fast);
                     return compare(spectral::space_norm_sq(f, id.space(), r), gram.real(), 1e-3, r.describe());
                   }});
  tasks.push_back({"dirichlet.difference_integral", "int |Q(zeta,w)^{-m} - Q(i,w)^{-m}|^2 rho^{2m-n-2} dw relative to (1+|zeta|^2)^{2m+1}/rho(zeta)",
                   [=](Rng&) {
                     ConfigurationRule r = config_rule(b, 1.0, 2.0, cfg, false);
                     r.h_power = 2.0;
                     const SiegelPoint zp = siegel::psi_inv(base_point(n, cplx(0.3, 0.1), 0.5, 0.7));
                     r.center = siegel::psi(zp);
                     r.h_scale = r.r_shift = r.t_shift = 1.0;
                     const kernels::DifferenceIntegral d = kernels::dirichlet_difference_integral(n, m, zp, r);
                     CheckRecord rec = result(d.integral, d.ratio, 0.0, 0.0, r.describe(),
                                              "reported only: the bound has no explicit constant; rhs is the ratio");
                     rec.reported_only = true;
                     return rec;
                   }});
}

// ---------------------------------------------------------------- kernels

void kernel_tasks(const Config& cfg, std::vector<Task>& tasks) {
  const int n = cfg.n;
  const Horocyclic z = base_point(n, cplx(0.2, -0.1), 0.3, 0.9), w0 = base_point(n, cplx(-0.1, 0.2), -0.2, 1.1);
  for (double nu : {0.0, -1.5, -n - 1.0}) {
    tasks.push_back({"kernels.reproducing.nu=" + num(nu), "<K(., w0), K(., zeta)> by quadrature equals K(zeta, w0)", [=](Rng&) {
                       const kernels::KernelId id = nu > -1.0 ? kernels::KernelId::bergman(n, nu)
                                                              : kernels::KernelId::weighted_dirichlet(n, nu, valid_orders(nu, 1)[0]);
                       const ConfigurationRule r = kernels::kernel_rule(id, z, w0, cfg.fast);
                       const kernels::CheckResult res = kernels::reproducing_check(id, z, w0, r);
                       return result(res.lhs, res.rhs, res.rel_error, 1e-4, r.describe(), id.name() + ", constant " + id.constant_expr().to_string());
                     }});
  }

  const kernels::KernelId dotted = kernels::KernelId::dirichlet_log(n, n + 1, true);
  const std::vector<std::string> generators{"translation", "dilation", "unitary", "inversion"};
  for (int g = 0; g < 4; ++g) {
    tasks.push_back({"kernels.mobius." + generators[g], "dotted log-kernel distance D(phi w, phi z) = D(w, z) under " + generators[g] + "s",
                     [=](Rng& r) {
                       double worst = 0;
                       for (int k = 0; k < cfg.pairs; ++k) {
                         const SiegelPoint a = r.interior(n), b = r.interior(n);
                         worst = std::max(worst, kernels::mobius_invariance_check(dotted, r.generator(n, g), a, b).rel_error);
                       }
                       return result(worst, 0.0, worst, 1e-11, num(cfg.pairs) + " random pairs",
                                     "D(w,z) = K(w,w) + K(z,z) - 2 Re K(w,z); the i-normalization is not invariant pointwise");
                     }});
  }
  tasks.push_back({"kernels.mobius.cross", "four-point combination of the dotted kernel is invariant under random compositions", [=](Rng& r) {
                     double worst = 0;
                     for (int k = 0; k < cfg.pairs; ++k) {
                       siegel::Composition comp;
                       for (int j = 0; j < 4; ++j) comp.parts.push_back(r.generator(n, j));
                       const SiegelPoint a = r.interior(n), b = r.interior(n), c = r.interior(n), d = r.interior(n);
                       worst = std::max(worst, kernels::mobius_cross_check(dotted, {comp}, a, b, c, d).rel_error);
                     }
                     return result(worst, 0.0, worst, 1e-10, num(cfg.pairs) + " random quadruples");
                   }});
  for (const std::string form : {"exp", "log"}) {
    tasks.push_back({"kernels.cayley." + form,
                     form == "exp" ? "1/(1 - w.conj z) = Q(Cw,i)Q(i,Cz)/Q(Cw,Cz) on the ball"
                                   : "ball Dirichlet kernel equals the transferred dotted half-space kernel",
                     [=](Rng& r) {
                       double worst = 0;
                       for (int k = 0; k < cfg.pairs; ++k) {
                         const CVec a = r.ball(n + 1, 0.98), b = r.ball(n + 1, 0.98);
                         const kernels::CayleyResult res = kernels::cayley_transfer_check(n + 1, a, b);
                         worst = std::max(worst, form == "exp" ? res.exp_rel_error : res.log_rel_error);
                       }
                       return result(worst, 0.0, worst, 1e-10, num(cfg.pairs) + " random pairs with |w| < 0.98");
                     }});
  }

  const std::vector<std::pair<double, double>> ab{{0.0, 1.0}, {1.0, 0.5}};
  for (const auto& [a, bb] : ab) {
    const std::string tag = "a=" + num(a) + ".b=" + num(bb);
    tasks.push_back({"kernels.beta_chain.nested." + tag, "Beta-chain constant of int rho^a |Q|^{-(a+b+n+2)} equals nested quadrature (n = 1)",
                     [=, a = a, bb = bb](Rng&) {
                       return compare(kernels::beta_chain_nested_quadrature(a, bb, 1), kernels::beta_chain_constant(a, bb, 1), 1e-10,
                                      "tan-mapped Gauss-Jacobi, 48 nodes per level", kernels::beta_chain_constant_expr(a, bb, 1).to_string());
                     }});
    tasks.push_back({"kernels.beta_chain.monte_carlo." + tag, "4-D Monte Carlo estimate agrees with the Beta-chain constant within 3 sigma (n = 1)",
                     [=, a = a, bb = bb](Rng& r) {
                       const Horocyclic zeta{{r.disc(0.5)}, r.uniform(-0.5, 0.5), r.uniform(0.5, 1.0)};
                       const std::uint64_t samples = cfg.fast ? 50000 : 200000;
                       const auto mc = kernels::beta_chain_monte_carlo(a, bb, zeta, samples, cfg.seed);
                       const double exact = kernels::beta_chain_constant(a, bb, 1) * std::pow(zeta.h, -bb);
                       return result(mc.estimate.real(), exact, std::abs(mc.estimate.real() - exact) / exact, 3.0 * mc.standard_error / exact,
                                     num(static_cast<double>(samples)) + " importance samples",
                                     "tolerance is 3 standard errors; standard error " + num(mc.standard_error));
                     },
                     true});
  }
  tasks.push_back({"kernels.beta_chain.divergence", "the integral diverges for a <= -1 or b <= 0 and is reported as such", [=](Rng&) {
                     int missed = 0;
                     const Horocyclic zeta{{0.0}, 0.0, 1.0};
                     for (const auto& [a, bb] : std::vector<std::pair<double, double>>{{-1.0, 1.0}, {-1.5, 0.5}, {0.0, 0.0}, {0.5, -0.5}}) {
                       try {
                         kernels::beta_chain_constant(a, bb, 1);
                         ++missed;
                       } catch (const DivergenceError&) {
                       }
                       try {
                         kernels::beta_chain_monte_carlo(a, bb, zeta, 10, 1);
                         ++missed;
                       } catch (const DivergenceError&) {
                       }
                     }
                     return result(0.0, 0.0, missed, 0.0, "", "rel_error counts cases without a divergence error");
                   },
                   true});

  tasks.push_back({"kernels.gram_psd", "Gram matrices of every kernel are Hermitian positive semidefinite", [=](Rng& r) {
                     std::vector<kernels::KernelId> ids{kernels::KernelId::szego(n), kernels::KernelId::bergman(n, 0.0),
                                                        kernels::KernelId::weighted_dirichlet(n, -1.5, 1),
                                                        kernels::KernelId::dirichlet_log(n, n + 1, true)};
                     double worst = 0;
                     std::vector<SiegelPoint> pts;
                     for (int k = 0; k < 8; ++k) pts.push_back(r.interior(n));
                     for (const auto& id : ids) {
                       const kernels::GramResult g = kernels::gram_matrix(id, pts);
                       worst = std::max({worst, std::max(0.0, -g.min_eigenvalue) / g.trace, g.hermitian_defect / g.trace});
                     }
                     std::vector<CVec> bpts;
                     for (int k = 0; k < 8; ++k) bpts.push_back(r.ball(n + 1, 0.9));
                     const kernels::GramResult g = kernels::ball_gram_matrix(n, bpts);
                     worst = std::max({worst, std::max(0.0, -g.min_eigenvalue) / g.trace, g.hermitian_defect / g.trace});
                     return result(worst, 0.0, worst, 1e-12, "8 random points per kernel",
                                   "rel_error is the larger of -min eigenvalue and the Hermitian defect, over the trace");
                   }});
  tasks.push_back({"kernels.bergman_synthesis", "closed-form Bergman kernel equals the synthesized kernel family", [=](Rng& r) {
                     double worst = 0;
                     for (double nu : {0.0, 1.5}) {
                       const kernels::KernelId id = kernels::KernelId::bergman(n, nu);
                       for (int k = 0; k < 10; ++k) {
                         const Horocyclic base = r.horocyclic(n), p = r.horocyclic(n);
                         const SpectralProfile tau(n, spectral::KernelFamily{id.space(), base});
                         worst = std::max(worst, rel(spectral::synthesize(tau, p), kernels::kernel_eval(id, p, base)));
                       }
                     }
                     return result(worst, 0.0, worst, 1e-8, "rotated-ray Gauss-Laguerre, 32 nodes; nu in {0, 1.5}");
                   }});
}

// ---------------------------------------------------------------- drury-arveson

std::vector<da::MultiIndex> monomials(int dim, int max_degree) {
  std::vector<da::MultiIndex> out;
  for (int d = 0; d <= max_degree; ++d)
    for (const auto& a : fock::truncation(dim, d)->basis())
      if (fock::degree(a) == d) out.push_back(a);
  return out;
}

da::BallPolynomial random_poly(int dim, int deg, Rng& r) {
  da::BallPolynomial p(dim);
  for (const auto& a : monomials(dim, deg)) p.add(a, r.disc(1.0));
  return p;
}

double integral_norm_error(const da::BallPolynomial& f) {
  return rel(da::da_norm_integral_sq(f), da::da_norm_coeff_sq(f));
}

void da_tasks(const Config& cfg, std::vector<Task>& tasks) {
  const int dim = cfg.n + 1;
  tasks.push_back({"drury-arveson.z1z2.coefficient", "||z1 z2||^2_DA = 1/2 from the coefficient formula", [=](Rng&) {
                     return compare(da::da_norm_coeff_sq(da::BallPolynomial::parse("z1*z2", 2)), 0.5, 1e-15, "closed form");
                   }});
  tasks.push_back({"drury-arveson.z1z2.integral", "||z1 z2||^2_DA = 1/2 from the weighted integral of |R_n f|^2", [=](Rng&) {
                     return compare(da::da_norm_integral_sq(da::BallPolynomial::parse("z1*z2", 2)), 0.5, 1e-8,
                                    "sphere moments + Gauss-Jacobi in |z|^2, 24 nodes");
                   }});
  tasks.push_back({"drury-arveson.monomials", "integral norm equals coefficient norm for every monomial of degree <= 8", [=](Rng&) {
                     double worst = 0;
                     const auto all = monomials(dim, 8);
                     for (const auto& a : all) worst = std::max(worst, integral_norm_error(da::BallPolynomial::monomial(a)));
                     return result(worst, 0.0, worst, 1e-8, num(all.size()) + " monomials in dimension " + num(dim));
                   }});
  tasks.push_back({"drury-arveson.random_polynomials", "integral norm equals coefficient norm for random polynomials of degree <= 8", [=](Rng& r) {
                     double worst = 0;
                     for (int k = 0; k < cfg.polys; ++k)
                       worst = std::max(worst, integral_norm_error(random_poly(dim, static_cast<int>(r.uniform(0, 9)), r)));
                     return result(worst, 0.0, worst, 1e-8, num(cfg.polys) + " dense polynomials in dimension " + num(dim));
                   }});
  tasks.push_back({"drury-arveson.runtime", "monomial and random-polynomial norm checks finish within 30 s", [=](Rng& r) {
                     const auto start = std::chrono::steady_clock::now();
                     for (const auto& a : monomials(dim, 8)) integral_norm_error(da::BallPolynomial::monomial(a));
                     for (int k = 0; k < cfg.polys; ++k) integral_norm_error(random_poly(dim, static_cast<int>(r.uniform(0, 9)), r));
                     const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                     return result(secs, 30.0, secs / 30.0, 1.0, "", "lhs is seconds, rel_error the fraction of the budget");
                   },
                   true});
  tasks.push_back({"drury-arveson.direct_quadrature", "tensor quadrature without orthogonality agrees with the coefficient norm", [=](Rng& r) {
                     const da::BallPolynomial f = random_poly(dim, dim == 2 ? 8 : 6, r);
                     return compare(da::da_norm_integral_direct(f, cfg.fast ? 6 : 8), da::da_norm_coeff_sq(f), 1e-10,
                                    "radius x simplex x torus tensor rule");
                   }});
  tasks.push_back({"drury-arveson.script_r", "R_k recursion acts on degree-d monomials by (k+d)!/(k! d!)", [=](Rng& r) {
                     const da::BallPolynomial f = random_poly(dim, 6, r);
                     double worst = 0;
                     for (int k = 0; k <= dim; ++k) {
                       const da::BallPolynomial g = da::script_r(k, f);
                       for (const auto& [a, v] : f.coefficients())
                         worst = std::max(worst, rel(g.coefficient(a), da::script_r_eigenvalue(k, fock::degree(a)) * v));
                     }
                     return result(worst, 0.0, worst, 1e-13, "degree 6 random polynomial");
                   }});
}

using SuiteBuilder = void (*)(const Config&, std::vector<Task>&);

const std::vector<std::pair<std::string, SuiteBuilder>>& builders() {
  static const std::vector<std::pair<std::string, SuiteBuilder>> b{
      {"group", group_tasks},         {"fock", fock_tasks},           {"bargmann", bargmann_tasks},
      {"paley-wiener", paley_wiener_tasks}, {"kernels", kernel_tasks}, {"dirichlet", dirichlet_tasks},
      {"drury-arveson", da_tasks}};
  return b;
}

nlohmann::json cplx_json(cplx c) { return nlohmann::json::array({c.real(), c.imag()}); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

bool SuiteReport::passed() const { return failures() == 0; }

int SuiteReport::failures() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const CheckRecord& c) { return !c.pass; }));
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : builders()) names.push_back(name);
  names.push_back("all");
  return names;
}

void validate(const Config& cfg) {
  if (cfg.n != 1 && cfg.n != 2) throw ConfigError("n must be 1 or 2");
  if (!std::isfinite(cfg.nu)) throw ConfigError("nu must be finite");
  if (!(cfg.tol >= 0.0) || !std::isfinite(cfg.tol)) throw ConfigError("tol must be a finite non-negative number");
  if (cfg.pairs < 1) throw ConfigError("pairs must be positive");
  if (cfg.polys < 1) throw ConfigError("polys must be positive");
  if (cfg.threads < 0) throw ConfigError("threads must be non-negative");
  try {
    user_space(cfg);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("nu/m do not select a valid space: ") + e.what());
  }
}

Config config_from_json(const nlohmann::json& doc, Config base) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "n") base.n = value.get<int>();
      else if (key == "nu") base.nu = value.get<double>();
      else if (key == "m") base.m = value.get<int>();
      else if (key == "tol") base.tol = value.get<double>();
      else if (key == "seed") base.seed = value.get<std::uint64_t>();
      else if (key == "fast") base.fast = value.get<bool>();
      else if (key == "pairs") base.pairs = value.get<int>();
      else if (key == "polys") base.polys = value.get<int>();
      else if (key == "threads") base.threads = value.get<int>();
      else throw ConfigError("unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  return base;
}

nlohmann::json config_to_json(const Config& cfg) {
  return {{"n", cfg.n},         {"nu", cfg.nu},       {"m", cfg.m},         {"tol", cfg.tol},        {"seed", cfg.seed},
          {"fast", cfg.fast},   {"pairs", cfg.pairs}, {"polys", cfg.polys}, {"threads", cfg.threads}};
}

SuiteReport run_suite(const std::string& name, const Config& cfg) {
  validate(cfg);
  std::vector<Task> tasks;
  for (const auto& [suite, build] : builders())
    if (name == "all" || name == suite) build(cfg, tasks);
  if (tasks.empty()) throw ConfigError("unknown suite '" + name + "'");
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.suite = name;
  report.config = cfg;
  report.checks = run_tasks(tasks, cfg);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

nlohmann::json to_json(const SuiteReport& report, bool include_timing) {
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckRecord& c : report.checks) {
    nlohmann::json j{{"id", c.id},
                     {"identity", c.identity},
                     {"lhs", cplx_json(c.lhs)},
                     {"rhs", cplx_json(c.rhs)},
                     {"rel_error", c.rel_error},
                     {"tolerance", c.tolerance},
                     {"pass", c.pass},
                     {"reported_only", c.reported_only},
                     {"rule", c.rule},
                     {"note", c.note},
                     {"error", c.error}};
    if (include_timing) j["wall_seconds"] = c.wall_seconds;
    checks.push_back(std::move(j));
  }
  nlohmann::json out{{"suite", report.suite},
                     {"config", config_to_json(report.config)},
                     {"passed", report.passed()},
                     {"check_count", report.checks.size()},
                     {"failures", report.failures()},
                     {"checks", std::move(checks)}};
  if (include_timing) out["wall_seconds"] = report.wall_seconds;
  return out;
}

std::string to_csv(const SuiteReport& report) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "id,identity,lhs_re,lhs_im,rhs_re,rhs_im,rel_error,tolerance,pass,reported_only,rule,wall_seconds\n";
  for (const CheckRecord& c : report.checks)
    os << csv_field(c.id) << ',' << csv_field(c.identity) << ',' << c.lhs.real() << ',' << c.lhs.imag() << ','
       << c.rhs.real() << ',' << c.rhs.imag() << ',' << c.rel_error << ',' << c.tolerance << ',' << (c.pass ? 1 : 0)
       << ',' << (c.reported_only ? 1 : 0) << ',' << csv_field(c.rule) << ',' << c.wall_seconds << '\n';
  return os.str();
}

void write_gnuplot(const SuiteReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto open = [&](const std::string& stem) {
    std::ofstream f(fs::path(dir) / (stem + ".dat"));
    if (!f) throw std::runtime_error("cannot write gnuplot data to " + dir);
    f << std::setprecision(17);
    return f;
  };
  std::ofstream summary = open(report.suite);
  summary << "# index rel_error tolerance pass id\n";
  for (std::size_t k = 0; k < report.checks.size(); ++k) {
    const CheckRecord& c = report.checks[k];
    summary << k << ' ' << c.rel_error << ' ' << c.tolerance << ' ' << (c.pass ? 1 : 0) << " # " << c.id << '\n';
    if (c.series.empty()) continue;
    std::ofstream s = open(c.id);
    s << "# " << c.identity << '\n';
    for (const auto& [x, y] : c.series) s << x << ' ' << y << '\n';
  }
}

}  // namespace pw::verify
