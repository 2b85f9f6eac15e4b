#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pw/drury_arveson.hpp"
#include "pw/errors.hpp"
#include "pw/kernels.hpp"
#include "pw/siegel.hpp"
#include "pw/spectral.hpp"
#include "pw/verify.hpp"

using nlohmann::json;
using cplx = std::complex<double>;
namespace siegel = pw::siegel;
namespace spectral = pw::spectral;
namespace kernels = pw::kernels;

namespace {

constexpr int kExitPass = 0, kExitFail = 1, kExitConfig = 2;

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw pw::verify::ConfigError(what + ": " + e.what());
  }
}

cplx parse_cplx(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw pw::verify::ConfigError("expected a number or [re, im], got " + j.dump());
}

json cplx_json(cplx c) { return json::array({c.real(), c.imag()}); }

pw::heisenberg::CVec parse_cvec(const json& j) {
  if (!j.is_array()) throw pw::verify::ConfigError("expected a list of [re, im] coordinates, got " + j.dump());
  pw::heisenberg::CVec v;
  for (const auto& c : j) v.push_back(parse_cplx(c));
  return v;
}

// [[re,im], ...] holds Siegel coordinates (zeta', zeta_{n+1}); {"z":[...],"t":..,"h":..} is horocyclic.
siegel::SiegelPoint parse_point(const json& j) {
  if (j.is_object()) {
    siegel::Horocyclic h{parse_cvec(j.at("z")), j.value("t", 0.0), j.at("h").get<double>()};
    return siegel::psi_inv(h);
  }
  const auto v = parse_cvec(j);
  if (v.size() < 2) throw pw::verify::ConfigError("a point needs n + 1 >= 2 coordinates");
  return {{v.begin(), v.end() - 1}, v.back()};
}

spectral::SpaceTag parse_space(const std::string& name, int n, double nu, int m) {
  if (name == "hardy") return spectral::SpaceTag::hardy(n);
  if (name == "bergman") return spectral::SpaceTag::bergman(n, nu);
  if (name == "weighted-dirichlet") return spectral::SpaceTag::weighted_dirichlet(n, nu, m);
  if (name == "drury-arveson") return spectral::SpaceTag::drury_arveson(n, m);
  if (name == "dirichlet") return spectral::SpaceTag::dirichlet(n, m);
  throw pw::verify::ConfigError("unknown space '" + name + "'");
}

// {"family":"kernel","space":..,"nu":..,"m":..,"base":{...}} or
// {"family":"finite","n":..,"terms":[{"alpha":[...],"profile":{"coef":..,"power":..,"decay":..}}]}
spectral::SpectralProfile parse_profile(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "kernel") {
    const json& b = j.at("base");
    const siegel::Horocyclic base = b.is_object() ? siegel::Horocyclic{parse_cvec(b.at("z")), b.value("t", 0.0), b.at("h").get<double>()}
                                                  : siegel::psi(parse_point(b));
    const int n = base.dim();
    const auto space = parse_space(j.value("space", std::string("bergman")), n, j.value("nu", 0.0), j.value("m", 1));
    return spectral::SpectralProfile(n, spectral::KernelFamily{space, base});
  }
  if (family == "finite") {
    spectral::FiniteFamily f;
    int n = j.value("n", 0);
    for (const auto& t : j.at("terms")) {
      spectral::FiniteTerm term;
      term.alpha = t.at("alpha").get<pw::fock::MultiIndex>();
      const json& p = t.at("profile");
      term.profile.coef = p.contains("coef") ? parse_cplx(p.at("coef")) : cplx(1.0);
      term.profile.power = p.value("power", 0.0);
      term.profile.decay = p.value("decay", 1.0);
      if (n == 0) n = static_cast<int>(term.alpha.size());
      f.terms.push_back(term);
    }
    if (n == 0) throw pw::verify::ConfigError("finite profile needs \"n\" or at least one term");
    return spectral::SpectralProfile(n, f);
  }
  throw pw::verify::ConfigError("unknown profile family '" + family + "'");
}

kernels::KernelId parse_kernel(const std::string& id, int n, double nu, int m) {
  if (id == "szego") return kernels::KernelId::szego(n);
  if (id == "bergman") return kernels::KernelId::bergman(n, nu);
  if (id == "weighted-dirichlet") return kernels::KernelId::weighted_dirichlet(n, nu, m);
  if (id == "dirichlet") return kernels::KernelId::dirichlet_log(n, m);
  if (id == "dirichlet-dotted") return kernels::KernelId::dirichlet_log(n, m, true);
  if (id == "ball-dirichlet") return kernels::KernelId::ball_dirichlet(n);
  throw pw::verify::ConfigError("unknown kernel '" + id + "'");
}

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f) throw pw::verify::ConfigError("cannot write " + out);
  f << j.dump(2) << '\n';
}

struct VerifyArgs {
  std::string suite = "all", out, csv, gnuplot, config_file;
  bool no_timing = false, quiet = false;
  pw::verify::Config cfg;
};

int run_verify(VerifyArgs a, CLI::App& cmd) {
  pw::verify::Config cfg;
  if (!a.config_file.empty()) {
    std::ifstream f(a.config_file);
    if (!f) throw pw::verify::ConfigError("cannot read config file " + a.config_file);
    json doc = parse_json(std::string(std::istreambuf_iterator<char>(f), {}), "config file");
    if (!doc.is_object()) throw pw::verify::ConfigError("config file must hold a JSON object");
    // driver keys; the rest are suite parameters
    auto take = [&](const char* key, auto& dst, const char* flag) {
      if (!doc.contains(key)) return;
      if (cmd.count(flag) == 0) dst = doc[key].get<std::decay_t<decltype(dst)>>();
      doc.erase(key);
    };
    take("suite", a.suite, "--suite");
    take("out", a.out, "--out");
    take("csv", a.csv, "--csv");
    take("emit-gnuplot", a.gnuplot, "--emit-gnuplot");
    take("no-timing", a.no_timing, "--no-timing");
    cfg = pw::verify::config_from_json(doc);
  }
  // command-line flags override the file
  if (cmd.count("--n")) cfg.n = a.cfg.n;
  if (cmd.count("--nu")) cfg.nu = a.cfg.nu;
  if (cmd.count("--m")) cfg.m = a.cfg.m;
  if (cmd.count("--tol")) cfg.tol = a.cfg.tol;
  if (cmd.count("--seed")) cfg.seed = a.cfg.seed;
  if (cmd.count("--fast")) cfg.fast = a.cfg.fast;
  if (cmd.count("--pairs")) cfg.pairs = a.cfg.pairs;
  if (cmd.count("--polys")) cfg.polys = a.cfg.polys;
  if (cmd.count("--threads")) cfg.threads = a.cfg.threads;

  const pw::verify::SuiteReport report = pw::verify::run_suite(a.suite, cfg);
  emit(pw::verify::to_json(report, !a.no_timing), a.out);
  if (!a.csv.empty()) {
    std::ofstream f(a.csv);
    if (!f) throw pw::verify::ConfigError("cannot write " + a.csv);
    f << pw::verify::to_csv(report);
  }
  if (!a.gnuplot.empty()) pw::verify::write_gnuplot(report, a.gnuplot);
  if (!a.quiet) {
    for (const auto& c : report.checks)
      std::cerr << (c.reported_only ? "INFO" : c.pass ? "PASS" : "FAIL") << "  " << c.id << "  rel_error=" << c.rel_error
                << " tol=" << c.tolerance << (c.error.empty() ? "" : "  error: " + c.error) << '\n';
    std::cerr << report.suite << ": " << report.checks.size() - report.failures() << "/" << report.checks.size()
              << " passed in " << report.wall_seconds << " s\n";
  }
  return report.passed() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Paley-Wiener identities, kernels and norms on the Siegel upper half-space"};
  app.require_subcommand(1);

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite and emit a JSON report");
  std::vector<std::string> suites = pw::verify::suite_names();
  verify->add_option("--suite", va.suite, "suite name")->check(CLI::IsMember(suites));
  verify->add_option("--n", va.cfg.n, "dimension parameter n (1 or 2)");
  verify->add_option("--nu", va.cfg.nu, "weight for the user-space identity");
  verify->add_option("--m", va.cfg.m, "derivative order for the user-space identity");
  verify->add_option("--tol", va.cfg.tol, "replace every numeric tolerance");
  verify->add_option("--seed", va.cfg.seed, "random seed");
  verify->add_flag("--fast", va.cfg.fast, "reduced node counts and sample sizes");
  verify->add_option("--pairs", va.cfg.pairs, "random pairs for invariance checks");
  verify->add_option("--polys", va.cfg.polys, "random polynomials for the Drury-Arveson suite");
  verify->add_option("--threads", va.cfg.threads, "worker threads (0: hardware concurrency)");
  verify->add_option("--out", va.out, "JSON report path (default stdout)");
  verify->add_option("--csv", va.csv, "also write a CSV table");
  verify->add_option("--emit-gnuplot", va.gnuplot, "directory for plain gnuplot data files");
  verify->add_option("--config", va.config_file, "JSON config file; flags override it");
  verify->add_flag("--no-timing", va.no_timing, "omit wall times so reports are reproducible byte for byte");
  verify->add_flag("--quiet", va.quiet, "no per-check lines on stderr");

  CLI::App* kernel = app.add_subcommand("kernel", "reproducing kernels");
  kernel->require_subcommand(1);
  CLI::App* keval = kernel->add_subcommand("eval", "evaluate K(omega, zeta)");
  std::string kid = "bergman", omega_s, zeta_s;
  double knu = 0.0;
  int km = 1, kderiv = 0;
  keval->add_option("--id", kid, "kernel")
      ->check(CLI::IsMember({"szego", "bergman", "weighted-dirichlet", "dirichlet", "dirichlet-dotted", "ball-dirichlet"}));
  keval->add_option("--nu", knu, "weight");
  keval->add_option("--m", km, "derivative order of the space");
  keval->add_option("--omega", omega_s, "point: [[re,im],...] (Siegel or ball coordinates) or {\"z\":..,\"t\":..,\"h\":..}")->required();
  keval->add_option("--zeta", zeta_s, "point, same formats")->required();
  keval->add_option("--derivative", kderiv, "order of the d/d omega_{n+1} derivative");

  CLI::App* synth = app.add_subcommand("synth", "synthesize F from a spectral profile at a point");
  std::string profile_s, point_s, c_s;
  synth->add_option("--profile", profile_s, "profile JSON")->required();
  synth->add_option("--point", point_s, "evaluation point")->required();
  synth->add_option("--c", c_s, "F(i) for the subtracted Dirichlet synthesis, [re,im]");

  CLI::App* norm = app.add_subcommand("norm", "space norm of the function synthesized from a profile");
  std::string nprofile_s, nspace = "bergman";
  double nnu = 0.0;
  int nm = 1;
  bool nquad = false;
  norm->add_option("--profile", nprofile_s, "profile JSON")->required();
  norm->add_option("--space", nspace, "space")
      ->check(CLI::IsMember({"hardy", "bergman", "weighted-dirichlet", "drury-arveson", "dirichlet"}));
  norm->add_option("--nu", nnu, "weight");
  norm->add_option("--m", nm, "derivative order");
  norm->add_flag("--quadrature", nquad, "also integrate over the half-space");

  CLI::App* danorm = app.add_subcommand("da-norm", "Drury-Arveson norm of a polynomial on the ball");
  int dim = 2;
  std::string poly, method = "both";
  danorm->add_option("--dim", dim, "ball dimension n + 1")->required();
  danorm->add_option("--poly", poly, "polynomial, e.g. 'z1*z2 + 0.5*z1^3'")->required();
  danorm->add_option("--method", method, "coeff, integral, both or direct")
      ->check(CLI::IsMember({"coeff", "integral", "both", "direct"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*verify) return run_verify(va, *verify);
    if (*keval) {
      const json jo = parse_json(omega_s, "--omega"), jz = parse_json(zeta_s, "--zeta");
      json out;
      if (kid == "ball-dirichlet") {
        const auto w = parse_cvec(jo), z = parse_cvec(jz);
        const kernels::KernelId id = kernels::KernelId::ball_dirichlet(static_cast<int>(w.size()) - 1);
        out = {{"kernel", id.name()}, {"value", cplx_json(kernels::ball_kernel_eval(id.n, w, z))},
               {"constant", id.constant_expr().to_string()}};
      } else {
        const siegel::SiegelPoint w = parse_point(jo), z = parse_point(jz);
        const kernels::KernelId id = parse_kernel(kid, w.dim(), knu, km);
        const cplx v = kderiv > 0 ? kernels::kernel_vertical_derivative(id, w, z, kderiv) : kernels::kernel_eval(id, w, z);
        out = {{"kernel", id.name()}, {"value", cplx_json(v)}, {"constant", id.constant_expr().to_string()}};
        if (kderiv > 0) out["derivative"] = kderiv;
      }
      emit(out, "");
      return kExitPass;
    }
    if (*synth) {
      const spectral::SpectralProfile tau = parse_profile(parse_json(profile_s, "--profile"));
      const siegel::SiegelPoint p = parse_point(parse_json(point_s, "--point"));
      const cplx v = c_s.empty() ? spectral::synthesize(tau, p)
                                 : spectral::synthesize_dirichlet(tau, p, parse_cplx(parse_json(c_s, "--c")));
      emit({{"value", cplx_json(v)}}, "");
      return kExitPass;
    }
    if (*norm) {
      const spectral::SpectralProfile tau = parse_profile(parse_json(nprofile_s, "--profile"));
      const spectral::SpaceTag s = parse_space(nspace, tau.n(), nnu, nm);
      const double l2 = spectral::l2nu_norm_sq(tau, s.nu);
      json out{{"space", s.name()},
               {"constant", s.pw_constant_expr()},
               {"l2nu_norm_sq", l2},
               {"norm_sq", s.pw_constant() * l2}};
      if (s.kind != spectral::SpaceKind::Hardy) out["spectral_side"] = spectral::spectral_space_norm_sq(tau, s);
      if (nquad) {
        spectral::ConfigurationRule r;
        r.h_order = 16, r.r_order = 16, r.t_order = 24, r.angle_order = tau.n() == 1 ? 8 : 4;
        r.center = siegel::Horocyclic{pw::heisenberg::CVec(tau.n(), 0.0), 0.0, 0.0};
        r.h_decay = 2.0;
        if (const auto* k = std::get_if<spectral::KernelFamily>(&tau.family())) {
          r.center = k->base;
          r.h_scale = r.r_shift = r.t_shift = k->base.h;
          if (s.kind != spectral::SpaceKind::Dirichlet) r.h_decay = tau.n() + 3.0 + s.nu;
        }
        if (s.kind == spectral::SpaceKind::Hardy) {
          out["quadrature"] = spectral::hardy_norm_sq(spectral::from_profile(tau), tau.n(), r).extrapolated;
        } else if (s.kind == spectral::SpaceKind::Dirichlet) {
          r.h_power = 2.0;
          out["quadrature"] = spectral::space_norm_sq(spectral::from_dirichlet_profile(tau, 0.0, {8}), s, r);
        } else {
          out["quadrature"] = spectral::space_norm_sq(spectral::from_profile(tau, {8}), s, r);
        }
        out["rule"] = r.describe();
      }
      emit(out, "");
      return kExitPass;
    }
    if (*danorm) {
      const pw::da::BallPolynomial f = pw::da::BallPolynomial::parse(poly, dim);
      json out{{"poly", f.to_string()}, {"dim", dim}};
      if (method == "coeff" || method == "both") out["coefficient"] = pw::da::da_norm_coeff_sq(f);
      if (method == "integral" || method == "both") out["integral"] = pw::da::da_norm_integral_sq(f);
      if (method == "direct") out["direct"] = pw::da::da_norm_integral_direct(f);
      if (method == "both") out["difference"] = out["integral"].get<double>() - out["coefficient"].get<double>();
      emit(out, "");
      return kExitPass;
    }
  } catch (const pw::verify::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {  // DomainError, DimensionError
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const pw::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitConfig;
}
