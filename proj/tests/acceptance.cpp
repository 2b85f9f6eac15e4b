// One PASS/FAIL line per acceptance criterion, assembled from the verify suites at n = 1
// (criterion 7 also at n = 2). Exit status 0 iff every criterion passes.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "pw/verify.hpp"

using pw::verify::CheckRecord;
using pw::verify::Config;
using pw::verify::run_suite;

namespace {

struct Criterion {
  int number;
  std::string title;
  std::vector<std::string> prefixes;  // check ids selected by prefix
  std::vector<std::string> suites;
  std::vector<int> dims{1};
  double budget_seconds = 0.0;  // summed wall time of the selected checks, 0 for none
};

bool selected(const CheckRecord& c, const Criterion& k) {
  return std::any_of(k.prefixes.begin(), k.prefixes.end(), [&](const std::string& p) { return c.id.rfind(p, 0) == 0; });
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Bergman identity for kernel and finite families (1e-4, < 2 min)", {"paley-wiener.bergman."}, {"paley-wiener"}, {1}, 120.0},
      {2, "weighted Dirichlet identity at nu = -2 and -1.5, m = 1, 2 (1e-3 quadrature, 1e-10 spectral)",
       {"paley-wiener.weighted_dirichlet."}, {"paley-wiener"}},
      {3, "Dirichlet identity with c = F(i) (1e-3) and exact value at i (1e-14)",
       {"dirichlet.norm_identity", "dirichlet.value_at_i", "dirichlet.spectral"}, {"dirichlet"}},
      {4, "reproducing property at nu = 0, -1.5, -2 (1e-4)", {"kernels.reproducing."}, {"kernels"}},
      {5, "Mobius invariance of the dotted log kernel under all generators, 100 pairs (1e-11)",
       {"kernels.mobius.translation", "kernels.mobius.dilation", "kernels.mobius.unitary", "kernels.mobius.inversion"},
       {"kernels"}},
      {6, "Cayley transfer of the ball kernel, 100 pairs (1e-10)", {"kernels.cayley."}, {"kernels"}},
      {7, "Drury-Arveson integral norm equals coefficient norm, n = 1, 2 (1e-8, < 30 s)", {"drury-arveson."},
       {"drury-arveson"}, {1, 2}, 30.0},
      {8, "group axioms, homomorphism, differentiated representation, P0 row tail", {"group.", "bargmann."},
       {"group", "bargmann"}},
      {9, "Cauchy-Riemann residuals under central differences (1e-6)", {"paley-wiener.cauchy_riemann."}, {"paley-wiener"}},
      {10, "Beta-chain constant vs nested quadrature (1e-10), Monte Carlo (3 sigma), divergence", {"kernels.beta_chain."},
       {"kernels"}},
      {11, "Hardy slices increase and extrapolate to the spectral norm (1e-4)", {"paley-wiener.hardy."}, {"paley-wiener"}},
  };

  // run every needed (suite, n) pair once
  std::vector<std::pair<std::string, int>> runs;
  for (const auto& k : criteria)
    for (const auto& s : k.suites)
      for (int n : k.dims)
        if (std::find(runs.begin(), runs.end(), std::make_pair(s, n)) == runs.end()) runs.emplace_back(s, n);
  std::vector<std::pair<std::pair<std::string, int>, std::vector<CheckRecord>>> results;
  for (const auto& [suite, n] : runs) {
    Config cfg;
    cfg.n = n;
    results.push_back({{suite, n}, run_suite(suite, cfg).checks});
  }

  int failed = 0;
  for (const auto& k : criteria) {
    int count = 0, bad = 0;
    double worst = 0.0, seconds = 0.0;
    std::vector<std::string> failures;
    for (const auto& [key, checks] : results) {
      if (std::find(k.suites.begin(), k.suites.end(), key.first) == k.suites.end()) continue;
      if (std::find(k.dims.begin(), k.dims.end(), key.second) == k.dims.end()) continue;
      for (const auto& c : checks) {
        if (!selected(c, k)) continue;
        ++count;
        seconds += c.wall_seconds;
        if (c.tolerance > 0.0) worst = std::max(worst, c.rel_error / c.tolerance);
        if (!c.pass) {
          ++bad;
          failures.push_back(c.id + " (n=" + std::to_string(key.second) + ") rel_error=" + std::to_string(c.rel_error) +
                             " tol=" + std::to_string(c.tolerance) + (c.error.empty() ? "" : " error: " + c.error));
        }
      }
    }
    const bool over_budget = k.budget_seconds > 0.0 && seconds >= k.budget_seconds;
    const bool pass = count > 0 && bad == 0 && !over_budget;
    if (!pass) ++failed;
    std::printf("%s criterion %2d: %s [%d checks, worst error/tolerance %.2e, %.1f s]\n", pass ? "PASS" : "FAIL", k.number,
                k.title.c_str(), count, worst, seconds);
    for (const auto& f : failures) std::printf("      %s\n", f.c_str());
    if (over_budget) std::printf("      runtime %.1f s exceeds %.0f s\n", seconds, k.budget_seconds);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
