#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "pw/siegel.hpp"
#include "pw/special.hpp"

namespace testsupport {

using cplx = std::complex<double>;

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
inline double crel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Random {
  std::mt19937_64 eng;
  explicit Random(unsigned long long seed) : eng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  cplx complex_in_disc(double r) {
    while (true) {
      cplx c(uniform(-r, r), uniform(-r, r));
      if (std::abs(c) < r) return c;
    }
  }
  std::vector<cplx> cvec(int n, double r) {
    std::vector<cplx> v(n);
    for (auto& c : v) c = complex_in_disc(r);
    return v;
  }
  pw::siegel::Horocyclic horocyclic(int n, double zr = 1.0, double tr = 2.0, double hlo = 0.2, double hhi = 3.0) {
    return {cvec(n, zr), uniform(-tr, tr), uniform(hlo, hhi)};
  }
  pw::siegel::SiegelPoint interior(int n) { return pw::siegel::psi_inv(horocyclic(n)); }
  // Uniform-ish point inside the ball of radius r in C^{n+1}.
  std::vector<cplx> ball(int n1, double r) {
    while (true) {
      auto v = cvec(n1, r);
      double s = 0;
      for (auto& c : v) s += std::norm(c);
      if (s < r * r) return v;
    }
  }
};

}  // namespace testsupport
