#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pw::quadrature {

using cplx = std::complex<double>;

// Default accuracy targets; callers pass their own when they need different ones.
struct Tolerances {
  double one_dimensional = 1e-10;
  double tensor = 1e-6;
};

// Nodes and weights of a one-dimensional rule in physical coordinates.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

// Gauss rule for the weight x^a e^{-c x} on (0, inf).
struct HalfLineRule {
  double exponent = 0.0;
  double scale = 1.0;
  int node_count = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

HalfLineRule gauss_laguerre(double exponent, double scale, int node_count);

// Sum w_i f(x_i); throws NonFiniteError if f returns NaN/Inf at any node.
cplx integrate_halfline(const HalfLineRule& rule, const std::function<cplx(double)>& f);

// Gauss-Legendre on [lo, hi] (weight 1).
Rule1D gauss_legendre(int node_count, double lo = -1.0, double hi = 1.0);

// Gauss-Jacobi on [-1, 1] for the weight (1-x)^alpha (1+x)^beta.
Rule1D gauss_jacobi(int node_count, double alpha, double beta);

// x = scale tan(u)^power on (0, inf) for the weight x^beta. Gauss-Jacobi in u absorbs the
// origin factor u^{power (beta + 1) - 1} and (pi/2 - u)^end at pi/2; f(x) x^beta ~ x^{-D} gives
// end = power (D - 1) - 1. power = 2 makes expansions in powers of x^{-1/2} smooth in u.
Rule1D tan_half_jacobi(int node_count, double scale, double beta, double end, double power = 1.0);

// x = origin + scale tan u on R, absorbing (pi/2 - |u|)^end at both ends.
Rule1D tan_jacobi(int node_count, double origin, double scale, double end);

// Gauss-Hermite for the normal density with the given variance; weights sum to 1.
Rule1D gauss_hermite(int node_count, double variance = 1.0);

// Tensor Gauss-Hermite rule on R^dimension for the product normal density.
struct GaussianRule {
  int dimension = 1;
  double variance = 1.0;
  int node_count = 1;
  Rule1D axis;
};

GaussianRule gaussian_rule(int dimension, int node_count, double variance = 1.0);
cplx integrate_gaussian(const GaussianRule& rule, const std::function<cplx(const std::vector<double>&)>& f);

// One axis of a BoxRule. Every unbounded axis is mapped to a bounded one by a named
// substitution; the weight (x - origin)^exponent is integrated exactly where it matters.
//   "legendre": composite Gauss-Legendre on [lo, hi] with `panels` equal panels.
//   "periodic": trapezoid on [lo, hi) (spectral for periodic integrands).
//   "tan":      x = origin + scale * tan(u), u in (-pi/2, pi/2).
//   "tan-half": x = origin + scale * tan(u), u in (0, pi/2), weight (x-origin)^exponent.
//   "jacobi":   [lo, hi] with weight (x-lo)^exponent handled by Gauss-Jacobi.
struct AxisRule {
  std::string mapping = "legendre";
  int order = 16;
  int panels = 1;
  double lo = -1.0;
  double hi = 1.0;
  double origin = 0.0;
  double scale = 1.0;
  double exponent = 0.0;

  // Physical nodes/weights; weights include the Jacobian and the power weight.
  Rule1D realize() const;
  // Same with origin/scale replaced (local rescaling in nested integrals).
  Rule1D realize(double origin_override, double scale_override) const;
};

struct BoxRule {
  std::vector<AxisRule> axes;
  int dimension() const { return static_cast<int>(axes.size()); }
};

cplx integrate_box(const BoxRule& rule, const std::function<cplx(const std::vector<double>&)>& f);

// Counter-based generator: the k-th draw of stream s under seed depends only on (seed, s, k).
class CounterRng {
 public:
  using result_type = std::uint64_t;
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ULL))) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type(0); }
  result_type operator()() { return mix(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }
  double uniform() { return ((*this)() >> 11) * 0x1.0p-53; }  // [0, 1)
  double uniform_open() { return (((*this)() >> 11) + 0.5) * 0x1.0p-53; }  // (0, 1)

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// A sample x drawn with probability density `density` (w.r.t. the integration measure).
struct Sample {
  std::vector<double> x;
  double density;
};

struct MonteCarloResult {
  cplx estimate;
  double standard_error;
  std::uint64_t samples;
};

// Importance-sampled estimate of the integral of f: mean of f(x)/density(x).
MonteCarloResult monte_carlo(const std::function<Sample(CounterRng&)>& sampler,
                             const std::function<cplx(const std::vector<double>&)>& f,
                             std::uint64_t sample_count, std::uint64_t seed);

}  // namespace pw::quadrature
