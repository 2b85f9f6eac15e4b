#include "pw/drury_arveson.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "pw/errors.hpp"
#include "pw/quadrature.hpp"
#include "pw/special.hpp"

namespace pw::da {

namespace {

void check_dim(int dim) {
  if (dim < 1) throw DimensionError("BallPolynomial: dimension must be positive");
}

// Recursive-descent parser; implicit multiplication between adjacent factors.
class Parser {
 public:
  Parser(const std::string& s, int dim) : s_(s), dim_(dim) {}

  BallPolynomial run() {
    BallPolynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("polynomial: " + what + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool starts_factor() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'z' || c == 'i' || c == '(';
  }

  BallPolynomial expr() {
    BallPolynomial p(dim_);
    bool first = true;
    while (true) {
      double sign = 1.0;
      if (peek('+') || peek('-')) {
        sign = s_[pos_] == '-' ? -1.0 : 1.0;
        ++pos_;
      } else if (!first) {
        break;
      }
      p = p + term() * sign;
      first = false;
    }
    return p;
  }

  BallPolynomial term() {
    BallPolynomial p = power();
    while (true) {
      if (peek('*')) {
        ++pos_;
        p = p * power();
      } else if (starts_factor()) {
        p = p * power();
      } else {
        return p;
      }
    }
  }

  BallPolynomial power() {
    BallPolynomial base = primary();
    if (!peek('^')) return base;
    ++pos_;
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a non-negative integer exponent");
    const int e = std::stoi(s_.substr(start, pos_ - start));
    BallPolynomial out = BallPolynomial::constant(dim_, 1.0);
    for (int k = 0; k < e; ++k) out = out * base;
    return out;
  }

  BallPolynomial primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      BallPolynomial p = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return p;
    }
    if (c == '-') {
      ++pos_;
      return primary() * -1.0;
    }
    if (c == 'i') {
      ++pos_;
      return BallPolynomial::constant(dim_, cplx(0.0, 1.0));
    }
    if (c == 'z') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a variable index after 'z'");
      const int k = std::stoi(s_.substr(start, pos_ - start));
      if (k < 1 || k > dim_) fail("variable z" + std::to_string(k) + " outside dimension " + std::to_string(dim_));
      MultiIndex a(dim_, 0);
      a[k - 1] = 1;
      return BallPolynomial::monomial(a);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return BallPolynomial::constant(dim_, v);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  int dim_;
  std::size_t pos_ = 0;
};

double log_weight(const MultiIndex& a) { return fock::log_factorial(a) - log_gamma(fock::degree(a) + 1.0); }

}  // namespace

BallPolynomial::BallPolynomial(int dim) : dim_(dim) { check_dim(dim); }

BallPolynomial BallPolynomial::constant(int dim, cplx c) {
  BallPolynomial p(dim);
  p.add(MultiIndex(dim, 0), c);
  return p;
}

BallPolynomial BallPolynomial::monomial(const MultiIndex& alpha, cplx c) {
  BallPolynomial p(static_cast<int>(alpha.size()));
  p.add(alpha, c);
  return p;
}

BallPolynomial BallPolynomial::parse(const std::string& text, int dim) {
  check_dim(dim);
  return Parser(text, dim).run();
}

int BallPolynomial::degree() const {
  int d = 0;
  for (const auto& [a, c] : coeffs_) d = std::max(d, fock::degree(a));
  return d;
}

cplx BallPolynomial::coefficient(const MultiIndex& alpha) const {
  const auto it = coeffs_.find(alpha);
  return it == coeffs_.end() ? cplx(0.0) : it->second;
}

void BallPolynomial::add(const MultiIndex& alpha, cplx c) {
  if (static_cast<int>(alpha.size()) != dim_) throw DimensionError("BallPolynomial: multi-index length differs from dim");
  for (int a : alpha)
    if (a < 0) throw DomainError("BallPolynomial: negative exponent");
  const cplx v = coefficient(alpha) + c;
  if (v == 0.0)
    coeffs_.erase(alpha);
  else
    coeffs_[alpha] = v;
}

cplx BallPolynomial::operator()(const CVec& z) const {
  if (static_cast<int>(z.size()) != dim_) throw DimensionError("BallPolynomial: point dimension differs");
  cplx sum = 0.0;
  for (const auto& [a, c] : coeffs_) {
    cplx m = c;
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < a[j]; ++k) m *= z[j];
    sum += m;
  }
  return sum;
}

BallPolynomial BallPolynomial::operator+(const BallPolynomial& o) const {
  if (o.dim_ != dim_) throw DimensionError("BallPolynomial: dimensions differ");
  BallPolynomial p = *this;
  for (const auto& [a, c] : o.coeffs_) p.add(a, c);
  return p;
}

BallPolynomial BallPolynomial::operator-(const BallPolynomial& o) const { return *this + o * -1.0; }

BallPolynomial BallPolynomial::operator*(const BallPolynomial& o) const {
  if (o.dim_ != dim_) throw DimensionError("BallPolynomial: dimensions differ");
  BallPolynomial p(dim_);
  for (const auto& [a, c] : coeffs_)
    for (const auto& [b, d] : o.coeffs_) {
      MultiIndex s(dim_);
      for (int j = 0; j < dim_; ++j) s[j] = a[j] + b[j];
      p.add(s, c * d);
    }
  return p;
}

BallPolynomial BallPolynomial::operator*(cplx c) const {
  BallPolynomial p(dim_);
  for (const auto& [a, v] : coeffs_) p.add(a, v * c);
  return p;
}

std::string BallPolynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [a, c] : coeffs_) {
    std::string mono;
    for (int j = 0; j < dim_; ++j) {
      if (a[j] == 0) continue;
      mono += (mono.empty() ? "z" : "*z") + std::to_string(j + 1);
      if (a[j] > 1) mono += "^" + std::to_string(a[j]);
    }
    std::string coef;
    bool negative = false;
    if (c.imag() == 0.0) {
      negative = c.real() < 0.0;
      const double mag = std::abs(c.real());
      if (mag != 1.0 || mono.empty()) coef = format_number(mag);
    } else {
      coef = "(" + format_number(c.real()) + (c.imag() < 0 ? "-" : "+") + format_number(std::abs(c.imag())) + "i)";
    }
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;
    os << coef << (!coef.empty() && !mono.empty() ? "*" : "") << mono;
  }
  return os.str();
}

double da_norm_coeff_sq(const BallPolynomial& f) {
  double s = 0.0;
  for (const auto& [a, c] : f.coefficients()) s += std::exp(log_weight(a)) * std::norm(c);
  return s;
}

double dot_dirichlet_norm_coeff_sq(const BallPolynomial& f) {
  double s = 0.0;
  for (const auto& [a, c] : f.coefficients()) s += fock::degree(a) * std::exp(log_weight(a)) * std::norm(c);
  return s;
}

BallPolynomial radial_derivative(const BallPolynomial& f) {
  BallPolynomial p(f.dim());
  for (const auto& [a, c] : f.coefficients()) p.add(a, c * static_cast<double>(fock::degree(a)));
  return p;
}

BallPolynomial script_r(int k, const BallPolynomial& f) {
  if (k < 0) throw DomainError("script_r: order must be non-negative");
  BallPolynomial p = f;
  for (int j = 1; j <= k; ++j) p = p + radial_derivative(p) * (1.0 / j);
  return p;
}

double script_r_eigenvalue(int k, int d) {
  if (k < 0 || d < 0) throw DomainError("script_r_eigenvalue: negative argument");
  return std::exp(log_gamma(k + d + 1.0) - log_gamma(k + 1.0) - log_gamma(d + 1.0));
}

double sphere_monomial_integral(const MultiIndex& alpha) {
  const int dim = static_cast<int>(alpha.size());
  check_dim(dim);
  return 2.0 * std::exp(dim * std::log(kPi) + fock::log_factorial(alpha) - log_gamma(dim + fock::degree(alpha)));
}

double da_norm_integral_sq(const BallPolynomial& f, const RadialRule& rule) {
  const int n = f.dim() - 1;
  if (n < 1) throw DomainError("da_norm_integral_sq: the integral formula needs dimension n+1 >= 2");
  // (1/2) int_0^1 (1-u)^{n-1} u^d du by Gauss-Jacobi; u = (1+x)/2
  const quadrature::Rule1D& g = quadrature::gauss_jacobi(rule.order, n - 1.0, 0.0);
  const auto radial = [&](int d) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::pow(0.5 * (1.0 + g.nodes[i]), d);
    return 0.5 * std::pow(0.5, n) * s;
  };
  const BallPolynomial g_n = script_r(n, f);
  double sum = 0.0;
  for (const auto& [a, c] : g_n.coefficients())
    sum += std::norm(c) * sphere_monomial_integral(a) * radial(fock::degree(a));
  return n * std::exp(log_gamma(n + 1.0) - (n + 1.0) * std::log(kPi)) * sum;
}

double da_norm_integral_direct(const BallPolynomial& f, int order) {
  const int dim = f.dim();
  const int n = dim - 1;
  if (dim != 2 && dim != 3) throw DimensionError("da_norm_integral_direct: dimension must be 2 or 3");
  const BallPolynomial g = script_r(n, f);
  const int T = g.degree() + 1;  // trapezoid exact for |frequency| < T
  const quadrature::Rule1D& rr = quadrature::gauss_jacobi(order, n - 1.0, 0.0);
  const quadrature::Rule1D sl = quadrature::gauss_legendre(order, 0.0, 1.0);
  // sphere nodes: |z_j|^2 = s_j on the simplex, angles on the torus; d sigma = 2^{1-dim} ds d theta
  std::vector<std::pair<std::vector<double>, double>> simplex;
  if (dim == 2) {
    for (std::size_t i = 0; i < sl.size(); ++i) simplex.push_back({{sl.nodes[i], 1.0 - sl.nodes[i]}, sl.weights[i]});
  } else {
    for (std::size_t i = 0; i < sl.size(); ++i)
      for (std::size_t j = 0; j < sl.size(); ++j) {
        const double a = sl.nodes[i], b = sl.nodes[j];
        simplex.push_back({{a, (1.0 - a) * b, (1.0 - a) * (1.0 - b)}, sl.weights[i] * sl.weights[j] * (1.0 - a)});
      }
  }
  const double dth = 2.0 * kPi / T;
  int torus = 1;
  for (int j = 0; j < dim; ++j) torus *= T;
  double total = 0.0;
  CVec z(dim);
  for (std::size_t ir = 0; ir < rr.size(); ++ir) {
    const double u = 0.5 * (1.0 + rr.nodes[ir]);
    double sphere = 0.0;
    for (const auto& [s, ws] : simplex) {
      double ring = 0.0;
      for (int idx = 0; idx < torus; ++idx) {
        int rem = idx;
        for (int j = 0; j < dim; ++j) {
          z[j] = std::polar(std::sqrt(u * s[j]), dth * (rem % T));
          rem /= T;
        }
        ring += std::norm(g(z));
      }
      sphere += ws * ring * std::pow(dth, dim);
    }
    total += rr.weights[ir] * sphere * std::pow(2.0, 1.0 - dim);
  }
  // (1/2) int (1-u)^{n-1} ... du with the Jacobi weight (1-x)^{n-1} = 2^{n-1}(1-u)^{n-1}, du = dx/2
  total *= 0.5 * std::pow(0.5, n);
  return n * std::exp(log_gamma(n + 1.0) - (n + 1.0) * std::log(kPi)) * total;
}

}  // namespace pw::da
