#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/binomial.hpp>

#include "betadt/analytics.hpp"
#include "betadt/errors.hpp"
#include "betadt/special.hpp"

namespace betadt {
namespace {

constexpr double kLogSqrtPi = 0.57236494292470008;  // ln sqrt(pi)

// ln c_g = ln Gamma(g + 3/2) - ln sqrt(pi) - ln Gamma(g + 1)
double log_c(double g) { return log_gamma_fn(g + 1.5) - kLogSqrtPi - log_gamma_fn(g + 1.0); }
// ln c'_g = ln Gamma(g) - ln sqrt(pi) - ln Gamma(g - 1/2)
double log_c_prime(double g) { return log_gamma_fn(g) - kLogSqrtPi - log_gamma_fn(g - 0.5); }

double log_cosh(double u) {
  const double a = std::abs(u);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

using Rule = boost::math::quadrature::gauss<double, 20>;

// Nodes and weights of the 20-point Gauss-Legendre rule on [-1, 1].
struct FullRule {
  std::vector<double> x, w;
  FullRule() {
    const auto& a = Rule::abscissa();
    const auto& wt = Rule::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) {
        x.push_back(0.0);
        w.push_back(wt[i]);
        continue;
      }
      x.push_back(-a[i]);
      w.push_back(wt[i]);
      x.push_back(a[i]);
      w.push_back(wt[i]);
    }
  }
};

const FullRule& rule() {
  static const FullRule r;
  return r;
}

// Integrand pieces: outer ln C_out - e_out ln cosh u, inner C_in cosh^{e_in}.
struct Kernel {
  int n = 0;  // power d - k
  double log_c_out = 0.0;
  double e_out = 0.0;
  double c_in = 0.0;
  double e_in = 0.0;
  double decay = 0.0;  // asymptotic exponential decay rate of |integrand|

  double inner(double v) const { return c_in * std::exp(e_in * log_cosh(v)); }

  // Integrand at u >= 0 given I(u); returns (re, im).
  std::complex<double> outer(double u, double big_i) const {
    const double base = log_c_out - e_out * log_cosh(u);
    if (n == 0) return {std::exp(base), 0.0};
    const double mod = 0.5 * std::log(0.25 + big_i * big_i);
    const double arg = std::atan2(big_i, 0.5);
    const double lm = base + n * mod;
    return std::polar(std::exp(lm), n * arg);
  }
};

// Integral over [0, u_hi] of the inner kernel, panel by panel.
double inner_integral(const Kernel& k, double a, double b) {
  const FullRule& r = rule();
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * k.inner(mid + half * r.x[i]);
  return half * acc;
}

// Outer integral over [-U, U] with P panels on each half.
std::complex<double> outer_integral(const Kernel& k, double U, int P) {
  const FullRule& r = rule();
  const double h = U / P;
  double big_i_left = 0.0;
  std::complex<double> pos{0.0, 0.0}, neg{0.0, 0.0};
  for (int j = 0; j < P; ++j) {
    const double a = j * h, b = (j + 1) * h;
    const double half = 0.5 * h, mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      const double u = mid + half * r.x[i];
      const double big_i = k.n == 0 ? 0.0 : big_i_left + inner_integral(k, a, u);
      const std::complex<double> f = k.outer(u, big_i);
      pos += r.w[i] * half * f;
      // I is odd, so the integrand at -u is the conjugate.
      neg += r.w[i] * half * std::conj(f);
    }
    if (k.n != 0) big_i_left += inner_integral(k, a, b);
  }
  return pos + neg;
}

// Smallest U (multiple of 0.5) whose tail bound is below the tolerance.
double auto_truncation(const Kernel& k, double rel_tol, double scale) {
  double u = 0.0, big_i = 0.0;
  const double target = 1e-3 * rel_tol * scale;
  for (int step = 0; step < 2000; ++step) {
    const double next = u + 0.5;
    if (k.n != 0) big_i += inner_integral(k, u, next);
    u = next;
    const double mag = std::abs(k.outer(u, big_i));
    if (mag * 2.0 / k.decay <= target && u >= 1.0) return u;
  }
  throw ConvergenceError("angle-sum quadrature: truncation search did not terminate");
}

AngleIntegral integrate(const Kernel& k, int d, int kk, const QuadratureConfig& q) {
  if (!(q.rel_tol > 0.0)) throw DomainError("rel_tol must be > 0");
  const double binom = boost::math::binomial_coefficient<double>(d, kk);
  // The k = d integrand has unit mass; lower k carry at least (1/2)^{d-k}.
  const double scale = std::ldexp(1.0, -k.n);
  const double U = q.truncation ? *q.truncation : auto_truncation(k, q.rel_tol, scale);
  if (!(U > 0.0)) throw DomainError("truncation U must be > 0");
  int P = std::max(4, static_cast<int>(std::ceil(U / 0.5)));
  std::complex<double> prev = outer_integral(k, U, P);
  for (int it = 0; it < q.max_refinement; ++it) {
    P *= 2;
    const std::complex<double> cur = outer_integral(k, U, P);
    const double diff = std::abs(cur.real() - prev.real());
    if (diff <= 0.1 * q.rel_tol * std::abs(cur.real()) || diff == 0.0) {
      AngleIntegral out;
      out.value = binom * cur.real();
      out.imag = binom * cur.imag();
      out.error_estimate = binom * diff;
      out.truncation = U;
      out.panels = P;
      if (std::abs(out.imag) > 10.0 * q.rel_tol * std::max(1.0, std::abs(out.value))) {
        throw ConvergenceError("angle-sum quadrature: imaginary part did not vanish");
      }
      return out;
    }
    prev = cur;
  }
  throw ConvergenceError("angle-sum quadrature did not converge to rel_tol");
}

void check_k(int d, int k) {
  if (d < 2) throw DomainError("angle sums require d >= 2");
  if (k < 1 || k > d) throw DomainError("angle sums require 1 <= k <= d");
}

}  // namespace

AngleIntegral angle_sum_J_detail(int d, int k, double beta_arg, const QuadratureConfig& q) {
  check_k(d, k);
  const double alpha = 2.0 * beta_arg + d - 1.0;
  if (!(alpha >= d - 3.0) || !(alpha > -1.0)) {
    throw DomainError("J_{d,k} requires alpha = 2*beta + d - 1 >= d - 3, got alpha = " +
                      std::to_string(alpha));
  }
  Kernel kern;
  kern.n = d - k;
  kern.log_c_out = log_c(0.5 * alpha * d);
  kern.e_out = alpha * d + 2.0;
  kern.c_in = std::exp(log_c(0.5 * (alpha - 1.0)));
  kern.e_in = alpha;
  kern.decay = std::max(kern.e_out - std::max(kern.e_in, 0.0) * kern.n, 1e-3);
  return integrate(kern, d, k, q);
}

double angle_sum_J(int d, int k, double beta_arg, const QuadratureConfig& q) {
  return angle_sum_J_detail(d, k, beta_arg, q).value;
}

AngleIntegral angle_sum_J_prime_detail(int d, int k, double beta_arg, const QuadratureConfig& q) {
  check_k(d, k);
  const double alpha = 2.0 * beta_arg - d + 1.0;
  if (!(alpha > 0.0) || !(alpha * d > 1.0)) {
    throw DomainError("J'_{d,k} requires alpha' = 2*beta - d + 1 > 0 and alpha'*d > 1");
  }
  Kernel kern;
  kern.n = d - k;
  kern.log_c_out = log_c_prime(0.5 * alpha * d);
  kern.e_out = alpha * d - 1.0;
  kern.c_in = std::exp(log_c_prime(0.5 * (alpha + 1.0)));
  kern.e_in = alpha - 1.0;
  kern.decay = std::max(kern.e_out - std::max(kern.e_in, 0.0) * kern.n, 1e-3);
  return integrate(kern, d, k, q);
}

double angle_sum_J_prime(int d, int k, double beta_arg, const QuadratureConfig& q) {
  return angle_sum_J_prime_detail(d, k, beta_arg, q).value;
}

}  // namespace betadt
