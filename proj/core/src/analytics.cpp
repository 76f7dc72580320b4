#include "betadt/analytics.hpp"

#include <cmath>
#include <string>

#include "betadt/errors.hpp"
#include "betadt/special.hpp"

namespace betadt {
namespace {

constexpr double kLogSqrtPi = 0.57236494292470008;

double lg(double x) { return log_gamma_fn(x); }

double prod_term(int d, double nu, double s) {
  double acc = 0.0;
  for (int i = 1; i < d; ++i) acc += lg(0.5 * (i + nu + s + 1.0)) - lg(0.5 * (i + nu + 1.0));
  return acc;
}

void require_integer_nu(const ModelParams& p) {
  if (p.nu != std::floor(p.nu)) {
    throw DomainError(
        "expected angle sums are only available for integer nu; got nu = " + std::to_string(p.nu));
  }
}

}  // namespace

double log_volume_moment(const ModelParams& p, double s) {
  p.validate();
  const double d = p.d, b = p.beta, nu = p.nu, g = p.gamma;
  if (!(s > -nu - 1.0)) throw DomainError("volume moments require s > -nu - 1");
  double acc = -s * log_factorial(p.d - 1) + prod_term(p.d, nu, s);
  if (p.kappa() > 0) {
    const double q = d + 2.0 * b + 1.0;
    const double log_inv_m = kLogSqrtPi + lg(0.5 * (d + 1.0) + b + 1.0) - std::log(g) - lg(0.5 * d + b + 1.0);
    acc += s * (d - 1.0) / q * log_inv_m;
    acc += lg(0.5 * (d * (d + 2.0 * b) + nu * (d - 1.0) + 1.0)) -
           lg(0.5 * (d * (d + 2.0 * b) + (nu + s) * (d - 1.0) + 1.0));
    acc += lg(0.5 * d * (d + nu + s + 2.0 * b) + 1.0) - lg(0.5 * d * (d + nu + 2.0 * b) + 1.0);
    acc += lg(d + (nu + s - 1.0) * (d - 1.0) / q) - lg(d + (nu - 1.0) * (d - 1.0) / q);
    acc += d * (lg(0.5 * (d + nu) + b + 1.0) - lg(0.5 * (d + nu + s) + b + 1.0));
    return acc;
  }
  if (!(s < 2.0 * b - d - nu)) {
    throw DomainError("beta-prime volume moments require s < 2*beta - d - nu");
  }
  const double q = d - 2.0 * b + 1.0;  // negative
  const double log_inv_m = kLogSqrtPi + lg(b - 0.5 * d) - std::log(g) - lg(b - 0.5 * (d + 1.0));
  acc += s * (d - 1.0) / q * log_inv_m;
  acc += lg(0.5 * (d * (2.0 * b - d) - (nu + s) * (d - 1.0) + 1.0)) -
         lg(0.5 * (d * (2.0 * b - d) - nu * (d - 1.0) + 1.0));
  acc += lg(0.5 * d * (2.0 * b - d - nu)) - lg(0.5 * d * (2.0 * b - d - nu - s));
  acc += lg(d + (nu + s - 1.0) * (d - 1.0) / q) - lg(d + (nu - 1.0) * (d - 1.0) / q);
  acc += d * (lg(b - 0.5 * (d + nu + s)) - lg(b - 0.5 * (d + nu)));
  return acc;
}

double volume_moment(const ModelParams& p, double s) { return std::exp(log_volume_moment(p, s)); }

double expected_angle_sum(const ModelParams& p, int k, const QuadratureConfig& q) {
  p.validate();
  require_integer_nu(p);
  if (p.family == Family::BetaPrime) {
    return angle_sum_J_prime(p.d, k, p.beta - 0.5 * (p.nu + 1.0), q);
  }
  return angle_sum_J(p.d, k, p.beta + 0.5 * (p.nu + 1.0), q);
}

double face_intensity(const ModelParams& p, int j, const QuadratureConfig& q) {
  p.validate();
  if (j < 0 || j > p.d - 1) throw DomainError("face_intensity requires 0 <= j <= d-1");
  const double vol = volume_moment(p.with_nu(0.0), 1.0);
  const double jv = p.family == Family::BetaPrime ? angle_sum_J_prime(p.d, j + 1, p.beta - 0.5, q)
                                                  : angle_sum_J(p.d, j + 1, p.beta + 0.5, q);
  return jv / vol;
}

double voronoi_f_vector(const ModelParams& p, int k, const QuadratureConfig& q) {
  p.validate();
  if (k < 1 || k > p.d) throw DomainError("voronoi_f_vector requires 1 <= k <= d");
  // E f_{d-k}(Y) = k gamma_{k-1}(D) / gamma_0(D); the volume factor cancels.
  auto j = [&](int kk) {
    return p.family == Family::BetaPrime ? angle_sum_J_prime(p.d, kk, p.beta - 0.5, q)
                                         : angle_sum_J(p.d, kk, p.beta + 0.5, q);
  };
  return k * j(k) / j(1);
}

}  // namespace betadt
