#include "betadt/constants.hpp"

#include <cmath>
#include <numbers>

#include "betadt/errors.hpp"
#include "betadt/special.hpp"

namespace betadt {
namespace {

constexpr double kLogPi = 1.1447298858494002;  // ln(pi)

double lg(double x) { return log_gamma_fn(x); }

// ln c_{d,beta} - ln c_{d-1,beta}; finite at beta = -1 for the kappa = +1 branch.
double log_c_ratio(int d, double beta, int kappa) {
  if (kappa > 0) return lg(0.5 * d + beta + 1.0) - lg(0.5 * (d - 1) + beta + 1.0) - 0.5 * kLogPi;
  return lg(beta - 0.5 * (d - 1)) - lg(beta - 0.5 * d) - 0.5 * kLogPi;
}

double sum_half_gamma_ratio(int d, double nu) {
  double acc = 0.0;
  for (int i = 1; i < d; ++i) acc += lg(0.5 * (i + nu + 1.0)) - lg(0.5 * i);
  return acc;
}

}  // namespace

double log_intensity_constant(int d, double beta, int kappa) {
  if (kappa > 0) {
    if (!(beta > -1.0)) throw DomainError("c_{d,beta} requires beta > -1");
    return lg(0.5 * d + beta + 1.0) - 0.5 * d * kLogPi - lg(beta + 1.0);
  }
  if (!(beta > 0.5 * d)) throw DomainError("c'_{d,beta} requires beta > d/2");
  return lg(beta) - 0.5 * d * kLogPi - lg(beta - 0.5 * d);
}

double intensity_constant(const ModelParams& p) {
  p.validate();
  if (p.family == Family::ClassicalDelaunay) return 2.0 / sphere_surface(p.d);
  return std::exp(log_intensity_constant(p.d, p.beta, p.kappa()));
}

double void_rate(const ModelParams& p) {
  p.validate();
  const double d = p.d;
  double log_m = std::log(p.gamma) - 0.5 * kLogPi;
  if (p.kappa() > 0) {
    log_m += lg(0.5 * d + p.beta + 1.0) - lg(0.5 * d + p.beta + 1.5);
  } else {
    log_m += lg(p.beta - 0.5 * (d + 1.0)) - lg(p.beta - 0.5 * d);
  }
  return std::exp(log_m);
}

double radial_exponent(const ModelParams& p) { return p.d + 1.0 + 2.0 * p.kappa() * p.beta; }

double radial_power(const ModelParams& p) {
  const double d = p.d;
  return 2.0 * p.kappa() * d * p.beta + d * d + p.nu * (d - 1.0);
}

double radial_gamma_shape(const ModelParams& p) {
  return p.d + (p.nu - 1.0) * (p.d - 1.0) / radial_exponent(p);
}

double log_radial_integral(const ModelParams& p, double extra_power) {
  const double q = radial_exponent(p);
  const double a = (radial_power(p) + extra_power + 1.0) / q;
  if (!(a > 0.0)) throw DomainError("radial integral diverges for this exponent");
  return lg(a) - a * std::log(void_rate(p)) - std::log(std::abs(q));
}

double log_tuple_moment(const ModelParams& p, double nu) {
  const double d = p.d;
  const double b = p.beta;
  double acc = -(nu + 1.0) * log_factorial(p.d - 1) + sum_half_gamma_ratio(p.d, nu);
  if (p.kappa() > 0) {
    if (p.family == Family::ClassicalDelaunay && p.d == 2 && nu == -1.0) {
      throw DomainError("classical tuple moment undefined for d = 2, nu = -1");
    }
    acc += d * (lg(0.5 * (d + 1.0) + b) - lg(0.5 * (d + nu) + b + 1.0));
    const double t = d * (d + nu + 2.0 * b);
    acc += lg(0.5 * t + 1.0) - lg(0.5 * (t - nu + 1.0));
  } else {
    const double t = d * (2.0 * b - d - nu);
    if (!(t > 0.0)) throw DomainError("beta-prime tuple moment requires nu < 2*beta - d");
    acc += lg(0.5 * (t + nu + 1.0)) - lg(0.5 * t);
    acc += d * (lg(b - 0.5 * (d + nu)) - lg(b - 0.5 * (d - 1.0)));
  }
  return acc;
}

double log_tuple_integral(const ModelParams& p, double nu) {
  const double base = log_tuple_moment(p, nu);
  switch (p.family) {
    case Family::ClassicalDelaunay: return base + p.d * log_sphere_surface(p.d - 1);
    case Family::Beta: return base - p.d * log_intensity_constant(p.d - 1, p.beta, +1);
    case Family::BetaPrime: return base - p.d * log_intensity_constant(p.d - 1, p.beta, -1);
  }
  return base;
}

double density_norm_alpha(const ModelParams& p) {
  p.validate();
  return std::exp(-log_radial_integral(p) - log_tuple_integral(p, p.nu));
}

double cell_intensity_norm(const ModelParams& p) {
  p.validate();
  const double d = p.d;
  const double q = radial_exponent(p);
  const double log_lambda = d * (std::log(2.0 * p.gamma) + log_c_ratio(p.d, p.beta, p.kappa())) -
                            std::log(d * std::abs(q)) + log_radial_integral(p) +
                            log_tuple_moment(p, p.nu);
  return std::exp(log_lambda);
}

ModelConstants model_constants(const ModelParams& p) {
  return ModelConstants{intensity_constant(p), void_rate(p), density_norm_alpha(p),
                        cell_intensity_norm(p)};
}

}  // namespace betadt
