#include "betadt/special.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "betadt/errors.hpp"

namespace betadt {

double log_gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma_fn requires a finite x > 0, got " + std::to_string(x));
  }
  return boost::math::lgamma(x);
}

double log_ball_volume(int q) {
  if (q < 0) throw DomainError("ball_volume requires q >= 0");
  return 0.5 * q * std::log(std::numbers::pi) - log_gamma_fn(1.0 + 0.5 * q);
}

double log_sphere_surface(int q) {
  if (q < 1) throw DomainError("sphere_surface requires q >= 1");
  return std::log(2.0) + 0.5 * q * std::log(std::numbers::pi) - log_gamma_fn(0.5 * q);
}

double ball_volume(int q) { return std::exp(log_ball_volume(q)); }

double sphere_surface(int q) { return std::exp(log_sphere_surface(q)); }

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial requires n >= 0");
  return log_gamma_fn(n + 1.0);
}

}  // namespace betadt
