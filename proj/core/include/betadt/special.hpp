#pragma once

namespace betadt {

// ln Gamma(x) for x > 0.
double log_gamma_fn(double x);

// Volume of the unit ball in R^q.
double ball_volume(int q);

// Surface area of the unit sphere S^{q-1} in R^q.
double sphere_surface(int q);

double log_ball_volume(int q);
double log_sphere_surface(int q);
double log_factorial(int n);

}  // namespace betadt
