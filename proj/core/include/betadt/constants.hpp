#pragma once

#include "betadt/model.hpp"

namespace betadt {

struct ModelConstants {
  double c = 0.0;          // height-intensity constant
  double m = 0.0;          // void rate
  double alpha = 0.0;      // typical-cell density normalization
  double lambda_nu = 0.0;  // cell intensity normalization
};

// c_{d,beta} (Beta), c'_{d,beta} (BetaPrime). For the classical model this is
// the spatial intensity per unit gamma, 2/omega_d, i.e. the beta -> -1 limit of
// the height mass c_{d,beta} * H^{beta+1}/(beta+1).
double intensity_constant(const ModelParams& p);
double log_intensity_constant(int d, double beta, int kappa);

// m such that the void probability of the downward paraboloid with apex height
// kappa*r^2 equals exp(-m r^{d+1+2 kappa beta}).
double void_rate(const ModelParams& p);

// Exponent q = d+1+2*kappa*beta of the radial law (d-1 for the classical model).
double radial_exponent(const ModelParams& p);

// Power p of r in the radial density r^p exp(-m r^q).
double radial_power(const ModelParams& p);

// Gamma shape of Z = m R^q.
double radial_gamma_shape(const ModelParams& p);

// ln of int_0^inf r^{p + extra} exp(-m r^q) dr.
double log_radial_integral(const ModelParams& p, double extra_power = 0.0);

// ln E[Delta^{nu+1}] for d i.i.d. points in R^{d-1}: beta points (Beta),
// beta-prime points (BetaPrime) or uniform points on the sphere (classical).
double log_tuple_moment(const ModelParams& p, double nu);

// ln of int Delta^{nu+1} prod w(y_i) dy with the unnormalized weights
// (1 - |y|^2)^beta, (1 + |y|^2)^{-beta}, or surface measure on the sphere.
double log_tuple_integral(const ModelParams& p, double nu);

double density_norm_alpha(const ModelParams& p);
double cell_intensity_norm(const ModelParams& p);

ModelConstants model_constants(const ModelParams& p);

}  // namespace betadt
