#pragma once

#include <optional>

#include "betadt/model.hpp"

namespace betadt {

struct QuadratureConfig {
  double rel_tol = 1e-8;
  std::optional<double> truncation;  // outer half-width U; automatic when empty
  int max_refinement = 12;           // panel doublings
};

struct AngleIntegral {
  double value = 0.0;
  double imag = 0.0;           // imaginary part of the outer integral
  double error_estimate = 0.0; // |J(2P panels) - J(P panels)|
  double truncation = 0.0;     // U
  int panels = 0;              // panels on [0, U]
};

// J_{d,k}(beta_arg) with alpha = 2 beta_arg + d - 1 (expected angle sum of a
// beta simplex). Requires alpha >= d - 3.
AngleIntegral angle_sum_J_detail(int d, int k, double beta_arg, const QuadratureConfig& q = {});
double angle_sum_J(int d, int k, double beta_arg, const QuadratureConfig& q = {});

// J'_{d,k}(beta_arg) with alpha' = 2 beta_arg - d + 1. Requires alpha' > 0 and
// alpha' d > 1.
AngleIntegral angle_sum_J_prime_detail(int d, int k, double beta_arg, const QuadratureConfig& q = {});
double angle_sum_J_prime(int d, int k, double beta_arg, const QuadratureConfig& q = {});

// E Vol(Z_{beta,nu})^s. Beta/classical: s > -nu-1; BetaPrime: -nu-1 < s < 2 beta - d - nu.
double volume_moment(const ModelParams& p, double s);
double log_volume_moment(const ModelParams& p, double s);

// E sigma_k of the nu-weighted typical cell; nu must be an integer.
double expected_angle_sum(const ModelParams& p, int k, const QuadratureConfig& q = {});

// Intensity of j-dimensional faces of the Delaunay tessellation, 0 <= j <= d-1.
double face_intensity(const ModelParams& p, int j, const QuadratureConfig& q = {});

// E f_{d-k}(Y) for the typical Voronoi (Laguerre) cell, 1 <= k <= d.
double voronoi_f_vector(const ModelParams& p, int k, const QuadratureConfig& q = {});

}  // namespace betadt
