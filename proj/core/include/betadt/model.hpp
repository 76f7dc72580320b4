#pragma once

#include <string>

namespace betadt {

enum class Family { Beta, BetaPrime, ClassicalDelaunay };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

// Parameters of the space-time Poisson model and the cell weighting.
// The tessellation lives in R^{d-1}.
struct ModelParams {
  Family family = Family::Beta;
  int d = 3;
  double beta = 0.0;
  double nu = 0.0;
  double gamma = 1.0;

  int kappa() const { return family == Family::BetaPrime ? -1 : 1; }
  int spatial_dim() const { return d - 1; }

  // Throws ParameterError naming the violated constraint.
  void validate() const;

  static ModelParams beta_model(int d, double beta, double nu = 0.0, double gamma = 1.0);
  static ModelParams beta_prime_model(int d, double beta, double nu = 0.0, double gamma = 1.0);
  static ModelParams classical(int d, double nu = 0.0, double gamma = 1.0);

  ModelParams with_nu(double new_nu) const;
};

bool operator==(const ModelParams& a, const ModelParams& b);

std::string describe(const ModelParams& p);

}  // namespace betadt
