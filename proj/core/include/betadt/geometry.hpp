#pragma once

#include <cstdint>
#include <vector>

#include "betadt/random.hpp"
#include "betadt/types.hpp"

namespace betadt {

// |det[v_2 - v_1, ..., v_d - v_1]| / (d-1)! for d points (columns) in R^{d-1}.
double simplex_volume(const Eigen::MatrixXd& vertices);
double simplex_volume(const Simplex& sx);

// pow(w, (v, h)) = |w - v|^2 + h.
double power_of_point(const Point& w, const Site& site);

// Apex (w, t) of the downward paraboloid {(x, s) : s <= t - |x - w|^2}
// through d sites; t = kappa r^2.
struct ParaboloidApex {
  Point w;
  double t = 0.0;
  double r = 0.0;
  // Ratio of the largest to the smallest pivot magnitude of the solve.
  double pivot_ratio = 1.0;
};

// Throws DegeneracyError when the spatial coordinates are affinely dependent
// (a pivot below 1e-12 times its row norm).
ParaboloidApex circumparaboloid(const std::vector<Site>& sites);
ParaboloidApex circumparaboloid(const std::vector<const Site*>& sites);

// h < t - |v - w|^2; sites on the boundary are not inside.
bool strictly_inside_paraboloid(const Site& site, const ParaboloidApex& apex);

struct AngleEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = true;
};

// Internal angle of the simplex at the face spanned by the listed vertices,
// normalized so that the full space has angle 1. Exact when the normal cone
// has dimension at most 2; otherwise a Monte Carlo fraction over n_dirs
// Gaussian directions.
AngleEstimate internal_angle(const Simplex& sx, const std::vector<int>& face,
                             std::int64_t n_dirs, RandomStream& s);

// Sum of internal angles over all faces with k vertices.
AngleEstimate angle_sum(const Simplex& sx, int k, std::int64_t n_dirs, RandomStream& s);

}  // namespace betadt
