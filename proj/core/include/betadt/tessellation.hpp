#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "betadt/geometry.hpp"
#include "betadt/model.hpp"
#include "betadt/types.hpp"

namespace betadt {

enum class SimplexFlag { Interior, BoundaryUncertain };

const char* to_string(SimplexFlag f);

struct DelaunayTriangle {
  std::array<int, 3> v{};  // counter-clockwise site indices
  ParaboloidApex apex;
  SimplexFlag flag = SimplexFlag::Interior;
  // Neighbor across edge (v[i], v[i+1]); -1 on the hull boundary.
  std::array<int, 3> nb{-1, -1, -1};
};

// Laguerre cell of a site: the apexes of its incident triangles in
// counter-clockwise order. `closed` is false for sites on the hull boundary.
struct DualCell {
  int site = -1;
  std::vector<int> triangles;
  bool closed = false;
};

// Finite-window truncation of the stationary model. Zero-valued fields are
// filled in by resolve_window; eps has no default and must be given for the
// beta-prime model.
struct WindowConfig {
  Box target_box = Box::square(0.0, 10.0);
  double guard_margin = 0.0;
  double h_max = 0.0;   // Beta: heights in [0, h_max]
  double eps = 0.0;     // BetaPrime: heights in [-h_depth, -eps]
  double h_depth = 0.0; // BetaPrime
  double r_max = 0.0;
  double void_tolerance = 1e-12;
  double deep_tolerance = 1e-3;
};

// Defaults: Beta and classical take r_max from exp(-m r_max^q) = void_tolerance,
// guard 2 r_max and h_max = r_max^2. BetaPrime takes r_max from the radial tail
// P(R > r_max) = void_tolerance, the depth from the bound on the expected
// number of sites below -h_depth inside a Delaunay paraboloid, and guard
// r_max + sqrt(h_depth).
WindowConfig resolve_window(const ModelParams& p, const WindowConfig& w);

// Smallest r with P(R < r) >= tol for the typical cell radius; eps = r^2
// loses only simplices less likely than tol.
double suggest_beta_prime_eps(const ModelParams& p, double tol = 1e-12);

// Upper bound on the expected number of sites with h < -depth inside one
// beta-prime Delaunay paraboloid.
double deep_truncation_bound(const ModelParams& p, double depth);

struct TessellationStats {
  std::int64_t n_sites = 0;
  std::int64_t n_simplices = 0;
  std::int64_t n_interior = 0;
  double boundary_fraction = 0.0;
  std::int64_t near_degenerate_apexes = 0;
  std::uint64_t exact_predicates = 0;
  std::uint64_t filtered_predicates = 0;
  double deep_truncation_miss_bound = 0.0;
};

struct TriangulationResult {
  ModelParams params;
  WindowConfig window;
  Box inflated_box;
  std::vector<Site> sites;
  std::vector<DelaunayTriangle> simplices;
  std::vector<DualCell> dual_cells;
  std::vector<int> empty_sites;
  TessellationStats stats;
};

// Simulates the model in the inflated window and triangulates it.
TriangulationResult build_tessellation(const ModelParams& p, const WindowConfig& w, std::uint64_t seed);

// Sites of the model as used by build_tessellation (resolved window required).
std::vector<Site> simulate_window_sites(const ModelParams& p, const WindowConfig& resolved,
                                        std::uint64_t seed);

// Triangulates explicit sites. With a window, flags follow the window rules
// for p's family; without one, triangles on the hull boundary are flagged.
TriangulationResult triangulate_sites(std::vector<Site> sites,
                                      const std::optional<ModelParams>& p = std::nullopt,
                                      const std::optional<WindowConfig>& resolved = std::nullopt);

// True iff the circumparaboloid of the tuple strictly contains no other site.
// Planar sites use exact predicates.
bool brute_force_delaunay(const std::vector<Site>& sites, const std::vector<int>& tuple);

// All empty-paraboloid d-tuples (sorted index lists, sorted) by exhaustive search.
std::vector<std::vector<int>> enumerate_delaunay_bruteforce(const std::vector<Site>& sites);

// Sorted index triples of the triangles.
std::vector<std::vector<int>> triangle_index_sets(const TriangulationResult& t,
                                                  bool interior_only = false);

struct NormalityAudit {
  std::int64_t interior_vertices = 0;
  std::int64_t vertices_with_three_cells = 0;
  std::int64_t missing_neighbors = 0;
  std::int64_t face_to_face_violations = 0;
  std::int64_t empty_paraboloid_violations = 0;
  std::vector<int> degenerate_sites;

  double normal_fraction() const {
    return interior_vertices == 0 ? 1.0
                                  : static_cast<double>(vertices_with_three_cells) /
                                        static_cast<double>(interior_vertices);
  }
  bool ok() const {
    return vertices_with_three_cells == interior_vertices && missing_neighbors == 0 &&
           face_to_face_violations == 0 && empty_paraboloid_violations == 0 &&
           degenerate_sites.empty();
  }
};

// Checks every Interior triangle: its apex must lie on exactly three site
// paraboloids (exact test), no site may lie strictly inside, it must have three
// neighbors, and shared edges must be matched face to face.
NormalityAudit audit_normality(const TriangulationResult& t);

struct FaceCounts {
  std::int64_t vertices = 0;
  std::int64_t edges = 0;
  std::int64_t triangles = 0;
  std::int64_t boundary_faces = 0;  // counted faces touching a flagged triangle
  double area = 0.0;
};

// Faces of the Delaunay tessellation whose centroid lies in counting_box.
FaceCounts empirical_face_intensities(const TriangulationResult& t, const Box& counting_box);

// Vertex counts of closed Laguerre cells whose site lies in counting_box and
// whose triangles are all Interior.
std::vector<int> empirical_cell_vertex_counts(const TriangulationResult& t, const Box& counting_box);

// Target box shrunk so that counted faces belong to Interior triangles.
Box default_counting_box(const TriangulationResult& t);

}  // namespace betadt
