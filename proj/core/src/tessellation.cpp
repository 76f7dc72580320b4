#include "betadt/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include <boost/math/special_functions/gamma.hpp>
#include <Eigen/Dense>

#include "betadt/constants.hpp"
#include "betadt/errors.hpp"
#include "betadt/lower_hull.hpp"
#include "betadt/predicates.hpp"
#include "betadt/random.hpp"
#include "betadt/samplers.hpp"
#include "betadt/special.hpp"

namespace betadt {

const char* to_string(SimplexFlag f) {
  return f == SimplexFlag::Interior ? "interior" : "boundary";
}

namespace {

// Refuse windows whose expected site count would exhaust memory.
constexpr double kMaxExpectedSites = 2e7;

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

void check_planar(const ModelParams& p) {
  p.validate();
  if (p.d != 3) throw ParameterError("tessellation construction requires d = 3 (planar)");
}

bool disc_inside(const Point& w, double radius, const Box& box) {
  return w(0) - radius >= box.lo(0) && w(0) + radius <= box.hi(0) && w(1) - radius >= box.lo(1) &&
         w(1) + radius <= box.hi(1);
}

// Uniform bucket grid over planar sites for disc queries.
class SiteGrid {
 public:
  explicit SiteGrid(const std::vector<Site>& sites) : sites_(sites) {
    const int n = static_cast<int>(sites.size());
    if (n == 0) return;
    lo_x_ = hi_x_ = sites[0].v(0);
    lo_y_ = hi_y_ = sites[0].v(1);
    for (const Site& s : sites) {
      lo_x_ = std::min(lo_x_, s.v(0));
      hi_x_ = std::max(hi_x_, s.v(0));
      lo_y_ = std::min(lo_y_, s.v(1));
      hi_y_ = std::max(hi_y_, s.v(1));
    }
    const double area = std::max((hi_x_ - lo_x_) * (hi_y_ - lo_y_), 1e-300);
    cell_ = std::max(std::sqrt(2.0 * area / n), 1e-12);
    nx_ = std::max(1, static_cast<int>((hi_x_ - lo_x_) / cell_) + 1);
    ny_ = std::max(1, static_cast<int>((hi_y_ - lo_y_) / cell_) + 1);
    buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
    for (int i = 0; i < n; ++i) buckets_[index(cx(sites[i].v(0)), cy(sites[i].v(1)))].push_back(i);
  }

  template <class Fn>
  void for_each_in_disc(const Point& c, double radius, Fn&& fn) const {
    if (buckets_.empty()) return;
    const int x0 = cx(c(0) - radius), x1 = cx(c(0) + radius);
    const int y0 = cy(c(1) - radius), y1 = cy(c(1) + radius);
    const double r2 = radius * radius;
    for (int x = x0; x <= x1; ++x) {
      for (int y = y0; y <= y1; ++y) {
        for (int i : buckets_[index(x, y)]) {
          if ((sites_[i].v - c).squaredNorm() <= r2) fn(i);
        }
      }
    }
  }

 private:
  int cx(double x) const { return std::clamp(static_cast<int>((x - lo_x_) / cell_), 0, nx_ - 1); }
  int cy(double y) const { return std::clamp(static_cast<int>((y - lo_y_) / cell_), 0, ny_ - 1); }
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(x) * ny_ + y; }

  const std::vector<Site>& sites_;
  double lo_x_ = 0, hi_x_ = 0, lo_y_ = 0, hi_y_ = 0, cell_ = 1;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

ParaboloidApex robust_apex(const std::vector<Site>& sites, const std::array<int, 3>& v, bool& near_degenerate) {
  std::vector<const Site*> ptrs{&sites[v[0]], &sites[v[1]], &sites[v[2]]};
  try {
    near_degenerate = false;
    return circumparaboloid(ptrs);
  } catch (const DegeneracyError&) {
    near_degenerate = true;
    Eigen::Matrix2d a;
    Eigen::Vector2d b;
    for (int i = 1; i < 3; ++i) {
      const Point diff = ptrs[i]->v - ptrs[0]->v;
      a.row(i - 1) = 2.0 * diff.transpose();
      b(i - 1) = diff.squaredNorm() + ptrs[i]->h - ptrs[0]->h;
    }
    const Eigen::Vector2d u = a.fullPivLu().solve(b);
    ParaboloidApex apex;
    apex.w = ptrs[0]->v + u;
    apex.t = ptrs[0]->h + u.squaredNorm();
    apex.r = std::sqrt(std::abs(apex.t));
    apex.pivot_ratio = std::numeric_limits<double>::infinity();
    return apex;
  }
}

}  // namespace

double suggest_beta_prime_eps(const ModelParams& p, double tol) {
  p.validate();
  if (p.family != Family::BetaPrime) throw ParameterError("eps applies to the beta-prime model only");
  const ModelParams p0 = p.with_nu(0.0);
  const double q = radial_exponent(p0);
  const double z = boost::math::gamma_q_inv(radial_gamma_shape(p0), tol);
  const double r = std::pow(z / void_rate(p0), 1.0 / q);
  return r * r;
}

double deep_truncation_bound(const ModelParams& p, double depth) {
  const double d = p.d;
  const double e = p.beta - 0.5 * (d + 1.0);
  return p.gamma * intensity_constant(p) * ball_volume(p.d - 1) * std::pow(depth, -e) / e;
}

WindowConfig resolve_window(const ModelParams& p, const WindowConfig& w) {
  check_planar(p);
  WindowConfig out = w;
  if (out.target_box.dim() != 2 || !((out.target_box.hi.array() > out.target_box.lo.array()).all())) {
    throw ParameterError("target_box must be a nonempty planar box");
  }
  if (!(out.void_tolerance > 0.0 && out.void_tolerance < 1.0)) {
    throw ParameterError("void_tolerance must lie in (0, 1)");
  }
  const ModelParams p0 = p.with_nu(0.0);
  const double m = void_rate(p0);
  const double q = radial_exponent(p0);
  if (out.r_max <= 0.0) {
    if (p.family == Family::BetaPrime) {
      const double z = boost::math::gamma_p_inv(radial_gamma_shape(p0), out.void_tolerance);
      out.r_max = std::pow(z / m, 1.0 / q);
    } else {
      out.r_max = std::pow(-std::log(out.void_tolerance) / m, 1.0 / q);
    }
  }
  switch (p.family) {
    case Family::Beta:
      if (out.h_max <= 0.0) out.h_max = out.r_max * out.r_max;
      if (out.guard_margin <= 0.0) out.guard_margin = 2.0 * out.r_max;
      break;
    case Family::ClassicalDelaunay:
      if (out.guard_margin <= 0.0) out.guard_margin = 2.0 * out.r_max;
      break;
    case Family::BetaPrime: {
      if (!(out.eps > 0.0)) {
        throw ParameterError(
            "beta-prime requires a height truncation eps > 0 (sites accumulate at h = 0)");
      }
      if (out.h_depth <= 0.0) {
        const double e = p.beta - 0.5 * (p.d + 1.0);
        const double coeff = deep_truncation_bound(p, 1.0);
        out.h_depth = std::max(std::pow(coeff / out.deep_tolerance, 1.0 / e), 10.0 * out.eps);
        out.h_depth = std::max(out.h_depth, out.r_max * out.r_max * 4.0);
      }
      if (!(out.h_depth > out.eps)) throw ParameterError("beta-prime requires h_depth > eps");
      if (out.guard_margin <= 0.0) out.guard_margin = out.r_max + std::sqrt(out.h_depth);
      break;
    }
  }
  if (!(out.guard_margin > 0.0)) throw ParameterError("guard_margin must be > 0");
  return out;
}

std::vector<Site> simulate_window_sites(const ModelParams& p, const WindowConfig& w, std::uint64_t seed) {
  const Box inflated = w.target_box.inflated(w.guard_margin);
  if (p.family != Family::BetaPrime) {
    RandomStream s(seed, streams::kPoisson);
    return sample_poisson_process(p, inflated, HeightRange{0.0, std::max(w.h_max, 1e-300)}, s);
  }
  // Decade bands of |h| on their own substreams, each generated from its deep
  // end: the sites with |h| >= eps do not depend on eps, and sorting by h puts
  // them first in the same order.
  std::vector<Site> sites;
  const int j0 = static_cast<int>(std::floor(std::log10(w.eps)));
  const int j1 = static_cast<int>(std::ceil(std::log10(w.h_depth)));
  for (int j = j0; j < j1; ++j) {
    const double lo = std::pow(10.0, j), hi = std::pow(10.0, j + 1);
    RandomStream s(seed, streams::kPoisson + static_cast<std::uint64_t>(j + 4096));
    auto band = sample_beta_prime_sites_by_depth(p, inflated, hi, std::max(lo, w.eps), s);
    for (Site& site : band) {
      if (-site.h <= w.h_depth) sites.push_back(std::move(site));
    }
  }
  std::stable_sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) { return a.h < b.h; });
  return sites;
}

TriangulationResult triangulate_sites(std::vector<Site> sites, const std::optional<ModelParams>& p,
                                      const std::optional<WindowConfig>& resolved) {
  TriangulationResult out;
  if (p) out.params = *p;
  const PredicateCounters before = predicate_counters();
  const LowerHull hull = lifted_lower_hull(sites, 0x9E3779B97F4A7C15ULL);
  out.sites = std::move(sites);
  const auto& S = out.sites;
  out.empty_sites = hull.non_vertices;

  // Triangles, apexes and adjacency.
  std::unordered_map<std::uint64_t, std::array<int, 2>> edge_tris;
  edge_tris.reserve(hull.triangles.size() * 2);
  out.simplices.reserve(hull.triangles.size());
  for (const auto& tri : hull.triangles) {
    DelaunayTriangle t;
    t.v = tri;
    bool near = false;
    t.apex = robust_apex(S, tri, near);
    if (near) {
      ++out.stats.near_degenerate_apexes;
      t.flag = SimplexFlag::BoundaryUncertain;
    }
    const int id = static_cast<int>(out.simplices.size());
    for (int i = 0; i < 3; ++i) {
      auto [it, fresh] = edge_tris.try_emplace(edge_key(tri[i], tri[(i + 1) % 3]), std::array<int, 2>{id, -1});
      if (!fresh) it->second[1] = id;
    }
    out.simplices.push_back(std::move(t));
  }
  for (int id = 0; id < static_cast<int>(out.simplices.size()); ++id) {
    auto& t = out.simplices[id];
    for (int i = 0; i < 3; ++i) {
      const auto& pair = edge_tris.at(edge_key(t.v[i], t.v[(i + 1) % 3]));
      t.nb[i] = pair[0] == id ? pair[1] : pair[0];
    }
  }

  // Flags.
  if (p && resolved) {
    out.window = *resolved;
    out.inflated_box = resolved->target_box.inflated(resolved->guard_margin);
    const double max_depth = p->family == Family::BetaPrime ? resolved->h_depth : resolved->h_max;
    for (auto& t : out.simplices) {
      bool interior = t.flag == SimplexFlag::Interior && t.nb[0] >= 0 && t.nb[1] >= 0 && t.nb[2] >= 0;
      const double r = t.apex.r;
      interior = interior && r <= resolved->r_max;
      if (p->family == Family::BetaPrime) {
        const double r2 = r * r;
        interior = interior && t.apex.t < 0.0 && r2 >= resolved->eps && r2 < max_depth &&
                   disc_inside(t.apex.w, std::sqrt(max_depth - r2), out.inflated_box);
      } else {
        interior = interior && disc_inside(t.apex.w, r, out.inflated_box);
        if (p->family == Family::Beta) interior = interior && r * r <= max_depth;
      }
      t.flag = interior ? SimplexFlag::Interior : SimplexFlag::BoundaryUncertain;
    }
    if (p->family == Family::BetaPrime) {
      out.stats.deep_truncation_miss_bound = deep_truncation_bound(*p, resolved->h_depth);
    }
  } else {
    for (auto& t : out.simplices) {
      if (t.nb[0] < 0 || t.nb[1] < 0 || t.nb[2] < 0) t.flag = SimplexFlag::BoundaryUncertain;
    }
  }

  // Dual cells: incident triangles sorted by the angle of their centroids.
  std::vector<std::vector<int>> incident(S.size());
  for (int id = 0; id < static_cast<int>(out.simplices.size()); ++id) {
    for (int v : out.simplices[id].v) incident[v].push_back(id);
  }
  std::vector<int> boundary_edges(S.size(), 0);
  for (const auto& [key, pair] : edge_tris) {
    if (pair[1] < 0) {
      ++boundary_edges[static_cast<int>(key >> 32)];
      ++boundary_edges[static_cast<int>(key & 0xFFFFFFFFULL)];
    }
  }
  for (int site = 0; site < static_cast<int>(S.size()); ++site) {
    if (incident[site].empty()) continue;
    DualCell cell;
    cell.site = site;
    cell.triangles = incident[site];
    const Point& c = S[site].v;
    std::vector<std::pair<double, int>> keyed;
    for (int id : cell.triangles) {
      const auto& v = out.simplices[id].v;
      const Point centroid = (S[v[0]].v + S[v[1]].v + S[v[2]].v) / 3.0;
      keyed.emplace_back(std::atan2(centroid(1) - c(1), centroid(0) - c(0)), id);
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 0; i < keyed.size(); ++i) cell.triangles[i] = keyed[i].second;
    cell.closed = boundary_edges[site] == 0;
    out.dual_cells.push_back(std::move(cell));
  }

  const PredicateCounters after = predicate_counters();
  out.stats.exact_predicates = after.exact - before.exact;
  out.stats.filtered_predicates = after.filtered - before.filtered;
  out.stats.n_sites = static_cast<std::int64_t>(S.size());
  out.stats.n_simplices = static_cast<std::int64_t>(out.simplices.size());
  for (const auto& t : out.simplices) out.stats.n_interior += t.flag == SimplexFlag::Interior ? 1 : 0;
  out.stats.boundary_fraction =
      out.stats.n_simplices == 0 ? 0.0
                                 : 1.0 - static_cast<double>(out.stats.n_interior) /
                                             static_cast<double>(out.stats.n_simplices);
  return out;
}

TriangulationResult build_tessellation(const ModelParams& p, const WindowConfig& w, std::uint64_t seed) {
  const WindowConfig resolved = resolve_window(p, w);
  const Box inflated = resolved.target_box.inflated(resolved.guard_margin);
  const HeightRange range = p.family == Family::BetaPrime ? HeightRange{-resolved.h_depth, -resolved.eps}
                                                          : HeightRange{0.0, std::max(resolved.h_max, 1e-300)};
  const double expected = poisson_mean_count(p, inflated, range);
  if (expected > kMaxExpectedSites) {
    throw ParameterError("window would hold about " + std::to_string(static_cast<long long>(expected)) +
                         " sites; use a larger eps or a smaller box");
  }
  std::vector<Site> sites = simulate_window_sites(p, resolved, seed);
  if (sites.size() < 3) throw DegeneracyError("build_tessellation: fewer than 3 sites in the window");
  TriangulationResult out = triangulate_sites(std::move(sites), p, resolved);
  out.params = p;
  return out;
}

bool brute_force_delaunay(const std::vector<Site>& sites, const std::vector<int>& tuple) {
  if (sites.empty()) throw DomainError("brute_force_delaunay: no sites");
  const int dim = static_cast<int>(sites[tuple.at(0)].v.size());
  if (static_cast<int>(tuple.size()) != dim + 1) {
    throw DomainError("brute_force_delaunay: tuple must have d = dim + 1 sites");
  }
  const auto in_tuple = [&](int i) { return std::find(tuple.begin(), tuple.end(), i) != tuple.end(); };
  if (dim == 2) {
    const Site& a = sites[tuple[0]];
    const Site& b = sites[tuple[1]];
    const Site& c = sites[tuple[2]];
    if (orient2d(a, b, c) == 0) throw DegeneracyError("brute_force_delaunay: collinear tuple");
    for (int i = 0; i < static_cast<int>(sites.size()); ++i) {
      if (!in_tuple(i) && in_paraboloid(a, b, c, sites[i]) > 0) return false;
    }
    return true;
  }
  std::vector<const Site*> ptrs;
  for (int i : tuple) ptrs.push_back(&sites[i]);
  const ParaboloidApex apex = circumparaboloid(ptrs);
  for (int i = 0; i < static_cast<int>(sites.size()); ++i) {
    if (!in_tuple(i) && strictly_inside_paraboloid(sites[i], apex)) return false;
  }
  return true;
}

std::vector<std::vector<int>> enumerate_delaunay_bruteforce(const std::vector<Site>& sites) {
  const int n = static_cast<int>(sites.size());
  if (n == 0) return {};
  const int dim = static_cast<int>(sites[0].v.size());
  if (n > 500) throw DomainError("enumerate_delaunay_bruteforce supports at most 500 sites");
  std::vector<std::vector<int>> out;
  std::vector<int> tuple(dim + 1);
  // Lexicographic enumeration of (dim+1)-subsets.
  std::vector<int> idx(dim + 1);
  for (int i = 0; i <= dim; ++i) idx[i] = i;
  if (n < dim + 1) return out;
  for (;;) {
    try {
      if (brute_force_delaunay(sites, idx)) out.push_back(idx);
    } catch (const DegeneracyError&) {
      // affinely dependent tuples are never simplices
    }
    int k = dim;
    while (k >= 0 && idx[k] == n - (dim + 1) + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j <= dim; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<std::vector<int>> triangle_index_sets(const TriangulationResult& t, bool interior_only) {
  std::vector<std::vector<int>> out;
  for (const auto& tri : t.simplices) {
    if (interior_only && tri.flag != SimplexFlag::Interior) continue;
    std::vector<int> v(tri.v.begin(), tri.v.end());
    std::sort(v.begin(), v.end());
    out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

NormalityAudit audit_normality(const TriangulationResult& t) {
  NormalityAudit audit;
  const auto& S = t.sites;
  if (t.simplices.empty()) return audit;
  double min_h = S[0].h;
  for (const Site& s : S) min_h = std::min(min_h, s.h);
  SiteGrid grid(S);
  std::vector<char> degenerate(S.size(), 0);

  std::unordered_map<std::uint64_t, int> directed;
  for (const auto& tri : t.simplices) {
    for (int i = 0; i < 3; ++i) {
      const int a = tri.v[i], b = tri.v[(i + 1) % 3];
      ++directed[(static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b)];
    }
  }

  for (int id = 0; id < static_cast<int>(t.simplices.size()); ++id) {
    const auto& tri = t.simplices[id];
    const Site& a = S[tri.v[0]];
    const Site& b = S[tri.v[1]];
    const Site& c = S[tri.v[2]];
    const double reach2 = tri.apex.t - min_h;
    int on_boundary = 3;
    int inside = 0;
    if (reach2 > 0.0) {
      // Pad the query radius so rounding in the apex cannot drop a candidate.
      const double reach = std::sqrt(reach2) * (1.0 + 1e-9) + 1e-12;
      grid.for_each_in_disc(tri.apex.w, reach, [&](int q) {
        if (q == tri.v[0] || q == tri.v[1] || q == tri.v[2]) return;
        const int s = in_paraboloid(a, b, c, S[q]);
        if (s == 0) {
          ++on_boundary;
          degenerate[q] = 1;
        } else if (s > 0) {
          ++inside;
        }
      });
    }
    if (tri.flag != SimplexFlag::Interior) continue;
    ++audit.interior_vertices;
    if (on_boundary == 3) ++audit.vertices_with_three_cells;
    if (inside > 0) ++audit.empty_paraboloid_violations;
    for (int i = 0; i < 3; ++i) {
      const int x = tri.v[i], y = tri.v[(i + 1) % 3];
      if (tri.nb[i] < 0) {
        ++audit.missing_neighbors;
        continue;
      }
      const auto& other = t.simplices[tri.nb[i]];
      bool matched = false;
      for (int j = 0; j < 3; ++j) {
        if (other.v[j] == y && other.v[(j + 1) % 3] == x) matched = true;
      }
      const int forward = directed[(static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint32_t>(y)];
      if (!matched || forward != 1) ++audit.face_to_face_violations;
    }
  }
  for (int i = 0; i < static_cast<int>(S.size()); ++i) {
    if (degenerate[i]) audit.degenerate_sites.push_back(i);
  }
  return audit;
}

FaceCounts empirical_face_intensities(const TriangulationResult& t, const Box& box) {
  FaceCounts counts;
  counts.area = box.volume();
  const auto& S = t.sites;
  std::unordered_map<std::uint64_t, bool> edges;  // edge -> touches a flagged triangle
  std::vector<int> vertex_state(S.size(), 0);     // 1 interior only, 2 touches flagged
  for (const auto& tri : t.simplices) {
    const bool interior = tri.flag == SimplexFlag::Interior;
    const Point centroid = (S[tri.v[0]].v + S[tri.v[1]].v + S[tri.v[2]].v) / 3.0;
    if (box.contains(centroid)) {
      ++counts.triangles;
      if (!interior) ++counts.boundary_faces;
    }
    for (int i = 0; i < 3; ++i) {
      auto [it, fresh] = edges.try_emplace(edge_key(tri.v[i], tri.v[(i + 1) % 3]), !interior);
      if (!fresh && !interior) it->second = true;
      int& st = vertex_state[tri.v[i]];
      st = std::max(st, interior ? 1 : 2);
    }
  }
  for (const auto& [key, flagged] : edges) {
    const int a = static_cast<int>(key >> 32), b = static_cast<int>(key & 0xFFFFFFFFULL);
    if (box.contains((S[a].v + S[b].v) / 2.0)) {
      ++counts.edges;
      if (flagged) ++counts.boundary_faces;
    }
  }
  for (int i = 0; i < static_cast<int>(S.size()); ++i) {
    if (vertex_state[i] == 0 || !box.contains(S[i].v)) continue;
    ++counts.vertices;
    if (vertex_state[i] == 2) ++counts.boundary_faces;
  }
  return counts;
}

std::vector<int> empirical_cell_vertex_counts(const TriangulationResult& t, const Box& box) {
  std::vector<int> out;
  for (const auto& cell : t.dual_cells) {
    if (!cell.closed || !box.contains(t.sites[cell.site].v)) continue;
    bool interior = true;
    for (int id : cell.triangles) interior = interior && t.simplices[id].flag == SimplexFlag::Interior;
    if (interior) out.push_back(static_cast<int>(cell.triangles.size()));
  }
  return out;
}

Box default_counting_box(const TriangulationResult& t) { return t.window.target_box; }

}  // namespace betadt
