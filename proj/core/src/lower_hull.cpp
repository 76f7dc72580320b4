#include "betadt/lower_hull.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "betadt/errors.hpp"
#include "betadt/predicates.hpp"
#include "betadt/random.hpp"

namespace betadt {
namespace {

struct Facet {
  std::array<int, 3> v{};
  std::array<int, 3> nb{-1, -1, -1};
  std::vector<int> conflicts;
  bool alive = true;
};

class Hull {
 public:
  explicit Hull(const std::vector<Site>& sites) : sites_(sites) {
    lifted_.reserve(sites.size());
    for (const Site& s : sites) {
      const double x = s.v(0), y = s.v(1);
      lifted_.push_back({x, y, x * x + y * y + s.h, x * x + y * y + std::abs(s.h)});
    }
  }

  // Facet f = (a, b, c) is oriented so that orient3d(a, b, c, q) > 0 exactly
  // when q lies strictly outside its supporting plane.
  bool sees(int f, int q) {
    const auto& v = facets_[f].v;
    const auto& a = lifted_[v[0]];
    const auto& b = lifted_[v[1]];
    const auto& c = lifted_[v[2]];
    const auto& d = lifted_[q];
    const double bx = b[0] - a[0], by = b[1] - a[1], bz = b[2] - a[2];
    const double cx = c[0] - a[0], cy = c[1] - a[1], cz = c[2] - a[2];
    const double dx = d[0] - a[0], dy = d[1] - a[1], dz = d[2] - a[2];
    const double det = bx * (cy * dz - cz * dy) - by * (cx * dz - cz * dx) + bz * (cx * dy - cy * dx);
    // The lifted heights carry rounding error relative to the magnitudes in
    // [3]; bound every term with those magnitudes.
    const double bm = b[3] + a[3], cm = c[3] + a[3], dm = d[3] + a[3];
    const double ax = std::abs(bx), ay = std::abs(by), acx = std::abs(cx), acy = std::abs(cy),
                 adx = std::abs(dx), ady = std::abs(dy);
    const double mag = ax * (acy * dm + cm * ady) + ay * (acx * dm + cm * adx) + bm * (acx * ady + acy * adx);
    if (std::abs(det) > 1e-9 * mag) {
      ++filtered_;
      return det > 0;
    }
    return orient3d_lifted(sites_[v[0]], sites_[v[1]], sites_[v[2]], sites_[q]) > 0;
  }

  // Fast-path decisions, added to the predicate counters once at the end.
  std::uint64_t filtered() const { return filtered_; }

  int add_facet(int a, int b, int c) {
    Facet f;
    f.v = {a, b, c};
    facets_.push_back(std::move(f));
    return static_cast<int>(facets_.size()) - 1;
  }

  void run(const std::vector<int>& order) {
    const int n = static_cast<int>(sites_.size());
    point_conflicts_.assign(n, {});
    processed_.assign(n, 0);
    on_hull_.assign(n, 0);
    int p0 = order[0], p1 = order[1], p2 = order[2], p3 = order[3];
    if (orient3d_lifted(sites_[p0], sites_[p1], sites_[p2], sites_[p3]) > 0) std::swap(p1, p2);
    const std::array<std::array<int, 3>, 4> faces{{{p0, p1, p2}, {p0, p3, p1}, {p1, p3, p2}, {p0, p2, p3}}};
    for (const auto& f : faces) add_facet(f[0], f[1], f[2]);
    link_initial();
    for (int p : {p0, p1, p2, p3}) {
      processed_[p] = 1;
      on_hull_[p] = 1;
    }
    for (std::size_t i = 4; i < order.size(); ++i) {
      const int q = order[i];
      for (int f = 0; f < 4; ++f) {
        if (sees(f, q)) {
          facets_[f].conflicts.push_back(q);
          point_conflicts_[q].push_back(f);
        }
      }
    }
    visible_mark_.assign(facets_.size(), -1);
    for (std::size_t i = 4; i < order.size(); ++i) insert(order[i]);
  }

  std::vector<std::array<int, 3>> lower_facets() const {
    std::vector<std::array<int, 3>> out;
    for (const Facet& f : facets_) {
      if (!f.alive) continue;
      const auto& v = f.v;
      if (orient2d(sites_[v[0]], sites_[v[1]], sites_[v[2]]) < 0) out.push_back({v[0], v[2], v[1]});
    }
    return out;
  }

 private:
  void link_initial() {
    std::unordered_map<std::uint64_t, std::pair<int, int>> edges;
    for (int f = 0; f < static_cast<int>(facets_.size()); ++f) {
      for (int i = 0; i < 3; ++i) {
        const int a = facets_[f].v[i], b = facets_[f].v[(i + 1) % 3];
        edges[key(a, b)] = {f, i};
      }
    }
    for (int f = 0; f < static_cast<int>(facets_.size()); ++f) {
      for (int i = 0; i < 3; ++i) {
        const int a = facets_[f].v[i], b = facets_[f].v[(i + 1) % 3];
        facets_[f].nb[i] = edges.at(key(b, a)).first;
      }
    }
  }

  static std::uint64_t key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  }

  void insert(int r) {
    processed_[r] = 1;
    std::vector<int> visible;
    for (int f : point_conflicts_[r]) {
      if (facets_[f].alive) visible.push_back(f);
    }
    point_conflicts_[r].clear();
    point_conflicts_[r].shrink_to_fit();
    if (visible.empty()) return;
    on_hull_[r] = 1;
    for (int f : visible) visible_mark_[f] = r;

    struct HorizonEdge {
      int u, w, inner, outer;
    };
    std::vector<HorizonEdge> horizon;
    for (int f : visible) {
      for (int i = 0; i < 3; ++i) {
        const int g = facets_[f].nb[i];
        if (visible_mark_[g] != r) horizon.push_back({facets_[f].v[i], facets_[f].v[(i + 1) % 3], f, g});
      }
    }

    std::unordered_map<int, int> start;
    start.reserve(horizon.size() * 2);
    std::vector<int> created;
    created.reserve(horizon.size());
    for (const HorizonEdge& e : horizon) {
      const int nf = add_facet(e.u, e.w, r);
      visible_mark_.push_back(-1);
      Facet& n = facets_[nf];
      n.nb[0] = e.outer;
      auto& gnb = facets_[e.outer].nb;
      for (int j = 0; j < 3; ++j) {
        if (gnb[j] == e.inner) gnb[j] = nf;
      }
      start[e.u] = nf;
      created.push_back(nf);
    }
    for (std::size_t k = 0; k < horizon.size(); ++k) {
      const int nf = created[k];
      const int w = horizon[k].w;
      const int next = start.at(w);
      facets_[nf].nb[1] = next;
      facets_[next].nb[2] = nf;
    }

    // Conflict lists of new facets come from the two facets sharing the
    // horizon edge.
    if (mark_.size() < sites_.size()) mark_.assign(sites_.size(), -1);
    for (std::size_t k = 0; k < horizon.size(); ++k) {
      const int nf = created[k];
      for (int src : {horizon[k].inner, horizon[k].outer}) {
        for (int q : facets_[src].conflicts) {
          if (processed_[q] || mark_[q] == nf) continue;
          mark_[q] = nf;
          if (sees(nf, q)) {
            facets_[nf].conflicts.push_back(q);
            point_conflicts_[q].push_back(nf);
          }
        }
      }
    }
    for (int f : visible) {
      facets_[f].alive = false;
      std::vector<int>().swap(facets_[f].conflicts);
    }
  }

  const std::vector<Site>& sites_;
  std::vector<std::array<double, 4>> lifted_;
  std::uint64_t filtered_ = 0;
  std::vector<Facet> facets_;
  std::vector<std::vector<int>> point_conflicts_;
  std::vector<char> processed_;
  std::vector<char> on_hull_;
  std::vector<int> visible_mark_;
  std::vector<int> mark_;
};

}  // namespace

LowerHull lifted_lower_hull(const std::vector<Site>& sites, std::uint64_t order_seed) {
  const int n = static_cast<int>(sites.size());
  for (const Site& s : sites) {
    if (s.v.size() != 2) throw DomainError("lifted_lower_hull expects planar sites");
  }
  LowerHull out;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  RandomStream rng(order_seed, streams::kHull);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[i], order[j]);
  }

  auto finish = [&](const std::vector<std::array<int, 3>>& tris) {
    out.triangles = tris;
    std::vector<char> used(n, 0);
    for (const auto& t : tris) {
      for (int v : t) used[v] = 1;
    }
    for (int i = 0; i < n; ++i) {
      if (!used[i]) out.non_vertices.push_back(i);
    }
    return out;
  };

  if (n < 3) return finish({});
  // Find an initial non-degenerate tetrahedron, moving its points to the front.
  int i1 = -1, i2 = -1, i3 = -1;
  for (int k = 1; k < n && i1 < 0; ++k) {
    const Site& a = sites[order[0]];
    const Site& b = sites[order[k]];
    if (a.v(0) != b.v(0) || a.v(1) != b.v(1)) i1 = k;
  }
  if (i1 < 0) return finish({});
  std::swap(order[1], order[i1]);
  for (int k = 2; k < n && i2 < 0; ++k) {
    if (orient2d(sites[order[0]], sites[order[1]], sites[order[k]]) != 0) i2 = k;
  }
  if (i2 < 0) return finish({});
  std::swap(order[2], order[i2]);
  for (int k = 3; k < n && i3 < 0; ++k) {
    if (orient3d_lifted(sites[order[0]], sites[order[1]], sites[order[2]], sites[order[k]]) != 0) i3 = k;
  }
  if (i3 < 0) {
    if (n == 3) {
      std::array<int, 3> t{order[0], order[1], order[2]};
      if (orient2d(sites[t[0]], sites[t[1]], sites[t[2]]) < 0) std::swap(t[1], t[2]);
      return finish({t});
    }
    throw DegeneracyError("lifted_lower_hull: all lifted sites are coplanar");
  }
  std::swap(order[3], order[i3]);
  Hull hull(sites);
  hull.run(order);
  predicate_counters().filtered += hull.filtered();
  return finish(hull.lower_facets());
}

}  // namespace betadt
