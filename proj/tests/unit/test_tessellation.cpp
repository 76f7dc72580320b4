#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "betadt/analytics.hpp"
#include "betadt/errors.hpp"
#include "betadt/samplers.hpp"
#include "betadt/tessellation.hpp"

using namespace betadt;

namespace {

std::vector<Site> random_sites(int n, double h_scale, RandomStream& s) {
  std::vector<Site> out(n);
  for (auto& x : out) {
    x.v = Point(2);
    x.v << 5 * s.uniform(), 5 * s.uniform();
    x.h = h_scale * s.uniform();
  }
  return out;
}

}  // namespace

TEST(Triangulation, MatchesBruteForce) {
  RandomStream s(1, 1);
  for (int rep = 0; rep < 12; ++rep) {
    const int n = 10 + 10 * rep;
    const auto sites = random_sites(n, rep % 3 == 0 ? 0.0 : (rep % 3 == 1 ? 2.0 : -3.0), s);
    const auto t = triangulate_sites(sites);
    EXPECT_EQ(triangle_index_sets(t), enumerate_delaunay_bruteforce(sites)) << "n=" << n;
  }
}

TEST(Triangulation, AdjacencyAndDualCells) {
  RandomStream s(2, 2);
  const auto t = triangulate_sites(random_sites(200, 1.0, s));
  for (int id = 0; id < static_cast<int>(t.simplices.size()); ++id) {
    const auto& tri = t.simplices[id];
    for (int i = 0; i < 3; ++i) {
      if (tri.nb[i] < 0) continue;
      const auto& other = t.simplices[tri.nb[i]];
      EXPECT_NE(std::find(other.nb.begin(), other.nb.end(), id), other.nb.end());
    }
  }
  int closed = 0;
  for (const auto& c : t.dual_cells) {
    if (!c.closed) continue;
    ++closed;
    EXPECT_GE(c.triangles.size(), 3u);
  }
  EXPECT_GT(closed, 0);
  EXPECT_EQ(t.dual_cells.size() + t.empty_sites.size(), t.sites.size());
}

TEST(Window, ResolvedDefaults) {
  const ModelParams p = ModelParams::beta_model(3, 1.0);
  const auto w = resolve_window(p, WindowConfig{});
  EXPECT_GT(w.r_max, 0.0);
  EXPECT_DOUBLE_EQ(w.h_max, w.r_max * w.r_max);
  EXPECT_DOUBLE_EQ(w.guard_margin, 2.0 * w.r_max);
  WindowConfig bp;
  EXPECT_THROW(resolve_window(ModelParams::beta_prime_model(3, 4.0), bp), ParameterError);
  bp.eps = 0.3;
  const auto r = resolve_window(ModelParams::beta_prime_model(3, 4.0), bp);
  EXPECT_GT(r.h_depth, r.eps);
  EXPECT_LE(deep_truncation_bound(ModelParams::beta_prime_model(3, 4.0), r.h_depth), bp.deep_tolerance * (1 + 1e-12));
  EXPECT_THROW(resolve_window(ModelParams::beta_model(4, 1.0), WindowConfig{}), ParameterError);
}

TEST(Window, BuildIsDeterministicAndNormal) {
  WindowConfig w;
  w.target_box = Box::square(0.0, 8.0);
  for (const auto& p : {ModelParams::beta_model(3, 0.0), ModelParams::beta_model(3, 2.5), ModelParams::classical(3)}) {
    const auto a = build_tessellation(p, w, 11);
    const auto b = build_tessellation(p, w, 11);
    ASSERT_EQ(a.sites.size(), b.sites.size());
    for (std::size_t i = 0; i < a.sites.size(); ++i) {
      ASSERT_EQ(a.sites[i].h, b.sites[i].h);
      ASSERT_TRUE(a.sites[i].v == b.sites[i].v);
    }
    EXPECT_EQ(triangle_index_sets(a), triangle_index_sets(b));
    EXPECT_GT(a.stats.n_interior, 0);
    const auto audit = audit_normality(a);
    EXPECT_TRUE(audit.ok());
    EXPECT_EQ(audit.normal_fraction(), 1.0);
  }
}

TEST(Window, InteriorTrianglesAreEmptyAmongAllSites) {
  WindowConfig w;
  w.target_box = Box::square(0.0, 6.0);
  const auto t = build_tessellation(ModelParams::beta_model(3, 1.0), w, 3);
  for (const auto& tri : t.simplices) {
    if (tri.flag != SimplexFlag::Interior) continue;
    EXPECT_TRUE(brute_force_delaunay(t.sites, {tri.v[0], tri.v[1], tri.v[2]}));
  }
}

TEST(Window, FaceCountsSatisfyEuler) {
  WindowConfig w;
  w.target_box = Box::square(0.0, 15.0);
  const auto t = build_tessellation(ModelParams::beta_model(3, 1.0), w, 5);
  const auto f = empirical_face_intensities(t, default_counting_box(t));
  EXPECT_NEAR(static_cast<double>(f.vertices - f.edges + f.triangles) / f.area, 0.0, 0.05);
  const double g2 = face_intensity(ModelParams::beta_model(3, 1.0), 2);
  EXPECT_NEAR(f.triangles / f.area, g2, 0.25 * g2);
  for (int n : empirical_cell_vertex_counts(t, default_counting_box(t))) EXPECT_GE(n, 3);
}

TEST(Window, BetaPrimeTruncationPrefix) {
  // Site counts grow like eps^{1-beta}; beta = 3 keeps the eps/10 run small.
  const ModelParams p = ModelParams::beta_prime_model(3, 3.0);
  WindowConfig w;
  w.target_box = Box::square(0.0, 3.0);
  w.eps = 0.5;
  w.h_depth = 6.0;
  w.r_max = 3.0;
  WindowConfig w10 = w;
  w10.eps = 0.05;
  const auto a = build_tessellation(p, w, 9);
  const auto b = build_tessellation(p, w10, 9);
  auto interior_keys = [&](const TriangulationResult& t) {
    std::set<std::vector<double>> out;
    for (const auto& tri : t.simplices) {
      if (tri.flag != SimplexFlag::Interior || tri.apex.r * tri.apex.r < w.eps) continue;
      std::vector<std::vector<double>> v;
      for (int i : tri.v) v.push_back({t.sites[i].v(0), t.sites[i].v(1), t.sites[i].h});
      std::sort(v.begin(), v.end());
      out.insert({v[0][0], v[0][1], v[0][2], v[1][0], v[1][1], v[1][2], v[2][0], v[2][1], v[2][2]});
    }
    return out;
  };
  const auto ka = interior_keys(a);
  EXPECT_FALSE(ka.empty());
  EXPECT_EQ(ka, interior_keys(b));
  for (const auto& tri : a.simplices) {
    if (tri.flag == SimplexFlag::Interior) EXPECT_GE(tri.apex.r * tri.apex.r, w.eps);
  }
}

TEST(Window, RefusesHugeWindows) {
  WindowConfig w;
  w.target_box = Box::square(0.0, 10.0);
  w.eps = 1e-3;
  EXPECT_THROW(build_tessellation(ModelParams::beta_prime_model(3, 6.0), w, 1), ParameterError);
}

TEST(Window, RejectsNonPlanar) {
  EXPECT_THROW(build_tessellation(ModelParams::beta_model(4, 0.0), WindowConfig{}, 1), ParameterError);
}
