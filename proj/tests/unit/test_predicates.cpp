#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "betadt/errors.hpp"
#include "betadt/geometry.hpp"
#include "betadt/lower_hull.hpp"
#include "betadt/predicates.hpp"
#include "betadt/samplers.hpp"

using namespace betadt;
using Rational = boost::multiprecision::cpp_rational;

namespace {

Site site(double x, double y, double h) {
  Site s;
  s.v = Point(2);
  s.v << x, y;
  s.h = h;
  return s;
}

int exact_orient3d(const Site& a, const Site& b, const Site& c, const Site& d) {
  auto z = [](const Site& s) {
    return Rational(s.v(0)) * Rational(s.v(0)) + Rational(s.v(1)) * Rational(s.v(1)) + Rational(s.h);
  };
  Rational m[3][3];
  const Site* p[3] = {&b, &c, &d};
  for (int i = 0; i < 3; ++i) {
    m[i][0] = Rational(p[i]->v(0)) - Rational(a.v(0));
    m[i][1] = Rational(p[i]->v(1)) - Rational(a.v(1));
    m[i][2] = z(*p[i]) - z(a);
  }
  const Rational det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return det.sign();
}

std::vector<Site> random_sites(int n, double h_scale, RandomStream& s) {
  std::vector<Site> out;
  for (int i = 0; i < n; ++i) out.push_back(site(10 * s.uniform(), 10 * s.uniform(), h_scale * s.uniform()));
  return out;
}

double cross(const Point& o, const Point& a, const Point& b) {
  return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

double convex_hull_area(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a(0) < b(0) || (a(0) == b(0) && a(1) < b(1));
  });
  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  double area = 0;
  for (std::size_t i = 0; i + 1 < k; ++i) area += h[i](0) * h[i + 1](1) - h[i + 1](0) * h[i](1);
  return 0.5 * std::abs(area);
}

}  // namespace

TEST(Orient2d, ExactOnCollinearInput) {
  EXPECT_EQ(orient2d(site(0, 0, 0), site(1, 1, 0), site(2, 2, 0)), 0);
  EXPECT_EQ(orient2d(site(0, 0, 0), site(1, 0, 0), site(0, 1, 0)), 1);
  EXPECT_EQ(orient2d(site(0, 0, 0), site(0, 1, 0), site(1, 0, 0)), -1);
  // 0.1 is not representable; the rounded points are not collinear in general
  // and only the exact path can tell.
  const int s = orient2d(site(0.1, 0.1, 0), site(0.2, 0.2, 0), site(0.3, 0.3, 0));
  const Rational det = (Rational(0.2) - Rational(0.1)) * (Rational(0.3) - Rational(0.1)) -
                       (Rational(0.2) - Rational(0.1)) * (Rational(0.3) - Rational(0.1));
  EXPECT_EQ(s, det.sign());
  EXPECT_EQ(orient2d(site(0, 0, 0), site(1, 1, 0), site(2, 2 + std::ldexp(1.0, -50), 0)), 1);
}

TEST(Orient3dLifted, CocircularIsZero) {
  const Site a = site(1, 0, 0), b = site(0, 1, 0), c = site(-1, 0, 0), d = site(0, -1, 0);
  EXPECT_EQ(orient3d_lifted(a, b, c, d), 0);
  const auto before = predicate_counters().exact;
  EXPECT_NE(orient3d_lifted(a, b, c, site(0, -1, 1e-300)), 0);
  EXPECT_GT(predicate_counters().exact, before);
}

TEST(Orient3dLifted, AgreesWithRationalOnNearDegenerateInput) {
  RandomStream s(1, 1);
  for (int rep = 0; rep < 2000; ++rep) {
    // Points near a common circle with tiny height perturbations.
    std::vector<Site> p;
    for (int i = 0; i < 4; ++i) {
      const double th = 6.283185307179586 * s.uniform();
      p.push_back(site(3 + 2 * std::cos(th), -1 + 2 * std::sin(th), (s.uniform() - 0.5) * 1e-14));
    }
    ASSERT_EQ(orient3d_lifted(p[0], p[1], p[2], p[3]), exact_orient3d(p[0], p[1], p[2], p[3]));
  }
}

TEST(InParaboloid, ConsistentWithApex) {
  RandomStream s(2, 2);
  for (int rep = 0; rep < 500; ++rep) {
    auto p = random_sites(4, 3.0, s);
    if (orient2d(p[0], p[1], p[2]) == 0) continue;
    const auto apex = circumparaboloid(std::vector<Site>{p[0], p[1], p[2]});
    const bool inside = in_paraboloid(p[0], p[1], p[2], p[3]) > 0;
    EXPECT_EQ(inside, strictly_inside_paraboloid(p[3], apex));
  }
  EXPECT_THROW(in_paraboloid(site(0, 0, 0), site(1, 1, 0), site(2, 2, 0), site(0, 1, 0)), DegeneracyError);
}

TEST(LowerHull, TrianglesAreEmptyAndTileTheHull) {
  RandomStream s(3, 3);
  for (int rep = 0; rep < 20; ++rep) {
    const auto sites = random_sites(150, rep % 2 ? 5.0 : 0.0, s);
    const auto hull = lifted_lower_hull(sites, rep);
    double area = 0.0;
    for (const auto& t : hull.triangles) {
      EXPECT_EQ(orient2d(sites[t[0]], sites[t[1]], sites[t[2]]), 1);
      for (int q = 0; q < static_cast<int>(sites.size()); ++q) {
        ASSERT_LE(in_paraboloid(sites[t[0]], sites[t[1]], sites[t[2]], sites[q]), 0);
      }
      area += cross(sites[t[0]].v, sites[t[1]].v, sites[t[2]].v) / 2;
    }
    std::vector<Point> pts;
    for (const auto& x : sites) pts.push_back(x.v);
    EXPECT_NEAR(area, convex_hull_area(pts), 1e-9);
  }
}

TEST(LowerHull, IndependentOfInsertionOrderForGenericInput) {
  RandomStream s(4, 4);
  const auto sites = random_sites(300, 2.0, s);
  auto key = [](const LowerHull& h) {
    std::vector<std::array<int, 3>> t;
    for (auto tri : h.triangles) {
      std::sort(tri.begin(), tri.end());
      t.push_back(tri);
    }
    std::sort(t.begin(), t.end());
    return t;
  };
  EXPECT_EQ(key(lifted_lower_hull(sites, 1)), key(lifted_lower_hull(sites, 2)));
}

TEST(LowerHull, CocircularGridStaysValid) {
  // An integer grid is maximally degenerate: every unit square is cocircular.
  std::vector<Site> sites;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) sites.push_back(site(i, j, 0.0));
  }
  const auto hull = lifted_lower_hull(sites, 7);
  double area = 0.0;
  for (const auto& t : hull.triangles) {
    area += cross(sites[t[0]].v, sites[t[1]].v, sites[t[2]].v) / 2;
    for (const auto& q : sites) ASSERT_LE(in_paraboloid(sites[t[0]], sites[t[1]], sites[t[2]], q), 0);
  }
  EXPECT_NEAR(area, 25.0, 1e-12);
}

TEST(LowerHull, SmallAndDegenerateInputs) {
  EXPECT_TRUE(lifted_lower_hull({}).triangles.empty());
  const auto one = lifted_lower_hull({site(0, 0, 0), site(1, 0, 0), site(0, 1, 0)});
  ASSERT_EQ(one.triangles.size(), 1u);
  const auto collinear = lifted_lower_hull({site(0, 0, 0), site(1, 1, 0), site(2, 2, 0)});
  EXPECT_TRUE(collinear.triangles.empty());
  // A site far above the others is hidden.
  const auto hidden = lifted_lower_hull({site(0, 0, 0), site(4, 0, 0), site(0, 4, 0), site(1, 1, 100)});
  EXPECT_EQ(hidden.triangles.size(), 1u);
  EXPECT_EQ(hidden.non_vertices, std::vector<int>{3});
  EXPECT_THROW(lifted_lower_hull({site(0, 0, 0), site(1, 0, 1), site(0, 1, 1), site(1, 1, 2)}), DegeneracyError);
}
