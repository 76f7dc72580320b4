#include "betadt/predicates.hpp"

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

#include "betadt/errors.hpp"

namespace betadt {
namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr double kFilter = 1e-10;

int sign_of(const Rational& r) { return r.sign(); }

Rational lift_z(const Site& s) {
  const Rational x(s.v(0)), y(s.v(1)), h(s.h);
  return x * x + y * y + h;
}

int orient2d_exact(const Site& a, const Site& b, const Site& c) {
  const Rational ax(a.v(0)), ay(a.v(1));
  const Rational bx = Rational(b.v(0)) - ax, by = Rational(b.v(1)) - ay;
  const Rational cx = Rational(c.v(0)) - ax, cy = Rational(c.v(1)) - ay;
  return sign_of(bx * cy - by * cx);
}

int orient3d_exact(const Site& a, const Site& b, const Site& c, const Site& d) {
  const Rational ax(a.v(0)), ay(a.v(1)), az = lift_z(a);
  const Rational bx = Rational(b.v(0)) - ax, by = Rational(b.v(1)) - ay, bz = lift_z(b) - az;
  const Rational cx = Rational(c.v(0)) - ax, cy = Rational(c.v(1)) - ay, cz = lift_z(c) - az;
  const Rational dx = Rational(d.v(0)) - ax, dy = Rational(d.v(1)) - ay, dz = lift_z(d) - az;
  const Rational det = bx * (cy * dz - cz * dy) - by * (cx * dz - cz * dx) + bz * (cx * dy - cy * dx);
  return sign_of(det);
}

// Lifted height difference of p relative to a and a bound on its magnitude.
inline void lifted_diff(const Site& p, const Site& a, double& dx, double& dy, double& dz,
                        double& mag) {
  dx = p.v(0) - a.v(0);
  dy = p.v(1) - a.v(1);
  const double sx = p.v(0) + a.v(0);
  const double sy = p.v(1) + a.v(1);
  const double dh = p.h - a.h;
  dz = dx * sx + dy * sy + dh;
  mag = std::abs(dx * sx) + std::abs(dy * sy) + std::abs(dh);
}

thread_local PredicateCounters counters;

}  // namespace

PredicateCounters& predicate_counters() { return counters; }

int orient2d(const Site& a, const Site& b, const Site& c) {
  const double bx = b.v(0) - a.v(0), by = b.v(1) - a.v(1);
  const double cx = c.v(0) - a.v(0), cy = c.v(1) - a.v(1);
  const double l = bx * cy, r = by * cx;
  const double det = l - r;
  const double mag = std::abs(l) + std::abs(r);
  if (std::abs(det) > kFilter * mag) {
    ++counters.filtered;
    return det > 0 ? 1 : -1;
  }
  ++counters.exact;
  return orient2d_exact(a, b, c);
}

int orient3d_lifted(const Site& a, const Site& b, const Site& c, const Site& d) {
  double bx, by, bz, bm, cx, cy, cz, cm, dx, dy, dz, dm;
  lifted_diff(b, a, bx, by, bz, bm);
  lifted_diff(c, a, cx, cy, cz, cm);
  lifted_diff(d, a, dx, dy, dz, dm);
  const double m1 = cy * dz - cz * dy;
  const double m2 = cx * dz - cz * dx;
  const double m3 = cx * dy - cy * dx;
  const double det = bx * m1 - by * m2 + bz * m3;
  const double mag = std::abs(bx) * (std::abs(cy) * dm + cm * std::abs(dy)) +
                     std::abs(by) * (std::abs(cx) * dm + cm * std::abs(dx)) +
                     bm * (std::abs(cx * dy) + std::abs(cy * dx));
  if (std::abs(det) > kFilter * mag) {
    ++counters.filtered;
    return det > 0 ? 1 : -1;
  }
  ++counters.exact;
  return orient3d_exact(a, b, c, d);
}

int in_paraboloid(const Site& a, const Site& b, const Site& c, const Site& q) {
  const int o2 = orient2d(a, b, c);
  if (o2 == 0) throw DegeneracyError("in_paraboloid: collinear spatial coordinates");
  return -o2 * orient3d_lifted(a, b, c, q);
}

}  // namespace betadt
