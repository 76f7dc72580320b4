#include "betadt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "betadt/errors.hpp"
#include "betadt/samplers.hpp"
#include "betadt/special.hpp"

namespace betadt {

double simplex_volume(const Eigen::MatrixXd& v) {
  const Eigen::Index n = v.rows();
  if (v.cols() != n + 1) throw DomainError("simplex_volume expects d points in R^{d-1}");
  switch (n) {
    case 1: return std::abs(v(0, 1) - v(0, 0));
    case 2: {
      const double ax = v(0, 1) - v(0, 0), ay = v(1, 1) - v(1, 0);
      const double bx = v(0, 2) - v(0, 0), by = v(1, 2) - v(1, 0);
      return 0.5 * std::abs(ax * by - ay * bx);
    }
    case 3: {
      const Eigen::Vector3d a = v.col(1) - v.col(0);
      const Eigen::Vector3d b = v.col(2) - v.col(0);
      const Eigen::Vector3d c = v.col(3) - v.col(0);
      return std::abs(a.dot(b.cross(c))) / 6.0;
    }
    default: {
      Eigen::MatrixXd e = v.rightCols(n).colwise() - v.col(0);
      return std::abs(e.partialPivLu().determinant()) / std::exp(log_factorial(static_cast<int>(n)));
    }
  }
}

double simplex_volume(const Simplex& sx) { return simplex_volume(sx.vertices); }

double power_of_point(const Point& w, const Site& site) {
  return (w - site.v).squaredNorm() + site.h;
}

ParaboloidApex circumparaboloid(const std::vector<const Site*>& sites) {
  const int d = static_cast<int>(sites.size());
  if (d < 2) throw DomainError("circumparaboloid needs at least 2 sites");
  const int n = d - 1;
  for (const Site* s : sites) {
    if (s->v.size() != n) throw DomainError("circumparaboloid expects d sites in R^{d-1}");
  }
  // 2 <v_i - v_1, w> = |v_i|^2 - |v_1|^2 + h_i - h_1 (written relative to v_1).
  const Point& v1 = sites[0]->v;
  const double h1 = sites[0]->h;
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b(n);
  for (int i = 1; i < d; ++i) {
    const Point diff = sites[i]->v - v1;
    a.row(i - 1) = 2.0 * diff.transpose();
    b(i - 1) = diff.squaredNorm() + sites[i]->h - h1;
  }
  // Solve for u = w - v_1 by Gaussian elimination with partial pivoting.
  Eigen::VectorXd row_norm(n);
  for (int i = 0; i < n; ++i) row_norm(i) = a.row(i).cwiseAbs().maxCoeff();
  double min_pivot = std::numeric_limits<double>::infinity();
  double max_pivot = 0.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    }
    if (piv != col) {
      a.row(col).swap(a.row(piv));
      std::swap(b(col), b(piv));
      std::swap(row_norm(col), row_norm(piv));
    }
    const double p = a(col, col);
    if (!(std::abs(p) > 1e-12 * row_norm(col))) {
      throw DegeneracyError("circumparaboloid: spatial coordinates are affinely dependent");
    }
    min_pivot = std::min(min_pivot, std::abs(p));
    max_pivot = std::max(max_pivot, std::abs(p));
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / p;
      if (f == 0.0) continue;
      a.row(r).tail(n - col) -= f * a.row(col).tail(n - col);
      b(r) -= f * b(col);
    }
  }
  Eigen::VectorXd u(n);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b(r);
    for (int c = r + 1; c < n; ++c) acc -= a(r, c) * u(c);
    u(r) = acc / a(r, r);
  }
  ParaboloidApex apex;
  apex.w = v1 + u;
  apex.t = h1 + u.squaredNorm();
  apex.r = std::sqrt(std::abs(apex.t));
  apex.pivot_ratio = max_pivot / min_pivot;
  return apex;
}

ParaboloidApex circumparaboloid(const std::vector<Site>& sites) {
  std::vector<const Site*> ptrs;
  ptrs.reserve(sites.size());
  for (const Site& s : sites) ptrs.push_back(&s);
  return circumparaboloid(ptrs);
}

bool strictly_inside_paraboloid(const Site& site, const ParaboloidApex& apex) {
  return site.h < apex.t - (site.v - apex.w).squaredNorm();
}

namespace {

// Orthonormal basis (columns) of the orthogonal complement of span(dirs).
Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& dirs, int n) {
  if (dirs.cols() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(dirs);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - dirs.cols());
}

}  // namespace

AngleEstimate internal_angle(const Simplex& sx, const std::vector<int>& face, std::int64_t n_dirs,
                             RandomStream& s) {
  const int n = sx.dim();
  const int d = sx.size();
  if (d != n + 1) throw DomainError("internal_angle expects d vertices in R^{d-1}");
  std::vector<int> f = face;
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  const int k = static_cast<int>(f.size());
  if (k < 1 || k > d || f.front() < 0 || f.back() >= d) {
    throw DomainError("internal_angle: face must be a nonempty subset of the vertex indices");
  }
  if (!(simplex_volume(sx) > 0.0)) throw DegeneracyError("internal_angle: degenerate simplex");
  if (k == d) return {1.0, 0.0, true};
  if (k == d - 1) return {0.5, 0.0, true};

  const Point x0 = sx.vertex(f[0]);
  Eigen::MatrixXd face_dirs(n, k - 1);
  for (int i = 1; i < k; ++i) face_dirs.col(i - 1) = sx.vertex(f[i]) - x0;
  const Eigen::MatrixXd basis = complement_basis(face_dirs, n);  // n x m
  const int m = d - k;
  Eigen::MatrixXd gens(m, m);
  int col = 0;
  for (int j = 0; j < d; ++j) {
    if (std::binary_search(f.begin(), f.end(), j)) continue;
    gens.col(col++) = basis.transpose() * (sx.vertex(j) - x0);
  }
  if (m == 2) {
    const double c = gens.col(0).normalized().dot(gens.col(1).normalized());
    return {std::acos(std::clamp(c, -1.0, 1.0)) / (2.0 * std::numbers::pi), 0.0, true};
  }
  if (n_dirs < 1) throw DomainError("internal_angle: n_dirs must be positive");
  const Eigen::MatrixXd inv = gens.inverse();
  Eigen::VectorXd g(m);
  std::int64_t hits = 0;
  for (std::int64_t it = 0; it < n_dirs; ++it) {
    for (int i = 0; i < m; ++i) g(i) = sample_normal(s);
    bool inside = true;
    for (int i = 0; i < m && inside; ++i) inside = inv.row(i).dot(g) >= 0.0;
    hits += inside ? 1 : 0;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n_dirs);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n_dirs)), false};
}

AngleEstimate angle_sum(const Simplex& sx, int k, std::int64_t n_dirs, RandomStream& s) {
  const int d = sx.size();
  if (k < 1 || k > d) throw DomainError("angle_sum requires 1 <= k <= d");
  AngleEstimate total{0.0, 0.0, true};
  double var = 0.0;
  std::vector<bool> mask(d, false);
  std::fill(mask.begin(), mask.begin() + k, true);
  const std::uint64_t key = s();
  std::uint64_t face_id = 0;
  do {
    std::vector<int> face;
    for (int i = 0; i < d; ++i) {
      if (mask[i]) face.push_back(i);
    }
    RandomStream fs(key, face_id++);
    const AngleEstimate a = internal_angle(sx, face, n_dirs, fs);
    total.value += a.value;
    var += a.std_error * a.std_error;
    total.exact = total.exact && a.exact;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  total.std_error = std::sqrt(var);
  return total;
}

}  // namespace betadt
