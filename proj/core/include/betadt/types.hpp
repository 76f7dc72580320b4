#pragma once

#include <vector>

#include <Eigen/Core>

namespace betadt {

using Point = Eigen::VectorXd;

// d vertices in R^{d-1}, stored column-wise.
struct Simplex {
  Eigen::MatrixXd vertices;

  Simplex() = default;
  explicit Simplex(Eigen::MatrixXd v) : vertices(std::move(v)) {}

  int dim() const { return static_cast<int>(vertices.rows()); }
  int size() const { return static_cast<int>(vertices.cols()); }
  Point vertex(int i) const { return vertices.col(i); }
};

// Space-time point (v, h) of the driving Poisson process.
struct Site {
  Point v;
  double h = 0.0;
};

// Axis-aligned box [lo, hi] in R^k.
struct Box {
  Point lo;
  Point hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const { return (hi - lo).prod(); }
  bool contains(const Point& x) const {
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  }
  Box inflated(double margin) const {
    return Box{lo.array() - margin, hi.array() + margin};
  }

  static Box square(double lo, double hi) {
    return Box{Point::Constant(2, lo), Point::Constant(2, hi)};
  }
  static Box cube(int k, double lo, double hi) {
    return Box{Point::Constant(k, lo), Point::Constant(k, hi)};
  }
};

struct HeightRange {
  double lo = 0.0;
  double hi = 1.0;
};

}  // namespace betadt
