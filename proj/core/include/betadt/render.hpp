#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "betadt/tessellation.hpp"
#include "betadt/types.hpp"
#include "betadt/verify.hpp"

namespace betadt {

enum class Layer { Delaunay, Voronoi, Sites };

struct RenderStyle {
  double canvas_width = 800.0;  // height follows from the viewport aspect ratio
  double margin = 10.0;
  double delaunay_stroke = 0.6;
  double voronoi_stroke = 0.9;
  double site_radius = 1.6;
  double apex_radius = 1.2;
  std::string delaunay_color = "#1f3b5c";
  std::string voronoi_color = "#b03a2e";
  std::string site_color = "#111111";
  std::string interior_fill = "none";
  std::string boundary_fill = "#d8d8d8";
  // Region of the plane mapped onto the canvas; the target box when empty.
  std::optional<Box> viewport;
};

// SVG 1.1 drawing of a planar tessellation. Output depends only on the inputs.
std::string render_svg(const TriangulationResult& t, const RenderStyle& style = {},
                       const std::set<Layer>& layers = {Layer::Delaunay, Layer::Voronoi, Layer::Sites});

// Shortest-exact decimal form with 17 significant digits.
std::string format_real(double x);

struct SimplexRecord {
  std::int64_t id = 0;
  double v[6] = {};  // v1x v1y v2x v2y v3x v3y
  double apex_wx = 0.0;
  double apex_wy = 0.0;
  double apex_t = 0.0;
  double r = 0.0;
  std::string flag;
};
bool operator==(const SimplexRecord& a, const SimplexRecord& b);

struct CellRecord {
  std::int64_t id = 0;
  int site = 0;
  double sx = 0.0;
  double sy = 0.0;
  double h = 0.0;
  int n_vertices = 0;
  bool closed = false;
  double area = 0.0;  // 0 for open cells
};

std::vector<SimplexRecord> simplex_records(const TriangulationResult& t);
std::vector<CellRecord> cell_records(const TriangulationResult& t);

std::string export_csv(const std::vector<SimplexRecord>& rows);
std::string export_csv(const std::vector<CellRecord>& rows);
std::string export_csv(const std::vector<MCReport>& rows);
// Typical cells: id, vertex coordinates, volume.
std::string export_csv(const std::vector<Simplex>& cells);

// Inverse of export_csv for simplex rows. Throws ParameterError on malformed input.
std::vector<SimplexRecord> parse_simplex_csv(const std::string& text);

// JSON array of reports with a fixed key order.
std::string reports_to_json(const std::vector<MCReport>& reports, int indent = 2);

}  // namespace betadt
