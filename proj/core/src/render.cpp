#include "betadt/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "betadt/errors.hpp"
#include "betadt/geometry.hpp"

namespace betadt {

namespace {

std::string coord(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

// Affine map from the viewport to the canvas with the y axis pointing up.
struct Transform {
  double lo_x, hi_y, scale, margin;
  double x(double v) const { return margin + (v - lo_x) * scale; }
  double y(double v) const { return margin + (hi_y - v) * scale; }
};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Comments may not contain "--".
std::string comment_safe(std::string s) {
  for (std::size_t i = s.find("--"); i != std::string::npos; i = s.find("--")) s.replace(i, 2, "- -");
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ParameterError("malformed number '" + s + "' in CSV");
  return x;
}

double polygon_area(const std::vector<Point>& pts) {
  double a = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point& u = pts[i];
    const Point& v = pts[(i + 1) % pts.size()];
    a += u(0) * v(1) - u(1) * v(0);
  }
  return 0.5 * std::abs(a);
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---- SVG ---------------------------------------------------------------------------

std::string render_svg(const TriangulationResult& t, const RenderStyle& style, const std::set<Layer>& layers) {
  Box view = style.viewport ? *style.viewport : t.window.target_box;
  if (view.dim() != 2 || !((view.hi.array() > view.lo.array()).all())) view = Box::square(0.0, 1.0);
  const double w = view.hi(0) - view.lo(0), h = view.hi(1) - view.lo(1);
  const double scale = (style.canvas_width - 2.0 * style.margin) / w;
  const Transform tf{view.lo(0), view.hi(1), scale, style.margin};
  const double cw = style.canvas_width, ch = h * scale + 2.0 * style.margin;

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << coord(cw) << "\" height=\""
     << coord(ch) << "\" viewBox=\"0 0 " << coord(cw) << ' ' << coord(ch) << "\">\n";
  os << "<!-- " << comment_safe(describe(t.params)) << "; sites " << t.sites.size() << ", triangles "
     << t.simplices.size() << " -->\n";
  os << "<title>" << xml_escape(describe(t.params)) << "</title>\n";
  os << "<defs><clipPath id=\"view\"><rect x=\"" << coord(tf.x(view.lo(0))) << "\" y=\"" << coord(tf.y(view.hi(1)))
     << "\" width=\"" << coord(w * scale) << "\" height=\"" << coord(h * scale) << "\"/></clipPath></defs>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << coord(cw) << "\" height=\"" << coord(ch) << "\" fill=\"white\"/>\n";
  if (t.simplices.empty() && t.sites.empty()) {
    os << "<!-- empty tessellation -->\n</svg>\n";
    return os.str();
  }
  os << "<g clip-path=\"url(#view)\">\n";

  const auto& S = t.sites;
  if (layers.count(Layer::Delaunay)) {
    os << "<g id=\"boundary-uncertain\" fill=\"" << style.boundary_fill << "\" stroke=\"none\">\n";
    for (const auto& tri : t.simplices) {
      if (tri.flag != SimplexFlag::BoundaryUncertain) continue;
      os << "<polygon points=\"";
      for (int j = 0; j < 3; ++j) {
        os << (j ? " " : "") << coord(tf.x(S[tri.v[j]].v(0))) << ',' << coord(tf.y(S[tri.v[j]].v(1)));
      }
      os << "\"/>\n";
    }
    os << "</g>\n";
    os << "<g id=\"delaunay\" stroke=\"" << style.delaunay_color << "\" stroke-width=\"" << style.delaunay_stroke
       << "\" fill=\"" << style.interior_fill << "\">\n";
    for (std::size_t id = 0; id < t.simplices.size(); ++id) {
      const auto& tri = t.simplices[id];
      for (int j = 0; j < 3; ++j) {
        if (tri.nb[j] >= 0 && tri.nb[j] < static_cast<int>(id)) continue;
        const Point& a = S[tri.v[j]].v;
        const Point& b = S[tri.v[(j + 1) % 3]].v;
        os << "<line x1=\"" << coord(tf.x(a(0))) << "\" y1=\"" << coord(tf.y(a(1))) << "\" x2=\""
           << coord(tf.x(b(0))) << "\" y2=\"" << coord(tf.y(b(1))) << "\"/>\n";
      }
    }
    os << "</g>\n";
  }
  if (layers.count(Layer::Voronoi)) {
    os << "<g id=\"voronoi\" stroke=\"" << style.voronoi_color << "\" stroke-width=\"" << style.voronoi_stroke
       << "\" fill=\"" << style.voronoi_color << "\">\n";
    for (std::size_t id = 0; id < t.simplices.size(); ++id) {
      const auto& tri = t.simplices[id];
      for (int j = 0; j < 3; ++j) {
        const int nb = tri.nb[j];
        if (nb < 0 || nb < static_cast<int>(id)) continue;
        const Point& a = tri.apex.w;
        const Point& b = t.simplices[nb].apex.w;
        os << "<line x1=\"" << coord(tf.x(a(0))) << "\" y1=\"" << coord(tf.y(a(1))) << "\" x2=\""
           << coord(tf.x(b(0))) << "\" y2=\"" << coord(tf.y(b(1))) << "\"/>\n";
      }
    }
    for (const auto& tri : t.simplices) {
      os << "<circle cx=\"" << coord(tf.x(tri.apex.w(0))) << "\" cy=\"" << coord(tf.y(tri.apex.w(1))) << "\" r=\""
         << style.apex_radius << "\" stroke=\"none\"/>\n";
    }
    os << "</g>\n";
  }
  if (layers.count(Layer::Sites)) {
    os << "<g id=\"sites\" fill=\"" << style.site_color << "\">\n";
    for (const auto& s : S) {
      os << "<circle cx=\"" << coord(tf.x(s.v(0))) << "\" cy=\"" << coord(tf.y(s.v(1))) << "\" r=\""
         << style.site_radius << "\"/>\n";
    }
    os << "</g>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

// ---- records ---------------------------------------------------------------------------

bool operator==(const SimplexRecord& a, const SimplexRecord& b) {
  return a.id == b.id && std::equal(a.v, a.v + 6, b.v) && a.apex_wx == b.apex_wx && a.apex_wy == b.apex_wy &&
         a.apex_t == b.apex_t && a.r == b.r && a.flag == b.flag;
}

std::vector<SimplexRecord> simplex_records(const TriangulationResult& t) {
  std::vector<SimplexRecord> out;
  out.reserve(t.simplices.size());
  for (std::size_t id = 0; id < t.simplices.size(); ++id) {
    const auto& tri = t.simplices[id];
    SimplexRecord r;
    r.id = static_cast<std::int64_t>(id);
    for (int j = 0; j < 3; ++j) {
      r.v[2 * j] = t.sites[tri.v[j]].v(0);
      r.v[2 * j + 1] = t.sites[tri.v[j]].v(1);
    }
    r.apex_wx = tri.apex.w(0);
    r.apex_wy = tri.apex.w(1);
    r.apex_t = tri.apex.t;
    r.r = tri.apex.r;
    r.flag = to_string(tri.flag);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CellRecord> cell_records(const TriangulationResult& t) {
  std::vector<CellRecord> out;
  out.reserve(t.dual_cells.size());
  for (std::size_t id = 0; id < t.dual_cells.size(); ++id) {
    const auto& c = t.dual_cells[id];
    CellRecord r;
    r.id = static_cast<std::int64_t>(id);
    r.site = c.site;
    r.sx = t.sites[c.site].v(0);
    r.sy = t.sites[c.site].v(1);
    r.h = t.sites[c.site].h;
    r.n_vertices = static_cast<int>(c.triangles.size());
    r.closed = c.closed;
    if (c.closed) {
      std::vector<Point> poly;
      for (int tri : c.triangles) poly.push_back(t.simplices[tri].apex.w);
      r.area = polygon_area(poly);
    }
    out.push_back(r);
  }
  return out;
}

std::string export_csv(const std::vector<SimplexRecord>& rows) {
  std::ostringstream os;
  os << "id,v1x,v1y,v2x,v2y,v3x,v3y,apex_wx,apex_wy,apex_t,r,flag\n";
  for (const auto& r : rows) {
    os << r.id;
    for (double x : r.v) os << ',' << format_real(x);
    os << ',' << format_real(r.apex_wx) << ',' << format_real(r.apex_wy) << ',' << format_real(r.apex_t) << ','
       << format_real(r.r) << ',' << csv_field(r.flag) << '\n';
  }
  return os.str();
}

std::string export_csv(const std::vector<CellRecord>& rows) {
  std::ostringstream os;
  os << "id,site,sx,sy,h,n_vertices,closed,area\n";
  for (const auto& r : rows) {
    os << r.id << ',' << r.site << ',' << format_real(r.sx) << ',' << format_real(r.sy) << ',' << format_real(r.h)
       << ',' << r.n_vertices << ',' << (r.closed ? 1 : 0) << ',' << format_real(r.area) << '\n';
  }
  return os.str();
}

std::string export_csv(const std::vector<MCReport>& rows) {
  std::ostringstream os;
  os << "quantity,params,verdict,estimate,closed_form,std_error,z_score,n_samples,seed,reference_estimate,"
        "reference_std_error,p_value,allowance,note\n";
  auto opt = [](const std::optional<double>& x) { return x ? format_real(*x) : std::string(); };
  for (const auto& r : rows) {
    os << csv_field(r.quantity) << ',' << csv_field(r.params) << ',' << to_string(r.verdict) << ','
       << format_real(r.estimate) << ',' << opt(r.closed_form) << ',' << format_real(r.std_error) << ','
       << format_real(r.z_score) << ',' << r.n_samples << ',' << r.seed << ',' << opt(r.reference_estimate) << ','
       << opt(r.reference_std_error) << ',' << opt(r.p_value) << ',' << format_real(r.allowance) << ','
       << csv_field(r.note) << '\n';
  }
  return os.str();
}

std::string export_csv(const std::vector<Simplex>& cells) {
  std::ostringstream os;
  os << "id";
  const int dim = cells.empty() ? 0 : cells.front().dim();
  const int nv = cells.empty() ? 0 : cells.front().size();
  for (int j = 0; j < nv; ++j) {
    for (int c = 0; c < dim; ++c) os << ",v" << (j + 1) << "_" << c;
  }
  os << ",volume\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    os << i;
    for (int j = 0; j < nv; ++j) {
      for (int c = 0; c < dim; ++c) os << ',' << format_real(cells[i].vertices(c, j));
    }
    os << ',' << format_real(simplex_volume(cells[i])) << '\n';
  }
  return os.str();
}

std::vector<SimplexRecord> parse_simplex_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "id,v1x,v1y,v2x,v2y,v3x,v3y,apex_wx,apex_wy,apex_t,r,flag") {
    throw ParameterError("simplex CSV must start with the simplex header");
  }
  std::vector<SimplexRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 12) throw ParameterError("simplex CSV rows need 12 fields");
    SimplexRecord r;
    char* end = nullptr;
    r.id = std::strtoll(f[0].c_str(), &end, 10);
    if (f[0].empty() || *end != '\0') throw ParameterError("malformed id '" + f[0] + "' in CSV");
    for (int j = 0; j < 6; ++j) r.v[j] = parse_real(f[1 + j]);
    r.apex_wx = parse_real(f[7]);
    r.apex_wy = parse_real(f[8]);
    r.apex_t = parse_real(f[9]);
    r.r = parse_real(f[10]);
    r.flag = f[11];
    out.push_back(std::move(r));
  }
  return out;
}

std::string reports_to_json(const std::vector<MCReport>& reports, int indent) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  auto opt = [](const std::optional<double>& x) { return x ? nlohmann::ordered_json(*x) : nlohmann::ordered_json(); };
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["quantity"] = r.quantity;
    j["params"] = r.params;
    j["verdict"] = to_string(r.verdict);
    j["estimate"] = r.estimate;
    j["closed_form"] = opt(r.closed_form);
    j["std_error"] = r.std_error;
    j["z_score"] = r.z_score;
    j["n_samples"] = r.n_samples;
    j["seed"] = r.seed;
    j["reference_estimate"] = opt(r.reference_estimate);
    j["reference_std_error"] = opt(r.reference_std_error);
    j["p_value"] = opt(r.p_value);
    j["allowance"] = r.allowance;
    j["note"] = r.note;
    arr.push_back(std::move(j));
  }
  return arr.dump(indent);
}

}  // namespace betadt
