#include <cmath>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <gtest/gtest.h>
#include <json.hpp>

#include "betadt/errors.hpp"
#include "betadt/render.hpp"
#include "betadt/samplers.hpp"
#include "betadt/tessellation.hpp"

using namespace betadt;

namespace {

Site site(double x, double y, double h) {
  Site s;
  s.v = Point(2);
  s.v << x, y;
  s.h = h;
  return s;
}

TriangulationResult small_window() {
  WindowConfig w;
  w.target_box = Box::square(0.0, 6.0);
  return build_tessellation(ModelParams::beta_model(3, 1.0), w, 4);
}

boost::property_tree::ptree parse_xml(const std::string& text) {
  std::istringstream is(text);
  boost::property_tree::ptree pt;
  boost::property_tree::read_xml(is, pt);
  return pt;
}

}  // namespace

TEST(FormatReal, RoundTripsExactly) {
  RandomStream s(1, 1);
  for (int i = 0; i < 10000; ++i) {
    const double x = std::ldexp(s.uniform() - 0.5, static_cast<int>(s() % 200) - 100);
    ASSERT_EQ(std::strtod(format_real(x).c_str(), nullptr), x);
  }
  EXPECT_EQ(format_real(0.5), "0.5");
}

TEST(SimplexCsv, RoundTripOf10000Rows) {
  RandomStream s(2, 2);
  std::vector<SimplexRecord> rows(10000);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& r = rows[i];
    r.id = static_cast<std::int64_t>(i);
    for (double& v : r.v) v = 100.0 * (s.uniform() - 0.5);
    r.apex_wx = s.uniform() * 1e-7;
    r.apex_wy = -s.uniform() * 1e9;
    r.apex_t = sample_normal(s);
    r.r = std::sqrt(std::abs(r.apex_t));
    r.flag = i % 7 ? "interior" : "boundary";
  }
  const std::string csv = export_csv(rows);
  const auto back = parse_simplex_csv(csv);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) ASSERT_TRUE(back[i] == rows[i]) << i;
  EXPECT_EQ(export_csv(back), csv);
}

TEST(SimplexCsv, FromTessellation) {
  const auto t = small_window();
  const auto rows = simplex_records(t);
  ASSERT_EQ(rows.size(), t.simplices.size());
  EXPECT_EQ(parse_simplex_csv(export_csv(rows)), rows);
}

TEST(SimplexCsv, RejectsMalformedInput) {
  EXPECT_THROW(parse_simplex_csv("nonsense\n"), ParameterError);
  const std::string header = "id,v1x,v1y,v2x,v2y,v3x,v3y,apex_wx,apex_wy,apex_t,r,flag\n";
  EXPECT_THROW(parse_simplex_csv(header + "1,2,3\n"), ParameterError);
  EXPECT_THROW(parse_simplex_csv(header + "x,0,0,0,0,0,0,0,0,0,0,interior\n"), ParameterError);
  EXPECT_THROW(parse_simplex_csv(header + "1,0,0,0,abc,0,0,0,0,0,0,interior\n"), ParameterError);
  EXPECT_TRUE(parse_simplex_csv(header).empty());
}

TEST(CellCsv, HeaderAndRowCount) {
  const auto t = small_window();
  const auto cells = cell_records(t);
  EXPECT_EQ(cells.size(), t.dual_cells.size());
  const std::string csv = export_csv(cells);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), cells.size() + 1);
  for (const auto& c : cells) {
    if (c.closed) EXPECT_GT(c.area, 0.0);
    else EXPECT_EQ(c.area, 0.0);
  }
}

TEST(Svg, DeterministicAndWellFormed) {
  const auto t = small_window();
  const std::string a = render_svg(t);
  EXPECT_EQ(a, render_svg(small_window()));
  const auto pt = parse_xml(a);
  const auto& svg = pt.get_child("svg");
  EXPECT_EQ(svg.get<std::string>("<xmlattr>.version"), "1.1");
  EXPECT_NE(a.find("<line"), std::string::npos);
  EXPECT_NE(a.find("<circle"), std::string::npos);
  const std::string only_sites = render_svg(t, {}, {Layer::Sites});
  EXPECT_EQ(only_sites.find("<line"), std::string::npos);
  parse_xml(only_sites);
}

TEST(Svg, SingleTriangleAndEmptyResult) {
  const auto t = triangulate_sites({site(0, 0, 0), site(1, 0, 0), site(0, 1, 0)});
  ASSERT_EQ(t.simplices.size(), 1u);
  RenderStyle style;
  style.viewport = Box::square(-1.0, 2.0);
  const std::string svg = render_svg(t, style);
  parse_xml(svg);
  EXPECT_NE(svg.find("<line"), std::string::npos);
  const std::string empty = render_svg(TriangulationResult{}, style);
  parse_xml(empty);
  EXPECT_EQ(empty.find("<line"), std::string::npos);
}

TEST(ReportJson, FixedKeyOrder) {
  MCReport r;
  r.quantity = "q";
  r.params = "p";
  r.closed_form = 1.0;
  r.estimate = 1.25;
  r.verdict = Verdict::Pass;
  const auto j = nlohmann::ordered_json::parse(reports_to_json({r}));
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j[0].begin().key(), "quantity");
  EXPECT_EQ(j[0]["verdict"], "PASS");
  EXPECT_TRUE(j[0]["p_value"].is_null());
  const std::string csv = export_csv(std::vector<MCReport>{r});
  EXPECT_NE(csv.find("PASS"), std::string::npos);
}

TEST(TypicalCellCsv, Rows) {
  const auto batch = sample_typical_cells(ModelParams::beta_model(3, 0.0), 5, 1);
  const std::string csv = export_csv(batch.cells);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}
