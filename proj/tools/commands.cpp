#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "betadt/analytics.hpp"
#include "betadt/errors.hpp"
#include "betadt/geometry.hpp"
#include "betadt/render.hpp"
#include "betadt/samplers.hpp"
#include "betadt/stats.hpp"
#include "betadt/tessellation.hpp"
#include "betadt/verify.hpp"

namespace betadt::cli {

namespace {

using Json = nlohmann::ordered_json;

// Flat key/value configuration: the --config file first, flags on top. Every
// value read through get() is recorded, so `resolved` is exactly the effective
// configuration of the run.
class Config {
 public:
  Json file;
  Json flags = Json::object();
  Json resolved = Json::object();

  template <class T>
  T get(const std::string& key, const T& fallback) {
    T v = fallback;
    if (flags.contains(key)) v = flags[key].get<T>();
    else if (file.contains(key)) v = file[key].get<T>();
    resolved[key] = v;
    return v;
  }
  bool has(const std::string& key) const { return flags.contains(key) || file.contains(key); }
};

const std::vector<std::string> kKnownKeys = {
    "family", "d", "beta", "nu", "gamma", "seed", "workers", "n", "method", "s", "k", "suite",
    "box", "guard", "h_max", "eps", "h_depth", "r_max", "void_tolerance", "deep_tolerance", "rel_tol",
    "truncation", "out", "summary", "prefix", "layers", "json", "csv", "format", "svg_width"};

void load_config_file(Config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ParameterError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
      throw ParameterError("unknown config key '" + key + "'");
    }
  }
  cfg.file = std::move(j);
}

std::uint64_t default_seed() {
  const char* env = std::getenv("BETADT_SEED");
  if (env == nullptr || *env == '\0') return 1;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParameterError(std::string("BETADT_SEED must be an unsigned integer, got '") + env + "'");
  }
}

ModelParams read_model(Config& cfg) {
  const Family family = family_from_string(cfg.get<std::string>("family", "beta"));
  const int d = cfg.get<int>("d", 3);
  const double nu = cfg.get<double>("nu", 0.0);
  const double gamma = cfg.get<double>("gamma", 1.0);
  ModelParams p;
  if (family == Family::ClassicalDelaunay) {
    if (cfg.has("beta")) throw ParameterError("the classical model takes no --beta (it is the beta -> -1 limit)");
    p = ModelParams::classical(d, nu, gamma);
  } else {
    p.family = family;
    p.d = d;
    p.beta = cfg.get<double>("beta", family == Family::BetaPrime ? 3.0 : 0.0);
    p.nu = nu;
    p.gamma = gamma;
  }
  p.validate();
  return p;
}

QuadratureConfig read_quadrature(Config& cfg) {
  QuadratureConfig q;
  q.rel_tol = cfg.get<double>("rel_tol", q.rel_tol);
  if (cfg.has("truncation")) q.truncation = cfg.get<double>("truncation", 0.0);
  return q;
}

Json header(const std::string& command, std::uint64_t seed) {
  Json j;
  j["artifact"] = "betadt";
  j["version"] = BETADT_VERSION;
  j["command"] = command;
  j["seed"] = seed;
  return j;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParameterError("cannot write '" + path + "'");
  f << text;
  if (!f) throw ParameterError("failed writing '" + path + "'");
}

Json model_json(const ModelParams& p) {
  Json j;
  j["family"] = to_string(p.family);
  j["d"] = p.d;
  j["beta"] = p.beta;
  j["nu"] = p.nu;
  j["gamma"] = p.gamma;
  return j;
}

TupleMethod method_from_string(const std::string& s) {
  if (s == "auto") return TupleMethod::Auto;
  if (s == "rejection") return TupleMethod::Rejection;
  if (s == "mcmc") return TupleMethod::Mcmc;
  throw ParameterError("method must be auto, rejection or mcmc");
}

const char* method_name(TupleMethod m) {
  switch (m) {
    case TupleMethod::Auto: return "auto";
    case TupleMethod::Rejection: return "rejection";
    case TupleMethod::Mcmc: return "mcmc";
  }
  return "?";
}

// ---- commands ------------------------------------------------------------------------

int cmd_sample_cells(Config& cfg, std::ostream& out, std::ostream& err) {
  const ModelParams p = read_model(cfg);
  const std::uint64_t seed = cfg.get<std::uint64_t>("seed", default_seed());
  const std::int64_t n = cfg.get<std::int64_t>("n", 1000);
  if (n < 1) throw ParameterError("-n must be positive");
  CellSamplingOptions opt;
  opt.workers = cfg.get<int>("workers", 1);
  opt.method = method_from_string(cfg.get<std::string>("method", "auto"));
  const std::string out_path = cfg.get<std::string>("out", "");
  const std::string summary_path = cfg.get<std::string>("summary", "");

  const CellBatch batch = sample_typical_cells(p, n, seed, opt);
  std::vector<double> vol;
  for (const auto& c : batch.cells) vol.push_back(simplex_volume(c));
  const SampleSummary sm = summarize(vol);
  const double expected = volume_moment(p, 1.0);

  Json j = header("sample-cells", seed);
  j["config"] = cfg.resolved;
  j["model"] = model_json(p);
  Json r;
  r["n"] = n;
  r["mean_volume"] = sm.mean;
  r["std_error"] = sm.std_error;
  r["closed_form_mean_volume"] = expected;
  r["z_score"] = sm.std_error > 0 ? (sm.mean - expected) / sm.std_error : 0.0;
  Json dj;
  dj["method"] = method_name(batch.diagnostics.method);
  dj["proposals"] = batch.diagnostics.proposals;
  dj["accepted"] = batch.diagnostics.accepted;
  dj["acceptance_rate"] = batch.diagnostics.acceptance_rate;
  if (batch.diagnostics.method == TupleMethod::Mcmc) {
    dj["burn_in"] = batch.diagnostics.burn_in;
    dj["thinning"] = batch.diagnostics.thinning;
    dj["lag1_autocorr"] = batch.diagnostics.lag1_autocorr;
    dj["integrated_autocorr"] = batch.diagnostics.integrated_autocorr;
    dj["converged"] = batch.diagnostics.converged;
  }
  r["diagnostics"] = dj;
  j["results"] = r;

  const std::string csv = export_csv(batch.cells);
  const std::string summary = j.dump(2) + "\n";
  if (out_path.empty()) out << csv;
  else write_file(out_path, csv);
  if (!summary_path.empty()) write_file(summary_path, summary);
  else if (!out_path.empty()) out << summary;
  else err << summary;
  return kOk;
}

int cmd_tessellate(Config& cfg, std::ostream& out, std::ostream&) {
  const ModelParams p = read_model(cfg);
  if (p.d != 3) throw ParameterError("tessellate supports d = 3 only");
  const std::uint64_t seed = cfg.get<std::uint64_t>("seed", default_seed());
  WindowConfig w;
  const auto box = cfg.get<std::vector<double>>("box", {0.0, 0.0, 10.0, 10.0});
  if (box.size() != 4) throw ParameterError("--box needs four numbers x0,y0,x1,y1");
  w.target_box.lo = Point(2);
  w.target_box.hi = Point(2);
  w.target_box.lo << box[0], box[1];
  w.target_box.hi << box[2], box[3];
  w.guard_margin = cfg.get<double>("guard", 0.0);
  w.h_max = cfg.get<double>("h_max", 0.0);
  w.eps = cfg.get<double>("eps", 0.0);
  w.h_depth = cfg.get<double>("h_depth", 0.0);
  w.r_max = cfg.get<double>("r_max", 0.0);
  w.void_tolerance = cfg.get<double>("void_tolerance", w.void_tolerance);
  w.deep_tolerance = cfg.get<double>("deep_tolerance", w.deep_tolerance);
  const std::string prefix = cfg.get<std::string>("prefix", "");
  const auto layer_names = cfg.get<std::vector<std::string>>("layers", {"delaunay", "voronoi", "sites"});
  RenderStyle style;
  style.canvas_width = cfg.get<double>("svg_width", style.canvas_width);
  std::set<Layer> layers;
  for (const auto& l : layer_names) {
    if (l == "delaunay") layers.insert(Layer::Delaunay);
    else if (l == "voronoi") layers.insert(Layer::Voronoi);
    else if (l == "sites") layers.insert(Layer::Sites);
    else throw ParameterError("unknown layer '" + l + "' (expected delaunay, voronoi or sites)");
  }

  const WindowConfig resolved = resolve_window(p, w);
  const TriangulationResult t = build_tessellation(p, resolved, seed);
  const NormalityAudit audit = audit_normality(t);
  const Box counting = default_counting_box(t);
  const FaceCounts fc = empirical_face_intensities(t, counting);
  const std::vector<int> cell_counts = empirical_cell_vertex_counts(t, counting);

  Json j = header("tessellate", seed);
  j["config"] = cfg.resolved;
  j["model"] = model_json(p);
  Json wj;
  wj["target_box"] = {resolved.target_box.lo(0), resolved.target_box.lo(1), resolved.target_box.hi(0),
                      resolved.target_box.hi(1)};
  wj["guard_margin"] = resolved.guard_margin;
  wj["h_max"] = resolved.h_max;
  wj["eps"] = resolved.eps;
  wj["h_depth"] = resolved.h_depth;
  wj["r_max"] = resolved.r_max;
  wj["void_tolerance"] = resolved.void_tolerance;
  wj["deep_tolerance"] = resolved.deep_tolerance;
  j["window"] = wj;
  Json sj;
  sj["sites"] = t.stats.n_sites;
  sj["simplices"] = t.stats.n_simplices;
  sj["interior_simplices"] = t.stats.n_interior;
  sj["boundary_fraction"] = t.stats.boundary_fraction;
  sj["empty_cells"] = t.empty_sites.size();
  sj["near_degenerate_apexes"] = t.stats.near_degenerate_apexes;
  sj["exact_predicates"] = t.stats.exact_predicates;
  sj["filtered_predicates"] = t.stats.filtered_predicates;
  sj["interior_coverage"] = interior_coverage(t);
  if (p.family == Family::BetaPrime) sj["deep_truncation_miss_bound"] = t.stats.deep_truncation_miss_bound;
  j["stats"] = sj;
  Json aj;
  aj["ok"] = audit.ok();
  aj["interior_vertices"] = audit.interior_vertices;
  aj["vertices_with_three_cells"] = audit.vertices_with_three_cells;
  aj["normal_fraction"] = audit.normal_fraction();
  aj["missing_neighbors"] = audit.missing_neighbors;
  aj["face_to_face_violations"] = audit.face_to_face_violations;
  aj["empty_paraboloid_violations"] = audit.empty_paraboloid_violations;
  aj["degenerate_sites"] = audit.degenerate_sites;
  j["normality_audit"] = aj;
  Json ij;
  ij["counting_area"] = fc.area;
  const std::int64_t counts[3] = {fc.vertices, fc.edges, fc.triangles};
  for (int k = 0; k < 3; ++k) {
    Json e;
    e["j"] = k;
    e["count"] = counts[k];
    e["empirical"] = fc.area > 0 ? counts[k] / fc.area : 0.0;
    e["closed_form"] = face_intensity(p.with_nu(0.0), k);
    ij["faces"].push_back(e);
  }
  ij["boundary_faces"] = fc.boundary_faces;
  double mean_vertices = 0.0;
  for (int c : cell_counts) mean_vertices += c;
  ij["closed_cells"] = cell_counts.size();
  ij["mean_cell_vertices"] = cell_counts.empty() ? 0.0 : mean_vertices / cell_counts.size();
  ij["closed_form_cell_vertices"] = voronoi_f_vector(p.with_nu(0.0), p.d);
  j["intensities"] = ij;

  if (!prefix.empty()) {
    write_file(prefix + ".svg", render_svg(t, style, layers));
    write_file(prefix + "_simplices.csv", export_csv(simplex_records(t)));
    write_file(prefix + "_cells.csv", export_csv(cell_records(t)));
    write_file(prefix + ".json", j.dump(2) + "\n");
  }
  out << j.dump(2) << "\n";
  return kOk;
}

int cmd_analytics(const std::string& what, Config& cfg, std::ostream& out) {
  const ModelParams p = read_model(cfg);
  const QuadratureConfig q = read_quadrature(cfg);
  Json j = header("analytics " + what, 0);
  j.erase("seed");
  Json results = Json::array();
  if (what == "moments") {
    for (double s : cfg.get<std::vector<double>>("s", {1.0})) {
      Json e;
      e["s"] = s;
      e["value"] = volume_moment(p, s);
      results.push_back(e);
    }
  } else if (what == "angle-sums") {
    std::vector<int> ks;
    for (int k = 1; k <= p.d; ++k) ks.push_back(k);
    for (int k : cfg.get<std::vector<int>>("k", ks)) {
      Json e;
      e["k"] = k;
      e["value"] = expected_angle_sum(p, k, q);
      results.push_back(e);
    }
  } else if (what == "intensities") {
    const double top = face_intensity(p, p.d - 1, q);
    for (int i = 0; i < p.d; ++i) {
      Json e;
      e["j"] = i;
      const double v = i == p.d - 1 ? top : face_intensity(p, i, q);
      e["value"] = v;
      e["ratio_to_top"] = v / top;
      results.push_back(e);
    }
  } else if (what == "f-vector") {
    for (int k = 1; k <= p.d; ++k) {
      Json e;
      e["k"] = k;
      e["face_dim"] = p.d - k;
      e["value"] = voronoi_f_vector(p, k, q);
      results.push_back(e);
    }
  }
  j["config"] = cfg.resolved;
  j["model"] = model_json(p);
  j["results"] = results;
  out << j.dump(2) << "\n";
  return kOk;
}

int cmd_verify(Config& cfg, std::ostream& out) {
  const std::string suite = cfg.get<std::string>("suite", "all");
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw ParameterError("unknown suite '" + suite + "' (expected moments, identities, limits, tessellation or all)");
  }
  SuiteOptions opt;
  opt.seed = cfg.get<std::uint64_t>("seed", default_seed());
  opt.n = cfg.get<std::int64_t>("n", opt.n);
  opt.verify.workers = cfg.get<int>("workers", 1);
  opt.verify.method = method_from_string(cfg.get<std::string>("method", "auto"));
  const std::string json_path = cfg.get<std::string>("json", "");
  const std::string csv_path = cfg.get<std::string>("csv", "");
  const std::string format = cfg.get<std::string>("format", "table");
  if (format != "table" && format != "json") throw ParameterError("--format must be table or json");

  const std::vector<MCReport> reports = run_suite(suite, opt);
  Json j = header("verify", opt.seed);
  j["config"] = cfg.resolved;
  Json counts;
  counts["pass"] = std::count_if(reports.begin(), reports.end(), [](const MCReport& r) { return r.verdict == Verdict::Pass; });
  counts["fail"] = std::count_if(reports.begin(), reports.end(), [](const MCReport& r) { return r.verdict == Verdict::Fail; });
  counts["inconclusive"] =
      std::count_if(reports.begin(), reports.end(), [](const MCReport& r) { return r.verdict == Verdict::Inconclusive; });
  j["summary"] = counts;
  j["reports"] = Json::parse(reports_to_json(reports));
  const std::string text = j.dump(2) + "\n";
  if (!json_path.empty()) write_file(json_path, text);
  if (!csv_path.empty()) write_file(csv_path, export_csv(reports));
  if (format == "json") out << text;
  else out << format_report_table(reports);
  return any_failed(reports) ? kStatisticalFailure : kOk;
}

// ---- option wiring ----------------------------------------------------------------------

template <class T>
void flag(CLI::App* app, const std::string& names, const std::string& key, Config& cfg, const std::string& help) {
  app->add_option_function<T>(names, [&cfg, key](const T& v) { cfg.flags[key] = v; }, help);
}

template <class T>
void list_flag(CLI::App* app, const std::string& names, const std::string& key, Config& cfg, const std::string& help) {
  app->add_option_function<std::vector<T>>(names, [&cfg, key](const std::vector<T>& v) { cfg.flags[key] = v; }, help)
      ->delimiter(',');
}

void model_flags(CLI::App* app, Config& cfg) {
  flag<std::string>(app, "--family", "family", cfg, "beta | beta-prime | classical");
  flag<int>(app, "--d", "d", cfg, "space-time dimension d (tessellation of R^{d-1})");
  flag<double>(app, "--beta", "beta", cfg, "shape parameter beta");
  flag<double>(app, "--nu", "nu", cfg, "cell weighting exponent nu >= -1");
  flag<double>(app, "--gamma", "gamma", cfg, "intensity gamma > 0");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  std::string config_path;
  std::string command;

  CLI::App app{"betadt: beta-Delaunay tessellations, typical cells and their closed forms"};
  app.set_version_flag("--version", BETADT_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", config_path, "JSON file with default option values; flags override it");
  flag<std::uint64_t>(&app, "--seed", "seed", cfg, "random seed (default: $BETADT_SEED or 1)");
  flag<int>(&app, "--workers", "workers", cfg, "worker threads; results do not depend on it");

  CLI::App* sample = app.add_subcommand("sample-cells", "sample typical cells (CSV) with a summary (JSON)");
  model_flags(sample, cfg);
  flag<std::int64_t>(sample, "-n,--samples", "n", cfg, "number of cells");
  flag<std::string>(sample, "--method", "method", cfg, "auto | rejection | mcmc");
  flag<std::string>(sample, "--out", "out", cfg, "CSV output path (default: stdout)");
  flag<std::string>(sample, "--summary", "summary", cfg, "summary JSON path");
  sample->callback([&] { command = "sample-cells"; });

  CLI::App* tess = app.add_subcommand("tessellate", "simulate a planar tessellation (d = 3)");
  model_flags(tess, cfg);
  list_flag<double>(tess, "--box", "box", cfg, "target window x0,y0,x1,y1");
  flag<double>(tess, "--guard", "guard", cfg, "guard margin around the window");
  flag<double>(tess, "--h-max", "h_max", cfg, "height cap (beta model)");
  flag<double>(tess, "--eps", "eps", cfg, "height truncation eps > 0 (beta-prime model, required)");
  flag<double>(tess, "--h-depth", "h_depth", cfg, "depth cap (beta-prime model)");
  flag<double>(tess, "--r-max", "r_max", cfg, "largest trusted paraboloid radius");
  flag<double>(tess, "--void-tol", "void_tolerance", cfg, "tail probability defining r_max");
  flag<double>(tess, "--deep-tol", "deep_tolerance", cfg, "beta-prime depth tolerance");
  flag<std::string>(tess, "--prefix", "prefix", cfg, "write PREFIX.svg, PREFIX_simplices.csv, PREFIX_cells.csv, PREFIX.json");
  list_flag<std::string>(tess, "--layers", "layers", cfg, "SVG layers: delaunay,voronoi,sites");
  flag<double>(tess, "--svg-width", "svg_width", cfg, "SVG canvas width");
  tess->callback([&] { command = "tessellate"; });

  CLI::App* ana = app.add_subcommand("analytics", "closed-form quantities");
  ana->require_subcommand(1);
  const std::pair<const char*, const char*> analytics_cmds[] = {
      {"moments", "E Vol^s of the typical cell"},
      {"angle-sums", "expected internal angle sums E sigma_k"},
      {"intensities", "face intensities gamma_j and cell intensity"},
      {"f-vector", "expected f-vector of the typical Voronoi cell"}};
  for (const auto& [name, help] : analytics_cmds) {
    CLI::App* sub = ana->add_subcommand(name, help);
    model_flags(sub, cfg);
    flag<double>(sub, "--rel-tol", "rel_tol", cfg, "quadrature relative tolerance");
    flag<double>(sub, "--truncation", "truncation", cfg, "outer integral half-width");
    if (std::string(name) == "moments") list_flag<double>(sub, "--s", "s", cfg, "moment orders");
    if (std::string(name) == "angle-sums") list_flag<int>(sub, "--k", "k", cfg, "face sizes k (vertices)");
    sub->callback([&command, name] { command = std::string("analytics ") + name; });
  }

  CLI::App* ver = app.add_subcommand("verify", "Monte Carlo verification suites");
  flag<std::string>(ver, "--suite", "suite", cfg, "moments | identities | limits | tessellation | all");
  flag<std::int64_t>(ver, "-n,--samples", "n", cfg, "samples per test (default 100000)");
  flag<std::string>(ver, "--method", "method", cfg, "auto | rejection | mcmc");
  flag<std::string>(ver, "--json", "json", cfg, "write the report JSON here");
  flag<std::string>(ver, "--csv", "csv", cfg, "write the report CSV here");
  flag<std::string>(ver, "--format", "format", cfg, "stdout format: table | json");
  ver->callback([&] { command = "verify"; });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    cfg.file = Json::object();
    if (!config_path.empty()) load_config_file(cfg, config_path);
    if (command == "sample-cells") return cmd_sample_cells(cfg, out, err);
    if (command == "tessellate") return cmd_tessellate(cfg, out, err);
    if (command == "verify") return cmd_verify(cfg, out);
    if (command.rfind("analytics ", 0) == 0) return cmd_analytics(command.substr(10), cfg, out);
    err << "error: no command given\n";
    return kUsageError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: bad configuration value: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {  // ParameterError
    err << "error: " << e.what() << "\n";
  } catch (const std::domain_error& e) {  // DomainError
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kUsageError;
}

}  // namespace betadt::cli
