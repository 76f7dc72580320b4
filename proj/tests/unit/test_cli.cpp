#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "commands.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = betadt::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("betadt_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, VersionAndHelp) {
  const auto v = run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find(BETADT_VERSION), std::string::npos);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST(Cli, SampleCellsIsDeterministic) {
  const auto a = run({"sample-cells", "--d", "3", "--beta", "1", "-n", "1000", "--seed", "5"});
  const auto b = run({"--workers", "4", "sample-cells", "--d", "3", "--beta", "1", "-n", "1000", "--seed", "5"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 1001);
  EXPECT_NE(a.out, run({"sample-cells", "--d", "3", "--beta", "1", "-n", "1000", "--seed", "6"}).out);
}

TEST(Cli, SampleCellsSummary) {
  const auto dir = temp_dir("summary");
  const auto r = run({"sample-cells", "--family", "beta-prime", "--beta", "5", "-n", "2000", "--out",
                      (dir / "cells.csv").string(), "--summary", (dir / "s.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(slurp(dir / "s.json"));
  EXPECT_EQ(j["config"]["family"], "beta-prime");
  EXPECT_EQ(j["results"]["n"], 2000);
  const double z = (j["results"]["mean_volume"].get<double>() - j["results"]["closed_form_mean_volume"].get<double>()) /
                   j["results"]["std_error"].get<double>();
  EXPECT_LT(std::abs(z), 4.0);
  EXPECT_TRUE(fs::exists(dir / "cells.csv"));
}

TEST(Cli, ParameterErrorsExitWithUsageCode) {
  const auto bp = run({"sample-cells", "--family", "beta-prime", "--beta", "1", "-n", "10"});
  EXPECT_EQ(bp.code, 2);
  EXPECT_NE(bp.err.find("beta-prime requires beta > (d+1)/2"), std::string::npos);
  const auto eps = run({"tessellate", "--family", "beta-prime", "--beta", "4"});
  EXPECT_EQ(eps.code, 2);
  EXPECT_NE(eps.err.find("eps"), std::string::npos);
  EXPECT_EQ(run({"sample-cells", "--family", "gaussian"}).code, 2);
  EXPECT_EQ(run({"tessellate", "--d", "4"}).code, 2);
  EXPECT_EQ(run({"verify", "--suite", "nope"}).code, 2);
  EXPECT_EQ(run({"sample-cells", "-n", "ten"}).code, 2);
}

TEST(Cli, SeedFromEnvironment) {
  ::setenv("BETADT_SEED", "5", 1);
  const auto env = run({"sample-cells", "--d", "3", "--beta", "1", "-n", "50"});
  ::setenv("BETADT_SEED", "not-a-number", 1);
  const auto bad = run({"sample-cells", "-n", "5"});
  ::unsetenv("BETADT_SEED");
  EXPECT_EQ(env.out, run({"sample-cells", "--d", "3", "--beta", "1", "-n", "50", "--seed", "5"}).out);
  EXPECT_EQ(bad.code, 2);
}

TEST(Cli, ConfigFile) {
  const auto dir = temp_dir("config");
  {
    std::ofstream(dir / "c.json") << R"({"family": "beta", "beta": 2.0, "n": 20, "seed": 9})";
    std::ofstream(dir / "bad.json") << R"({"betta": 2.0})";
    std::ofstream(dir / "broken.json") << "{";
  }
  const auto a = run({"--config", (dir / "c.json").string(), "sample-cells"});
  const auto b = run({"sample-cells", "--beta", "2", "-n", "20", "--seed", "9"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  // Flags override the file.
  const auto c = run({"--config", (dir / "c.json").string(), "sample-cells", "-n", "3"});
  EXPECT_EQ(std::count(c.out.begin(), c.out.end(), '\n'), 4);
  EXPECT_EQ(run({"--config", (dir / "bad.json").string(), "sample-cells"}).code, 2);
  EXPECT_EQ(run({"--config", (dir / "broken.json").string(), "sample-cells"}).code, 2);
  EXPECT_EQ(run({"--config", (dir / "missing.json").string(), "sample-cells"}).code, 2);
}

TEST(Cli, Tessellate) {
  const auto dir = temp_dir("tess");
  const std::string prefix = (dir / "run").string();
  const auto r = run({"tessellate", "--beta", "1", "--box", "0,0,5,5", "--seed", "3", "--prefix", prefix});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["normality_audit"]["ok"].get<bool>());
  EXPECT_GT(j["stats"]["simplices"].get<int>(), 0);
  for (const char* f : {"run.svg", "run_simplices.csv", "run_cells.csv", "run.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_EQ(slurp(dir / "run.json"), r.out);
  const auto again = run({"tessellate", "--beta", "1", "--box", "0,0,5,5", "--seed", "3"});
  EXPECT_EQ(json::parse(again.out)["stats"], j["stats"]);
  const auto bp = run({"tessellate", "--family", "beta-prime", "--beta", "6", "--eps", "0.5", "--box", "0,0,3,3"});
  EXPECT_EQ(bp.code, 0) << bp.err;
}

TEST(Cli, Analytics) {
  const auto a = run({"analytics", "angle-sums", "--d", "4", "--beta", "20", "--k", "1"});
  ASSERT_EQ(a.code, 0);
  EXPECT_NEAR(json::parse(a.out)["results"][0]["value"].get<double>(), 0.17419730845909884, 1e-12);
  const auto m = run({"analytics", "moments", "--d", "3", "--beta", "0", "--s", "0,1"});
  const auto mj = json::parse(m.out);
  EXPECT_DOUBLE_EQ(mj["results"][0]["value"].get<double>(), 1.0);
  EXPECT_NEAR(mj["results"][1]["value"].get<double>(), 0.99236743482276708, 1e-12);
  const auto f = json::parse(run({"analytics", "f-vector", "--d", "3"}).out);
  EXPECT_NEAR(f["results"][2]["value"].get<double>(), 6.0, 1e-9);
  const auto i = run({"analytics", "intensities", "--d", "3", "--beta", "2"});
  EXPECT_EQ(i.code, 0);
  EXPECT_EQ(run({"analytics"}).code, 2);
}

TEST(Cli, Verify) {
  const auto dir = temp_dir("verify");
  const auto r = run({"verify", "--suite", "limits", "-n", "2000", "--format", "json", "--csv",
                      (dir / "r.csv").string()});
  EXPECT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["summary"]["fail"], 0);
  EXPECT_TRUE(fs::exists(dir / "r.csv"));
  const auto table = run({"verify", "--suite", "limits", "-n", "2000"});
  EXPECT_NE(table.out.find("PASS"), std::string::npos);
}
