#include <cmath>

#include <gtest/gtest.h>

#include "betadt/errors.hpp"
#include "betadt/render.hpp"
#include "betadt/verify.hpp"

using namespace betadt;

namespace {

void expect_all_pass(const std::vector<MCReport>& reports) {
  for (const auto& r : reports) EXPECT_EQ(r.verdict, Verdict::Pass) << r.quantity << " " << r.params << " z=" << r.z_score;
}

}  // namespace

TEST(MomentTest, PassesAndReportsZ) {
  const auto r = moment_test(ModelParams::beta_model(3, 1.0, 0.0), 1.0, 20000, 3);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  ASSERT_TRUE(r.closed_form.has_value());
  EXPECT_NEAR(r.z_score, (r.estimate - *r.closed_form) / r.std_error, 1e-12);
  EXPECT_EQ(r.n_samples, 20000);
  EXPECT_THROW(moment_test(ModelParams::beta_prime_model(3, 4.0), 3.0, 100, 1), std::exception);
}

TEST(MomentTest, ZeroMomentIsExact) {
  const auto r = moment_test(ModelParams::beta_model(3, 2.0), 0.0, 1000, 1);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_EQ(r.estimate, 1.0);
}

TEST(AngleSumTest, TetrahedronVertexSum) {
  expect_all_pass({angle_sum_test(ModelParams::beta_model(4, 1.0), 1, 1000, 1000, 5)});
}

TEST(IdentityTests, FactorizationAndHigherDimension) {
  const auto f = identity_test_factorization(ModelParams::beta_model(3, 0.0, 0.0), {0.5, 1.0, 2.0}, 20000, 7);
  ASSERT_EQ(f.size(), 4u);
  expect_all_pass(f);
  EXPECT_TRUE(f.back().p_value.has_value());
  const auto h = identity_test_higher_dim(ModelParams::beta_model(3, 1.0, 1.0), 20000, 8);
  ASSERT_EQ(h.size(), 2u);
  expect_all_pass(h);
  EXPECT_THROW(identity_test_higher_dim(ModelParams::beta_model(3, 1.0, 0.5), 100, 8), std::exception);
}

TEST(LimitTests, ClassicalAndGaussian) {
  expect_all_pass(limit_test_classical(ModelParams::beta_model(3, -0.999, 0.0), 1.0, 20000, 9));
  const auto g = limit_test_gaussian(3, 0.0, {10.0, 1000.0}, 20000, 10);
  ASSERT_EQ(g.size(), 4u);  // sampler check, one per beta, trend
  expect_all_pass(g);
  EXPECT_NEAR(gaussian_limit_moment(3, 0.0, 1.0), std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(gaussian_limit_moment(3, -1.0, 1.0), std::sqrt(3.0) / 2.0, 1e-14);
}

TEST(TessellationTest, SmallRun) {
  WindowConfig w;
  w.target_box = Box::square(0.0, 10.0);
  const auto r = tessellation_vs_theory(ModelParams::beta_model(3, 1.0), w, 4, 11);
  EXPECT_EQ(r.size(), 8u);
  expect_all_pass(r);
  EXPECT_THROW(tessellation_vs_theory(ModelParams::beta_model(3, 1.0), w, 1, 11), ParameterError);
}

TEST(Suites, NamesAndErrors) {
  EXPECT_EQ(suite_names().size(), 5u);
  SuiteOptions o;
  o.n = 100;
  EXPECT_THROW(run_suite("nope", o), ParameterError);
}

TEST(Suites, WorkerCountDoesNotChangeResults) {
  SuiteOptions a;
  a.n = 2000;
  a.seed = 17;
  SuiteOptions b = a;
  b.verify.workers = 3;
  EXPECT_EQ(reports_to_json(run_suite("identities", a)), reports_to_json(run_suite("identities", b)));
}

TEST(Reports, TableAndFailureFlag) {
  MCReport pass;
  pass.verdict = Verdict::Pass;
  MCReport fail = pass;
  fail.verdict = Verdict::Fail;
  EXPECT_FALSE(any_failed({pass}));
  EXPECT_TRUE(any_failed({pass, fail}));
  EXPECT_NE(format_report_table({pass, fail}).find("1 pass, 1 fail"), std::string::npos);
  EXPECT_STREQ(to_string(Verdict::Inconclusive), "INCONCLUSIVE");
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(5, 2), derive_seed(5, 2));
}
