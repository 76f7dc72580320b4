#include <cmath>

#include <gtest/gtest.h>

#include "betadt/random.hpp"
#include "betadt/samplers.hpp"
#include "betadt/stats.hpp"

using namespace betadt;

TEST(Summary, MeanAndStandardError) {
  const auto s = summarize({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.variance, 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.std_error, std::sqrt(5.0 / 12.0));
  EXPECT_EQ(s.n, 4);
}

TEST(Kolmogorov, SurvivalFunction) {
  EXPECT_NEAR(kolmogorov_survival(1.36), 0.0494, 5e-4);
  EXPECT_NEAR(kolmogorov_survival(1.63), 0.0098, 2e-4);
  EXPECT_NEAR(kolmogorov_survival(0.5), 0.9639, 1e-4);
  EXPECT_DOUBLE_EQ(kolmogorov_survival(0.0), 1.0);
  EXPECT_LT(kolmogorov_survival(5.0), 1e-20);
}

TEST(Kolmogorov, TwoSampleCalibration) {
  // Under the null, p-values below 0.05 should appear about 5% of the time.
  int rejections = 0;
  const int reps = 400;
  for (int r = 0; r < reps; ++r) {
    RandomStream s(5, r);
    std::vector<double> a(300), b(500);
    for (auto& x : a) x = sample_normal(s);
    for (auto& x : b) x = sample_normal(s);
    rejections += ks_two_sample(a, b).p_value < 0.05 ? 1 : 0;
  }
  EXPECT_GT(rejections, 5);
  EXPECT_LT(rejections, 40);
}

TEST(Kolmogorov, DetectsShift) {
  RandomStream s(6, 6);
  std::vector<double> a(2000), b(2000);
  for (auto& x : a) x = sample_normal(s);
  for (auto& x : b) x = sample_normal(s) + 0.2;
  const auto r = ks_two_sample(a, b);
  EXPECT_LT(r.p_value, 1e-4);
  EXPECT_GT(r.statistic, 0.05);
  EXPECT_DOUBLE_EQ(ks_two_sample({1, 2, 3}, {1, 2, 3}).statistic, 0.0);
}
