#include <cmath>
#include <set>

#include <boost/math/special_functions/digamma.hpp>
#include <gtest/gtest.h>

#include "betadt/constants.hpp"
#include "betadt/errors.hpp"
#include "betadt/samplers.hpp"
#include "betadt/stats.hpp"
#include "oracles.hpp"

using namespace betadt;

namespace {

template <class F>
SampleSummary draw(int n, std::uint64_t seed, F f) {
  RandomStream s(seed, 99);
  std::vector<double> x(n);
  for (auto& v : x) v = f(s);
  return summarize(x);
}

void expect_mean(const SampleSummary& m, double expected, double z = 4.0) {
  EXPECT_LT(std::abs(m.mean - expected), z * m.std_error) << "mean " << m.mean << " expected " << expected;
}

}  // namespace

TEST(RandomStream, DeterministicAndKeyed) {
  RandomStream a(7, 1), b(7, 1), c(7, 2), d(8, 1);
  std::set<std::uint64_t> firsts;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    if (i == 0) {
      firsts.insert(x);
      firsts.insert(c());
      firsts.insert(d());
    }
  }
  EXPECT_EQ(firsts.size(), 3u);
  RandomStream u(1, 0);
  for (int i = 0; i < 100000; ++i) {
    const double v = u.uniform();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
  EXPECT_NE(a.substream(1)(), a.substream(2)());
}

TEST(Primitive, GammaMoments) {
  for (double shape : {0.3, 1.0, 4.5}) {
    expect_mean(draw(100000, 1, [&](RandomStream& s) { return sample_gamma(shape, 2.0, s); }), shape / 2.0);
  }
}

TEST(Primitive, LogGammaSmallShape) {
  for (double shape : {1e-3, 0.05, 2.0}) {
    expect_mean(draw(100000, 2, [&](RandomStream& s) { return sample_log_gamma(shape, s); }),
                boost::math::digamma(shape));
  }
}

TEST(Primitive, BetaAndBetaPrime) {
  expect_mean(draw(100000, 3, [](RandomStream& s) { return sample_beta_rv(2.5, 0.7, s); }), 2.5 / 3.2);
  expect_mean(draw(100000, 4, [](RandomStream& s) { return sample_beta_prime_rv(1.5, 6.0, s); }), 1.5 / 5.0);
  expect_mean(draw(100000, 5, [](RandomStream& s) { return sample_normal(s) * sample_normal(s); }), 0.0);
}

TEST(Points, SphereBallAndBetaPrime) {
  for (int q : {1, 2, 4}) {
    RandomStream s(6, q);
    for (int i = 0; i < 100; ++i) EXPECT_NEAR(sample_sphere_point(q, s).norm(), 1.0, 1e-12);
    for (double b : {0.0, 2.0}) {
      // |X|^2 ~ Beta(q/2, beta + 1).
      expect_mean(draw(50000, 7 + q, [&](RandomStream& r) { return sample_beta_ball_point(q, b, r).squaredNorm(); }),
                  q / (q + 2.0 * b + 2.0));
    }
    // |X|^2 ~ BetaPrime(q/2, beta - q/2).
    const double b = 0.5 * q + 3.0;
    expect_mean(draw(50000, 11 + q, [&](RandomStream& r) { return sample_beta_prime_point(q, b, r).squaredNorm(); }),
                0.5 * q / (b - 0.5 * q - 1.0));
  }
}

TEST(Radius, GammaLaw) {
  for (const auto& p : {ModelParams::beta_model(3, 0.0), ModelParams::beta_model(4, 2.0, 1.0, 2.0),
                        ModelParams::beta_prime_model(3, 4.0), ModelParams::classical(3)}) {
    const double m = void_rate(p), q = radial_exponent(p);
    const auto z = draw(100000, 13, [&](RandomStream& s) { return m * std::pow(sample_radius(p, s), q); });
    expect_mean(z, radial_gamma_shape(p));
  }
}

TEST(WeightedTuple, DeltaMomentsMatchMiles) {
  struct Case {
    ModelParams p;
    double s;
  };
  for (const Case& c : {Case{ModelParams::beta_model(3, 0.0, 0.0), 1.0}, Case{ModelParams::beta_model(3, 2.0, 1.0), 1.0},
                        Case{ModelParams::beta_model(4, 1.0, -1.0), 1.0}, Case{ModelParams::beta_model(2, 0.0, 3.0), 2.0},
                        Case{ModelParams::beta_prime_model(3, 5.0, 0.0), 1.0},
                        Case{ModelParams::beta_prime_model(4, 8.0, 1.0), 1.0}}) {
    const auto& p = c.p;
    const int kappa = p.kappa();
    const double expected = oracle::tuple_integral(p.d, p.beta, p.nu + c.s, kappa) /
                            oracle::tuple_integral(p.d, p.beta, p.nu, kappa);
    const auto m = draw(20000, 17, [&](RandomStream& s) {
      return std::pow(oracle::simplex_volume(sample_weighted_tuple(p, s).points), c.s);
    });
    expect_mean(m, expected);
  }
}

TEST(WeightedTuple, ClassicalPointsOnSphere) {
  RandomStream s(3, 3);
  const auto t = sample_weighted_tuple(ModelParams::classical(3, 1.0), s);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(t.points.col(j).norm(), 1.0, 1e-12);
}

TEST(WeightedTuple, McmcAgreesWithClosedForm) {
  const ModelParams p = ModelParams::beta_model(3, 1.0, 2.0);
  const double expected = oracle::tuple_integral(3, 1.0, 3.0, 1) / oracle::tuple_integral(3, 1.0, 2.0, 1);
  McmcTupleSampler chain(p, RandomStream(21, streams::kMcmc));
  std::vector<double> x(20000);
  for (auto& v : x) v = oracle::simplex_volume(chain.next().points);
  const auto m = summarize(x);
  const auto& diag = chain.diagnostics();
  EXPECT_TRUE(diag.converged);
  EXPECT_GT(diag.acceptance_rate, 0.05);
  const double se = m.std_error * std::sqrt(std::max(1.0, diag.integrated_autocorr));
  EXPECT_LT(std::abs(m.mean - expected), 5.0 * se) << m.mean << " vs " << expected;
}

TEST(TypicalCells, WorkerCountInvariant) {
  const ModelParams p = ModelParams::beta_model(3, 1.0, 0.0);
  CellSamplingOptions one, four;
  four.workers = 4;
  const auto a = sample_typical_cells(p, 2000, 5, one);
  const auto b = sample_typical_cells(p, 2000, 5, four);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) ASSERT_TRUE(a.cells[i].vertices == b.cells[i].vertices);
}

TEST(TypicalCells, MeanAreaAgainstFrozenMoment) {
  const auto batch = sample_typical_cells(ModelParams::beta_model(3, 0.0, 0.0), 40000, 9);
  std::vector<double> v;
  for (const auto& c : batch.cells) v.push_back(oracle::simplex_volume(c.vertices));
  expect_mean(summarize(v), 0.99236743482276708);
}

TEST(GaussianLimit, MeanVolume) {
  for (double nu : {-1.0, 0.0, 2.0}) {
    expect_mean(draw(40000, 23, [&](RandomStream& s) {
                  return oracle::simplex_volume(sample_gaussian_limit_simplex(3, nu, s).vertices);
                }),
                oracle::gaussian_moment(3, nu, 1.0));
  }
  EXPECT_NEAR(oracle::gaussian_moment(3, -1.0, 1.0), std::sqrt(3.0) / 2.0, 1e-14);
  EXPECT_NEAR(oracle::gaussian_moment(3, 0.0, 1.0), std::sqrt(3.0), 1e-14);
}

TEST(Poisson, MeanCounts) {
  const Box box = Box::square(0.0, 3.0);
  const ModelParams b = ModelParams::beta_model(3, 1.5, 0.0, 2.0);
  const HeightRange hr{0.5, 4.0};
  const double expected = 2.0 * oracle::c_beta(3, 1.5) * 9.0 * (std::pow(4.0, 2.5) - std::pow(0.5, 2.5)) / 2.5;
  EXPECT_NEAR(poisson_mean_count(b, box, hr), expected, 1e-10 * expected);
  const auto counts = draw(2000, 31, [&](RandomStream& s) {
    const auto sites = sample_poisson_process(b, box, hr, s);
    for (const auto& site : sites) {
      if (site.h < hr.lo || site.h > hr.hi || !box.contains(site.v)) return -1.0;
    }
    return static_cast<double>(sites.size());
  });
  expect_mean(counts, expected);
}

TEST(Poisson, BetaPrimeHeightsAndPrefix) {
  const ModelParams p = ModelParams::beta_prime_model(3, 4.0);
  const Box box = Box::square(0.0, 5.0);
  const double mean = poisson_mean_count(p, box, HeightRange{-10.0, -0.2});
  const auto counts = draw(2000, 37, [&](RandomStream& s) {
    return static_cast<double>(sample_beta_prime_sites_by_depth(p, box, 10.0, 0.2, s).size());
  });
  expect_mean(counts, mean);

  // Lowering the stop depth only appends shallower sites.
  RandomStream s1(41, 1), s2(41, 1);
  const auto a = sample_beta_prime_sites_by_depth(p, box, 10.0, 0.5, s1);
  const auto b = sample_beta_prime_sites_by_depth(p, box, 10.0, 0.05, s2);
  ASSERT_GT(b.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].h, b[i].h);
    EXPECT_TRUE(a[i].v == b[i].v);
  }
  for (std::size_t i = a.size(); i < b.size(); ++i) EXPECT_GT(b[i].h, -0.5);
}

TEST(Poisson, RejectsBadRanges) {
  RandomStream s(1, 1);
  EXPECT_THROW(sample_poisson_process(ModelParams::beta_prime_model(3, 4.0), Box::square(0, 1), HeightRange{-1.0, 0.0}, s),
               std::exception);
  EXPECT_THROW(sample_poisson_process(ModelParams::beta_model(3, 0.0), Box::cube(3, 0, 1), HeightRange{0.0, 1.0}, s),
               std::exception);
}
