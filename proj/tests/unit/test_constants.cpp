#include <cmath>

#include <gtest/gtest.h>

#include "betadt/constants.hpp"
#include "betadt/errors.hpp"
#include "betadt/special.hpp"
#include "oracles.hpp"

using namespace betadt;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

// Values below were frozen from 30-digit evaluations.
TEST(IntensityConstant, FrozenBeta) {
  EXPECT_LT(rel(intensity_constant(ModelParams::beta_model(2, 0.0)), 0.31830988618379067), 1e-13);
  EXPECT_LT(rel(intensity_constant(ModelParams::beta_model(3, 0.0)), 0.238732414637843), 1e-13);
  EXPECT_LT(rel(intensity_constant(ModelParams::beta_model(3, 2.5)), 1.2969111506219235), 1e-13);
  EXPECT_LT(rel(intensity_constant(ModelParams::beta_model(4, 1.0)), 0.60792710185402663), 1e-13);
}

TEST(IntensityConstant, FrozenBetaPrime) {
  EXPECT_LT(rel(intensity_constant(ModelParams::beta_prime_model(3, 4.0)), 0.81056946913870217), 1e-13);
  EXPECT_LT(rel(intensity_constant(ModelParams::beta_prime_model(2, 3.0)), 0.63661977236758134), 1e-13);
  EXPECT_LT(rel(intensity_constant(ModelParams::beta_prime_model(4, 5.5)), 1.5958086423668199), 1e-13);
}

TEST(IntensityConstant, BetaDensityIntegratesToOne) {
  // c_{d,beta} normalizes (1 - |x|^2)^beta on the unit ball of R^d.
  for (int d : {2, 3, 5}) {
    for (double b : {0.0, 0.5, 3.0}) {
      boost::math::quadrature::tanh_sinh<double> ts;
      const double sphere = d * oracle::ball_volume(d);
      const double I = ts.integrate([&](double r) { return sphere * std::pow(r, d - 1) * std::pow(1 - r * r, b); }, 0.0, 1.0);
      EXPECT_NEAR(intensity_constant(ModelParams::beta_model(d, b)) * I, 1.0, 1e-12) << d << " " << b;
    }
  }
}

TEST(VoidRate, FrozenAndQuadrature) {
  EXPECT_LT(rel(void_rate(ModelParams::beta_model(3, 0.0)), 0.375), 1e-13);
  EXPECT_LT(rel(void_rate(ModelParams::beta_model(2, 0.0)), 0.42441318157838756), 1e-13);
  EXPECT_LT(rel(void_rate(ModelParams::beta_model(3, 2.0, 0.0, 2.5)), 0.68359375), 1e-13);
  EXPECT_LT(rel(void_rate(ModelParams::beta_prime_model(3, 4.0)), 0.42441318157838756), 1e-13);
  EXPECT_LT(rel(void_rate(ModelParams::beta_prime_model(4, 6.0, 0.0, 0.7)), 0.21875), 1e-13);
  for (double b : {0.0, 1.5, 4.0}) {
    EXPECT_LT(rel(void_rate(ModelParams::beta_model(4, b, 0.0, 1.3)), oracle::void_rate_quad(4, b, 1.3, 1)), 1e-9);
  }
  for (double b : {3.0, 5.5}) {
    EXPECT_LT(rel(void_rate(ModelParams::beta_prime_model(3, b)), oracle::void_rate_quad(3, b, 1.0, -1)), 1e-9);
  }
}

TEST(VoidRate, ClassicalIsTheLimitRate) {
  const double m_near = void_rate(ModelParams::beta_model(3, -1.0 + 1e-9));
  EXPECT_NEAR(void_rate(ModelParams::classical(3)), m_near, 1e-7);
}

TEST(DensityNorm, FrozenAlpha) {
  // Frozen with the radial and tuple integrals evaluated at 30 digits.
  EXPECT_LT(rel(density_norm_alpha(ModelParams::beta_model(3, 1.0, 0.0)), 0.30496227455300383), 1e-11);
  EXPECT_LT(rel(density_norm_alpha(ModelParams::beta_model(2, 0.0, 1.0)), 0.20264236728467554), 1e-11);
  EXPECT_LT(rel(density_norm_alpha(ModelParams::beta_model(4, 2.0, 1.0)), 8.7415006453073787), 1e-11);
  EXPECT_LT(rel(std::abs(density_norm_alpha(ModelParams::beta_prime_model(3, 4.0, 0.0))), 0.26399919829852724), 1e-11);
  EXPECT_LT(rel(std::abs(density_norm_alpha(ModelParams::beta_prime_model(3, 6.0, 1.0))), 16.959196999380705), 1e-11);
  EXPECT_LT(rel(std::abs(density_norm_alpha(ModelParams::beta_prime_model(2, 3.0, 0.0))), 0.5820090702389888), 1e-11);
}

TEST(TupleIntegral, MatchesDirectQuadrature) {
  // d=2, beta=1, nu=1: int int (x-y)^2 (1-x^2)(1-y^2) = 32/45.
  EXPECT_NEAR(std::exp(log_tuple_integral(ModelParams::beta_model(2, 1.0, 1.0), 1.0)), 32.0 / 45.0, 1e-13);
  EXPECT_NEAR(std::exp(log_tuple_integral(ModelParams::beta_model(2, 0.0), 0.0)), 8.0 / 3.0, 1e-13);
  for (int d : {2, 3, 4}) {
    for (double nu : {-1.0, 0.0, 1.5}) {
      const double a = std::exp(log_tuple_integral(ModelParams::beta_model(d, 1.0, nu), nu));
      EXPECT_LT(rel(a, oracle::tuple_integral(d, 1.0, nu, 1)), 1e-12);
      const double bp = std::exp(log_tuple_integral(ModelParams::beta_prime_model(d, 6.0, nu), nu));
      EXPECT_LT(rel(bp, oracle::tuple_integral(d, 6.0, nu, -1)), 1e-12);
    }
  }
}

TEST(Special, BallAndSphere) {
  EXPECT_NEAR(ball_volume(2), oracle::pi, 1e-15);
  EXPECT_NEAR(ball_volume(3), 4.0 * oracle::pi / 3.0, 1e-14);
  EXPECT_NEAR(sphere_surface(3), 4.0 * oracle::pi, 1e-14);
  EXPECT_NEAR(sphere_surface(1), 2.0, 1e-15);
  EXPECT_NEAR(std::exp(log_factorial(10)), 3628800.0, 1e-6);
}

TEST(Model, ValidationMessages) {
  EXPECT_THROW(ModelParams::beta_model(3, -1.0).validate(), ParameterError);
  EXPECT_THROW(ModelParams::beta_prime_model(3, 2.0).validate(), ParameterError);
  EXPECT_THROW(ModelParams::beta_prime_model(3, 4.0, 5.0).validate(), ParameterError);
  EXPECT_THROW(ModelParams::beta_model(3, 0.0, -1.5).validate(), ParameterError);
  EXPECT_THROW(ModelParams::beta_model(1, 0.0).validate(), ParameterError);
  EXPECT_NO_THROW(ModelParams::beta_prime_model(3, 2.01).validate());
  try {
    ModelParams::beta_prime_model(3, 1.0).validate();
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("beta > (d+1)/2"), std::string::npos);
  }
}
