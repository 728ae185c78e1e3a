#include "torus/special_functions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "torus/errors.hpp"

namespace torus {
namespace {

TEST(GammaLanczosTest, IntegersAreFactorials) {
  double factorial = 1.0;
  for (int n = 1; n <= 15; ++n) {
    EXPECT_NEAR(gamma_lanczos(n) / factorial, 1.0, 1e-13) << "n = " << n;
    factorial *= n;
  }
}

TEST(GammaLanczosTest, MatchesHighPrecisionValues) {
  // mpmath, 30 digits.
  EXPECT_NEAR(gamma_lanczos(0.25), 3.6256099082219083119, 1e-13);
  EXPECT_NEAR(gamma_lanczos(3.7), 4.1706517837966031654, 1e-13);
  EXPECT_NEAR(gamma_lanczos(0.5), std::sqrt(std::numbers::pi), 1e-14);
}

TEST(GammaLanczosTest, ReflectionBelowOneHalf) {
  EXPECT_NEAR(gamma_lanczos(-1.3), 3.3283470067886097069, 1e-12);
  EXPECT_NEAR(gamma_lanczos(-0.5), -2.0 * std::sqrt(std::numbers::pi), 1e-13);
}

TEST(GammaLanczosTest, PolesThrow) {
  EXPECT_THROW(gamma_lanczos(0.0), DomainError);
  EXPECT_THROW(gamma_lanczos(-3.0), DomainError);
}

TEST(HalfWidthConstantTest, MatchesPublishedValue) {
  EXPECT_NEAR(half_width_constant(), 1.31103, 1e-5);
  EXPECT_NEAR(half_width_constant(), 1.3110287771460599052, 1e-14);
}

}  // namespace
}  // namespace torus
