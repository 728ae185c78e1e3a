#include "torus/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "torus/errors.hpp"

namespace torus {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double gamma_lanczos(double x) {
  if (!std::isfinite(x)) throw DomainError("gamma_lanczos: non-finite argument");
  if (x <= 0.0 && x == std::floor(x)) throw DomainError("gamma_lanczos: pole at non-positive integer");

  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_lanczos(1.0 - x));
  }

  const double y = x - 1.0;
  double series = kLanczosCoefficients[0];
  for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i)
    series += kLanczosCoefficients[i] / (y + static_cast<double>(i));
  const double t = y + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, y + 0.5) * std::exp(-t) * series;
}

double half_width_constant() {
  static const double value =
      gamma_lanczos(0.25) * gamma_lanczos(0.5) / (4.0 * gamma_lanczos(0.75));
  return value;
}

}  // namespace torus
