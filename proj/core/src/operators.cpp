#include "torus/operators.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <utility>

#include "torus/errors.hpp"

namespace torus {
namespace {

// (|dn| s + a) q^|dn| / (a^2-1)^(3/2) with s = sqrt(a^2-1), q = s - a.
double angular_coupling(int dn, double a) {
  const double s = std::sqrt(a * a - 1.0);
  const double q = -1.0 / (a + s);  // s - a without cancellation
  const int d = std::abs(dn);
  return (d * s + a) * std::pow(q, d) / ((a * a - 1.0) * s);
}

}  // namespace

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Hamiltonian:
      return "hamiltonian";
    case OperatorKind::ToroidalDipole:
      return "toroidal";
  }
  return "unknown";
}

void require_aspect_ratio(double a) {
  if (!std::isfinite(a) || !(a > 1.0)) {
    std::ostringstream msg;
    msg << "aspect ratio a = R/r must be > 1, got " << a;
    throw DomainError(msg.str());
  }
}

double angular_coefficient(double a) {
  require_aspect_ratio(a);
  return angular_coupling(0, a);
}

double hamiltonian_element(int n1, int n2, int m, double a) {
  require_aspect_ratio(a);
  const double mm = static_cast<double>(m) * m - 0.25;
  double value = angular_coupling(n1 - n2, a) * mm;
  if (n1 == n2) value += static_cast<double>(n1) * n1 - 0.25;
  return value;
}

double toroidal_element(int n1, int n2, double a) {
  require_aspect_ratio(a);
  double band = 0.0;
  switch (std::abs(n1 - n2)) {
    case 0:
      band = 2.5 * a;
      break;
    case 1:
      band = a * a + 1.0;
      break;
    case 2:
      band = 0.75 * a;
      break;
    default:
      return 0.0;
  }
  return -0.5 * (static_cast<double>(n1) + n2) * band;
}

double epsilon(int n, int m, double a) {
  return static_cast<double>(n) * n + angular_coefficient(a) * static_cast<double>(m) * m;
}

std::complex<double> basis_value(int n, int m, double a, double theta, double phi) {
  require_aspect_ratio(a);
  const double rho = 1.0 + std::cos(theta) / a;
  const std::complex<double> phase = std::polar(1.0, n * theta + m * phi);
  return phase / (2.0 * std::numbers::pi * std::sqrt(rho));
}

OperatorBlock::OperatorBlock(OperatorKind kind, int truncation, int m, double a,
                             DenseMatrix values)
    : kind_(kind), truncation_(truncation), m_(m), a_(a), values_(std::move(values)) {}

OperatorBlock assemble_block(OperatorKind kind, int truncation, int m, double a) {
  require_aspect_ratio(a);
  if (truncation < 0 || (truncation == 0 && kind == OperatorKind::ToroidalDipole)) {
    throw DomainError("assemble_block: truncation must be >= 1 (>= 0 for the Hamiltonian)");
  }
  const auto dim = static_cast<std::size_t>(2 * truncation + 1);
  DenseMatrix values(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const int n1 = static_cast<int>(i) - truncation;
    const std::size_t first = kind == OperatorKind::ToroidalDipole && i > 2 ? i - 2 : 0;
    for (std::size_t j = first; j <= i; ++j) {
      const int n2 = static_cast<int>(j) - truncation;
      const double v = kind == OperatorKind::Hamiltonian ? hamiltonian_element(n1, n2, m, a)
                                                         : toroidal_element(n1, n2, a);
      values(i, j) = v;
      values(j, i) = v;
    }
  }
  return OperatorBlock(kind, truncation, m, a, std::move(values));
}

}  // namespace torus
