#include "torus/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "torus/errors.hpp"
#include "torus/special_functions.hpp"

namespace torus {

TorusGeometry::TorusGeometry(double aspect_ratio, double major_radius)
    : a_(aspect_ratio), R_(major_radius) {
  if (!std::isfinite(a_) || !(a_ > 1.0)) {
    std::ostringstream msg;
    msg << "aspect ratio a = R/r must be > 1, got " << a_;
    throw DomainError(msg.str());
  }
  if (!std::isfinite(R_) || !(R_ > 0.0)) throw DomainError("major radius must be positive");
}

SurfacePoint torus_point(const TorusGeometry& geom, double theta) {
  if (!std::isfinite(theta)) throw DomainError("torus_point: theta must be finite");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double reduced = std::fmod(theta, two_pi);
  if (reduced < 0.0) reduced += two_pi;
  const double a = geom.aspect_ratio();
  return {reduced, 1.0 + std::cos(theta) / a, std::sin(theta) / a};
}

double k_of(double rho, double z) {
  if (!(rho >= 0.0)) throw DomainError("k_of: rho must be non-negative");
  return std::sqrt(std::sqrt(rho * rho * (z * z + rho * rho)));
}

double half_width_a(double k) {
  if (!(k > 0.0)) throw DomainError("half_width_a: k must be positive");
  return half_width_constant() / k;
}

namespace detail {

quad::AdaptiveResult u_integral(double k, double lo, double hi, double tol) {
  const double k4 = 4.0 * k * k * k * k;
  const double split = 10.0 * k;
  quad::AdaptiveResult total;

  if (lo < split) {
    const double top = std::min(hi, split);
    const auto near = quad::integrate_adaptive(
        [k4](double t) { return 1.0 / std::sqrt(t * t * t * t + k4); }, lo, top, tol);
    total.value += near.value;
    total.error_estimate += near.error_estimate;
    total.evaluations += near.evaluations;
  }
  if (hi > split) {
    // t = 1/s: dt / sqrt(t^4 + 4k^4) = ds / sqrt(1 + 4k^4 s^4)
    const double s_lo = std::isinf(hi) ? 0.0 : 1.0 / hi;
    const double s_hi = 1.0 / std::max(lo, split);
    const auto tail = quad::integrate_adaptive(
        [k4](double s) { return 1.0 / std::sqrt(1.0 + k4 * s * s * s * s); }, s_lo, s_hi, tol);
    total.value += tail.value;
    total.error_estimate += tail.error_estimate;
    total.evaluations += tail.evaluations;
  }
  return total;
}

}  // namespace detail

double natural_u(double k, double z, double tol) {
  if (!(k > 0.0)) throw DomainError("natural_u: k must be positive");
  if (!(tol > 0.0 && tol <= 1e-3)) throw DomainError("natural_u: tol must lie in (0, 1e-3]");
  if (std::isnan(z)) throw DomainError("natural_u: z is NaN");
  if (z == 0.0) return 0.0;
  const double magnitude = detail::u_integral(k, 0.0, std::abs(z), tol).value;
  return z > 0.0 ? -magnitude : magnitude;
}

NaturalCoords natural_coords(double rho, double z, double tol) {
  const double k = k_of(rho, z);
  if (!(k > 0.0)) throw DomainError("natural_coords: k = 0 on the axis; u is undefined");
  return {k, natural_u(k, z, tol)};
}

}  // namespace torus
