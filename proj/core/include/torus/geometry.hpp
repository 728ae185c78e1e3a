#pragma once

#include <cmath>

#include "torus/quadrature.hpp"

namespace torus {

// Torus with major radius R and minor radius r; a = R / r > 1.
// All coordinates below are measured in units of R.
class TorusGeometry {
 public:
  // Throws DomainError unless a > 1 and R > 0 (both finite).
  explicit TorusGeometry(double aspect_ratio, double major_radius = 1.0);

  double aspect_ratio() const noexcept { return a_; }
  double major_radius() const noexcept { return R_; }
  double minor_radius() const noexcept { return R_ / a_; }

 private:
  double a_;
  double R_;
};

// A point on the generating circle, (rho, z) in units of R.
struct SurfacePoint {
  double theta = 0.0;  // reduced to [0, 2pi)
  double rho = 0.0;
  double z = 0.0;
};

SurfacePoint torus_point(const TorusGeometry& geom, double theta);

// rho(theta) / R = 1 + cos(theta) / a, without re-validating a.
inline double reduced_rho(double a, double theta) { return 1.0 + std::cos(theta) / a; }

// k = (rho^2 (z^2 + rho^2))^(1/4). Throws DomainError for rho < 0.
double k_of(double rho, double z);

// Half-width of the u range at fixed k, in units of 10 m_p: C_a / k.
double half_width_a(double k);

// u(k, z) / (10 m_p) = -int_0^z dt / sqrt(t^4 + 4 k^4).
// Beyond |t| = 10 k the integral runs in s = 1/t so the infinite tail is a
// proper integral; z may be +-infinity.
double natural_u(double k, double z, double tol = 1e-12);

// Natural coordinates of a point in the (rho, z) half-plane.
struct NaturalCoords {
  double k = 0.0;
  double u = 0.0;  // units of 10 m_p
};

NaturalCoords natural_coords(double rho, double z, double tol = 1e-12);

// Shared integrand of the u integral, exposed for the quadrature oracle.
namespace detail {
// int_lo^hi dt / sqrt(t^4 + 4k^4) for 0 <= lo <= hi <= inf, with the
// reciprocal substitution beyond 10k.
quad::AdaptiveResult u_integral(double k, double lo, double hi, double tol);
}  // namespace detail

}  // namespace torus
