#pragma once

namespace torus {

// Gamma function by the Lanczos approximation (g = 7, nine coefficients),
// with reflection for x < 1/2. Relative accuracy is about 1e-15 on the
// positive axis. Throws DomainError at the poles (x = 0, -1, -2, ...).
double gamma_lanczos(double x);

// Gamma(1/4) Gamma(1/2) / (4 Gamma(3/4)) ~ 1.31103, the constant that sets
// the half-width of the natural coordinate u.
double half_width_constant();

}  // namespace torus
