#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace torus::quad {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Computed by Newton iteration on P_n; cached per order. order >= 1.
const GaussLegendreRule& gauss_legendre(std::size_t order);

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

// Adaptive Gauss-Legendre with interval bisection. A panel is accepted when
// the single-panel and two-half-panel estimates agree to
// rel_tol * max(|panel|, abs_floor, |total| * width / (hi - lo)). Throws NumericError (carrying the
// achieved error) if max_depth is exhausted.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double lo,
                                  double hi, double rel_tol, double abs_floor = 1e-300,
                                  std::size_t order = 16, std::size_t max_depth = 40);

// Composite Gauss-Legendre over [lo, hi) split into equal panels.
std::complex<double> integrate_panels(
    const std::function<std::complex<double>(double)>& f, double lo, double hi,
    std::size_t panels, std::size_t order);

}  // namespace torus::quad
