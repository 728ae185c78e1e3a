#include "torus/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <utility>

#include "torus/errors.hpp"

namespace torus::quad {
namespace {

// (P_n(x), P_n'(x)) by the three-term recurrence.
std::pair<double, double> legendre(std::size_t order, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (std::size_t k = 2; k <= order; ++k) {
    const auto kk = static_cast<double>(k);
    const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
    p0 = p1;
    p1 = p2;
  }
  const auto n = static_cast<double>(order);
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

GaussLegendreRule build_rule(std::size_t order) {
  GaussLegendreRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const auto n = static_cast<double>(order);
  for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(order, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(order, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[order - 1 - i] = x;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

double panel(const std::function<double(double)>& f, double lo, double hi,
             const GaussLegendreRule& rule) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(std::size_t order) {
  if (order == 0) throw DomainError("gauss_legendre: order must be positive");
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(build_rule(order));
  return *slot;
}

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double lo,
                                  double hi, double rel_tol, double abs_floor,
                                  std::size_t order, std::size_t max_depth) {
  const auto& rule = gauss_legendre(order);
  AdaptiveResult result;
  if (lo == hi) return result;

  struct Interval {
    double lo, hi, whole;
    std::size_t depth;
  };
  std::vector<Interval> stack;
  const double coarse = panel(f, lo, hi, rule);
  stack.push_back({lo, hi, coarse, 0});
  result.evaluations = order;
  // Panels whose contribution is negligible against the whole integral are
  // accepted on a width-weighted share of the global tolerance.
  const double span = std::abs(hi - lo);
  double scale = std::abs(coarse);

  double worst = 0.0;
  bool failed = false;
  while (!stack.empty()) {
    const Interval iv = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (iv.lo + iv.hi);
    const double left = panel(f, iv.lo, mid, rule);
    const double right = panel(f, mid, iv.hi, rule);
    result.evaluations += 2 * order;
    const double refined = left + right;
    const double diff = std::abs(refined - iv.whole);
    if (iv.depth == 0) scale = std::abs(refined);
    const double share = scale * std::abs(iv.hi - iv.lo) / span;
    const double tol = std::max(rel_tol * std::max({std::abs(refined), abs_floor, share}),
                                8.0 * std::numeric_limits<double>::epsilon() * scale);
    if (diff <= tol || iv.depth + 1 >= max_depth) {
      if (diff > tol) {
        failed = true;
        worst = std::max(worst, diff);
      }
      result.value += refined;
      result.error_estimate += diff;
      continue;
    }
    stack.push_back({mid, iv.hi, right, iv.depth + 1});
    stack.push_back({iv.lo, mid, left, iv.depth + 1});
  }

  if (failed) {
    std::ostringstream msg;
    msg << "integrate_adaptive: no convergence on [" << lo << ", " << hi
        << "], achieved error " << result.error_estimate;
    throw NumericError(msg.str(), result.error_estimate);
  }
  return result;
}

std::complex<double> integrate_panels(const std::function<std::complex<double>(double)>& f,
                                      double lo, double hi, std::size_t panels,
                                      std::size_t order) {
  const auto& rule = gauss_legendre(order);
  const double width = (hi - lo) / static_cast<double>(panels);
  std::complex<double> acc = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = lo + width * static_cast<double>(p);
    const double mid = a + 0.5 * width;
    std::complex<double> part = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      part += rule.weights[i] * f(mid + 0.5 * width * rule.nodes[i]);
    acc += part;
  }
  return acc * (0.5 * width);
}

}  // namespace torus::quad
