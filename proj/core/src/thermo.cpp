#include "torus/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "torus/errors.hpp"
#include "torus/quadrature.hpp"

namespace torus {
namespace {

constexpr double kCutoffExponent = 40.0;

// ln(1 + e^{-x}) without overflow for x << 0.
double log1p_exp_neg(double x) {
  if (x >= 0.0) return std::log1p(std::exp(-x));
  return -x + std::log1p(std::exp(x));
}

// Occupation 1/(e^x +- 1).
double occupation(Statistics stats, double x) {
  if (stats == Statistics::Bose) return 1.0 / std::expm1(x);
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

// Signed ln Z contribution of a single level.
double level_log_z(Statistics stats, double x) {
  if (stats == Statistics::Bose) return -std::log(-std::expm1(-x));
  return log1p_exp_neg(x);
}

template <typename Term>
double shell_sum(int cutoff_n, int cutoff_m, double a, Term term) {
  double total = 0.0;
  for (int m = -cutoff_m; m <= cutoff_m; ++m) {
    for (int n = -cutoff_n; n <= cutoff_n; ++n) total += term(epsilon(n, m, a));
  }
  return total;
}

// Sum over the first excluded shell: |n| = cutoff_n + 1 or |m| = cutoff_m + 1.
template <typename Term>
double tail_sum(int cutoff_n, int cutoff_m, double a, Term term) {
  const int nn = cutoff_n + 1;
  const int mm = cutoff_m + 1;
  double total = 0.0;
  for (int m = -mm; m <= mm; ++m) total += 2.0 * term(epsilon(nn, m, a));
  for (int n = -cutoff_n; n <= cutoff_n; ++n) total += 2.0 * term(epsilon(n, mm, a));
  return total;
}

}  // namespace

std::pair<int, int> default_cutoffs(double beta, double mu, double a) {
  require_aspect_ratio(a);
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and > 0");
  const double reach = std::max(mu, 0.0) + kCutoffExponent / beta;
  const double c = angular_coefficient(a);
  return {static_cast<int>(std::ceil(std::sqrt(reach))),
          static_cast<int>(std::ceil(std::sqrt(reach / c)))};
}

ThermoState make_state(Statistics stats, double beta, double mu, double a) {
  const auto [cn, cm] = default_cutoffs(beta, mu, a);
  ThermoState s{stats, beta, mu, cn, cm};
  validate(s, a);
  return s;
}

void validate(const ThermoState& state, double a) {
  require_aspect_ratio(a);
  if (!(state.beta > 0.0) || !std::isfinite(state.beta)) {
    throw DomainError("beta must be finite and > 0");
  }
  if (!std::isfinite(state.mu)) throw DomainError("mu must be finite");
  if (state.stats == Statistics::Bose && !(state.mu < 0.0)) {
    std::ostringstream msg;
    msg << "Bose statistics requires mu < 0 (lowest level is 0), got mu = " << state.mu;
    throw DomainError(msg.str());
  }
  if (state.cutoff_n < 0 || state.cutoff_m < 0) throw DomainError("cutoffs must be >= 0");
}

LogZ grand_potential_log(const ThermoState& state, double a) {
  validate(state, a);
  auto term = [&](double eps) { return level_log_z(state.stats, state.beta * (eps - state.mu)); };
  LogZ out;
  out.value = shell_sum(state.cutoff_n, state.cutoff_m, a, term);
  out.tail = tail_sum(state.cutoff_n, state.cutoff_m, a, term);
  out.converged = std::abs(out.tail) <= 1e-10 * std::abs(out.value);
  return out;
}

double mean_particle_number(const ThermoState& state, double a) {
  validate(state, a);
  return shell_sum(state.cutoff_n, state.cutoff_m, a, [&](double eps) {
    return occupation(state.stats, state.beta * (eps - state.mu));
  });
}

ChemicalPotential solve_chemical_potential(Statistics stats, double beta, double target_n,
                                           double a, int cutoff_n, int cutoff_m) {
  require_aspect_ratio(a);
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and > 0");
  if (!(target_n > 0.0) || !std::isfinite(target_n)) {
    throw DomainError("target particle number must be finite and > 0");
  }
  if (cutoff_n < 0 || cutoff_m < 0) throw DomainError("cutoffs must be >= 0");
  const bool automatic = cutoff_n == 0 && cutoff_m == 0;

  auto count = [&](double mu, int cn, int cm) {
    return mean_particle_number(ThermoState{stats, beta, mu, cn, cm}, a);
  };

  double lo = -1.0;
  double hi = 0.0;
  int cn = cutoff_n;
  int cm = cutoff_m;
  if (stats == Statistics::Bose) {
    hi = -1e-12 / beta;
    if (automatic) std::tie(cn, cm) = default_cutoffs(beta, 0.0, a);
    const double cap = count(hi, cn, cm);
    if (target_n >= cap) {
      std::ostringstream msg;
      msg << "Bose gas saturates: N = " << target_n << " exceeds N(mu -> 0-) = " << cap;
      throw DomainError(msg.str());
    }
  } else {
    hi = 1.0;
    for (int i = 0;; ++i) {
      if (automatic) std::tie(cn, cm) = default_cutoffs(beta, hi, a);
      if (count(hi, cn, cm) > target_n) break;
      if (!automatic) {
        const double capacity = static_cast<double>(2 * cn + 1) * static_cast<double>(2 * cm + 1);
        if (target_n >= capacity) {
          std::ostringstream msg;
          msg << "Fermi filling " << target_n << " exceeds the " << capacity
              << " levels inside the cutoffs";
          throw DomainError(msg.str());
        }
      }
      if (i > 200) throw NumericError("could not bracket the chemical potential");
      hi *= 2.0;
    }
  }
  for (int i = 0; count(lo, cn, cm) >= target_n; ++i) {
    if (i > 200) throw NumericError("could not bracket the chemical potential");
    lo *= 2.0;
  }

  std::uintmax_t iterations = 200;
  const auto [left, right] = boost::math::tools::toms748_solve(
      [&](double mu) { return count(mu, cn, cm) - target_n; }, lo, hi,
      boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 3),
      iterations);
  if (iterations >= 200) {
    throw NumericError("chemical potential solve did not converge", right - left);
  }
  const double mu = 0.5 * (left + right);
  return {mu, count(mu, cn, cm)};
}

double continuum_log_z(Statistics stats, double beta, double mu, double a) {
  require_aspect_ratio(a);
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and > 0");
  if (stats == Statistics::Bose && !(mu < 0.0)) throw DomainError("Bose statistics requires mu < 0");
  const double bm = beta * mu;
  auto integrand = [&](double x) { return level_log_z(stats, x - bm); };

  // Integrate in x = beta eps; beyond max(bm, 0) + 60 the integrand is < e^-60.
  const double knee = std::max(bm, 0.0);
  const double end = knee + 60.0;
  double total = 0.0;
  if (knee > 0.0) total += quad::integrate_adaptive(integrand, 0.0, knee, 1e-13).value;
  total += quad::integrate_adaptive(integrand, knee, end, 1e-13).value;
  const double density = std::numbers::pi / std::sqrt(angular_coefficient(a));
  return density * total / beta;
}

std::shared_ptr<const LevelTable> LevelCache::get(int m, double a, int truncation) {
  const auto key = std::make_tuple(m, a, truncation);
  {
    std::lock_guard lock(mutex_);
    if (auto it = tables_.find(key); it != tables_.end()) return it->second;
  }
  auto table = std::make_shared<const LevelTable>(analyze_levels(a, m, truncation));
  std::lock_guard lock(mutex_);
  return tables_.emplace(key, std::move(table)).first->second;
}

std::vector<OccupiedLevel> fermi_levels(double a, int cutoff_m, int truncation,
                                        std::size_t count, LevelCache* cache) {
  require_aspect_ratio(a);
  if (cutoff_m < 0) throw DomainError("cutoff_m must be >= 0");
  if (truncation < 1) throw DomainError("truncation must be >= 1");
  const std::size_t per_sector = static_cast<std::size_t>(2 * truncation + 1);
  const std::size_t available = per_sector * static_cast<std::size_t>(2 * cutoff_m + 1);
  if (count > available) {
    std::ostringstream msg;
    msg << "requested " << count << " levels but only " << available
        << " exist within the cutoffs";
    throw DomainError(msg.str());
  }

  LevelCache local;
  LevelCache& tables = cache != nullptr ? *cache : local;
  std::vector<OccupiedLevel> levels;
  levels.reserve(available);
  for (int m = -cutoff_m; m <= cutoff_m; ++m) {
    // The spectrum depends on m only through m^2.
    const auto table = tables.get(std::abs(m), a, truncation);
    const auto& energies = table->resolved.states.eigenvalues;
    for (std::size_t h = 0; h < per_sector; ++h) {
      levels.push_back({m, h, energies[h], table->t3()[h]});
    }
  }
  auto before = [](const OccupiedLevel& x, const OccupiedLevel& y) {
    if (x.energy != y.energy) return x.energy < y.energy;
    if (std::abs(x.m) != std::abs(y.m)) return std::abs(x.m) < std::abs(y.m);
    if (x.m != y.m) return x.m < y.m;
    return x.h < y.h;
  };
  std::partial_sort(levels.begin(), levels.begin() + static_cast<std::ptrdiff_t>(count),
                    levels.end(), before);
  levels.resize(count);
  return levels;
}

FermiFillReport fermi_ground_fill(std::size_t target_n, double a, int cutoff_m, int truncation,
                                  LevelCache* cache) {
  FermiFillReport report;
  report.occupied = fermi_levels(a, cutoff_m, truncation, target_n, cache);
  report.particles = target_n;
  for (const auto& level : report.occupied) {
    report.total_energy += level.energy;
    report.total_t3 += level.t3;
  }
  return report;
}

std::vector<FillPoint> fermi_fill_curve(std::size_t max_n, double a, int cutoff_m,
                                        int truncation, LevelCache* cache) {
  const auto levels = fermi_levels(a, cutoff_m, truncation, max_n, cache);
  std::vector<FillPoint> curve;
  curve.reserve(max_n);
  double energy = 0.0;
  double t3 = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    energy += levels[i].energy;
    t3 += levels[i].t3;
    curve.push_back({i + 1, energy, t3, levels[i].t3});
  }
  return curve;
}

}  // namespace torus
