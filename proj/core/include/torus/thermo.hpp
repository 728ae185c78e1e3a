#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "torus/spectral.hpp"

namespace torus {

enum class Statistics { Bose, Fermi };

// Grand-canonical state. beta in 1/E0, mu in E0. Sums run over
// |n| <= cutoff_n, |m| <= cutoff_m.
struct ThermoState {
  Statistics stats = Statistics::Fermi;
  double beta = 1.0;
  double mu = 0.0;
  int cutoff_n = 0;
  int cutoff_m = 0;
};

// Cutoffs large enough that beta (eps - max(mu, 0)) >= 40 on the first
// excluded shell in both directions.
std::pair<int, int> default_cutoffs(double beta, double mu, double a);

ThermoState make_state(Statistics stats, double beta, double mu, double a);

// Throws DomainError for beta <= 0, Bose with mu >= 0, or negative cutoffs.
void validate(const ThermoState& state, double a);

struct LogZ {
  double value = 0.0;
  double tail = 0.0;  // contribution of the first excluded shell
  bool converged = false;  // tail < 1e-10 |value|
};

// ln Z = +-sum ln(1 +- e^{-beta (eps_nm - mu)}) with eps from epsilon().
LogZ grand_potential_log(const ThermoState& state, double a);

// sum 1 / (e^{beta (eps_nm - mu)} +- 1)
double mean_particle_number(const ThermoState& state, double a);

struct ChemicalPotential {
  double mu = 0.0;
  double particles = 0.0;  // N(mu) at the returned mu
};

// Brackets and solves N(mu) = target_n. Cutoffs of zero are replaced by
// default_cutoffs evaluated on the bracket. Throws DomainError if the target
// is unreachable (Bose saturation at mu -> 0-).
ChemicalPotential solve_chemical_potential(Statistics stats, double beta, double target_n,
                                           double a, int cutoff_n = 0, int cutoff_m = 0);

// Constant-density-of-states limit:
// pi sqrt((a^2-1)^(3/2)/a) * (+-) int_0^inf ln(1 +- e^{-beta(eps - mu)}) d eps.
double continuum_log_z(Statistics stats, double beta, double mu, double a);

// One occupied single-particle level of the Fermi sea.
struct OccupiedLevel {
  int m = 0;
  std::size_t h = 0;
  double energy = 0.0;
  double t3 = 0.0;
};

struct FermiFillReport {
  std::size_t particles = 0;
  double total_energy = 0.0;  // E0
  double total_t3 = 0.0;      // T0
  std::vector<OccupiedLevel> occupied;
};

// Immutable per-(m, a, N) level tables, built on first use. Safe to share.
class LevelCache {
 public:
  std::shared_ptr<const LevelTable> get(int m, double a, int truncation);

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, double, int>, std::shared_ptr<const LevelTable>> tables_;
};

// Zero-temperature filling of the lowest levels over sectors |m| <= cutoff_m.
// Energies come from the diagonalized Hamiltonian (with its -1/4 shifts).
// Order: energy, then |m|, then m, then h. Levels of a quasi-degenerate
// cluster share one energy, so the order is exact and reproducible.
std::vector<OccupiedLevel> fermi_levels(double a, int cutoff_m, int truncation,
                                        std::size_t count, LevelCache* cache = nullptr);

FermiFillReport fermi_ground_fill(std::size_t target_n, double a, int cutoff_m, int truncation,
                                  LevelCache* cache = nullptr);

struct FillPoint {
  std::size_t particles = 0;
  double total_energy = 0.0;
  double total_t3 = 0.0;
  double added_t3 = 0.0;  // <T3> of the level added last
};

// Cumulative fill for N = 1..max_n, sharing one sort.
std::vector<FillPoint> fermi_fill_curve(std::size_t max_n, double a, int cutoff_m,
                                              int truncation, LevelCache* cache = nullptr);

}  // namespace torus
