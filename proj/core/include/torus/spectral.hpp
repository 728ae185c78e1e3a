#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "torus/eigensolver.hpp"
#include "torus/operators.hpp"

namespace torus {

// Levels closer than this (E0) are treated as one degenerate cluster.
inline constexpr double kDegeneracyTolerance = 1e-9;
inline constexpr double kDefaultCrossoverThreshold = 0.5;  // T0

// +1 if P M P == M entrywise, -1 if P M P == -M, 0 otherwise, where P is the
// reversal n -> -n. A zero matrix reports +1.
int parity_check(const OperatorBlock& block);

// Diagonalizes a parity-even block (parity_check == +1) separately on the
// even and odd subspaces, so every eigenvector has definite parity. Within
// exact ties the even state comes first. Throws DomainError otherwise.
Spectrum parity_adapted_eigh(const OperatorBlock& block);

// Column h of the spectrum, i.e. C_{n,m}^{(h,a)} for n = -N..N.
// Throws std::out_of_range for h >= dimension.
std::vector<double> coefficients(const Spectrum& spectrum, std::size_t h);

// v^T M v for a block.
double expectation(const OperatorBlock& block, std::span<const double> v);

// Energy eigenstates with every quasi-degenerate cluster (chain of gaps below
// tol) rotated onto the eigenbasis of `observable` restricted to the
// cluster. Within a cluster the states share the mean energy and are ordered
// by ascending observable value; isolated levels are left untouched.
struct ResolvedSpectrum {
  Spectrum states;
  std::vector<double> observable;  // <v_h| observable |v_h>
  std::vector<std::size_t> cluster_size;
};

ResolvedSpectrum resolve_degenerate(const Spectrum& spectrum, const OperatorBlock& observable,
                                    double tol = kDegeneracyTolerance);

// Energy levels at fixed (a, m, N) together with their toroidal dipole
// expectation values.
struct LevelTable {
  double a = 0.0;
  int m = 0;
  int truncation = 0;
  std::vector<double> raw_energies;  // parity-adapted eigenvalues
  ResolvedSpectrum resolved;

  std::size_t dimension() const noexcept { return raw_energies.size(); }
  const std::vector<double>& t3() const noexcept { return resolved.observable; }
};

LevelTable analyze_levels(double a, int m, int truncation, double tol = kDegeneracyTolerance);

double t3_expectation(double a, int m, int truncation, std::size_t h);

// Smallest h with |<T3>_h| > threshold, or nullopt if none exists within the
// truncation. Throws DomainError for threshold <= 0.
std::optional<std::size_t> crossover_level(std::span<const double> t3, double threshold);
std::optional<std::size_t> crossover_level(double a, int m, int truncation,
                                           double threshold = kDefaultCrossoverThreshold);

// E_{2j} - E_{2j-1} for j = 1..pairs on the raw spectrum.
std::vector<double> pairing_gaps(double a, int m, int truncation, std::size_t pairs);

struct LevelReport {
  std::size_t h = 0;
  int m = 0;
  double a = 0.0;
  double energy = 0.0;          // E0
  double t3_expectation = 0.0;  // T0
  std::vector<std::pair<int, double>> dominant_coefficients;  // (n, C) with |C| > cut
};

LevelReport level_report(const LevelTable& table, std::size_t h, double cut = 0.05);

}  // namespace torus
