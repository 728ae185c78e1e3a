#include "torus/thermo.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "torus/errors.hpp"

namespace torus {
namespace {

ThermoState state(Statistics stats, double beta, double mu, int cn, int cm) {
  return ThermoState{stats, beta, mu, cn, cm};
}

double relative(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

TEST(GrandPotentialTest, MatchesIndependentSums) {
  // numpy sums over the same rectangle of (n, m).
  const auto fermi = state(Statistics::Fermi, 1.0, 2.0, 40, 30);
  EXPECT_LT(relative(grand_potential_log(fermi, 2.0).value, 17.814372945501383), 1e-12);
  EXPECT_LT(relative(mean_particle_number(fermi, 2.0), 10.763439860880975), 1e-12);
  const auto bose = state(Statistics::Bose, 0.5, -0.3, 30, 60);
  EXPECT_LT(relative(grand_potential_log(bose, 3.0).value, 20.934681273040923), 1e-12);
  EXPECT_LT(relative(mean_particle_number(bose, 3.0), 35.499359404677946), 1e-12);
}

TEST(GrandPotentialTest, ReversedSummationOrderAgrees) {
  const auto s = state(Statistics::Fermi, 1.0, 0.0, 200, 200);
  double reversed = 0.0;
  for (int m = 200; m >= -200; --m)
    for (int n = 200; n >= -200; --n) reversed += std::log1p(std::exp(-epsilon(n, m, 2.0)));
  EXPECT_LT(relative(grand_potential_log(s, 2.0).value, reversed), 1e-12);
}

TEST(GrandPotentialTest, ColdFermiGasBelowLowestLevelIsEmpty) {
  const auto s = state(Statistics::Fermi, 1e3, -0.5, 10, 10);
  EXPECT_LT(grand_potential_log(s, 2.0).value, 1e-200);
  EXPECT_LT(mean_particle_number(s, 2.0), 1e-200);
}

TEST(GrandPotentialTest, ColdFermiGasCountsLevelsBelowMu) {
  // Levels below mu = 1.5 at a = 2 (c = 0.3849): (0,0), (0,+-1), (+-1,0), (+-1,+-1).
  const auto s = state(Statistics::Fermi, 1e3, 1.5, 10, 10);
  EXPECT_NEAR(mean_particle_number(s, 2.0), 9.0, 1e-12);
}

TEST(GrandPotentialTest, NonNegativeAndFlaggedConverged) {
  for (auto stats : {Statistics::Fermi, Statistics::Bose}) {
    for (double mu : {-3.0, -0.01}) {
      const auto s = make_state(stats, 0.7, mu, 1.8);
      const auto z = grand_potential_log(s, 1.8);
      EXPECT_GE(z.value, 0.0);
      EXPECT_TRUE(z.converged);
      EXPECT_LT(z.tail, 1e-10 * z.value);
    }
  }
}

TEST(GrandPotentialTest, LargeNegativeExponentsDoNotOverflow) {
  const auto s = state(Statistics::Fermi, 50.0, 400.0, 25, 40);
  const auto z = grand_potential_log(s, 2.0);
  EXPECT_TRUE(std::isfinite(z.value));
  EXPECT_GT(z.value, 0.0);
}

TEST(GrandPotentialTest, DomainErrors) {
  EXPECT_THROW(grand_potential_log(state(Statistics::Bose, 1.0, 0.0, 5, 5), 2.0), DomainError);
  EXPECT_THROW(grand_potential_log(state(Statistics::Bose, 1.0, 0.2, 5, 5), 2.0), DomainError);
  EXPECT_THROW(grand_potential_log(state(Statistics::Fermi, 0.0, 0.2, 5, 5), 2.0), DomainError);
  EXPECT_THROW(grand_potential_log(state(Statistics::Fermi, 1.0, 0.2, -1, 5), 2.0), DomainError);
  EXPECT_THROW(grand_potential_log(state(Statistics::Fermi, 1.0, 0.2, 5, 5), 1.0), DomainError);
  EXPECT_THROW(mean_particle_number(state(Statistics::Bose, 1.0, 0.0, 5, 5), 2.0), DomainError);
}

TEST(MeanParticleNumberTest, EqualsDerivativeOfLogZ) {
  for (auto stats : {Statistics::Fermi, Statistics::Bose}) {
    const double beta = 0.8;
    const double mu = stats == Statistics::Fermi ? 3.0 : -0.4;
    const auto s = make_state(stats, beta, mu, 2.0);
    const double step = 1e-6;  // in beta mu
    auto shifted = s;
    shifted.mu = mu + step / beta;
    const double up = grand_potential_log(shifted, 2.0).value;
    shifted.mu = mu - step / beta;
    const double down = grand_potential_log(shifted, 2.0).value;
    const double derivative = (up - down) / (2 * step);
    EXPECT_LT(relative(derivative, mean_particle_number(s, 2.0)), 1e-6);
  }
}

TEST(MeanParticleNumberTest, StrictlyIncreasingInMu) {
  for (auto stats : {Statistics::Fermi, Statistics::Bose}) {
    double previous = -1.0;
    for (double mu = -5.0; mu < (stats == Statistics::Fermi ? 10.0 : 0.0); mu += 0.25) {
      const double n = mean_particle_number(state(stats, 1.3, mu, 30, 40), 2.5);
      EXPECT_GT(n, previous) << "mu=" << mu;
      previous = n;
    }
  }
}

TEST(MeanParticleNumberTest, ClassicalLimitBoseEqualsFermi) {
  const double beta = 0.05;
  const double mu = -10.0 / beta;  // e^{beta mu} = e^-10 < 1e-3
  const auto f = make_state(Statistics::Fermi, beta, mu, 2.0);
  const auto b = make_state(Statistics::Bose, beta, mu, 2.0);
  EXPECT_LT(relative(mean_particle_number(f, 2.0), mean_particle_number(b, 2.0)), 1e-3);
  EXPECT_LT(relative(mean_particle_number(state(Statistics::Fermi, 1.0, -7.0, 20, 30), 2.0),
                     mean_particle_number(state(Statistics::Bose, 1.0, -7.0, 20, 30), 2.0)),
            1e-3);
}

TEST(ContinuumTest, MatchesDilogarithmClosedForm) {
  // mpmath: -(pi/sqrt(c)) Li2(-z)/beta for fermions, (pi/sqrt(c)) Li2(z)/beta for bosons.
  EXPECT_LT(relative(continuum_log_z(Statistics::Fermi, 0.01, 5.0, 2.0), 434.34904595080427969), 1e-10);
  EXPECT_LT(relative(continuum_log_z(Statistics::Bose, 0.01, -100.0, 2.0), 206.98464880641734169), 1e-10);
  EXPECT_LT(relative(continuum_log_z(Statistics::Fermi, 1.0, -0.5, 3.0), 4.6005626657909208864), 1e-10);
  EXPECT_LT(relative(continuum_log_z(Statistics::Bose, 2.0, -0.1, 1.5), 1.6877705422537336388), 1e-10);
}

TEST(ContinuumTest, AgreesWithDiscreteSumAtHighTemperature) {
  const double discrete = grand_potential_log(state(Statistics::Fermi, 0.01, 5.0, 400, 400), 2.0).value;
  const double continuum = continuum_log_z(Statistics::Fermi, 0.01, 5.0, 2.0);
  EXPECT_LT(relative(discrete, continuum), 0.01);
  EXPECT_LT(relative(grand_potential_log(make_state(Statistics::Fermi, 0.01, 5.0, 2.0), 2.0).value,
                     continuum),
            0.01);
}

TEST(ContinuumTest, DiscreteApproachesContinuumAsBetaDecreases) {
  // Differences reach rounding level by beta = 0.01, so they are compared
  // with a floor there; at larger beta the decrease is strict.
  auto gap = [](double beta) {
    const double d = grand_potential_log(make_state(Statistics::Fermi, beta, 5.0, 2.0), 2.0).value;
    return relative(d, continuum_log_z(Statistics::Fermi, beta, 5.0, 2.0));
  };
  EXPECT_GT(gap(1.0), gap(0.5));
  EXPECT_GT(gap(0.5), gap(0.25));
  EXPECT_LE(gap(0.005), std::max(gap(0.01), 1e-12));
}

TEST(ContinuumTest, VanishesForVeryNegativeMu) {
  EXPECT_LT(continuum_log_z(Statistics::Fermi, 1.0, -200.0, 2.0), 1e-80);
  EXPECT_LT(continuum_log_z(Statistics::Bose, 1.0, -200.0, 2.0), 1e-80);
}

TEST(ContinuumTest, ClassicalLimitBoseEqualsFermi) {
  const double beta = 0.02;
  const double mu = -10.0 / beta;
  EXPECT_LT(relative(continuum_log_z(Statistics::Fermi, beta, mu, 2.0),
                     continuum_log_z(Statistics::Bose, beta, mu, 2.0)),
            1e-3);
}

TEST(ContinuumTest, DomainErrors) {
  EXPECT_THROW(continuum_log_z(Statistics::Bose, 1.0, 0.0, 2.0), DomainError);
  EXPECT_THROW(continuum_log_z(Statistics::Fermi, -1.0, 0.0, 2.0), DomainError);
}

TEST(ChemicalPotentialTest, ColdSingleFermion) {
  const auto r = solve_chemical_potential(Statistics::Fermi, 1e3, 1.0, 2.0);
  EXPECT_NEAR(r.particles, 1.0, 1e-8);
  EXPECT_GT(r.mu, 0.0);
  EXPECT_LT(r.mu, angular_coefficient(2.0));
}

TEST(ChemicalPotentialTest, HitsTargetAndIsMonotone) {
  for (auto stats : {Statistics::Fermi, Statistics::Bose}) {
    double previous = -std::numeric_limits<double>::infinity();
    for (double target : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
      const auto r = solve_chemical_potential(stats, 1.0, target, 2.0);
      EXPECT_NEAR(r.particles, target, 1e-8);
      EXPECT_GE(r.mu, previous);
      previous = r.mu;
      if (stats == Statistics::Bose) {
        EXPECT_LT(r.mu, 0.0);
      }
    }
  }
}

TEST(ChemicalPotentialTest, Deterministic) {
  const auto a = solve_chemical_potential(Statistics::Fermi, 0.3, 37.0, 1.7);
  const auto b = solve_chemical_potential(Statistics::Fermi, 0.3, 37.0, 1.7);
  EXPECT_EQ(a.mu, b.mu);
}

TEST(ChemicalPotentialTest, ExplicitCutoffs) {
  const auto r = solve_chemical_potential(Statistics::Fermi, 2.0, 5.0, 2.0, 20, 20);
  EXPECT_NEAR(mean_particle_number(state(Statistics::Fermi, 2.0, r.mu, 20, 20), 2.0), 5.0, 1e-8);
  EXPECT_THROW(solve_chemical_potential(Statistics::Fermi, 2.0, 9.0, 2.0, 1, 1), DomainError);
}

TEST(ChemicalPotentialTest, Errors) {
  EXPECT_THROW(solve_chemical_potential(Statistics::Bose, 1.0, 1e15, 2.0), DomainError);
  EXPECT_THROW(solve_chemical_potential(Statistics::Fermi, 1.0, 0.0, 2.0), DomainError);
  EXPECT_THROW(solve_chemical_potential(Statistics::Fermi, 0.0, 1.0, 2.0), DomainError);
}

TEST(FermiFillTest, SingleParticleHasNoDipole) {
  const auto r = fermi_ground_fill(1, 2.0, 3, 100);
  EXPECT_EQ(r.particles, 1u);
  ASSERT_EQ(r.occupied.size(), 1u);
  EXPECT_EQ(r.occupied[0].m, 0);
  EXPECT_EQ(r.occupied[0].h, 0u);
  EXPECT_LT(std::abs(r.total_t3), 1e-10);
}

TEST(FermiFillTest, GloballyLowestLevelsInDeterministicOrder) {
  LevelCache cache;
  const auto levels = fermi_levels(2.0, 3, 100, 150, &cache);
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const auto& p = levels[i - 1];
    const auto& q = levels[i];
    ASSERT_LE(p.energy, q.energy);
    if (p.energy == q.energy) {
      const bool ordered = std::abs(p.m) < std::abs(q.m) ||
                           (std::abs(p.m) == std::abs(q.m) && (p.m < q.m || (p.m == q.m && p.h < q.h)));
      EXPECT_TRUE(ordered) << "i=" << i;
    }
  }
  // The highest occupied level lies below every unoccupied one.
  const auto more = fermi_levels(2.0, 3, 100, 151, &cache);
  EXPECT_GE(more.back().energy, levels.back().energy);
  EXPECT_EQ(cache.get(2, 2.0, 100), cache.get(2, 2.0, 100));
}

TEST(FermiFillTest, AddedLevelEnergyNonDecreasingInN) {
  const auto curve = fermi_fill_curve(120, 2.5, 2, 100);
  double previous = curve[0].total_energy;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double added = curve[i].total_energy - curve[i - 1].total_energy;
    EXPECT_GE(added, previous - 1e-9) << "N=" << i + 1;
    previous = added;
  }
}

TEST(FermiFillTest, TotalEnergyRisesOncePastNegativeLevels) {
  // The diagonalized levels carry the -1/4 shifts, so the first few are
  // negative and lower the total; only those may.
  const auto levels = fermi_levels(2.5, 2, 100, 120);
  const auto curve = fermi_fill_curve(120, 2.5, 2, 100);
  std::size_t negative = 0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (levels[i].energy < 0.0) {
      ++negative;
      continue;
    }
    if (i > 0) {
      EXPECT_GE(curve[i].total_energy, curve[i - 1].total_energy) << "N=" << i + 1;
    }
  }
  EXPECT_LE(negative, 5u);
}

TEST(FermiFillTest, CompleteClustersCancelDipole) {
  const auto levels = fermi_levels(2.0, 1, 250, 301);
  const auto curve = fermi_fill_curve(300, 2.0, 1, 250);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (levels[i + 1].energy != levels[i].energy) {
      EXPECT_NEAR(curve[i].total_t3, 0.0, 1e-8) << "N=" << i + 1;
      ++checked;
    }
  }
  EXPECT_GT(checked, 50u);
}

TEST(FermiFillTest, DipoleIncrementsAlternatePastCrossover) {
  const auto curve = fermi_fill_curve(80, 3.0, 0, 250);
  std::size_t run = 0;
  std::size_t best = 0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double added = curve[i].added_t3;
    const bool large = std::abs(added) > 0.5;
    const bool flips = i > 0 && added * curve[i - 1].added_t3 < 0.0;
    run = large ? (flips && run > 0 ? run + 1 : 1) : 0;
    best = std::max(best, run);
  }
  EXPECT_GE(best, 10u);
  EXPECT_GT(std::abs(curve.back().added_t3), 0.5);
}

TEST(FermiFillTest, TooManyParticles) {
  EXPECT_THROW(fermi_ground_fill(100, 2.0, 0, 10), DomainError);
}

TEST(DefaultCutoffsTest, CoverTheThermalWindow) {
  const auto [cn, cm] = default_cutoffs(0.5, 3.0, 2.0);
  EXPECT_GE(0.5 * (epsilon(cn + 1, 0, 2.0) - 3.0), 40.0);
  EXPECT_GE(0.5 * (epsilon(0, cm + 1, 2.0) - 3.0), 40.0);
}

}  // namespace
}  // namespace torus
