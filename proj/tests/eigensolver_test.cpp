#include "torus/eigensolver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "torus/errors.hpp"

namespace torus {
namespace {

DenseMatrix random_symmetric(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = dist(rng);
  return m;
}

DenseMatrix reversed(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  DenseMatrix p(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p(i, j) = m(n - 1 - i, n - 1 - j);
  return p;
}

void expect_valid_decomposition(const DenseMatrix& m, const Spectrum& s) {
  ASSERT_EQ(s.dimension(), m.rows());
  EXPECT_TRUE(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
  EXPECT_LE(orthonormality_error(s), 1e-10);
  for (std::size_t h = 0; h < s.dimension(); ++h) {
    EXPECT_LE(residual_norm(m, s, h), 1e-9 * std::max(1.0, std::abs(s.eigenvalues[h]))) << "h=" << h;
  }
  double trace = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) trace += m(i, i);
  const double sum = std::accumulate(s.eigenvalues.begin(), s.eigenvalues.end(), 0.0);
  double scale = 0.0;
  for (double v : s.eigenvalues) scale += std::abs(v);
  EXPECT_LE(std::abs(sum - trace), 1e-9 * std::max(1.0, scale));
}

TEST(EighTest, Identity) {
  const auto s = eigh(DenseMatrix::identity(5));
  for (double v : s.eigenvalues) EXPECT_EQ(v, 1.0);
  EXPECT_LE(orthonormality_error(s), 1e-15);
}

TEST(EighTest, ExchangeMatrix) {
  DenseMatrix m(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  const auto s = eigh(m);
  EXPECT_NEAR(s.eigenvalues[0], -1.0, 1e-15);
  EXPECT_NEAR(s.eigenvalues[1], 1.0, 1e-15);
  const double r = std::sqrt(0.5);
  EXPECT_NEAR(s.eigenvectors(0, 0), r, 1e-15);
  EXPECT_NEAR(s.eigenvectors(1, 0), -r, 1e-15);
  EXPECT_NEAR(s.eigenvectors(0, 1), r, 1e-15);
  EXPECT_NEAR(s.eigenvectors(1, 1), r, 1e-15);
}

TEST(EighTest, EmptyAndScalar) {
  EXPECT_EQ(eigh(DenseMatrix()).dimension(), 0u);
  DenseMatrix one(1, 1, -3.5);
  const auto s = eigh(one);
  EXPECT_EQ(s.eigenvalues[0], -3.5);
  EXPECT_EQ(s.eigenvectors(0, 0), 1.0);
}

TEST(EighTest, RandomSymmetricMatrices) {
  for (std::size_t n : {3u, 7u, 20u, 64u, 131u}) {
    SCOPED_TRACE("n = " + std::to_string(n));
    const auto m = random_symmetric(n, static_cast<std::uint32_t>(n));
    const auto s = eigh(m);
    expect_valid_decomposition(m, s);
    const auto values = eigvalsh(m);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(values[i], s.eigenvalues[i], 1e-12);
  }
}

TEST(EighTest, DegenerateSpectrum) {
  // diag(1, 1, 2, 2, 2) rotated by a reflector keeps exact multiplicities.
  DenseMatrix m(5, 5);
  const double d[] = {1, 1, 2, 2, 2};
  const double v[] = {0.1, -0.4, 0.3, 0.8, -0.2};
  const double vv = 0.94;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 5; ++k) {
        const double hik = (i == k) - 2 * v[i] * v[k] / vv;
        const double hjk = (j == k) - 2 * v[j] * v[k] / vv;
        acc += hik * d[k] * hjk;
      }
      m(i, j) = acc;
    }
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < i; ++j) m(i, j) = m(j, i);
  const auto s = eigh(m);
  expect_valid_decomposition(m, s);
  EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-14);
  EXPECT_NEAR(s.eigenvalues[4], 2.0, 1e-14);
}

TEST(EighTest, GaugeLargestComponentPositive) {
  const auto m = random_symmetric(30, 11);
  const auto s = eigh(m);
  for (std::size_t h = 0; h < 30; ++h) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < 30; ++i)
      if (std::abs(s.eigenvectors(i, h)) > std::abs(s.eigenvectors(best, h))) best = i;
    EXPECT_GT(s.eigenvectors(best, h), 0.0);
  }
}

TEST(EighTest, Deterministic) {
  const auto m = random_symmetric(40, 5);
  const auto a = eigh(m);
  const auto b = eigh(m);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.eigenvectors, b.eigenvectors);
}

TEST(EighTest, RejectsNonSymmetric) {
  DenseMatrix m = DenseMatrix::identity(3);
  m(0, 2) = 1e-300;
  EXPECT_THROW(eigh(m), DomainError);
  EXPECT_THROW(eigvalsh(DenseMatrix(2, 3)), DomainError);
}

TEST(EighTest, ExhaustedBudgetNamesIndex) {
  try {
    eigh(random_symmetric(6, 1), EighOptions{0});
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("index 0"), std::string::npos) << e.what();
  }
}

TEST(EighTest, HamiltonianBlockMatchesReference) {
  // numpy.linalg.eigvalsh on the same closed-form matrices.
  const double a2[] = {-0.35116731394151546, 0.6386107865046615, 0.6720334463183778,
                       3.652215253921093,    3.6560873748588647, 8.653738893855971};
  const double a3[] = {-0.1527643976427574, 0.8406586132120085, 0.8596247990596022,
                       3.8491243366745835,  3.850069805331497,  8.84948517153007};
  const auto block = assemble_block(OperatorKind::Hamiltonian, 250, 0, 2.0);
  const auto s = eigh(block);
  expect_valid_decomposition(block.values(), s);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(s.eigenvalues[i], a2[i], 1e-9);
  const auto values = eigvalsh(assemble_block(OperatorKind::Hamiltonian, 100, 1, 3.0).values());
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(values[i], a3[i], 1e-9);
}

TEST(EighTest, GroundStateThenQuasiDegeneratePairs) {
  const auto v = eigvalsh(assemble_block(OperatorKind::Hamiltonian, 250, 0, 2.0).values());
  EXPECT_GT(v[1] - v[0], 0.5);
  EXPECT_LT(v[2] - v[1], 0.05);
  EXPECT_GT(v[3] - v[2], 2.0);
  EXPECT_LT(v[4] - v[3], 0.01);
}

TEST(ParitySpectrumTest, HamiltonianInvariantUnderReversal) {
  const auto h = assemble_block(OperatorKind::Hamiltonian, 40, 2, 1.6).values();
  EXPECT_EQ(eigvalsh(h), eigvalsh(reversed(h)));
}

TEST(ParitySpectrumTest, ToroidalSpectrumSymmetricAboutZero) {
  for (double a : {1.5, 2.0, 3.0}) {
    const auto v = eigvalsh(assemble_block(OperatorKind::ToroidalDipole, 120, 0, a).values());
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_NEAR(v[i], -v[v.size() - 1 - i], 1e-10) << "a=" << a << " i=" << i;
    }
  }
}

TEST(ConvergenceDeltaTest, IdenticalTruncationsGiveZero) {
  EXPECT_EQ(convergence_delta(OperatorKind::Hamiltonian, 1, 2.0, 30, 30, 20), 0.0);
}

TEST(ConvergenceDeltaTest, HamiltonianConvergesFast) {
  EXPECT_LE(convergence_delta(OperatorKind::Hamiltonian, 1, 2.0, 100, 200, 40), 1e-5);
}

TEST(ConvergenceDeltaTest, Preconditions) {
  EXPECT_THROW(convergence_delta(OperatorKind::Hamiltonian, 0, 2.0, 50, 40, 10), DomainError);
  EXPECT_THROW(convergence_delta(OperatorKind::Hamiltonian, 0, 2.0, 10, 40, 22), DomainError);
  EXPECT_THROW(convergence_delta(OperatorKind::Hamiltonian, 0, 1.0, 10, 40, 5), DomainError);
}

TEST(ConvergenceDeltaTest, ToroidalConvergesMuchSlower) {
  // The truncated T3 spectrum keeps moving with N; the Hamiltonian one does
  // not. Monotonicity in N_small is recorded, not asserted.
  const double h = convergence_delta(OperatorKind::Hamiltonian, 0, 2.0, 100, 400, 40);
  double previous = 0.0;
  for (int n_small : {50, 100, 200}) {
    const double t = convergence_delta(OperatorKind::ToroidalDipole, 0, 2.0, n_small, 400, 40);
    ::testing::Test::RecordProperty("t3_delta_N" + std::to_string(n_small), std::to_string(t));
    if (n_small == 100) {
      EXPECT_GT(t, 1e3 * std::max(h, 1e-12));
    }
    previous = t;
  }
  EXPECT_GT(previous, 0.0);
}

// Sorted T3 eigenvalues are close to linear in the level index over the
// central half of the spectrum, with spacing growing with a.
TEST(ToroidalSpectrumTest, AlmostLinearWithSpacingGrowingInA) {
  double previous_slope = 0.0;
  for (double a : {1.5, 2.0, 2.5, 3.0}) {
    const auto v = eigvalsh(assemble_block(OperatorKind::ToroidalDipole, 500, 0, a).values());
    const std::size_t lo = v.size() / 4;
    const std::size_t hi = 3 * v.size() / 4;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0, gaps = 0, gaps2 = 0;
    const double count = static_cast<double>(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
      const double x = static_cast<double>(i);
      sx += x;
      sy += v[i];
      sxx += x * x;
      sxy += x * v[i];
      syy += v[i] * v[i];
      const double g = v[i + 1] - v[i];
      gaps += g;
      gaps2 += g * g;
    }
    const double cov = sxy - sx * sy / count;
    const double slope = cov / (sxx - sx * sx / count);
    const double r2 = cov * cov / ((sxx - sx * sx / count) * (syy - sy * sy / count));
    const double mean_gap = gaps / count;
    const double dispersion = std::sqrt(gaps2 / count - mean_gap * mean_gap) / mean_gap;
    ::testing::Test::RecordProperty("gap_dispersion_a" + std::to_string(a), std::to_string(dispersion));
    EXPECT_GE(r2, 0.98) << "a=" << a;
    EXPECT_GT(slope, previous_slope) << "a=" << a;
    previous_slope = slope;
  }
}

}  // namespace
}  // namespace torus
