#include "torus/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "torus/errors.hpp"

namespace torus {
namespace {

// Lower triangle of `fill(j, k)` mirrored, so the result is bitwise symmetric.
template <typename Fill>
DenseMatrix symmetric_from_lower(std::size_t n, Fill fill) {
  DenseMatrix out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k <= j; ++k) {
      const double v = fill(j, k);
      out(j, k) = v;
      out(k, j) = v;
    }
  }
  return out;
}

}  // namespace

int parity_check(const OperatorBlock& block) {
  const auto& m = block.values();
  const std::size_t n = m.rows();
  bool even = true;
  bool odd = true;
  for (std::size_t i = 0; i < n && (even || odd); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = m(i, j);
      const double y = m(n - 1 - i, n - 1 - j);
      if (x != y) even = false;
      if (x != -y) odd = false;
    }
  }
  if (even) return 1;
  return odd ? -1 : 0;
}

Spectrum parity_adapted_eigh(const OperatorBlock& block) {
  if (parity_check(block) != 1) {
    throw DomainError("parity_adapted_eigh: block does not commute with n -> -n");
  }
  const auto& h = block.values();
  const int big_n = block.truncation();
  const std::size_t dim = block.dimension();
  auto at = [&](int n1, int n2) { return h(block.index_of(n1), block.index_of(n2)); };

  // Even subspace: |0>, (|k> + |-k>)/sqrt2 for k = 1..N.
  const std::size_t ne = static_cast<std::size_t>(big_n) + 1;
  const DenseMatrix even = symmetric_from_lower(ne, [&](std::size_t j, std::size_t k) {
    const int jj = static_cast<int>(j);
    const int kk = static_cast<int>(k);
    if (j == 0 && k == 0) return at(0, 0);
    if (k == 0) return std::numbers::sqrt2 * at(jj, 0);
    return at(jj, kk) + at(jj, -kk);
  });
  // Odd subspace: (|k> - |-k>)/sqrt2 for k = 1..N.
  const std::size_t no = static_cast<std::size_t>(big_n);
  const DenseMatrix odd = symmetric_from_lower(no, [&](std::size_t j, std::size_t k) {
    const int jj = static_cast<int>(j) + 1;
    const int kk = static_cast<int>(k) + 1;
    return at(jj, kk) - at(jj, -kk);
  });

  const Spectrum se = eigh(even);
  const Spectrum so = no > 0 ? eigh(odd) : Spectrum{};
  const double r = std::numbers::sqrt2 / 2.0;

  Spectrum out;
  out.eigenvalues.reserve(dim);
  out.eigenvectors = DenseMatrix(dim, dim);
  std::size_t ie = 0;
  std::size_t io = 0;
  for (std::size_t col = 0; col < dim; ++col) {
    const bool take_even =
        io >= no || (ie < ne && se.eigenvalues[ie] <= so.eigenvalues[io]);
    if (take_even) {
      out.eigenvalues.push_back(se.eigenvalues[ie]);
      out.eigenvectors(block.index_of(0), col) = se.eigenvectors(0, ie);
      for (int k = 1; k <= big_n; ++k) {
        const double c = r * se.eigenvectors(static_cast<std::size_t>(k), ie);
        out.eigenvectors(block.index_of(k), col) = c;
        out.eigenvectors(block.index_of(-k), col) = c;
      }
      ++ie;
    } else {
      out.eigenvalues.push_back(so.eigenvalues[io]);
      for (int k = 1; k <= big_n; ++k) {
        const double c = r * so.eigenvectors(static_cast<std::size_t>(k - 1), io);
        out.eigenvectors(block.index_of(k), col) = c;
        out.eigenvectors(block.index_of(-k), col) = -c;
      }
      ++io;
    }
  }
  fix_gauge(out);
  return out;
}

std::vector<double> coefficients(const Spectrum& spectrum, std::size_t h) {
  if (h >= spectrum.dimension()) {
    std::ostringstream msg;
    msg << "level index " << h << " out of range for dimension " << spectrum.dimension();
    throw std::out_of_range(msg.str());
  }
  return spectrum.vector(h);
}

double expectation(const OperatorBlock& block, std::span<const double> v) {
  if (v.size() != block.dimension()) {
    throw DomainError("expectation: vector length does not match block dimension");
  }
  return quadratic_form(block.values(), v);
}

ResolvedSpectrum resolve_degenerate(const Spectrum& spectrum, const OperatorBlock& observable,
                                    double tol) {
  if (observable.dimension() != spectrum.dimension()) {
    throw DomainError("resolve_degenerate: observable dimension does not match spectrum");
  }
  if (!(tol >= 0.0)) throw DomainError("resolve_degenerate: tolerance must be >= 0");

  const std::size_t dim = spectrum.dimension();
  ResolvedSpectrum out;
  out.states = spectrum;
  out.observable.assign(dim, 0.0);
  out.cluster_size.assign(dim, 1);
  const auto& obs = observable.values();

  std::size_t start = 0;
  while (start < dim) {
    std::size_t stop = start + 1;
    while (stop < dim && spectrum.eigenvalues[stop] - spectrum.eigenvalues[stop - 1] < tol) ++stop;
    const std::size_t k = stop - start;

    if (k == 1) {
      out.observable[start] = quadratic_form(obs, spectrum.vector(start));
    } else {
      // Project the observable onto the cluster and diagonalize there.
      std::vector<std::vector<double>> basis(k);
      std::vector<std::vector<double>> image(k);
      double mean = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        basis[c] = spectrum.vector(start + c);
        image[c] = multiply(obs, basis[c]);
        mean += spectrum.eigenvalues[start + c];
      }
      mean /= static_cast<double>(k);
      const DenseMatrix reduced = symmetric_from_lower(k, [&](std::size_t i, std::size_t j) {
        double x = 0.0;
        double y = 0.0;
        for (std::size_t p = 0; p < dim; ++p) {
          x += basis[i][p] * image[j][p];
          y += basis[j][p] * image[i][p];
        }
        return 0.5 * (x + y);
      });
      const Spectrum local = eigh(reduced);
      for (std::size_t c = 0; c < k; ++c) {
        const std::size_t col = start + c;
        out.states.eigenvalues[col] = mean;
        out.cluster_size[col] = k;
        for (std::size_t p = 0; p < dim; ++p) {
          double acc = 0.0;
          for (std::size_t q = 0; q < k; ++q) acc += basis[q][p] * local.eigenvectors(q, c);
          out.states.eigenvectors(p, col) = acc;
        }
        out.observable[col] = local.eigenvalues[c];
      }
    }
    start = stop;
  }
  fix_gauge(out.states);
  return out;
}

LevelTable analyze_levels(double a, int m, int truncation, double tol) {
  if (truncation < 1) throw DomainError("analyze_levels: truncation must be >= 1");
  const OperatorBlock h = assemble_block(OperatorKind::Hamiltonian, truncation, m, a);
  const OperatorBlock t = assemble_block(OperatorKind::ToroidalDipole, truncation, m, a);
  const Spectrum spectrum = parity_adapted_eigh(h);

  LevelTable table;
  table.a = a;
  table.m = m;
  table.truncation = truncation;
  table.raw_energies = spectrum.eigenvalues;
  table.resolved = resolve_degenerate(spectrum, t, tol);
  return table;
}

double t3_expectation(double a, int m, int truncation, std::size_t h) {
  const LevelTable table = analyze_levels(a, m, truncation);
  if (h >= table.dimension()) {
    std::ostringstream msg;
    msg << "level index " << h << " out of range for dimension " << table.dimension();
    throw std::out_of_range(msg.str());
  }
  return table.t3()[h];
}

std::optional<std::size_t> crossover_level(std::span<const double> t3, double threshold) {
  if (!(threshold > 0.0)) throw DomainError("crossover threshold must be > 0");
  for (std::size_t h = 0; h < t3.size(); ++h) {
    if (std::abs(t3[h]) > threshold) return h;
  }
  return std::nullopt;
}

std::optional<std::size_t> crossover_level(double a, int m, int truncation, double threshold) {
  if (!(threshold > 0.0)) throw DomainError("crossover threshold must be > 0");
  const LevelTable table = analyze_levels(a, m, truncation);
  return crossover_level(table.t3(), threshold);
}

std::vector<double> pairing_gaps(double a, int m, int truncation, std::size_t pairs) {
  if (2 * pairs >= static_cast<std::size_t>(2 * truncation + 1)) {
    throw DomainError("pairing_gaps: too many pairs for the truncation");
  }
  const OperatorBlock h = assemble_block(OperatorKind::Hamiltonian, truncation, m, a);
  const auto energies = eigvalsh(h.values());
  std::vector<double> gaps(pairs);
  for (std::size_t j = 1; j <= pairs; ++j) gaps[j - 1] = energies[2 * j] - energies[2 * j - 1];
  return gaps;
}

LevelReport level_report(const LevelTable& table, std::size_t h, double cut) {
  const auto c = coefficients(table.resolved.states, h);
  LevelReport report;
  report.h = h;
  report.m = table.m;
  report.a = table.a;
  report.energy = table.resolved.states.eigenvalues[h];
  report.t3_expectation = table.t3()[h];
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) > cut) {
      report.dominant_coefficients.emplace_back(static_cast<int>(i) - table.truncation, c[i]);
    }
  }
  return report;
}

}  // namespace torus
