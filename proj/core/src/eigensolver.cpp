#include "torus/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "torus/errors.hpp"

namespace torus {
namespace {

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] = T(i, i+1); off[n-1] = 0
  // Householder vectors: reflector k acts on indices k+1..n-1 and is stored
  // in reflectors row k at those positions.
  DenseMatrix reflectors;
  std::vector<double> betas;
};

// Reduces a symmetric matrix to tridiagonal form, A = Q T Q^T with
// Q = H_0 H_1 ... H_{n-3}. Only the lower triangle is read and updated.
Tridiagonal tridiagonalize(DenseMatrix a, bool keep_reflectors) {
  const std::size_t n = a.rows();
  Tridiagonal t;
  t.diag.assign(n, 0.0);
  t.off.assign(n, 0.0);
  t.betas.assign(n, 0.0);
  if (keep_reflectors) t.reflectors = DenseMatrix(n, n);

  std::vector<double> v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t lo = k + 1;
    double tail_norm2 = 0.0;
    for (std::size_t i = lo + 1; i < n; ++i) tail_norm2 += a(i, k) * a(i, k);
    const double x0 = a(lo, k);
    t.diag[k] = a(k, k);
    if (tail_norm2 == 0.0) {
      t.off[k] = x0;
      continue;
    }

    const double norm = std::sqrt(x0 * x0 + tail_norm2);
    const double alpha = x0 > 0.0 ? -norm : norm;
    // v = x - alpha e1, beta = 2 / (v^T v)
    v[lo] = x0 - alpha;
    for (std::size_t i = lo + 1; i < n; ++i) v[i] = a(i, k);
    const double vtv = v[lo] * v[lo] + tail_norm2;
    const double beta = 2.0 / vtv;
    t.off[k] = alpha;
    t.betas[k] = beta;
    if (keep_reflectors) {
      auto row = t.reflectors.row(k);
      for (std::size_t i = lo; i < n; ++i) row[i] = v[i];
    }

    // p = beta A22 v using only the lower triangle.
    std::fill(p.begin() + lo, p.end(), 0.0);
    for (std::size_t i = lo; i < n; ++i) {
      const auto ai = a.row(i);
      double acc = 0.0;
      const double vi = v[i];
      for (std::size_t j = lo; j < i; ++j) {
        acc += ai[j] * v[j];
        p[j] += ai[j] * vi;
      }
      p[i] += acc + ai[i] * vi;
    }
    double ptv = 0.0;
    for (std::size_t i = lo; i < n; ++i) {
      p[i] *= beta;
      ptv += p[i] * v[i];
    }
    // w = p - (beta/2)(p^T v) v, stored in p
    const double shift = 0.5 * beta * ptv;
    for (std::size_t i = lo; i < n; ++i) p[i] -= shift * v[i];
    // A22 -= v w^T + w v^T on the lower triangle
    for (std::size_t i = lo; i < n; ++i) {
      auto ai = a.row(i);
      const double vi = v[i];
      const double wi = p[i];
      for (std::size_t j = lo; j <= i; ++j) ai[j] -= vi * p[j] + wi * v[j];
    }
  }
  if (n >= 2) {
    t.diag[n - 2] = a(n - 2, n - 2);
    t.off[n - 2] = a(n - 1, n - 2);
  }
  if (n >= 1) t.diag[n - 1] = a(n - 1, n - 1);
  return t;
}

// Implicit QL with Wilkinson-type shifts on (d, e). If rows is non-null its
// rows are rotated alongside (rows hold eigenvectors of T when seeded with I).
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, DenseMatrix* rows,
                    std::size_t budget) {
  const std::size_t n = d.size();
  if (n == 0) return;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::size_t spent = 0;
  double f = 0.0;
  double tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;

    if (m > l) {
      do {
        if (++spent > budget) {
          std::ostringstream msg;
          msg << "eigh: QL iteration did not converge for eigenvalue index " << l
              << " within " << budget << " iterations";
          throw NumericError(msg.str(), std::abs(e[l]));
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (rows != nullptr) {
            auto lower = rows->row(ii);
            auto upper = rows->row(ii + 1);
            for (std::size_t k = 0; k < n; ++k) {
              const double hk = upper[k];
              upper[k] = s * lower[k] + c * hk;
              lower[k] = c * lower[k] - s * hk;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

void require_symmetric(const DenseMatrix& matrix) {
  if (!matrix.is_square()) throw DomainError("eigh: matrix is not square");
  if (!matrix.is_exactly_symmetric()) throw DomainError("eigh: matrix is not symmetric");
}

}  // namespace

std::vector<double> Spectrum::vector(std::size_t h) const {
  std::vector<double> v(dimension());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = eigenvectors(i, h);
  return v;
}

Spectrum eigh(const DenseMatrix& matrix, const EighOptions& options) {
  require_symmetric(matrix);
  const std::size_t n = matrix.rows();
  Tridiagonal t = tridiagonalize(matrix, true);

  // Row h of `rows` is eigenvector h of T, later of A.
  DenseMatrix rows = DenseMatrix::identity(n);
  tridiagonal_ql(t.diag, t.off, &rows, options.budget_per_dimension * std::max<std::size_t>(n, 1));

  // Apply Q = H_0 ... H_{n-3} to every eigenvector, innermost reflector first.
  for (std::size_t k = n >= 2 ? n - 2 : 0; k-- > 0;) {
    const double beta = t.betas[k];
    if (beta == 0.0) continue;
    const auto v = t.reflectors.row(k);
    for (std::size_t h = 0; h < n; ++h) {
      auto z = rows.row(h);
      double dot = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) dot += v[i] * z[i];
      dot *= beta;
      for (std::size_t i = k + 1; i < n; ++i) z[i] -= dot * v[i];
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return t.diag[x] < t.diag[y]; });

  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors = DenseMatrix(n, n);
  for (std::size_t h = 0; h < n; ++h) {
    out.eigenvalues[h] = t.diag[order[h]];
    const auto z = rows.row(order[h]);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, h) = z[i];
  }
  fix_gauge(out);
  return out;
}

Spectrum eigh(const OperatorBlock& block, const EighOptions& options) {
  return eigh(block.values(), options);
}

std::vector<double> eigvalsh(const DenseMatrix& matrix, const EighOptions& options) {
  require_symmetric(matrix);
  const std::size_t n = matrix.rows();
  Tridiagonal t = tridiagonalize(matrix, false);
  tridiagonal_ql(t.diag, t.off, nullptr, options.budget_per_dimension * std::max<std::size_t>(n, 1));
  std::sort(t.diag.begin(), t.diag.end());
  return t.diag;
}

void fix_gauge(Spectrum& spectrum) {
  const std::size_t n = spectrum.eigenvectors.rows();
  for (std::size_t h = 0; h < spectrum.eigenvectors.cols(); ++h) {
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(spectrum.eigenvectors(i, h));
      if (mag > best_abs) {
        best_abs = mag;
        best = i;
      }
    }
    if (n > 0 && spectrum.eigenvectors(best, h) < 0.0) {
      for (std::size_t i = 0; i < n; ++i) spectrum.eigenvectors(i, h) = -spectrum.eigenvectors(i, h);
    }
  }
}

double orthonormality_error(const Spectrum& spectrum) {
  const auto& v = spectrum.eigenvectors;
  const DenseMatrix vt = v.transposed();  // rows are eigenvectors
  double worst = 0.0;
  for (std::size_t a = 0; a < vt.rows(); ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      const auto x = vt.row(a);
      const auto y = vt.row(b);
      double dot = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
      if (a == b) dot -= 1.0;
      worst = std::max(worst, std::abs(dot));
    }
  }
  return worst;
}

double residual_norm(const DenseMatrix& matrix, const Spectrum& spectrum, std::size_t h) {
  const auto v = spectrum.vector(h);
  const auto mv = multiply(matrix, v);
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = mv[i] - spectrum.eigenvalues[h] * v[i];
    acc += r * r;
  }
  return std::sqrt(acc);
}

double convergence_delta(OperatorKind kind, int m, double a, int n_small, int n_large,
                         std::size_t levels) {
  if (n_small < 1 || n_large < n_small) {
    throw DomainError("convergence_delta: need 1 <= N_small <= N_large");
  }
  if (levels > static_cast<std::size_t>(2 * n_small + 1)) {
    throw DomainError("convergence_delta: levels exceeds the small truncation dimension");
  }
  const auto small = eigvalsh(assemble_block(kind, n_small, m, a).values());
  const auto large = n_large == n_small ? small : eigvalsh(assemble_block(kind, n_large, m, a).values());
  double worst = 0.0;
  for (std::size_t i = 0; i < levels; ++i) worst = std::max(worst, std::abs(small[i] - large[i]));
  return worst;
}

}  // namespace torus
