#pragma once

#include <cstddef>
#include <vector>

#include "torus/dense_matrix.hpp"
#include "torus/operators.hpp"

namespace torus {

// Eigen-decomposition of a real symmetric matrix.
//  - eigenvalues ascending
//  - eigenvectors(i, h) is component i of the eigenvector for eigenvalue h
//  - gauge: in every column the first component of largest magnitude is > 0
struct Spectrum {
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;

  std::size_t dimension() const noexcept { return eigenvalues.size(); }
  std::vector<double> vector(std::size_t h) const;
};

struct EighOptions {
  // Total QL iteration budget is budget_per_dimension * n.
  std::size_t budget_per_dimension = 30;
};

// Householder tridiagonalization followed by implicit-shift QL. Throws
// DomainError if the matrix is not exactly symmetric, NumericError naming the
// stuck eigenvalue index if the iteration budget runs out.
Spectrum eigh(const DenseMatrix& matrix, const EighOptions& options = {});
Spectrum eigh(const OperatorBlock& block, const EighOptions& options = {});

// Eigenvalues only (no transform accumulation), ascending.
std::vector<double> eigvalsh(const DenseMatrix& matrix, const EighOptions& options = {});

// Flip column signs so the first largest-magnitude component is positive.
void fix_gauge(Spectrum& spectrum);

// max_ij |V^T V - I|
double orthonormality_error(const Spectrum& spectrum);

// ||M v_h - lambda_h v_h||_2
double residual_norm(const DenseMatrix& matrix, const Spectrum& spectrum, std::size_t h);

// Max |lambda_i(N_small) - lambda_i(N_large)| over the lowest `levels`
// eigenvalues. Requires N_small <= N_large and levels <= 2 N_small + 1.
double convergence_delta(OperatorKind kind, int m, double a, int n_small, int n_large,
                         std::size_t levels);

}  // namespace torus
