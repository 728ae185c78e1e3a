#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

#include "torus/dense_matrix.hpp"

namespace torus {

// Energies are in units E0 = hbar^2 a^2 / (2 m_p R^2) = hbar^2 / (2 m_p r^2).
// Toroidal dipole values are in units T0 = hbar r / (10 m_p).
enum class OperatorKind { Hamiltonian, ToroidalDipole };

std::string_view to_string(OperatorKind kind);

struct BasisIndex {
  int n = 0;  // poloidal momentum quantum number
  int m = 0;  // angular momentum along z
};

// Throws DomainError unless a is finite and a > 1.
void require_aspect_ratio(double a);

// <F_{n1,m}| H2D |F_{n2,m}> in E0. Includes the -1/4 constants.
double hamiltonian_element(int n1, int n2, int m, double a);

// <F_{n1,m}| T3(l) |F_{n2,m}> in T0. Independent of m; zero for |n1-n2| > 2.
double toroidal_element(int n1, int n2, double a);

// epsilon_{nm} = n^2 + a/(a^2-1)^(3/2) m^2 in E0: the diagonal energy with the
// constant -1/4 shifts dropped.
double epsilon(int n, int m, double a);

// Coefficient of m^2 in the diagonal energy: a / (a^2 - 1)^(3/2).
double angular_coefficient(double a);

// F_{n,m}(theta, phi) = e^{i(n theta + m phi)} / (2 pi sqrt(rho(theta))), R = 1.
// Normalized under the measure rho(theta) dtheta dphi.
std::complex<double> basis_value(int n, int m, double a, double theta, double phi);

// Matrix of one operator in the truncated basis n in [-N, N] at fixed m.
// Row/column i corresponds to n = i - N.
class OperatorBlock {
 public:
  OperatorBlock(OperatorKind kind, int truncation, int m, double a, DenseMatrix values);

  OperatorKind kind() const noexcept { return kind_; }
  int truncation() const noexcept { return truncation_; }
  int m() const noexcept { return m_; }
  double aspect_ratio() const noexcept { return a_; }
  std::size_t dimension() const noexcept { return values_.rows(); }
  const DenseMatrix& values() const noexcept { return values_; }

  int n_of(std::size_t index) const noexcept { return static_cast<int>(index) - truncation_; }
  std::size_t index_of(int n) const noexcept { return static_cast<std::size_t>(n + truncation_); }

 private:
  OperatorKind kind_;
  int truncation_;
  int m_;
  double a_;
  DenseMatrix values_;
};

// Fills the lower triangle from the closed forms and mirrors it, so the
// result is bitwise symmetric. N = 0 is accepted only for the Hamiltonian.
// The toroidal block ignores m for its values but records it.
OperatorBlock assemble_block(OperatorKind kind, int truncation, int m, double a);

}  // namespace torus
