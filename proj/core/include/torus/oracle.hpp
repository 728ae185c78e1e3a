#pragma once

#include <complex>
#include <cstddef>

#include "torus/operators.hpp"

// Independent evaluation of matrix elements: the torus differential operators
// are applied analytically to the basis functions and the theta integral is
// done by composite Gauss-Legendre. The phi integral is done analytically
// (it yields delta_{m1 m2} and turns d^2/dphi^2 into -m^2).
namespace torus::oracle {

struct QuadratureSpec {
  std::size_t panels = 64;  // initial panel count over [0, 2pi)
  std::size_t order = 16;   // Gauss-Legendre points per panel
  double tol = 1e-12;       // relative change between successive doublings
};

// Throws DomainError if tol <= 0, order < 2 or panels == 0.
void validate(const QuadratureSpec& spec);

struct ElementResult {
  double value = 0.0;
  double imaginary = 0.0;
  std::size_t panels = 0;  // panel count at convergence
};

// Theta part of F_{n,m}: g(theta) = e^{i n theta} / sqrt(rho(theta)) and its
// first two derivatives, coded analytically.
struct BasisJet {
  std::complex<double> value;
  std::complex<double> d1;
  std::complex<double> d2;
};
BasisJet basis_jet(int n, double a, double theta);

// Matrix element in E0 (Hamiltonian) or T0 (toroidal dipole). Throws
// ConsistencyError if the imaginary part exceeds 10 tol max(1, |value|) and
// NumericError if panel doubling does not reach tol within 2^10 x panels.
ElementResult quad_element_detailed(OperatorKind kind, int n1, int n2, int m, double a,
                                    const QuadratureSpec& spec = {});

double quad_element(OperatorKind kind, int n1, int n2, int m, double a,
                    const QuadratureSpec& spec = {});

// The divergence terms T_l and T_q of the hermiticity argument, evaluated on
// the torus surface (q = 0, R = 1) from the general direction-cosine
// expressions. Direction cosines: rho.l = -sin, z.l = cos, rho.q = cos,
// z.q = sin; dl/dl = -q/r and dh_l/dq = +1/r with q pointing outward.
struct DivergenceTerms {
  double tl = 0.0;
  double tq = 0.0;
};
DivergenceTerms divergence_terms(double a, double theta);

// T_l(theta) from the explicit torus polynomial used in the T3 operator.
double tl_torus_polynomial(double a, double theta);

// |T_l + T_q|, which vanishes identically on the torus.
double tl_tq_residual(double a, double theta);

// |T_l(polynomial) - T_l(direction cosines)|.
double check_t3_consistency(double a, double theta);

// int_0^inf dt / sqrt(t^4 + 4k^4) by tail-substituted quadrature; equals
// half_width_a(k) within spec.tol.
double quad_half_width(double k, const QuadratureSpec& spec = {});

}  // namespace torus::oracle
