#include "torus/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "torus/errors.hpp"
#include "torus/geometry.hpp"
#include "torus/quadrature.hpp"

namespace torus::oracle {
namespace {

constexpr std::size_t kMaxDoublings = 10;

// Applies the torus operator (R = 1, r = 1/a) to the theta part of F_{n2,m}.
std::complex<double> apply_operator(OperatorKind kind, int n2, int m, double a, double theta) {
  const BasisJet g = basis_jet(n2, a, theta);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double rho = 1.0 + c / a;

  if (kind == OperatorKind::Hamiltonian) {
    // In E0 = hbar^2/(2 m_p r^2):
    // H = -[d^2/dtheta^2 - sin/(a rho) d/dtheta + (cos/(a rho) - 1)^2 / 4
    //       + (1/(a rho))^2 d^2/dphi^2]
    const double curvature = c / (a * rho) - 1.0;
    const double mm = static_cast<double>(m) * m;
    return -(g.d2 - (s / (a * rho)) * g.d1 + 0.25 * curvature * curvature * g.value -
             mm / (a * a * rho * rho) * g.value);
  }

  // In hbar R/(10 m_p): T3 = -i [ (G / r) d/dtheta + T_l / (2 rho) ] with
  // G = -r sin^2 rho - (2 rho^2 + r^2 sin^2) cos. T0 = hbar r / (10 m_p) is a
  // factor 1/a smaller, hence the overall a.
  const double r = 1.0 / a;
  const double G = -r * s * s * rho - (2.0 * rho * rho + r * r * s * s) * c;
  const double tl = tl_torus_polynomial(a, theta);
  const std::complex<double> minus_i(0.0, -1.0);
  return minus_i * a * ((G / r) * g.d1 + tl / (2.0 * rho) * g.value);
}

std::complex<double> element_at(OperatorKind kind, int n1, int n2, int m, double a,
                                std::size_t panels, std::size_t order) {
  const auto integrand = [=](double theta) {
    const double rho = 1.0 + std::cos(theta) / a;
    const std::complex<double> bra = std::conj(basis_jet(n1, a, theta).value);
    return rho * bra * apply_operator(kind, n2, m, a, theta);
  };
  // F carries 1/(2 pi); the phi integral contributes 2 pi.
  return quad::integrate_panels(integrand, 0.0, 2.0 * std::numbers::pi, panels, order) /
         (2.0 * std::numbers::pi);
}

}  // namespace

void validate(const QuadratureSpec& spec) {
  if (!(spec.tol > 0.0)) throw DomainError("QuadratureSpec: tol must be positive");
  if (spec.order < 2) throw DomainError("QuadratureSpec: order must be >= 2");
  if (spec.panels == 0) throw DomainError("QuadratureSpec: panels must be positive");
}

BasisJet basis_jet(int n, double a, double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double rho = 1.0 + c / a;
  const std::complex<double> value = std::polar(1.0 / std::sqrt(rho), n * theta);
  // d/dtheta log g = i n - rho'/(2 rho), rho' = -sin/a
  const std::complex<double> log_d1(s / (2.0 * a * rho), static_cast<double>(n));
  const double log_d2 = (c * rho + s * s / a) / (2.0 * a * rho * rho);
  return {value, value * log_d1, value * (log_d1 * log_d1 + log_d2)};
}

ElementResult quad_element_detailed(OperatorKind kind, int n1, int n2, int m, double a,
                                    const QuadratureSpec& spec) {
  require_aspect_ratio(a);
  validate(spec);

  std::size_t panels = spec.panels;
  std::complex<double> previous = element_at(kind, n1, n2, m, a, panels, spec.order);
  for (std::size_t k = 0; k < kMaxDoublings; ++k) {
    panels *= 2;
    const std::complex<double> current = element_at(kind, n1, n2, m, a, panels, spec.order);
    const double scale = std::max(1.0, std::abs(current.real()));
    if (std::abs(current - previous) < spec.tol * scale) {
      if (std::abs(current.imag()) > 10.0 * spec.tol * scale) {
        std::ostringstream msg;
        msg << "quad_element: imaginary residual " << current.imag() << " for "
            << to_string(kind) << " (" << n1 << ", " << n2 << ", m=" << m << ", a=" << a << ")";
        throw ConsistencyError(msg.str(), std::abs(current.imag()));
      }
      return {current.real(), current.imag(), panels};
    }
    previous = current;
  }
  std::ostringstream msg;
  msg << "quad_element: no convergence after " << kMaxDoublings << " panel doublings";
  throw NumericError(msg.str());
}

double quad_element(OperatorKind kind, int n1, int n2, int m, double a,
                    const QuadratureSpec& spec) {
  return quad_element_detailed(kind, n1, n2, m, a, spec).value;
}

DivergenceTerms divergence_terms(double a, double theta) {
  require_aspect_ratio(a);
  const double r = 1.0 / a;
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double rho = 1.0 + r * c;
  const double z = r * s;

  // Direction cosines of the local basis on the generating circle.
  const double rho_l = -s;
  const double z_l = c;
  const double rho_q = c;
  const double z_q = s;
  // dl/dl = -q / r, dh_l/dq = 1 / r
  const double dl_rho = -c / r;
  const double dl_z = -s / r;
  const double dh_dq = 1.0 / r;

  const double cubic = 5.0 * rho * rho + z * z;
  const double axial = 2.0 * rho * rho + z * z;

  DivergenceTerms out;
  out.tl = 2.0 * z * rho * (rho_l * rho_l - z_l * z_l) - cubic * rho_l * z_l +
           rho * (z * rho * dl_rho - axial * dl_z);
  out.tq = 2.0 * z * rho * (rho_q * rho_q - z_q * z_q) - cubic * rho_q * z_q +
           rho * (z * rho * rho_q - axial * z_q) * dh_dq;
  return out;
}

double tl_torus_polynomial(double a, double theta) {
  const double r = 1.0 / a;
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double rho = 1.0 + r * c;
  return -2.0 * r * s * rho * std::cos(2.0 * theta) +
         (5.0 * rho * rho + r * r * s * s) * std::sin(2.0 * theta) / 2.0 +
         rho / r * ((2.0 + r * c) * rho + r * r * s * s) * s;
}

double tl_tq_residual(double a, double theta) {
  const auto terms = divergence_terms(a, theta);
  return std::abs(terms.tl + terms.tq);
}

double check_t3_consistency(double a, double theta) {
  require_aspect_ratio(a);
  return std::abs(tl_torus_polynomial(a, theta) - divergence_terms(a, theta).tl);
}

double quad_half_width(double k, const QuadratureSpec& spec) {
  if (!(k > 0.0)) throw DomainError("quad_half_width: k must be positive");
  validate(spec);
  return detail::u_integral(k, 0.0, std::numeric_limits<double>::infinity(), spec.tol).value;
}

}  // namespace torus::oracle
