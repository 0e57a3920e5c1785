#pragma once

#include <cmath>

#include "travwave/basis/field.hpp"
#include "travwave/common.hpp"
#include "travwave/ops/killing.hpp"

namespace travwave {

template <class Basis>
CVec apply_laplacian(const Basis& b, const CVec& c) {
  return b.neg_laplacian(c);
}

template <class Basis>
CVec apply_killing(const Basis& b, const CVec& c, const KillingSpec& X) {
  return b.killing(c, X);
}

/// -Delta u - i X u.
template <class Basis>
CVec apply_nls_operator(const Basis& b, const CVec& c, const KillingSpec& X) {
  return b.neg_laplacian(c) - cplx(0, 1) * b.killing(c, X);
}

/// -Delta u + X^2 u + 2 i lambda X u.
template <class Basis>
CVec apply_nlkg_operator(const Basis& b, const CVec& c, const KillingSpec& X, double lambda) {
  const CVec xu = b.killing(c, X);
  return b.neg_laplacian(c) + b.killing(xu, X) + cplx(0, 2 * lambda) * xu;
}

namespace detail {
inline double hermitian_value(cplx v, const char* what) {
  const double tol = 1e-10 * std::max(1.0, std::abs(v));
  if (std::abs(v.imag()) > tol) throw ConsistencyError(std::string(what) + ": quadratic form is not real");
  return v.real();
}
}  // namespace detail

/// F_{lambda,X}(u) = (-Delta u - i X u + lambda u, u).
template <class Basis>
double form_F_nls(const Basis& b, const CVec& c, const KillingSpec& X, double lambda) {
  const CVec a = apply_nls_operator(b, c, X) + lambda * c;
  return detail::hermitian_value(b.inner(a, c), "form_F_nls");
}

/// F_{m,lambda,X}(u) = (-Delta u + X^2 u + 2 i lambda X u + (m^2 - lambda^2) u, u).
template <class Basis>
double form_F_nlkg(const Basis& b, const CVec& c, const KillingSpec& X, double lambda, double m_mass) {
  const CVec a = apply_nlkg_operator(b, c, X, lambda) + (m_mass * m_mass - lambda * lambda) * c;
  return detail::hermitian_value(b.inner(a, c), "form_F_nlkg");
}

/// |u|^{p-1} u evaluated on the grid and projected back to the basis. This is
/// the exact gradient of the grid quadrature of |u|^{p+1}/(p+1).
template <class Basis>
CVec nonlinearity(const Basis& b, const CVec& c, double p) {
  CVec g = b.to_grid(c);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double a = std::abs(g[i]);
    g[i] = a > 0 ? g[i] * std::pow(a, p - 1) : cplx(0);
  }
  return b.from_grid(g);
}

/// E_{lambda,X}(u) = (1/2)(-Delta u - i X u, u) - K/(p+1) int |u|^{p+1}.
template <class Basis>
double energy_nls(const Basis& b, const CVec& c, const KillingSpec& X, double p, double K = 1.0) {
  return 0.5 * form_F_nls(b, c, X, 0.0) - K / (p + 1) * lp_integral(b, c, p);
}

/// (1/2)(-Delta u + X^2 u + 2 i lambda X u, u) - K/(p+1) int |u|^{p+1}.
template <class Basis>
double energy_nlkg(const Basis& b, const CVec& c, const KillingSpec& X, double lambda, double p, double K = 1.0) {
  const CVec a = apply_nlkg_operator(b, c, X, lambda);
  return 0.5 * detail::hermitian_value(b.inner(a, c), "energy_nlkg") - K / (p + 1) * lp_integral(b, c, p);
}

/// L^2 gradient of the NLS energy: -Delta u - i X u - K |u|^{p-1} u.
template <class Basis>
CVec gradient_nls(const Basis& b, const CVec& c, const KillingSpec& X, double p, double K = 1.0) {
  return apply_nls_operator(b, c, X) - K * nonlinearity(b, c, p);
}

/// L^2 gradient of the NLKG energy: -Delta u + X^2 u + 2 i lambda X u - K |u|^{p-1} u.
template <class Basis>
CVec gradient_nlkg(const Basis& b, const CVec& c, const KillingSpec& X, double lambda, double p, double K = 1.0) {
  return apply_nlkg_operator(b, c, X, lambda) - K * nonlinearity(b, c, p);
}

/// Right-hand side of F = 2 E + (2K/(p+1)) int |u|^{p+1} + (m^2 - lambda^2) Q,
/// returned as (lhs, rhs) for the identity check.
template <class Basis>
std::pair<double, double> energy_identity(const Basis& b, const CVec& c, const KillingSpec& X, double lambda,
                                          double m_mass, double p, double K = 1.0) {
  const double F = form_F_nlkg(b, c, X, lambda, m_mass);
  const double E = energy_nlkg(b, c, X, lambda, p, K);
  const double rhs = 2 * E + 2 * K / (p + 1) * lp_integral(b, c, p) + (m_mass * m_mass - lambda * lambda) * mass(b, c);
  return {F, rhs};
}

}  // namespace travwave
