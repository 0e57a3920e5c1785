#pragma once

#include <cmath>
#include <memory>
#include <type_traits>

#include "travwave/common.hpp"

namespace travwave {

/// A coefficient vector tied to the basis it lives in. Immutable by convention:
/// operations return new fields.
template <class Basis>
struct Field {
  std::shared_ptr<const Basis> basis;
  CVec coeffs;

  Field() = default;
  Field(std::shared_ptr<const Basis> b, CVec c) : basis(std::move(b)), coeffs(std::move(c)) {
    if (!basis) throw ConfigurationError("field without a basis");
    if (coeffs.size() != basis->size()) throw ConfigurationError("field coefficients do not match the basis size");
  }

  [[nodiscard]] CVec grid() const { return basis->to_grid(coeffs); }
};

template <class Basis>
Field<std::remove_const_t<Basis>> field_from_grid(std::shared_ptr<Basis> b, const CVec& g) {
  CVec c = b->from_grid(g);
  return Field<std::remove_const_t<Basis>>(std::move(b), std::move(c));
}

template <class Basis>
void require_same_basis(const Field<Basis>& u, const Field<Basis>& v) {
  if (u.basis != v.basis) throw BasisMismatch("fields live in different bases");
}

template <class Basis>
cplx inner(const Field<Basis>& u, const Field<Basis>& v) {
  require_same_basis(u, v);
  return u.basis->inner(u.coeffs, v.coeffs);
}

/// Grid quadrature of |u|^{p+1}.
template <class Basis>
double lp_integral(const Basis& b, const CVec& c, double p) {
  const CVec g = b.to_grid(c);
  return (g.cwiseAbs().array().pow(p + 1) * b.grid_weights().array()).sum();
}

/// Grid quadrature of |u|^2 (the Parseval partner of inner(u, u)).
template <class Basis>
double grid_mass(const Basis& b, const CVec& c) {
  const CVec g = b.to_grid(c);
  return (g.cwiseAbs2().array() * b.grid_weights().array()).sum();
}

template <class Basis>
double mass(const Basis& b, const CVec& c) {
  return std::real(b.inner(c, c));
}

template <class Basis>
double grad_sq(const Basis& b, const CVec& c) {
  return std::real(b.inner(b.neg_laplacian(c), c));
}

struct Norms {
  double l2 = 0;
  double h1 = 0;
  double lp1 = 0;
};

/// L^2, H^1 and L^{p+1} norms.
template <class Basis>
Norms norms(const Basis& b, const CVec& c, double p) {
  if (p < 1) throw ConfigurationError("norms: p must be at least 1");
  Norms out;
  const double m = mass(b, c);
  out.l2 = std::sqrt(m);
  out.h1 = std::sqrt(m + grad_sq(b, c));
  out.lp1 = std::pow(lp_integral(b, c, p), 1.0 / (p + 1));
  return out;
}

template <class Basis>
Norms norms(const Field<Basis>& u, double p) {
  return norms(*u.basis, u.coeffs, p);
}

}  // namespace travwave
