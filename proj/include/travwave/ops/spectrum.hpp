#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "travwave/common.hpp"
#include "travwave/ops/killing.hpp"
#include "travwave/ops/lanczos.hpp"

namespace travwave {

struct SpectrumReport {
  double alpha = 0;        // min Spec(-Delta - iX)
  double beta_lambda = 0;  // min Spec(-Delta + X^2 + 2 i lambda X)
  double alpha_enumerated = 0;
  double beta_enumerated = 0;
  SpeedRegime regime = SpeedRegime::Elliptic;
  bool nls_coercive = false;   // lambda > -alpha
  bool nlkg_coercive = false;  // m^2 > lambda^2 - beta(lambda)
  double c_nls = 0, C_nls = 0;    // c ||u||_{H1}^2 <= F_{lambda,X} <= C ||u||_{H1}^2
  double c_nlkg = 0, C_nlkg = 0;  // same for F_{m,lambda,X}
  int lanczos_iterations = 0;
  std::vector<std::pair<double, std::string>> lowest_eigs;  // of -Delta + X^2 + 2 i lambda X
};

/// Per-mode multipliers of the two operators on a diagonal (orthonormal) basis.
template <class Basis>
std::pair<RVec, RVec> operator_symbols(const Basis& b, const KillingSpec& X, double lambda) {
  const RVec& lap = b.neg_laplacian_eigs();
  const CVec xe = b.killing_eigs(X);
  // X = i s: -iX -> s; X^2 -> -s^2; 2 i lambda X -> -2 lambda s.
  const RVec s = xe.imag();
  RVec nls = lap + s;
  RVec nlkg = lap.array() - s.array().square() - 2 * lambda * s.array();
  return {nls, nlkg};
}

/// Spectral bounds and coercivity constants on a compact, diagonal basis.
///
/// The bottom of each spectrum is found by preconditioned LOBPCG on the
/// assembled operators and cross-checked against direct enumeration of the
/// mode multipliers; a disagreement beyond 1e-8 is an internal error. The
/// constants c, C are extremal Rayleigh quotients against 1 - Delta, found by
/// Lanczos.
template <class Basis>
SpectrumReport coercivity_check(const Basis& b, const KillingSpec& X, double lambda, double m_mass,
                                const LanczosOptions& opt = {}, int n_lowest = 8, bool with_constants = true) {
  static_assert(Basis::diagonal, "coercivity_check needs a compact basis with a diagonal Laplacian");
  const auto [nls, nlkg] = operator_symbols(b, X, lambda);
  const RVec& lap = b.neg_laplacian_eigs();
  // Restrict to active modes (torus Nyquist bins carry no data).
  std::vector<Eigen::Index> act;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    if constexpr (requires { b.is_active(i); }) {
      if (!b.is_active(i)) continue;
    }
    act.push_back(i);
  }
  const Eigen::Index d = static_cast<Eigen::Index>(act.size());
  auto restrict = [&](const RVec& v) {
    RVec o(d);
    for (Eigen::Index i = 0; i < d; ++i) o[i] = v[act[i]];
    return o;
  };
  const RVec a_nls = restrict(nls), a_nlkg = restrict(nlkg), h1 = (restrict(lap).array() + 1.0).matrix();

  SpectrumReport rep;
  rep.regime = regime_of(X.speed_bound());
  auto diag_op = [](const RVec& diag) {
    return [diag](const CVec& v) -> CVec { return (diag.cast<cplx>().array() * v.array()).matrix(); };
  };
  // Assembled operators acting on the active coefficients.
  auto assembled = [&](auto&& op) {
    return [&, op](const CVec& v) -> CVec {
      CVec full = CVec::Zero(b.size());
      for (Eigen::Index i = 0; i < d; ++i) full[act[i]] = v[i];
      const CVec w = op(full);
      CVec o(d);
      for (Eigen::Index i = 0; i < d; ++i) o[i] = w[act[i]];
      return o;
    };
  };
  const auto op_nls = assembled([&](const CVec& u) { return CVec(b.neg_laplacian(u) - cplx(0, 1) * b.killing(u, X)); });
  const auto op_nlkg = assembled([&](const CVec& u) {
    const CVec xu = b.killing(u, X);
    return CVec(b.neg_laplacian(u) + b.killing(xu, X) + cplx(0, 2 * lambda) * xu);
  });
  // Preconditioner (1 - Delta)^{-1}; the operators differ from -Delta by a
  // first-order term, so the preconditioned spectrum is bounded.
  const auto precond = [&](const CVec& v) -> CVec { return (v.array() / h1.cast<cplx>().array()).matrix(); };
  auto lz_min = lobpcg_smallest(op_nls, precond, d, opt);
  auto lz_min2 = lobpcg_smallest(op_nlkg, precond, d, opt);
  rep.alpha = lz_min.value;
  rep.beta_lambda = lz_min2.value;
  rep.lanczos_iterations = lz_min.iterations + lz_min2.iterations;
  rep.alpha_enumerated = a_nls.minCoeff();
  rep.beta_enumerated = a_nlkg.minCoeff();
  const double tolchk = 1e-8 * std::max(1.0, a_nlkg.cwiseAbs().maxCoeff());
  if (std::abs(rep.alpha - rep.alpha_enumerated) > tolchk || std::abs(rep.beta_lambda - rep.beta_enumerated) > tolchk)
    throw ConsistencyError("coercivity_check: Lanczos and mode enumeration disagree");
  rep.nls_coercive = lambda > -rep.alpha;
  rep.nlkg_coercive = m_mass * m_mass > lambda * lambda - rep.beta_lambda;

  // Generalised Rayleigh quotients against B = 1 - Delta: eigenvalues of B^{-1/2} F B^{-1/2}.
  const RVec q_nls = ((a_nls.array() + lambda) / h1.array()).matrix();
  const RVec q_nlkg = ((a_nlkg.array() + m_mass * m_mass - lambda * lambda) / h1.array()).matrix();
  if (!with_constants) return rep;
  LanczosOptions qopt = opt;
  qopt.accept_stagnant_value = true;
  rep.c_nls = lanczos_smallest(diag_op(q_nls), d, qopt).value;
  rep.C_nls = lanczos_largest(diag_op(q_nls), d, qopt).value;
  rep.c_nlkg = lanczos_smallest(diag_op(q_nlkg), d, qopt).value;
  rep.C_nlkg = lanczos_largest(diag_op(q_nlkg), d, qopt).value;

  std::vector<Eigen::Index> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a_nlkg[i] < a_nlkg[j]; });
  for (int i = 0; i < std::min<Eigen::Index>(n_lowest, d); ++i)
    rep.lowest_eigs.emplace_back(a_nlkg[order[i]], b.mode_label(act[order[i]]));
  return rep;
}

}  // namespace travwave
