#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include "travwave/basis/field.hpp"
#include "travwave/basis/sphere.hpp"
#include "travwave/basis/torus.hpp"
#include "travwave/common.hpp"
#include "travwave/min/minimizer.hpp"
#include "travwave/ops/operators.hpp"

namespace travwave {

namespace detail {

/// Largest |<e^{sY} u, ref>| over the flow parameter s of a unit Killing field Y.
template <class Basis>
CVec align_along(const Basis& b, const CVec& u, const CVec& ref, const KillingSpec& Y) {
  const CVec eig = b.killing_eigs(Y);
  double wmin = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < eig.size(); ++k)
    if (std::abs(eig[k]) > 1e-12) wmin = std::min(wmin, std::abs(eig[k]));
  if (!std::isfinite(wmin)) return u;
  const double T = 2 * pi / wmin;
  auto flowed = [&](double s) { return CVec((u.array() * (s * eig.array()).exp()).matrix()); };
  auto score = [&](double s) { return std::abs(b.inner(flowed(s), ref)); };
  constexpr int coarse = 512;
  double best_s = 0, best = -1;
  for (int i = 0; i < coarse; ++i) {
    const double s = T * i / coarse;
    const double v = score(s);
    if (v > best) {
      best = v;
      best_s = s;
    }
  }
  // Golden-section refinement around the coarse maximiser.
  const double gr = 0.5 * (std::sqrt(5.0) - 1);
  double lo = best_s - T / coarse, hi = best_s + T / coarse;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = score(x1), f2 = score(x2);
  for (int it = 0; it < 100; ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = score(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = score(x2);
    }
  }
  return flowed(0.5 * (lo + hi));
}

}  // namespace detail

/// Moves u onto ref along the isometries available on the manifold, then fixes the phase.
template <class Basis>
CVec align_to(const Basis& b, CVec u, const CVec& ref) {
  if constexpr (std::is_same_v<Basis, TorusBasis>) {
    const int n = b.dimension();
    for (int sweep = 0; sweep < 3; ++sweep)
      for (int d = 0; d < n; ++d) {
        std::vector<double> e(static_cast<std::size_t>(n), 0.0);
        e[static_cast<std::size_t>(d)] = 1.0;
        u = detail::align_along(b, u, ref, KillingSpec::torus(e));
      }
  } else if constexpr (std::is_same_v<Basis, SphereBasis>) {
    u = detail::align_along(b, u, ref, KillingSpec::sphere(1.0));
  }
  const cplx ov = b.inner(u, ref);
  if (std::abs(ov) > 0) u *= std::conj(ov) / std::abs(ov);
  return u;
}

struct PerturbationBoundRow {
  double eps = 0;
  int samples = 0;
  int violations = 0;
  double max_ratio = 0;  // |dF| / (sup|X''| eps ||u||_{H^1}^2)
};

struct PerturbationMinRow {
  double eps = 0;
  double objective = 0;
  double sup_difference = 0;
  double residual = 0;
  bool converged = false;
  Classification classification = Classification::Constant;
};

struct PerturbationReport {
  double sup_Xpp = 0;
  std::vector<PerturbationBoundRow> bound;
  std::vector<PerturbationMinRow> minimizers;
  int total_violations = 0;
  bool monotone = false;  // sup differences decrease as eps decreases
};

/// F_{lambda, X + eps X''} against F_{lambda, X}, and minimisers u_eps against u_0.
template <class B>
PerturbationReport perturbation_study(std::shared_ptr<B> basis, const KillingSpec& X, const KillingSpec& Xpp,
                                      const std::vector<double>& eps_list, const ProblemSpec& pr, int n_random = 50,
                                      std::uint64_t seed = default_seed) {
  using Basis = std::remove_const_t<B>;
  const Basis& b = *basis;
  if (eps_list.empty()) throw ConfigurationError("perturbation_study needs at least one eps");
  PerturbationReport rep;
  rep.sup_Xpp = Xpp.speed_bound();

  // The perturbed field must stay Killing: same kind, and it must commute with the Laplacian.
  std::mt19937_64 rng(seed);
  const CVec probe = b.random_field(rng, 4);
  std::vector<KillingSpec> fields;
  for (double eps : eps_list) {
    KillingSpec Xe = X.perturbed(Xpp, eps);
    CVec lhs, rhs;
    try {
      lhs = b.neg_laplacian(b.killing(probe, Xe));
      rhs = b.killing(b.neg_laplacian(probe), Xe);
    } catch (const Error& e) {
      throw InvalidPerturbation(std::string("perturbed field rejected by the manifold: ") + e.what());
    }
    const double scale = std::max(std::sqrt(mass(b, lhs)), 1e-300);
    if (std::sqrt(mass(b, CVec(lhs - rhs))) > 1e-9 * scale)
      throw InvalidPerturbation("perturbed field does not commute with the Laplacian");
    fields.push_back(Xe);
  }

  for (std::size_t e = 0; e < eps_list.size(); ++e) {
    PerturbationBoundRow row;
    row.eps = eps_list[e];
    std::mt19937_64 r2(detail::mix_seed(seed, e + 1));
    for (int i = 0; i < n_random; ++i) {
      const CVec u = b.random_field(r2, 1 + i % 6);
      const double dF = std::abs(form_F_nls(b, u, fields[e], pr.lambda) - form_F_nls(b, u, X, pr.lambda));
      const double h1sq = mass(b, u) + grad_sq(b, u);
      const double bound = rep.sup_Xpp * std::abs(row.eps) * h1sq;
      if (dF > bound + 1e-10) ++row.violations;
      if (bound > 0) row.max_ratio = std::max(row.max_ratio, dF / bound);
      ++row.samples;
    }
    rep.total_violations += row.violations;
    rep.bound.push_back(row);
  }

  auto solve = [&](const KillingSpec& Xe, PerturbationMinRow& row) {
    MinimizeResult<Basis> r;
    row.converged = true;
    try {
      r = minimize(basis, pr, Xe);
    } catch (const NonConverged<Basis>& ex) {
      r = ex.best;
      row.converged = false;
    }
    row.objective = r.objective;
    row.residual = r.residual;
    row.classification = r.classification;
    return r.u.coeffs;
  };
  PerturbationMinRow row0;
  const CVec u0 = solve(X, row0);
  const CVec g0 = b.to_grid(u0);
  for (std::size_t e = 0; e < eps_list.size(); ++e) {
    PerturbationMinRow row;
    row.eps = eps_list[e];
    const CVec ue = align_to(b, solve(fields[e], row), u0);
    row.sup_difference = (b.to_grid(ue) - g0).cwiseAbs().maxCoeff();
    rep.minimizers.push_back(row);
  }
  // Monotone as eps shrinks along the list order.
  std::vector<std::size_t> order(eps_list.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return std::abs(eps_list[i]) > std::abs(eps_list[j]); });
  rep.monotone = true;
  for (std::size_t i = 1; i < order.size(); ++i)
    rep.monotone = rep.monotone &&
                   rep.minimizers[order[i]].sup_difference < rep.minimizers[order[i - 1]].sup_difference;
  return rep;
}

}  // namespace travwave
