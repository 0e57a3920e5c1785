#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "travwave/common.hpp"
#include "travwave/exp/scaling.hpp"
#include "travwave/min/minimizer.hpp"

namespace travwave {

/// Interpolation exponent with 1/(p+1) = (1 - theta)/2 + theta/(q+1).
inline double interpolation_theta(double p, double q) { return (p - 1) * (q + 1) / ((q - 1) * (p + 1)); }

template <class Basis>
struct TwoNonlinearityReport {
  MinimizeResult<Basis> result;
  double theta = 0;
  double exponent = 0;  // 2(q - p)/(q - 1)
  bool exponent_below_two = false;
  double kappa = 0;  // coefficient of |u|^{q-1} u
  std::vector<std::string> warnings;
};

/// Minimises ||grad u||^2 + lambda ||u||^2 - 2/(p+1) int |u|^{p+1} on int |u|^{q+1} = beta.
template <class B>
TwoNonlinearityReport<std::remove_const_t<B>> two_nonlinearity_minimize(std::shared_ptr<B> basis, double lambda, double p,
                                                                        double q, double beta,
                                                                        const std::optional<KillingSpec>& X = std::nullopt,
                                                                        ProblemSpec pr = {}) {
  using Basis = std::remove_const_t<B>;
  const int n = basis->dimension();
  if (!(p > 1) || !(q > p)) throw ConfigurationError("two-nonlinearity problem needs q > p > 1");
  if (n >= 3 && !(p < (n + 2.0) / (n - 2.0))) throw ConfigurationError("p outside the subcritical range");
  TwoNonlinearityReport<Basis> rep;
  if (X && X->speed_bound() > 0) rep.warnings.push_back("Killing field ignored: the stationary problem has no transport term");
  pr.equation = Equation::TwoNonlinearity;
  pr.lambda = lambda;
  pr.p = p;
  pr.q = q;
  pr.constraint = ConstraintKind::LpPlusOne;
  pr.constraint_value = beta;
  pr.subspace_mu.reset();
  rep.theta = interpolation_theta(p, q);
  rep.exponent = 2 * (q - p) / (q - 1);
  rep.exponent_below_two = rep.exponent < 2;

  rep.result = minimize(basis, pr, zero_killing(*basis));
  rep.kappa = rep.result.multiplier;
  return rep;
}

}  // namespace travwave
