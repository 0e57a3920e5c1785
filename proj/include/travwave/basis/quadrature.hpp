#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "travwave/common.hpp"

namespace travwave {

/// Nodes and weights of a one-dimensional Gauss rule.
struct GaussRule {
  RVec nodes;
  RVec weights;
};

/// Gauss rule for the symmetric Jacobi weight (1 - t^2)^a on [-1, 1],
/// computed with the Golub-Welsch eigenvalue method. a = 0 is Gauss-Legendre,
/// a = 1/2 is Gauss-Chebyshev of the second kind.
inline GaussRule gauss_gegenbauer(int count, double a) {
  if (count < 1) throw ConfigurationError("gauss_gegenbauer: need at least one node");
  if (a <= -1.0) throw ConfigurationError("gauss_gegenbauer: weight exponent must exceed -1");
  RVec diag = RVec::Zero(count);
  RVec sub(count > 1 ? count - 1 : 0);
  for (int j = 1; j < count; ++j) {
    const double jj = j;
    sub[j - 1] = std::sqrt(jj * (jj + 2 * a) / ((2 * jj + 2 * a + 1) * (2 * jj + 2 * a - 1)));
  }
  const double mu0 = std::exp((2 * a + 1) * std::log(2.0) + 2 * std::lgamma(a + 1) - std::lgamma(2 * a + 2));
  GaussRule rule;
  if (count == 1) {
    rule.nodes = RVec::Zero(1);
    rule.weights = RVec::Constant(1, mu0);
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<RMat> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  rule.nodes = es.eigenvalues();
  rule.weights = mu0 * es.eigenvectors().row(0).array().square().transpose();
  // Symmetrise: the exact rule is odd-symmetric in its nodes.
  for (int i = 0; i < count / 2; ++i) {
    const int k = count - 1 - i;
    const double x = 0.5 * (rule.nodes[k] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[k] + rule.weights[i]);
    rule.nodes[i] = -x;
    rule.nodes[k] = x;
    rule.weights[i] = rule.weights[k] = w;
  }
  if (count % 2 == 1) rule.nodes[count / 2] = 0.0;
  return rule;
}

/// Orthonormal profile of a spherical harmonic along one polar coordinate.
///
/// For a sphere S^d written as (polar angle, S^{d-1}) the degree-k harmonics
/// whose S^{d-1} part has degree l carry the profile
///   (1 - t^2)^{l/2} C^{(l + (d-1)/2)}_{k-l}(t),   t = cos(polar angle),
/// and the value returned here is that profile normalised in
/// L^2([-1, 1], (1 - t^2)^{(d-2)/2} dt). It is evaluated with the three-term
/// recurrence of the orthonormal Gegenbauer polynomials, which stays in range
/// for the degrees used here.
inline double harmonic_profile(int d, int k, int l, double t) {
  const double lam = l + 0.5 * (d - 1);
  const double a = lam - 0.5;
  const double mu0 = std::exp((2 * a + 1) * std::log(2.0) + 2 * std::lgamma(a + 1) - std::lgamma(2 * a + 2));
  const int deg = k - l;
  double p_prev = 0.0;
  double p = 1.0 / std::sqrt(mu0);
  double b_prev = 0.0;
  for (int j = 0; j < deg; ++j) {
    const double jj = j + 1;
    const double b = std::sqrt(jj * (jj + 2 * lam - 1) / (4 * (jj + lam) * (jj + lam - 1)));
    const double next = (t * p - b_prev * p_prev) / b;
    p_prev = p;
    p = next;
    b_prev = b;
  }
  const double s2 = std::max(0.0, 1.0 - t * t);
  return std::pow(s2, 0.5 * l) * p;
}

}  // namespace travwave
