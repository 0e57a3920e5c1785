#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "travwave/common.hpp"

namespace travwave {

struct LanczosOptions {
  double tol = 1e-10;
  int max_iterations = 5000;  // total operator applications
  int subspace = 80;          // Krylov dimension before restart
  std::uint64_t seed = default_seed;
  // Also accept when the Ritz value moves by less than tol * max(1, |theta|)
  // between restarts. Suited to extremal values inside tight clusters, where the
  // value converges long before the vector.
  bool accept_stagnant_value = false;
};

struct LanczosResult {
  double value = 0;
  CVec vector;
  int iterations = 0;
  double residual = 0;
};

/// Smallest eigenpair of a Hermitian operator on C^dim (standard inner product).
///
/// Lanczos with full reorthogonalisation, explicitly restarted from the current
/// Ritz vector. Converged when ||A x - theta x|| <= tol * max(1, |theta|).
inline LanczosResult lanczos_smallest(const std::function<CVec(const CVec&)>& apply, Eigen::Index dim,
                                      const LanczosOptions& opt = {}) {
  if (dim < 1) throw EigensolverError("lanczos: empty operator");
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  CVec x(dim);
  for (Eigen::Index i = 0; i < dim; ++i) x[i] = cplx(nd(rng), nd(rng));
  x.normalize();

  const int m_max = static_cast<int>(std::min<Eigen::Index>(opt.subspace, dim));
  int applications = 0;
  LanczosResult res;
  double previous = std::numeric_limits<double>::quiet_NaN();
  while (applications < opt.max_iterations) {
    CMat V(dim, m_max);
    RVec alpha(m_max), beta(m_max);
    V.col(0) = x;
    int m = 0;
    for (; m < m_max && applications < opt.max_iterations; ++m) {
      CVec w = apply(V.col(m));
      ++applications;
      alpha[m] = std::real(V.col(m).dot(w));
      // Full reorthogonalisation, applied twice for stability.
      for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(m + 1) * (V.leftCols(m + 1).adjoint() * w);
      const double bnorm = w.norm();
      beta[m] = bnorm;
      if (m + 1 == m_max || bnorm < 1e-14 * std::max(1.0, std::abs(alpha[m]))) {
        ++m;
        break;
      }
      V.col(m + 1) = w / bnorm;
    }
    Eigen::SelfAdjointEigenSolver<RMat> es;
    if (m == 1) {
      res.value = alpha[0];
      x = V.col(0);
    } else {
      es.computeFromTridiagonal(alpha.head(m), beta.head(m - 1), Eigen::ComputeEigenvectors);
      res.value = es.eigenvalues()[0];
      x = V.leftCols(m) * es.eigenvectors().col(0).cast<cplx>();
    }
    x.normalize();
    const CVec r = apply(x) - res.value * x;
    ++applications;
    res.residual = r.norm();
    res.iterations = applications;
    res.vector = x;
    const double scale = std::max(1.0, std::abs(res.value));
    if (res.residual <= opt.tol * scale) return res;
    if (opt.accept_stagnant_value && std::abs(res.value - previous) <= opt.tol * scale) return res;
    previous = res.value;
  }
  throw EigensolverError("lanczos: no convergence within the iteration cap");
}

/// Smallest eigenpair by block LOBPCG with a preconditioner T ~ A^{-1}.
///
/// Block size `block` guards against clustered minima. Same convergence test
/// as lanczos_smallest, applied to the lowest Ritz pair.
inline LanczosResult lobpcg_smallest(const std::function<CVec(const CVec&)>& apply,
                                     const std::function<CVec(const CVec&)>& precond, Eigen::Index dim,
                                     const LanczosOptions& opt = {}, int block = 3) {
  if (dim < 1) throw EigensolverError("lobpcg: empty operator");
  const int k = static_cast<int>(std::min<Eigen::Index>(block, dim));
  if (dim <= 3 * k) {
    // Tiny problem: assemble and diagonalise directly.
    CMat A(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) A.col(j) = apply(CVec::Unit(dim, j));
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (A + A.adjoint()));
    return {es.eigenvalues()[0], es.eigenvectors().col(0), static_cast<int>(dim), 0.0};
  }
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  CMat X(dim, k);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (int j = 0; j < k; ++j) X(i, j) = cplx(nd(rng), nd(rng));
  X = Eigen::HouseholderQR<CMat>(X).householderQ() * CMat::Identity(dim, k);
  CMat AX(dim, k);
  for (int j = 0; j < k; ++j) AX.col(j) = apply(X.col(j));
  CMat P(dim, 0);
  int applications = k;
  LanczosResult res;

  auto orthonormalise = [](CMat S, int keep) {
    // Modified Gram-Schmidt, twice, dropping directions that collapse.
    std::vector<CVec> cols;
    for (Eigen::Index j = 0; j < S.cols(); ++j) {
      CVec v = S.col(j);
      const double n0 = v.norm();
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : cols) v -= q * q.dot(v);
      const double n1 = v.norm();
      if (j < keep || n1 > 1e-10 * std::max(n0, 1e-300)) cols.push_back(v / n1);
    }
    CMat Q(S.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) Q.col(static_cast<Eigen::Index>(j)) = cols[j];
    return Q;
  };

  while (applications < opt.max_iterations) {
    const CMat G = X.adjoint() * AX;
    Eigen::SelfAdjointEigenSolver<CMat> es0(0.5 * (G + G.adjoint()));
    X = X * es0.eigenvectors();
    AX = AX * es0.eigenvectors();
    const RVec theta = es0.eigenvalues();
    CMat R = AX - X * theta.cast<cplx>().asDiagonal();
    res.value = theta[0];
    res.vector = X.col(0);
    res.residual = R.col(0).norm();
    res.iterations = applications;
    if (res.residual <= opt.tol * std::max(1.0, std::abs(res.value))) return res;

    CMat W(dim, k);
    for (int j = 0; j < k; ++j) W.col(j) = precond(R.col(j));
    CMat S(dim, k + k + P.cols());
    S << X, W, P;
    const CMat Q = orthonormalise(S, k);
    CMat AQ(dim, Q.cols());
    AQ.leftCols(k) = AX;
    for (Eigen::Index j = k; j < Q.cols(); ++j) AQ.col(j) = apply(Q.col(j));
    applications += static_cast<int>(Q.cols()) - k;
    const CMat H = Q.adjoint() * AQ;
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (H + H.adjoint()));
    const CMat Y = es.eigenvectors().leftCols(k);
    const CMat Xn = Q * Y;
    P = Q.rightCols(Q.cols() - k) * Y.bottomRows(Q.cols() - k);
    AX = AQ * Y;
    // Re-orthonormalise X to contain round-off drift.
    Eigen::HouseholderQR<CMat> qr(Xn);
    const CMat Rf = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    const CMat Rinv = Rf.triangularView<Eigen::Upper>().solve(CMat::Identity(k, k));
    X = Xn * Rinv;
    AX = AX * Rinv;
  }
  throw EigensolverError("lobpcg: no convergence within the iteration cap");
}

/// Largest eigenvalue, via the smallest of -A.
inline LanczosResult lanczos_largest(const std::function<CVec(const CVec&)>& apply, Eigen::Index dim,
                                     const LanczosOptions& opt = {}) {
  auto neg = [&](const CVec& v) -> CVec { return -apply(v); };
  LanczosResult r = lanczos_smallest(neg, dim, opt);
  r.value = -r.value;
  return r;
}

}  // namespace travwave
