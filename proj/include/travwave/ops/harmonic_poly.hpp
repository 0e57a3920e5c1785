#pragma once

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/Sparse>

#include "travwave/common.hpp"

namespace travwave {

namespace detail {

/// All exponent vectors of total degree k in `vars` variables, in lexicographic order.
inline std::vector<std::vector<int>> monomials(int vars, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0) return out;
  std::vector<int> a(vars, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == vars - 1) {
      a[pos] = left;
      out.push_back(a);
      return;
    }
    for (int e = left; e >= 0; --e) {
      a[pos] = e;
      self(self, pos + 1, left - e);
    }
  };
  rec(rec, 0, k);
  return out;
}

/// Integral of x^a over the unit sphere in R^{|a|}: zero unless all exponents
/// are even, else 2 prod Gamma((a_i+1)/2) / Gamma((|a| + vars)/2).
inline double sphere_monomial_integral(const std::vector<int>& a) {
  double lg = 0;
  int total = 0;
  for (int e : a) {
    if (e % 2) return 0.0;
    lg += std::lgamma(0.5 * (e + 1));
    total += e;
  }
  lg -= std::lgamma(0.5 * (total + static_cast<int>(a.size())));
  return 2 * std::exp(lg);
}

inline long long binom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

/// dim V_k on S^n: C(n+k, k) - C(n+k-2, k-2).
inline long long harmonic_dimension(int n, int k) { return detail::binom(n + k, k) - detail::binom(n + k - 2, k - 2); }

/// Degree-k harmonic polynomials in n+1 variables, restricted to S^n.
struct HarmonicSpaceRep {
  int n = 0, k = 0;
  std::pair<int, int> plane{0, 1};
  std::vector<std::vector<int>> monos;  // monomial exponents
  RMat basis_polys;                     // monomial coefficients, one column per basis polynomial
  RMat gram;                            // L^2(S^n) Gram matrix of the columns
  RMat X_matrix;                        // x_i d_j - x_j d_i in basis coordinates
  RMat chol_L;                          // gram = L L^T
  RMat X_orth;                          // X in gram-orthonormal coordinates (real skew)
  RMat casimir_orth;                    // -sum_{a<b} X_ab^2 in orthonormal coordinates (= -Delta_S)

  [[nodiscard]] Eigen::Index dim() const { return basis_polys.cols(); }
};

namespace detail {

/// Sparse matrix of x_i d_j - x_j d_i on degree-k monomials.
inline Eigen::SparseMatrix<double> derivation_matrix(const std::vector<std::vector<int>>& monos, int i, int j) {
  std::map<std::vector<int>, int> pos;
  for (std::size_t q = 0; q < monos.size(); ++q) pos[monos[q]] = static_cast<int>(q);
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t q = 0; q < monos.size(); ++q) {
    const auto& a = monos[q];
    if (a[j] > 0) {  // x_i d_j x^a = a_j x^{a - e_j + e_i}
      auto b = a;
      --b[j];
      ++b[i];
      t.emplace_back(pos.at(b), static_cast<int>(q), a[j]);
    }
    if (a[i] > 0) {
      auto b = a;
      --b[i];
      ++b[j];
      t.emplace_back(pos.at(b), static_cast<int>(q), -a[i]);
    }
  }
  Eigen::SparseMatrix<double> X(static_cast<int>(monos.size()), static_cast<int>(monos.size()));
  X.setFromTriplets(t.begin(), t.end());
  return X;
}

/// Matrix of a derivation preserving span(K), in the coordinates of K's columns.
inline RMat restrict_to_span(const RMat& K, const Eigen::SparseMatrix<double>& X, const Eigen::LDLT<RMat>& ktk) {
  const RMat XK = X * K;
  RMat M = ktk.solve(K.transpose() * XK);
  const double res = (XK - K * M).norm();
  if (res > 1e-8 * std::max(1.0, XK.norm()))
    throw AssemblyError("harmonic space is not invariant under the rotation derivation");
  return M;
}

}  // namespace detail

inline HarmonicSpaceRep build_harmonic_rep(int n, int k, std::pair<int, int> plane = {0, 1}) {
  if (n < 2 || n > 5) throw ConfigurationError("build_harmonic_rep: n must lie in [2, 5]");
  if (k < 0 || k > 12) throw ConfigurationError("build_harmonic_rep: k must lie in [0, 12]");
  const int vars = n + 1;
  if (plane.first == plane.second || plane.first < 0 || plane.second < 0 || plane.first >= vars ||
      plane.second >= vars)
    throw ConfigurationError("build_harmonic_rep: invalid rotation plane");

  HarmonicSpaceRep rep;
  rep.n = n;
  rep.k = k;
  rep.plane = plane;
  rep.monos = detail::monomials(vars, k);
  const auto lower = detail::monomials(vars, k - 2);
  const Eigen::Index nm = static_cast<Eigen::Index>(rep.monos.size());

  // Ambient Laplacian from degree k to degree k - 2; its kernel is V_k.
  if (lower.empty()) {
    rep.basis_polys = RMat::Identity(nm, nm);
  } else {
    std::map<std::vector<int>, int> pos;
    for (std::size_t q = 0; q < lower.size(); ++q) pos[lower[q]] = static_cast<int>(q);
    RMat lap = RMat::Zero(static_cast<Eigen::Index>(lower.size()), nm);
    for (Eigen::Index q = 0; q < nm; ++q) {
      const auto& a = rep.monos[q];
      for (int v = 0; v < vars; ++v) {
        if (a[v] < 2) continue;
        auto b = a;
        b[v] -= 2;
        lap(pos.at(b), q) += a[v] * (a[v] - 1);
      }
    }
    Eigen::FullPivLU<RMat> lu(lap);
    rep.basis_polys = lu.kernel();
  }
  if (rep.basis_polys.cols() != harmonic_dimension(n, k))
    throw AssemblyError("harmonic polynomial kernel has the wrong dimension");

  const Eigen::Index d = rep.basis_polys.cols();
  // Exact Gram matrix from monomial sphere integrals.
  RMat mono_gram(nm, nm);
  for (Eigen::Index a = 0; a < nm; ++a)
    for (Eigen::Index b = a; b < nm; ++b) {
      std::vector<int> e(vars);
      for (int v = 0; v < vars; ++v) e[v] = rep.monos[a][v] + rep.monos[b][v];
      mono_gram(a, b) = mono_gram(b, a) = detail::sphere_monomial_integral(e);
    }
  rep.gram = rep.basis_polys.transpose() * mono_gram * rep.basis_polys;
  Eigen::LLT<RMat> llt(rep.gram);
  if (llt.info() != Eigen::Success) throw AssemblyError("harmonic Gram matrix is not positive definite");
  rep.chol_L = llt.matrixL();

  const Eigen::LDLT<RMat> ktk(rep.basis_polys.transpose() * rep.basis_polys);
  const RMat& K = rep.basis_polys;
  rep.X_matrix = detail::restrict_to_span(K, detail::derivation_matrix(rep.monos, plane.first, plane.second), ktk);

  // Orthonormal coordinates y = L^T x:  A_orth = L^T A L^{-T}.
  const RMat LT = rep.chol_L.transpose();
  auto orth = [&](const RMat& A) -> RMat {
    return LT * A * rep.chol_L.transpose().triangularView<Eigen::Upper>().solve(RMat::Identity(d, d));
  };
  rep.X_orth = orth(rep.X_matrix);
  RMat cas = RMat::Zero(d, d);
  for (int a = 0; a < vars; ++a)
    for (int b = a + 1; b < vars; ++b) {
      const RMat Mab = (a == plane.first && b == plane.second)
                           ? rep.X_orth
                           : orth(detail::restrict_to_span(K, detail::derivation_matrix(rep.monos, a, b), ktk));
      cas -= Mab * Mab;
    }
  rep.casimir_orth = cas;
  return rep;
}

/// Spectrum of X on V_k from a general (non-Hermitian) eigensolver.
inline Eigen::VectorXcd harmonic_X_eigenvalues(const HarmonicSpaceRep& rep) {
  Eigen::EigenSolver<RMat> es(rep.X_orth, false);
  return es.eigenvalues();
}

/// Max |G M + M^T G| / |G| |M|: zero when X is skew-Hermitian w.r.t. the Gram matrix.
inline double skewness_defect(const HarmonicSpaceRep& rep) {
  const RMat S = rep.gram * rep.X_matrix + rep.X_matrix.transpose() * rep.gram;
  return S.norm() / std::max(1e-300, rep.gram.norm() * rep.X_matrix.norm());
}

/// Hermitian matrix of -L_alpha = -Delta_S + X^2 + i alpha X on V_k in orthonormal coordinates.
inline CMat neg_L_alpha(const HarmonicSpaceRep& rep, double alpha) {
  const CMat X = rep.X_orth.cast<cplx>();
  CMat A = rep.casimir_orth.cast<cplx>() + X * X + cplx(0, alpha) * X;
  return 0.5 * (A + A.adjoint());
}

/// min over |j| <= k of k(k+n-1) - j^2 - alpha j.
inline double predicted_min_L_alpha(int n, int k, double alpha) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = -k; j <= k; ++j) best = std::min(best, double(k) * (k + n - 1) - double(j) * j - alpha * j);
  return best;
}

/// Distance (after normalisation and phase alignment) between the top
/// eigenvector of -iX on V_k and the polynomial (x_i + i x_j)^k.
inline double highest_weight_defect(const HarmonicSpaceRep& rep) {
  const int k = rep.k;
  const Eigen::Index nm = static_cast<Eigen::Index>(rep.monos.size());
  CVec v = CVec::Zero(nm);
  const int a = rep.plane.first, b = rep.plane.second;
  for (Eigen::Index q = 0; q < nm; ++q) {
    const auto& e = rep.monos[q];
    bool ok = true;
    for (int t = 0; t < static_cast<int>(e.size()); ++t)
      if (t != a && t != b && e[t] != 0) ok = false;
    if (!ok) continue;
    const int j = e[b];
    v[q] = static_cast<double>(detail::binom(k, j)) * std::pow(cplx(0, 1), j);
  }
  // Coordinates in the harmonic basis (exact: (x_a + i x_b)^k is harmonic).
  const CMat K = rep.basis_polys.cast<cplx>();
  const CVec z = K.colPivHouseholderQr().solve(v);
  if ((K * z - v).norm() > 1e-8 * v.norm()) return std::numeric_limits<double>::infinity();
  CVec y = rep.chol_L.transpose().cast<cplx>() * z;
  y.normalize();

  Eigen::SelfAdjointEigenSolver<CMat> es(CMat(cplx(0, -1) * rep.X_orth.cast<cplx>()));
  const Eigen::Index top = es.eigenvalues().size() - 1;
  if (std::abs(es.eigenvalues()[top] - k) > 1e-8) return std::numeric_limits<double>::infinity();
  CVec e = es.eigenvectors().col(top);
  const cplx ov = e.dot(y);
  if (std::abs(ov) == 0) return std::numeric_limits<double>::infinity();
  e *= ov / std::abs(ov);
  return (e - y).norm();
}

struct LAlphaRow {
  int k = 0;
  Eigen::Index dim = 0;
  double min_eig = 0;
  double predicted = 0;
  int kernel_dim = 0;  // eigenvalues within 1e-8 of zero
};

struct LAlphaReport {
  int n = 0;
  double alpha = 0;
  std::vector<LAlphaRow> rows;
  bool matches_prediction = true;  // every row within 1e-8
  bool semidefinite = true;        // every min eigenvalue >= -1e-8
  bool predicted_semidefinite = true;  // |alpha| <= n - 1
  int first_negative_k = -1;
};

inline LAlphaReport check_L_alpha_semidefinite(int n, int k_max, double alpha,
                                               std::vector<HarmonicSpaceRep>* cache = nullptr) {
  if (k_max < 0 || k_max > 12) throw ConfigurationError("check_L_alpha_semidefinite: k_max must lie in [0, 12]");
  LAlphaReport rep;
  rep.n = n;
  rep.alpha = alpha;
  rep.predicted_semidefinite = std::abs(alpha) <= n - 1;
  for (int k = 0; k <= k_max; ++k) {
    HarmonicSpaceRep local;
    const HarmonicSpaceRep* hr = nullptr;
    if (cache && static_cast<int>(cache->size()) > k) {
      hr = &(*cache)[k];
    } else {
      local = build_harmonic_rep(n, k);
      if (cache) cache->push_back(local);
      hr = cache ? &cache->back() : &local;
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(neg_L_alpha(*hr, alpha), Eigen::EigenvaluesOnly);
    LAlphaRow row;
    row.k = k;
    row.dim = hr->dim();
    row.min_eig = es.eigenvalues()[0];
    row.predicted = predicted_min_L_alpha(n, k, alpha);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()[i]) < 1e-8) ++row.kernel_dim;
    if (std::abs(row.min_eig - row.predicted) > 1e-8) rep.matches_prediction = false;
    if (row.min_eig < -1e-8) {
      rep.semidefinite = false;
      if (rep.first_negative_k < 0) rep.first_negative_k = k;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace travwave
