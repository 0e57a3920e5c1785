#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "travwave/ops/harmonic_poly.hpp"

using namespace travwave;

TEST(HarmonicRep, DimensionFormula) {
  EXPECT_EQ(harmonic_dimension(2, 1), 3);
  EXPECT_EQ(build_harmonic_rep(2, 1).dim(), 3);
  for (int n = 2; n <= 5; ++n)
    for (int k = 0; k <= 6; ++k) EXPECT_EQ(build_harmonic_rep(n, k).dim(), harmonic_dimension(n, k)) << n << " " << k;
  // 2k + 1 on S^2, (k + 1)^2 on S^3.
  for (int k = 0; k <= 8; ++k) {
    EXPECT_EQ(harmonic_dimension(2, k), 2 * k + 1);
    EXPECT_EQ(harmonic_dimension(3, k), (k + 1) * (k + 1));
  }
}

TEST(HarmonicRep, RejectsOutOfRange) {
  EXPECT_THROW(build_harmonic_rep(6, 2), ConfigurationError);
  EXPECT_THROW(build_harmonic_rep(2, 13), ConfigurationError);
  EXPECT_THROW(build_harmonic_rep(2, 2, {1, 1}), ConfigurationError);
}

TEST(HarmonicRep, MonomialIntegralsMatchKnownValues) {
  EXPECT_NEAR(detail::sphere_monomial_integral({0, 0, 0}), 4 * pi, 1e-13);
  EXPECT_NEAR(detail::sphere_monomial_integral({2, 0, 0}), 4 * pi / 3, 1e-13);
  EXPECT_NEAR(detail::sphere_monomial_integral({0, 0, 0, 0}), 2 * pi * pi, 1e-13);
  EXPECT_NEAR(detail::sphere_monomial_integral({4, 0, 0}), 4 * pi / 5, 1e-13);
  EXPECT_EQ(detail::sphere_monomial_integral({1, 1, 0}), 0.0);
}

TEST(HarmonicRep, XIsSkewAndHasIntegerImaginarySpectrum) {
  for (int n = 2; n <= 4; ++n)
    for (int k = 0; k <= 7; ++k) {
      const auto rep = build_harmonic_rep(n, k);
      EXPECT_LT(skewness_defect(rep), 1e-10);
      const auto ev = harmonic_X_eigenvalues(rep);
      bool has_ik = false;
      for (Eigen::Index i = 0; i < ev.size(); ++i) {
        EXPECT_LT(std::abs(ev[i].real()), 1e-8);
        EXPECT_LT(std::abs(ev[i].imag() - std::round(ev[i].imag())), 1e-8);
        EXPECT_LE(std::abs(ev[i].imag()), k + 1e-8);
        if (std::abs(ev[i].imag() - k) < 1e-8) has_ik = true;
      }
      EXPECT_TRUE(has_ik);
      EXPECT_LT(highest_weight_defect(rep), 1e-8);
    }
}

TEST(HarmonicRep, CasimirIsLaplaceBeltrami) {
  for (int n = 2; n <= 4; ++n)
    for (int k = 0; k <= 6; ++k) {
      const auto rep = build_harmonic_rep(n, k);
      const RMat expect = double(k) * (k + n - 1) * RMat::Identity(rep.dim(), rep.dim());
      EXPECT_LT((rep.casimir_orth - expect).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(HarmonicRep, OtherRotationPlanes) {
  const auto rep = build_harmonic_rep(3, 4, {1, 3});
  EXPECT_LT(skewness_defect(rep), 1e-10);
  EXPECT_LT(highest_weight_defect(rep), 1e-8);
}

TEST(LAlpha, PredictedMinima) {
  // Enumeration over j in {-2..2} of 6 - j^2 - j: minimum 0 at j = 2.
  EXPECT_NEAR(predicted_min_L_alpha(2, 2, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(predicted_min_L_alpha(2, 4, 1.5), -2.0, 1e-15);
  const auto r1 = check_L_alpha_semidefinite(2, 2, 1.0);
  EXPECT_NEAR(r1.rows[2].min_eig, 0.0, 1e-8);
  const auto r2 = check_L_alpha_semidefinite(2, 4, 1.5);
  EXPECT_NEAR(r2.rows[4].min_eig, -2.0, 1e-8);
  EXPECT_FALSE(r2.semidefinite);
  EXPECT_FALSE(r2.predicted_semidefinite);
}

TEST(LAlpha, BoundaryAlphaHasKernelInEveryDegree) {
  const auto r = check_L_alpha_semidefinite(3, 6, 2.0);
  EXPECT_TRUE(r.matches_prediction);
  EXPECT_TRUE(r.semidefinite);
  for (const auto& row : r.rows) {
    EXPECT_NEAR(row.min_eig, 0.0, 1e-8);
    EXPECT_EQ(row.kernel_dim, 1);
  }
}

TEST(LAlpha, SubcriticalAlphaIsPositiveAboveDegreeZero) {
  const auto r = check_L_alpha_semidefinite(2, 8, 0.5);
  EXPECT_TRUE(r.matches_prediction);
  EXPECT_TRUE(r.semidefinite);
  for (std::size_t k = 1; k < r.rows.size(); ++k) EXPECT_GT(r.rows[k].min_eig, 0.0);
}
