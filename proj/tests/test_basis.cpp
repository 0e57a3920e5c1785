#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "travwave/basis/field.hpp"
#include "travwave/basis/radial.hpp"
#include "travwave/basis/sphere.hpp"
#include "travwave/basis/torus.hpp"

using namespace travwave;

namespace {

TorusBasis torus(int n, double k, int N, double r = 1.0) { return TorusBasis(TorusSpec{n, k, N, r}); }

double rel(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

// Independent closed-form harmonics for the oracles below.
double y10(double z) { return std::sqrt(3.0 / (4 * pi)) * z; }

}  // namespace

TEST(TorusSpec, RejectsBadParameters) {
  EXPECT_THROW(torus(1, 1.0, 6), ConfigurationError);
  EXPECT_THROW(torus(1, 1.0, 24), ConfigurationError);
  EXPECT_THROW(torus(4, 1.0, 8), ConfigurationError);
  EXPECT_THROW(torus(1, -1.0, 8), ConfigurationError);
  EXPECT_THROW(torus(1, 1.0, 8, 0.0), ConfigurationError);
}

TEST(TorusBasis, VolumeMatchesQuadratureOfOne) {
  for (int n = 1; n <= 3; ++n)
    for (double r : {1.0, 2.5, 9.0}) {
      const auto b = torus(n, 3.0, 8, r);
      const double expect = std::pow(std::sqrt(r) * 3.0, n);
      EXPECT_LT(rel(b.grid_weights().sum(), expect), 1e-12);
      EXPECT_LT(rel(b.volume(), expect), 1e-12);
    }
}

TEST(TorusBasis, ConstantModeGivesConstantGrid) {
  const auto b = torus(2, 2.0, 16);
  CVec c = CVec::Zero(b.size());
  c[0] = cplx(3.0, -1.0);
  const CVec g = b.to_grid(c);
  const cplx expect = c[0] / std::sqrt(b.volume());
  EXPECT_LT((g.array() - expect).abs().maxCoeff(), 1e-14);
}

TEST(TorusBasis, InnerAndNormsOfPlaneWave) {
  const auto b = std::make_shared<TorusBasis>(TorusSpec{1, 2 * pi, 32, 1.0});
  CVec g(b->grid_size());
  for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = std::exp(cplx(0, b->grid_point(i)[0]));
  const Field<TorusBasis> u = field_from_grid(b, g);
  EXPECT_NEAR(std::real(inner(u, u)), 2 * pi, 1e-12);
  EXPECT_NEAR(std::imag(inner(u, u)), 0.0, 1e-12);
  const Norms nm = norms(u, 3.0);
  EXPECT_NEAR(nm.l2, std::sqrt(2 * pi), 1e-12);
  EXPECT_NEAR(nm.h1, std::sqrt(4 * pi), 1e-12);
  EXPECT_NEAR(nm.lp1, std::pow(2 * pi, 0.25), 1e-12);
}

TEST(TorusBasis, NormsOfConstantOnUnitTorus) {
  const auto b = torus(1, 1.0, 16);
  const Norms nm = norms(b, b.constant_field(1.0), 3.0);
  EXPECT_NEAR(nm.l2, 1.0, 1e-14);
  EXPECT_NEAR(nm.h1, 1.0, 1e-14);
  EXPECT_NEAR(nm.lp1, 1.0, 1e-14);
}

TEST(TorusBasis, ParsevalRoundTripAndLinearity) {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 3; ++n) {
    const auto b = torus(n, 1.7, n == 3 ? 8 : 16, 2.0);
    for (int t = 0; t < 100; ++t) {
      const CVec u = b.random_field(rng, 3), v = b.random_field(rng, 3);
      EXPECT_LT(rel(grid_mass(b, u), mass(b, u)), 1e-10);
      EXPECT_LT((b.from_grid(b.to_grid(u)) - u).norm(), 1e-12 * u.norm());
      const cplx a(0.3, -2.0), c(1.5, 0.25);
      const CVec lhs = b.to_grid(a * u + c * v);
      const CVec rhs = a * b.to_grid(u) + c * b.to_grid(v);
      EXPECT_LT((lhs - rhs).norm(), 1e-13 * (lhs.norm() + 1));
    }
  }
}

TEST(TorusBasis, GridRoundTripOnBandLimitedData) {
  const auto b = torus(2, 1.0, 16);
  CVec g(b.grid_size());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const auto x = b.grid_point(i);
    g[i] = std::cos(2 * pi * x[0]) + cplx(0, 1) * std::sin(4 * pi * (x[0] + x[1])) + 0.5;
  }
  EXPECT_LT((b.to_grid(b.from_grid(g)) - g).norm(), 1e-12 * g.norm());
}

TEST(TorusBasis, SizeMismatchIsRejected) {
  const auto b = torus(1, 1.0, 16);
  EXPECT_THROW((void)b.to_grid(CVec::Zero(8)), BasisMismatch);
  EXPECT_THROW((void)b.inner(CVec::Zero(16), CVec::Zero(8)), BasisMismatch);
  const auto p1 = std::make_shared<TorusBasis>(TorusSpec{1, 1.0, 16, 1.0});
  const auto p2 = std::make_shared<TorusBasis>(TorusSpec{1, 1.0, 16, 1.0});
  Field<TorusBasis> u(p1, p1->constant_field(1.0)), v(p2, p2->constant_field(1.0));
  EXPECT_THROW((void)inner(u, v), BasisMismatch);
}

TEST(SphereSpec, EnforcesDealiasingBounds) {
  SphereSpec s = SphereSpec::minimal(2, 8, 3);
  EXPECT_EQ(s.quad_theta, 17);
  EXPECT_EQ(s.quad_phi, 33);
  EXPECT_NO_THROW(s.validate());
  s.quad_theta -= 1;
  EXPECT_THROW(s.validate(), ConfigurationError);
  s = SphereSpec::minimal(2, 8, 3);
  s.quad_phi -= 1;
  EXPECT_THROW(s.validate(), ConfigurationError);
  EXPECT_THROW(SphereSpec::minimal(4, 4).validate(), ConfigurationError);
}

TEST(SphereBasis, Y10OnGridMatchesClosedForm) {
  const SphereBasis b(SphereSpec::minimal(2, 6));
  CVec c = CVec::Zero(b.size());
  c[b.index_of(1, 0)] = 1.0;
  const CVec g = b.to_grid(c);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const auto x = b.grid_point(i);
    EXPECT_NEAR(g[i].real(), y10(x[2]), 1e-12);
    EXPECT_NEAR(g[i].imag(), 0.0, 1e-12);
  }
}

TEST(SphereBasis, S3DegreeOneHarmonicMatchesClosedForm) {
  // Y_{1,0,0} is x_4 / ||x_4||, with int_{S^3} x_4^2 = |S^3| / 4 = pi^2 / 2.
  const SphereBasis b(SphereSpec::minimal(3, 4));
  CVec c = CVec::Zero(b.size());
  c[b.index_of(1, 0, 0)] = 1.0;
  const CVec g = b.to_grid(c);
  for (Eigen::Index i = 0; i < g.size(); ++i)
    EXPECT_NEAR(g[i].real(), b.grid_point(i)[3] / std::sqrt(pi * pi / 2), 1e-12);
}

TEST(SphereBasis, InnerProductsAndNormsOfLowHarmonics) {
  const auto b = std::make_shared<SphereBasis>(SphereSpec::minimal(2, 6));
  CVec c1 = CVec::Zero(b->size()), c2 = CVec::Zero(b->size());
  c1[b->index_of(1, 0)] = 1.0;
  c2[b->index_of(2, 0)] = 1.0;
  const Field<SphereBasis> y1(b, c1), y2(b, c2);
  EXPECT_NEAR(std::abs(inner(y1, y1) - 1.0), 0.0, 1e-14);
  EXPECT_LT(std::abs(inner(y1, y2)), 1e-12);
  // Grid quadrature agrees with the coefficient inner product.
  const CVec g1 = y1.grid(), g2 = y2.grid();
  EXPECT_LT(std::abs((g1.array() * g2.array().conjugate() * b->grid_weights().array()).sum()), 1e-12);
  const Norms nm = norms(y1, 3.0);
  EXPECT_NEAR(nm.l2, 1.0, 1e-13);
  EXPECT_NEAR(nm.h1, std::sqrt(3.0), 1e-13);
  // L^4 norm of Y_10: int (3/4pi)^2 z^4 dS = (9/16pi^2)(4pi/5).
  EXPECT_NEAR(std::pow(nm.lp1, 4), 9.0 / (16 * pi * pi) * 4 * pi / 5, 1e-13);
}

TEST(SphereBasis, QuadratureIsExactForDealiasedProducts) {
  // Harmonics up to degree 2L evaluated independently from the profile formula:
  // their pairwise products reach degree (p_max + 1) L = 4L.
  const int L = 4;
  const SphereBasis b(SphereSpec::minimal(2, L, 3));
  const int top = 2 * L;
  std::vector<std::pair<int, int>> lm;
  for (int l = 0; l <= top; ++l)
    for (int m = -l; m <= l; ++m) lm.push_back({l, m});
  CMat Y(b.grid_size(), static_cast<Eigen::Index>(lm.size()));
  for (Eigen::Index g = 0; g < b.grid_size(); ++g) {
    const auto x = b.grid_point(g);
    const double phi = std::atan2(x[1], x[0]);
    for (std::size_t q = 0; q < lm.size(); ++q) {
      const auto [l, m] = lm[q];
      Y(g, q) = harmonic_profile(2, l, std::abs(m), x[2]) * std::exp(cplx(0, m * phi)) / std::sqrt(2 * pi);
    }
  }
  const CMat G = Y.adjoint() * b.grid_weights().asDiagonal() * Y;
  EXPECT_LT((G - CMat::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SphereBasis, ParsevalRoundTripLinearityAndScaling) {
  std::mt19937_64 rng(11);
  for (int n : {2, 3})
    for (double r : {1.0, 4.0}) {
      SphereSpec s = SphereSpec::minimal(n, n == 2 ? 10 : 5, 3, r);
      const SphereBasis b(s);
      EXPECT_LT(rel(b.grid_weights().sum(), s.volume()), 1e-12);
      for (int t = 0; t < 100; ++t) {
        const CVec u = b.random_field(rng, s.max_degree), v = b.random_field(rng, s.max_degree);
        EXPECT_LT(rel(grid_mass(b, u), mass(b, u)), 1e-10);
        EXPECT_LT((b.from_grid(b.to_grid(u)) - u).norm(), 1e-12 * u.norm());
        const CVec lhs = b.to_grid(2.0 * u - cplx(0, 1) * v);
        const CVec rhs = 2.0 * b.to_grid(u) - cplx(0, 1) * b.to_grid(v);
        EXPECT_LT((lhs - rhs).norm(), 1e-13 * lhs.norm());
      }
    }
}

TEST(SphereBasis, ConstantFieldHasUnitValue) {
  const SphereBasis b(SphereSpec::minimal(3, 4, 3, 2.0));
  const CVec g = b.to_grid(b.constant_field(1.0));
  EXPECT_LT((g.array() - 1.0).abs().maxCoeff(), 1e-12);
}

TEST(RadialSpec, ValidatesGridAndWeight) {
  auto ok = RadialSpec::uniform(10.0, 100, [](double) { return 1.0; });
  EXPECT_NO_THROW(ok.validate());
  auto bad = ok;
  bad.weight_A[3] = 0.0;
  EXPECT_THROW(bad.validate(), ConfigurationError);
  bad = ok;
  bad.grid[0] = 0.1;
  EXPECT_THROW(bad.validate(), ConfigurationError);
  bad = ok;
  bad.grid[5] = bad.grid[4];
  EXPECT_THROW(bad.validate(), ConfigurationError);
}

TEST(RadialBasis, QuadratureOfOneIsCompositeIntegralOfA) {
  const auto s = RadialSpec::uniform(8.0, 800, [](double r) { return (1 + r) * (1 + r); }, 2 * pi);
  const RadialBasis b(s);
  const double exact = 2 * pi * (std::pow(9.0, 3) - 1) / 3;
  EXPECT_LT(rel(b.volume(), exact), 1e-5);  // trapezoid, O(h^2)
  double trap = 0;
  for (Eigen::Index i = 0; i + 1 < s.grid.size(); ++i) trap += 0.5 * s.spacing() * (s.weight_A[i] + s.weight_A[i + 1]);
  EXPECT_LT(rel(b.volume(), 2 * pi * trap), 1e-12);
}

TEST(RadialBasis, LaplacianIsSelfAdjointAndPositive) {
  const auto s = RadialSpec::uniform(10.0, 200, [](double r) { return std::exp(0.3 * r); });
  const RadialBasis b(s);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const CVec u = b.random_field(rng, 2), v = b.random_field(rng, 2);
    const cplx a = b.inner(b.neg_laplacian(u), v), c = b.inner(u, b.neg_laplacian(v));
    EXPECT_LT(std::abs(a - c), 1e-10 * std::abs(a));
    EXPECT_GT(grad_sq(b, u), 0.0);
  }
}

TEST(RadialBasis, GradientEnergyConvergesAtSecondOrder) {
  // int_0^inf |d/dr e^{-r^2}|^2 dr = sqrt(pi) / (2 sqrt 2).
  const double exact = std::sqrt(pi) / (2 * std::sqrt(2.0));
  double prev = 0;
  for (int N : {100, 200, 400}) {
    const RadialBasis b(RadialSpec::uniform(8.0, N, [](double) { return 1.0; }));
    CVec u(b.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = std::exp(-b.nodes()[i] * b.nodes()[i]);
    b.project(u);
    const double err = std::abs(grad_sq(b, u) - exact);
    if (prev > 0) EXPECT_GT(prev / err, 3.5);
    prev = err;
  }
  EXPECT_LT(prev, 1e-4);
}

TEST(RadialBasis, PreconditionerInvertsShiftedLaplacian) {
  const RadialBasis b(RadialSpec::uniform(10.0, 120, [](double r) { return 1 + r; }));
  std::mt19937_64 rng(5);
  const CVec u = b.random_field(rng, 2);
  const CVec x = b.shifted_laplacian_solve(u, 1.5);
  const CVec back = b.neg_laplacian(x) + 1.5 * x;
  CVec uu = u;
  b.project(uu);
  EXPECT_LT((back - uu).norm(), 1e-10 * uu.norm());
}
