#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "travwave/common.hpp"
#include "travwave/ops/killing.hpp"

namespace travwave {

/// Radial data on M = N x [0, r_max] with dM = A(r) dr dN.
///
/// The weight is held as a callable so the domain can be enlarged (r_max
/// doubling) without losing the profile; `weight_A` caches its samples.
struct RadialSpec {
  double r_max = 20.0;
  RVec grid;
  RVec weight_A;
  std::function<double(double)> A;
  double cross_section_volume = 1.0;
  int n = 1;                   // dimension of M (enters the admissible p ranges)
  double A_lower_bound = 0.0;  // the constant C with A >= C used by the vanishing lemma
  std::string weight_name = "custom";

  static RadialSpec uniform(double r_max, int intervals, std::function<double(double)> A, double vol = 1.0,
                            int n = 1, std::string name = "custom") {
    if (intervals < 8) throw ConfigurationError("radial grid needs at least 8 intervals");
    RadialSpec s;
    s.r_max = r_max;
    s.grid = RVec::LinSpaced(intervals + 1, 0.0, r_max);
    s.A = std::move(A);
    s.weight_A = s.grid.unaryExpr([&](double r) { return s.A(r); });
    s.cross_section_volume = vol;
    s.n = n;
    s.weight_name = std::move(name);
    return s;
  }

  /// Same spacing, twice the radius.
  [[nodiscard]] RadialSpec doubled() const {
    if (!A) throw ConfigurationError("radial spec has no weight function to extend");
    const double h = grid[1] - grid[0];
    const int intervals = static_cast<int>(std::lround(2 * r_max / h));
    RadialSpec s = uniform(2 * r_max, intervals, A, cross_section_volume, n, weight_name);
    s.A_lower_bound = A_lower_bound;
    return s;
  }

  [[nodiscard]] double spacing() const { return grid[1] - grid[0]; }

  void validate() const {
    if (grid.size() < 9) throw ConfigurationError("radial grid needs at least 9 nodes");
    if (weight_A.size() != grid.size()) throw ConfigurationError("radial weight_A must match the grid");
    if (grid[0] != 0.0) throw ConfigurationError("radial grid must start at 0");
    if (std::abs(grid[grid.size() - 1] - r_max) > 1e-12 * std::max(1.0, r_max))
      throw ConfigurationError("radial grid must end at r_max");
    const double h = grid[1] - grid[0];
    for (Eigen::Index i = 1; i < grid.size(); ++i) {
      const double d = grid[i] - grid[i - 1];
      if (!(d > 0)) throw ConfigurationError("radial grid must be strictly increasing");
      if (std::abs(d - h) > 1e-9 * h) throw ConfigurationError("radial grid must be uniform");
    }
    for (Eigen::Index i = 0; i < weight_A.size(); ++i)
      if (!(weight_A[i] > 0)) throw ConfigurationError("radial weight A(r) must be positive on the grid");
    if (!(cross_section_volume > 0)) throw ConfigurationError("cross_section_volume must be positive");
    if (n < 1) throw ConfigurationError("radial dimension must be at least 1");
  }
};

/// Collocation basis on a uniform radial grid with Dirichlet condition at r_max.
///
/// Coefficients are node values. Derivatives are taken at the cell midpoints
/// with the fourth-order staggered stencil (1, -27, 27, -1)/24h, using even
/// reflection at r = 0 and odd reflection at r_max. The Laplacian is assembled
/// as -Delta = W^{-1} D^T W_mid D, so it is self-adjoint in the weighted inner
/// product and has no spurious zero modes.
class RadialBasis {
 public:
  static constexpr bool diagonal = false;
  static constexpr const char* kind_name = "radial";

  using SpMat = Eigen::SparseMatrix<double>;

  explicit RadialBasis(RadialSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const Eigen::Index N = spec_.grid.size();
    const int cells = static_cast<int>(N - 1);
    h_ = spec_.spacing();
    // Trapezoid weights at nodes.
    weights_ = RVec(N);
    for (Eigen::Index i = 0; i < N; ++i) {
      const double tw = (i == 0 || i == N - 1) ? 0.5 * h_ : h_;
      weights_[i] = tw * spec_.weight_A[i] * spec_.cross_section_volume;
    }
    // Midpoint weights.
    RVec wmid(cells);
    for (int c = 0; c < cells; ++c) {
      const double rm = 0.5 * (spec_.grid[c] + spec_.grid[c + 1]);
      const double a = spec_.A ? spec_.A(rm) : 0.5 * (spec_.weight_A[c] + spec_.weight_A[c + 1]);
      wmid[c] = h_ * a * spec_.cross_section_volume;
    }
    std::vector<Eigen::Triplet<double>> trip;
    const double coef[4] = {1.0, -27.0, 27.0, -1.0};
    for (int c = 0; c < cells; ++c) {
      for (int s = 0; s < 4; ++s) {
        int j = c - 1 + s;
        double sign = 1.0;
        if (j < 0) j = -j;  // even reflection at r = 0
        if (j > cells) {    // odd reflection at r_max
          j = 2 * cells - j;
          sign = -1.0;
        }
        if (j == cells) continue;  // Dirichlet node carries no value
        trip.emplace_back(c, j, sign * coef[s] / (24.0 * h_));
      }
    }
    D_ = SpMat(cells, N);
    D_.setFromTriplets(trip.begin(), trip.end());
    stiff_ = SpMat(D_.transpose() * wmid.asDiagonal() * D_);
    wmid_ = wmid;
  }

  [[nodiscard]] const RadialSpec& spec() const { return spec_; }
  [[nodiscard]] int dimension() const { return spec_.n; }
  [[nodiscard]] Eigen::Index size() const { return spec_.grid.size(); }
  [[nodiscard]] Eigen::Index grid_size() const { return size(); }
  [[nodiscard]] double volume() const { return weights_.sum(); }
  [[nodiscard]] const RVec& grid_weights() const { return weights_; }
  [[nodiscard]] const RVec& nodes() const { return spec_.grid; }
  [[nodiscard]] double spacing() const { return h_; }
  [[nodiscard]] const SpMat& derivative() const { return D_; }
  [[nodiscard]] const RVec& midpoint_weights() const { return wmid_; }
  [[nodiscard]] const SpMat& stiffness() const { return stiff_; }
  [[nodiscard]] std::string mode_label(Eigen::Index i) const {
    std::ostringstream os;
    os << "r=" << spec_.grid[i];
    return os.str();
  }

  [[nodiscard]] CVec to_grid(const CVec& c) const {
    check(c);
    CVec g = c;
    g[size() - 1] = 0;
    return g;
  }
  [[nodiscard]] CVec from_grid(const CVec& g) const {
    if (g.size() != size()) throw BasisMismatch("radial from_grid: grid size mismatch");
    CVec c = g;
    project(c);
    return c;
  }
  void project(CVec& c) const { c[size() - 1] = 0; }

  [[nodiscard]] cplx inner(const CVec& u, const CVec& v) const {
    check(u);
    check(v);
    return (u.array() * v.array().conjugate() * weights_.array()).sum();
  }

  [[nodiscard]] CVec neg_laplacian(const CVec& c) const {
    check(c);
    CVec s = stiff_.cast<cplx>() * c;
    CVec out = (s.array() / weights_.array()).matrix();
    out[size() - 1] = 0;
    return out;
  }
  /// Radial fields are constant on cross-sections, so a Killing field of N annihilates them.
  [[nodiscard]] CVec killing(const CVec& c, const KillingSpec& X) const {
    check(c);
    require_radial(X);
    return CVec::Zero(size());
  }
  [[nodiscard]] CVec killing_eigs(const KillingSpec& X) const {
    require_radial(X);
    return CVec::Zero(size());
  }

  /// Solves (-Delta + shift) x = c with a cached sparse factorisation.
  class ShiftedSolver {
   public:
    ShiftedSolver(const RadialBasis& b, double shift) : b_(&b) {
      const Eigen::Index N = b.size();
      SpMat A = b.stiff_;
      for (Eigen::Index i = 0; i < N; ++i) A.coeffRef(i, i) += shift * b.weights_[i];
      // Pin the Dirichlet node.
      A.prune([N](Eigen::Index r, Eigen::Index c, double) { return r != N - 1 && c != N - 1; });
      A.coeffRef(N - 1, N - 1) = 1.0;
      solver_.compute(A);
      if (solver_.info() != Eigen::Success) throw ConsistencyError("radial preconditioner factorisation failed");
    }
    [[nodiscard]] CVec operator()(const CVec& c) const {
      CVec rhs = (c.array() * b_->weights_.array()).matrix();
      rhs[rhs.size() - 1] = 0;
      RVec re = solver_.solve(RVec(rhs.real()));
      RVec im = solver_.solve(RVec(rhs.imag()));
      CVec out(re.size());
      out.real() = re;
      out.imag() = im;
      out[out.size() - 1] = 0;
      return out;
    }

   private:
    const RadialBasis* b_;
    Eigen::SimplicialLDLT<SpMat> solver_;
  };

  [[nodiscard]] CVec shifted_laplacian_solve(const CVec& c, double shift) const { return ShiftedSolver(*this, shift)(c); }

  /// Constant field on the truncated domain; the Dirichlet node is zeroed, so it
  /// is only admissible as a test function, not as a constrained candidate.
  /// Reusable solver for (-Delta + shift) x = c (one factorisation, shared).
  [[nodiscard]] std::function<CVec(const CVec&)> make_preconditioner(double shift) const {
    auto solver = std::make_shared<ShiftedSolver>(*this, shift);
    return [solver](const CVec& c) -> CVec { return (*solver)(c); };
  }

  [[nodiscard]] CVec constant_field(cplx value) const {
    CVec c = CVec::Constant(size(), value);
    project(c);
    return c;
  }

  /// Unit-width Gaussian centred at r = 0.
  [[nodiscard]] CVec origin_bump() const {
    CVec c(size());
    for (Eigen::Index i = 0; i < size(); ++i) c[i] = std::exp(-0.5 * spec_.grid[i] * spec_.grid[i]);
    project(c);
    return c;
  }

  /// Sum of a few Gaussian bumps placed in the inner half of the domain.
  template <class Rng>
  [[nodiscard]] CVec random_field(Rng& rng, int cutoff) const {
    std::uniform_real_distribution<double> centre(0.0, 0.5 * spec_.r_max);
    std::uniform_real_distribution<double> width(1.0, 1.0 + std::max(1, cutoff));
    std::normal_distribution<double> nd(0.0, 1.0);
    CVec c = CVec::Zero(size());
    for (int b = 0; b < 3; ++b) {
      const double x0 = centre(rng), w = width(rng);
      const cplx amp(nd(rng), nd(rng));
      for (Eigen::Index i = 0; i < size(); ++i) {
        const double z = (spec_.grid[i] - x0) / w;
        c[i] += amp * std::exp(-z * z);
      }
    }
    project(c);
    return c;
  }

 private:
  static void require_radial(const KillingSpec& X) {
    if (X.kind != KillingSpec::Kind::RadialInduced)
      throw ConfigurationError("radial basis requires a cross-section Killing field");
  }
  void check(const CVec& c) const {
    if (c.size() != size()) throw BasisMismatch("radial: coefficient vector has the wrong size");
  }

  RadialSpec spec_;
  double h_ = 0;
  RVec weights_;
  RVec wmid_;
  SpMat D_;
  SpMat stiff_;
};

}  // namespace travwave
