#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "travwave/basis/fft.hpp"
#include "travwave/common.hpp"
#include "travwave/ops/killing.hpp"

namespace travwave {

/// Flat torus R^n / (period Z)^n with metric metric_scale * (flat metric).
struct TorusSpec {
  int n = 1;
  double period = 1.0;
  int grid_points = 64;
  double metric_scale = 1.0;

  void validate() const {
    if (n < 1 || n > 3) throw ConfigurationError("torus dimension must be 1, 2 or 3");
    if (grid_points < 8 || grid_points % 2 != 0)
      throw ConfigurationError("torus grid_points must be even and at least 8");
    if ((grid_points & (grid_points - 1)) != 0)
      throw ConfigurationError("torus grid_points must be a power of two");
    if (!(period > 0)) throw ConfigurationError("torus period must be positive");
    if (!(metric_scale > 0)) throw ConfigurationError("torus metric_scale must be positive");
  }
  [[nodiscard]] double volume() const { return std::pow(std::sqrt(metric_scale) * period, n); }
};

/// Fourier basis on a torus.
///
/// Coefficients live in FFT layout (N^n entries, row-major); entry m holds the
/// coefficient of the orthonormal mode e^{i kappa_m . x} / sqrt(Vol) with
/// kappa_m = 2 pi m / period. Modes touching the Nyquist bin are inactive and
/// always zero.
class TorusBasis {
 public:
  static constexpr bool diagonal = true;
  static constexpr const char* kind_name = "torus";

  explicit TorusBasis(TorusSpec spec) : spec_(spec) {
    spec_.validate();
    const int N = spec_.grid_points;
    dims_.assign(spec_.n, N);
    total_ = 1;
    for (int d : dims_) total_ *= d;
    volume_ = spec_.volume();
    kappa_.resize(total_ * spec_.n);
    neg_lap_ = RVec(total_);
    active_.assign(total_, true);
    for (Eigen::Index idx = 0; idx < total_; ++idx) {
      Eigen::Index rem = idx;
      double k2 = 0;
      for (int axis = spec_.n - 1; axis >= 0; --axis) {
        const int bin = static_cast<int>(rem % N);
        rem /= N;
        const int m = detail::signed_bin(bin, N);
        if (bin == N / 2) active_[idx] = false;
        const double kap = 2 * pi * m / spec_.period;
        kappa_[idx * spec_.n + axis] = kap;
        k2 += kap * kap;
      }
      neg_lap_[idx] = active_[idx] ? k2 / spec_.metric_scale : 0.0;
    }
    weights_ = RVec::Constant(total_, volume_ / static_cast<double>(total_));
  }

  [[nodiscard]] const TorusSpec& spec() const { return spec_; }
  [[nodiscard]] int dimension() const { return spec_.n; }
  [[nodiscard]] Eigen::Index size() const { return total_; }
  [[nodiscard]] Eigen::Index grid_size() const { return total_; }
  [[nodiscard]] double volume() const { return volume_; }
  [[nodiscard]] const RVec& grid_weights() const { return weights_; }
  [[nodiscard]] bool is_active(Eigen::Index i) const { return active_[i]; }
  [[nodiscard]] Eigen::Index active_count() const {
    Eigen::Index c = 0;
    for (bool a : active_) c += a;
    return c;
  }

  /// Physical wavevector component of mode idx along axis (before metric scaling).
  [[nodiscard]] double wavenumber(Eigen::Index idx, int axis) const { return kappa_[idx * spec_.n + axis]; }

  /// Integer multi-index of a mode.
  [[nodiscard]] std::vector<int> multi_index(Eigen::Index idx) const {
    std::vector<int> m(spec_.n);
    Eigen::Index rem = idx;
    for (int axis = spec_.n - 1; axis >= 0; --axis) {
      m[axis] = detail::signed_bin(static_cast<int>(rem % spec_.grid_points), spec_.grid_points);
      rem /= spec_.grid_points;
    }
    return m;
  }
  [[nodiscard]] Eigen::Index index_of(const std::vector<int>& m) const {
    Eigen::Index idx = 0;
    for (int axis = 0; axis < spec_.n; ++axis) {
      int b = m[axis] % spec_.grid_points;
      if (b < 0) b += spec_.grid_points;
      idx = idx * spec_.grid_points + b;
    }
    return idx;
  }
  [[nodiscard]] std::string mode_label(Eigen::Index idx) const {
    std::ostringstream os;
    os << "m=(";
    const auto m = multi_index(idx);
    for (std::size_t a = 0; a < m.size(); ++a) os << (a ? "," : "") << m[a];
    os << ")";
    return os.str();
  }

  /// Coordinates (in [0, period)) of grid point g.
  [[nodiscard]] std::vector<double> grid_point(Eigen::Index g) const {
    std::vector<double> x(spec_.n);
    Eigen::Index rem = g;
    const double h = spec_.period / spec_.grid_points;
    for (int axis = spec_.n - 1; axis >= 0; --axis) {
      x[axis] = h * static_cast<double>(rem % spec_.grid_points);
      rem /= spec_.grid_points;
    }
    return x;
  }

  [[nodiscard]] CVec to_grid(const CVec& c) const {
    check(c);
    CVec g = c;
    for (Eigen::Index i = 0; i < total_; ++i)
      if (!active_[i]) g[i] = 0;
    detail::fft_nd(g, dims_, /*inverse=*/true);
    g /= std::sqrt(volume_);
    return g;
  }

  /// L^2 projection of grid values onto the active modes.
  [[nodiscard]] CVec from_grid(const CVec& g) const {
    if (g.size() != total_) throw BasisMismatch("torus from_grid: grid size mismatch");
    CVec c = g;
    detail::fft_nd(c, dims_, /*inverse=*/false);
    c *= std::sqrt(volume_) / static_cast<double>(total_);
    project(c);
    return c;
  }

  void project(CVec& c) const {
    for (Eigen::Index i = 0; i < total_; ++i)
      if (!active_[i]) c[i] = 0;
  }

  [[nodiscard]] cplx inner(const CVec& u, const CVec& v) const {
    check(u);
    check(v);
    return v.dot(u);
  }

  [[nodiscard]] const RVec& neg_laplacian_eigs() const { return neg_lap_; }

  /// Multipliers of X on each mode: i (c . kappa) / sqrt(r).
  [[nodiscard]] CVec killing_eigs(const KillingSpec& X) const {
    if (X.kind != KillingSpec::Kind::TorusConstant)
      throw ConfigurationError("torus basis requires a constant-vector Killing field");
    if (static_cast<int>(X.velocity.size()) != spec_.n)
      throw ConfigurationError("Killing velocity dimension does not match the torus");
    CVec e(total_);
    const double s = 1.0 / std::sqrt(spec_.metric_scale);
    for (Eigen::Index i = 0; i < total_; ++i) {
      double dot = 0;
      for (int a = 0; a < spec_.n; ++a) dot += X.velocity[a] * kappa_[i * spec_.n + a];
      e[i] = active_[i] ? cplx(0.0, dot * s) : cplx(0.0);
    }
    return e;
  }

  [[nodiscard]] CVec neg_laplacian(const CVec& c) const {
    check(c);
    return (neg_lap_.array() * c.array()).matrix();
  }
  [[nodiscard]] CVec killing(const CVec& c, const KillingSpec& X) const {
    check(c);
    return (killing_eigs(X).array() * c.array()).matrix();
  }
  [[nodiscard]] CVec shifted_laplacian_solve(const CVec& c, double shift) const {
    CVec out = (c.array() / (neg_lap_.array() + shift)).matrix();
    project(out);
    return out;
  }

  /// Reusable solver for (-Delta + shift) x = c.
  [[nodiscard]] std::function<CVec(const CVec&)> make_preconditioner(double shift) const {
    RVec inv = (neg_lap_.array() + shift).inverse().matrix();
    for (Eigen::Index i = 0; i < total_; ++i)
      if (!active_[i]) inv[i] = 0;
    return [inv](const CVec& c) -> CVec { return (inv.cast<cplx>().array() * c.array()).matrix(); };
  }

  [[nodiscard]] CVec constant_field(cplx value) const {
    CVec c = CVec::Zero(total_);
    c[0] = value * std::sqrt(volume_);
    return c;
  }

  /// Random band-limited field: Gaussian coefficients on modes with
  /// |m|_inf <= cutoff, damped like 1/(1 + |kappa|^2).
  template <class Rng>
  [[nodiscard]] CVec random_field(Rng& rng, int cutoff) const {
    std::normal_distribution<double> nd(0.0, 1.0);
    CVec c = CVec::Zero(total_);
    for (Eigen::Index i = 0; i < total_; ++i) {
      const double re = nd(rng), im = nd(rng);
      if (!active_[i]) continue;
      const auto m = multi_index(i);
      int mx = 0;
      for (int v : m) mx = std::max(mx, std::abs(v));
      if (mx > cutoff) continue;
      c[i] = cplx(re, im) / (1.0 + neg_lap_[i] * spec_.metric_scale * std::pow(spec_.period / (2 * pi), 2));
    }
    return c;
  }

 private:
  void check(const CVec& c) const {
    if (c.size() != total_) throw BasisMismatch("torus: coefficient vector has the wrong size");
  }

  TorusSpec spec_;
  std::vector<int> dims_;
  Eigen::Index total_ = 0;
  double volume_ = 0;
  std::vector<double> kappa_;
  RVec neg_lap_;
  std::vector<bool> active_;
  RVec weights_;
};

}  // namespace travwave
