#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "travwave/basis/quadrature.hpp"
#include "travwave/common.hpp"
#include "travwave/ops/killing.hpp"

namespace travwave {

/// Round sphere S^n of radius sqrt(metric_scale), n = 2 or 3.
struct SphereSpec {
  int n = 2;
  int max_degree = 8;
  int quad_theta = 0;  // Gauss nodes per polar angle
  int quad_phi = 0;    // uniform longitude nodes
  double metric_scale = 1.0;
  int p_max = 3;  // largest nonlinearity power the grid must dealias

  [[nodiscard]] static int min_quad_theta(int L, int p_max) { return ((p_max + 1) * L + 1) / 2 + 1; }
  [[nodiscard]] static int min_quad_phi(int L, int p_max) { return (p_max + 1) * L + 1; }

  /// Spec with the smallest grid allowed by the dealiasing bound.
  static SphereSpec minimal(int n, int L, int p_max = 3, double r = 1.0) {
    SphereSpec s;
    s.n = n;
    s.max_degree = L;
    s.p_max = p_max;
    s.metric_scale = r;
    s.quad_theta = min_quad_theta(L, p_max);
    s.quad_phi = min_quad_phi(L, p_max);
    return s;
  }

  void validate() const {
    if (n != 2 && n != 3) throw ConfigurationError("sphere solver supports n = 2 and n = 3 only");
    if (max_degree < 0 || max_degree > 64) throw ConfigurationError("sphere max_degree must lie in [0, 64]");
    if (n == 3 && max_degree > 24) throw ConfigurationError("S^3 solver supports max_degree <= 24");
    if (p_max < 1) throw ConfigurationError("sphere p_max must be at least 1");
    if (quad_theta < min_quad_theta(max_degree, p_max))
      throw ConfigurationError("sphere quad_theta below the dealiasing bound ceil((p_max+1)L/2)+1");
    if (quad_phi < min_quad_phi(max_degree, p_max))
      throw ConfigurationError("sphere quad_phi below the dealiasing bound (p_max+1)L+1");
    if (!(metric_scale > 0)) throw ConfigurationError("sphere metric_scale must be positive");
  }

  /// Area of the unit sphere S^n.
  [[nodiscard]] double unit_area() const { return 2 * std::pow(pi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1)); }
  [[nodiscard]] double volume() const { return std::pow(metric_scale, 0.5 * n) * unit_area(); }
};

/// Spherical-harmonic basis.
///
/// n = 2: modes (k, m), Y = P(k,|m|; cos theta) e^{i m phi} / sqrt(2 pi).
/// n = 3: modes (k, l, m), Y = P3(k, l; cos chi) Y2_{l m}(theta, phi), with chi
/// the polar angle from the x_4 axis. The longitude phi rotates the (x_1, x_2)
/// plane, so X_12 acts on mode m as multiplication by i m. Harmonics are
/// orthonormal on the scaled sphere (an extra factor r^{-n/4}).
class SphereBasis {
 public:
  static constexpr bool diagonal = true;
  static constexpr const char* kind_name = "sphere";

  struct Mode {
    int k, l, m;
  };

  explicit SphereBasis(SphereSpec spec) : spec_(spec) {
    spec_.validate();
    const int L = spec_.max_degree;
    for (int k = 0; k <= L; ++k) {
      if (spec_.n == 2) {
        for (int m = -k; m <= k; ++m) modes_.push_back({k, k, m});
      } else {
        for (int l = 0; l <= k; ++l)
          for (int m = -l; m <= l; ++m) modes_.push_back({k, l, m});
      }
    }
    const Eigen::Index dim = static_cast<Eigen::Index>(modes_.size());
    neg_lap_ = RVec(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double k = modes_[i].k;
      neg_lap_[i] = k * (k + spec_.n - 1) / spec_.metric_scale;
    }

    Q_ = spec_.quad_theta;
    M_ = spec_.quad_phi;
    theta_ = gauss_gegenbauer(Q_, 0.0);
    if (spec_.n == 3) chi_ = gauss_gegenbauer(Q_, 0.5);

    // Profile tables: t2_[|m|] is Q x (L+1-|m|) over theta nodes, columns l = |m|..L.
    t2_.resize(L + 1);
    for (int am = 0; am <= L; ++am) {
      t2_[am] = RMat(Q_, L + 1 - am);
      for (int i = 0; i < Q_; ++i)
        for (int l = am; l <= L; ++l) t2_[am](i, l - am) = harmonic_profile(2, l, am, theta_.nodes[i]);
    }
    if (spec_.n == 3) {
      t3_.resize(L + 1);
      for (int l = 0; l <= L; ++l) {
        t3_[l] = RMat(Q_, L + 1 - l);
        for (int a = 0; a < Q_; ++a)
          for (int k = l; k <= L; ++k) t3_[l](a, k - l) = harmonic_profile(3, k, l, chi_.nodes[a]);
      }
    }

    // Index lookup tables: per m, per l, the mode indices ordered by k.
    index_.assign(2 * L + 1, std::vector<std::vector<Eigen::Index>>(L + 1));
    for (Eigen::Index i = 0; i < dim; ++i) {
      const Mode& md = modes_[i];
      index_[md.m + L][md.l].push_back(i);
    }

    rows_ = (spec_.n == 2) ? Q_ : Q_ * Q_;
    scale_ = std::pow(spec_.metric_scale, 0.25 * spec_.n);
    weights_ = RVec(rows_ * M_);
    const double wphi = 2 * pi / M_;
    for (Eigen::Index row = 0; row < rows_; ++row) {
      double w = wphi * std::pow(spec_.metric_scale, 0.5 * spec_.n);
      if (spec_.n == 2) {
        w *= theta_.weights[row];
      } else {
        w *= chi_.weights[row / Q_] * theta_.weights[row % Q_];
      }
      for (int j = 0; j < M_; ++j) weights_[row * M_ + j] = w;
    }
  }

  [[nodiscard]] const SphereSpec& spec() const { return spec_; }
  [[nodiscard]] int dimension() const { return spec_.n; }
  [[nodiscard]] Eigen::Index size() const { return static_cast<Eigen::Index>(modes_.size()); }
  [[nodiscard]] Eigen::Index grid_size() const { return rows_ * M_; }
  [[nodiscard]] double volume() const { return spec_.volume(); }
  [[nodiscard]] const RVec& grid_weights() const { return weights_; }
  [[nodiscard]] const Mode& mode(Eigen::Index i) const { return modes_[i]; }
  [[nodiscard]] Eigen::Index index_of(int k, int m) const { return index_of(k, spec_.n == 2 ? k : std::abs(m), m); }
  [[nodiscard]] Eigen::Index index_of(int k, int l, int m) const {
    const int L = spec_.max_degree;
    if (spec_.n == 2) l = k;
    if (k < 0 || k > L || l < 0 || l > k || std::abs(m) > l)
      throw ConfigurationError("sphere mode index out of range");
    for (Eigen::Index i : index_[m + L][l])
      if (modes_[i].k == k) return i;
    throw ConfigurationError("sphere mode index out of range");
  }
  [[nodiscard]] std::string mode_label(Eigen::Index i) const {
    std::ostringstream os;
    const Mode& md = modes_[i];
    if (spec_.n == 2)
      os << "(k=" << md.k << ",m=" << md.m << ")";
    else
      os << "(k=" << md.k << ",l=" << md.l << ",m=" << md.m << ")";
    return os.str();
  }

  /// Cartesian coordinates of grid point g on the unit sphere.
  [[nodiscard]] std::vector<double> grid_point(Eigen::Index g) const {
    const Eigen::Index row = g / M_;
    const double phi = 2 * pi * static_cast<double>(g % M_) / M_;
    if (spec_.n == 2) {
      const double t = theta_.nodes[row];
      const double s = std::sqrt(std::max(0.0, 1 - t * t));
      return {s * std::cos(phi), s * std::sin(phi), t};
    }
    const double tc = chi_.nodes[row / Q_];
    const double sc = std::sqrt(std::max(0.0, 1 - tc * tc));
    const double t = theta_.nodes[row % Q_];
    const double s = std::sqrt(std::max(0.0, 1 - t * t));
    return {sc * s * std::cos(phi), sc * s * std::sin(phi), sc * t, tc};
  }

  [[nodiscard]] CVec to_grid(const CVec& c) const {
    check(c);
    const int L = spec_.max_degree;
    CMat lon = CMat::Zero(rows_, M_);  // longitude spectra per row, bin m mod M
    for (int m = -L; m <= L; ++m) {
      const int am = std::abs(m);
      const int bin = ((m % M_) + M_) % M_;
      if (spec_.n == 2) {
        CVec cm(L + 1 - am);
        for (int l = am; l <= L; ++l) cm[l - am] = c[index_[m + L][l][0]];
        lon.col(bin) = t2_[am] * cm;
      } else {
        CMat h = CMat::Zero(Q_, L + 1 - am);  // chi node x l
        for (int l = am; l <= L; ++l) {
          const auto& ids = index_[m + L][l];
          CVec ck(ids.size());
          for (std::size_t q = 0; q < ids.size(); ++q) ck[q] = c[ids[q]];
          h.col(l - am) = t3_[l] * ck;
        }
        const CMat g = h * t2_[am].transpose();  // chi x theta
        for (int a = 0; a < Q_; ++a) lon.col(bin).segment(a * Q_, Q_) = g.row(a).transpose();
      }
    }
    CVec out(rows_ * M_);
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    std::vector<cplx> in(M_), res(M_);
    const double f = 1.0 / (std::sqrt(2 * pi) * scale_);
    for (Eigen::Index row = 0; row < rows_; ++row) {
      for (int j = 0; j < M_; ++j) in[j] = lon(row, j);
      fft.inv(res.data(), in.data(), M_);
      for (int j = 0; j < M_; ++j) out[row * M_ + j] = res[j] * f;
    }
    return out;
  }

  /// Quadrature projection of grid values onto the harmonics of degree <= L.
  [[nodiscard]] CVec from_grid(const CVec& g) const {
    if (g.size() != rows_ * M_) throw BasisMismatch("sphere from_grid: grid size mismatch");
    const int L = spec_.max_degree;
    CMat lon(rows_, M_);
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    std::vector<cplx> in(M_), res(M_);
    const double f = std::sqrt(2 * pi) / M_ * scale_;
    for (Eigen::Index row = 0; row < rows_; ++row) {
      for (int j = 0; j < M_; ++j) in[j] = g[row * M_ + j];
      fft.fwd(res.data(), in.data(), M_);
      for (int j = 0; j < M_; ++j) lon(row, j) = res[j] * f;
    }
    CVec c = CVec::Zero(size());
    for (int m = -L; m <= L; ++m) {
      const int am = std::abs(m);
      const int bin = ((m % M_) + M_) % M_;
      if (spec_.n == 2) {
        const CVec wcol = (lon.col(bin).array() * theta_.weights.array()).matrix();
        const CVec cm = t2_[am].transpose() * wcol;
        for (int l = am; l <= L; ++l) c[index_[m + L][l][0]] = cm[l - am];
      } else {
        CMat g2(Q_, Q_);  // chi x theta
        for (int a = 0; a < Q_; ++a) g2.row(a) = lon.col(bin).segment(a * Q_, Q_).transpose();
        g2 = g2 * theta_.weights.asDiagonal();
        CMat h = g2 * t2_[am];                   // chi x l
        h = chi_.weights.asDiagonal() * h;
        for (int l = am; l <= L; ++l) {
          const CVec ck = t3_[l].transpose() * h.col(l - am);
          const auto& ids = index_[m + L][l];
          for (std::size_t q = 0; q < ids.size(); ++q) c[ids[q]] = ck[q];
        }
      }
    }
    return c;
  }

  void project(CVec&) const {}

  [[nodiscard]] cplx inner(const CVec& u, const CVec& v) const {
    check(u);
    check(v);
    return v.dot(u);
  }

  [[nodiscard]] const RVec& neg_laplacian_eigs() const { return neg_lap_; }

  /// Multipliers of b X_12 on each mode: i b m / sqrt(r).
  [[nodiscard]] CVec killing_eigs(const KillingSpec& X) const {
    if (X.kind != KillingSpec::Kind::SphereRotation)
      throw ConfigurationError("sphere basis requires a rotation Killing field");
    if (X.plane_i != 0 || X.plane_j != 1)
      throw ConfigurationError("sphere solver supports rotations in the (x1, x2) plane only");
    CVec e(size());
    const double s = X.speed / std::sqrt(spec_.metric_scale);
    for (Eigen::Index i = 0; i < size(); ++i) e[i] = cplx(0.0, s * modes_[i].m);
    return e;
  }

  /// Pointwise length |X| at each grid point (b sin of the angle to the rotation axis).
  [[nodiscard]] RVec killing_length_on_grid(const KillingSpec& X) const {
    RVec out(grid_size());
    for (Eigen::Index g = 0; g < grid_size(); ++g) {
      const auto x = grid_point(g);
      out[g] = std::abs(X.speed) * std::hypot(x[0], x[1]);
    }
    return out;
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
    return (c.array() / (neg_lap_.array() + shift)).matrix();
  }

  /// Reusable solver for (-Delta + shift) x = c.
  [[nodiscard]] std::function<CVec(const CVec&)> make_preconditioner(double shift) const {
    RVec inv = (neg_lap_.array() + shift).inverse().matrix();
    return [inv](const CVec& c) -> CVec { return (inv.cast<cplx>().array() * c.array()).matrix(); };
  }

  [[nodiscard]] CVec constant_field(cplx value) const {
    CVec c = CVec::Zero(size());
    c[0] = value * std::sqrt(volume());
    return c;
  }

  template <class Rng>
  [[nodiscard]] CVec random_field(Rng& rng, int cutoff) const {
    std::normal_distribution<double> nd(0.0, 1.0);
    CVec c = CVec::Zero(size());
    for (Eigen::Index i = 0; i < size(); ++i) {
      const double re = nd(rng), im = nd(rng);
      if (modes_[i].k > cutoff) continue;
      c[i] = cplx(re, im) / (1.0 + modes_[i].k);
    }
    return c;
  }

 private:
  void check(const CVec& c) const {
    if (c.size() != size()) throw BasisMismatch("sphere: coefficient vector has the wrong size");
  }

  SphereSpec spec_;
  std::vector<Mode> modes_;
  RVec neg_lap_;
  int Q_ = 0, M_ = 0;
  Eigen::Index rows_ = 0;
  double scale_ = 1.0;
  GaussRule theta_, chi_;
  std::vector<RMat> t2_, t3_;
  std::vector<std::vector<std::vector<Eigen::Index>>> index_;
  RVec weights_;
};

}  // namespace travwave
