#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "travwave/basis/field.hpp"
#include "travwave/basis/torus.hpp"
#include "travwave/common.hpp"
#include "travwave/exp/scaling.hpp"

namespace travwave {

/// Separable profile u(x, y) = f(x) g(y) on a periodic box standing in for R^2.
///
/// On a tensor grid the trapezoid rule of a separable integrand is the product
/// of the one-dimensional sums, so the 2-D quadratures below are evaluated axis
/// by axis.
struct SeparableProfile {
  std::function<double(double)> f;
  std::function<double(double)> g;
  double width_x = 1.0;  // standard deviation scale along each axis
  double width_y = 1.0;

  static SeparableProfile gaussian(double sx = 1.0, double sy = 1.0) {
    SeparableProfile u;
    u.f = [sx](double x) { return std::exp(-0.5 * x * x / (sx * sx)); };
    u.g = [sy](double y) { return std::exp(-0.5 * y * y / (sy * sy)); };
    u.width_x = sx;
    u.width_y = sy;
    return u;
  }
};

struct ScalingLawCheck {
  std::string name;
  double exponent = 0;
  double predicted = 0;  // r^exponent
  double measured = 0;   // on the refined grid
  double error = 0;      // relative, grid N
  double error_refined = 0;  // relative, grid 2N
  double reduction = 0;
  bool pass = false;
};

struct AnisotropicReport {
  double r = 1, sigma = 0, a = 0, b = 0, alpha = 1;
  double box = 0;
  int grid_x = 0, grid_y = 0;
  std::vector<ScalingLawCheck> laws;
  bool all_pass = false;
};

struct PlaneOptions {
  double box_factor = 32.0;        // box side in units of the base profile width
  double points_per_width = 32.0;  // resolution of the narrowest profile
  double tolerance = 1e-6;
  double noise_floor = 1e-10;  // errors below this count as converged to round-off
  int max_points = 1 << 23;
};

namespace detail {

/// One axis of the tensor grid: samples and fourth-order periodic derivative.
struct Axis {
  double h = 0;
  RVec x;
  RVec v, dv;

  Axis(double box, int N, const std::function<double(double)>& fn, double amp, double stretch) {
    h = box / N;
    x = RVec(N);
    v = RVec(N);
    for (int i = 0; i < N; ++i) {
      x[i] = -0.5 * box + h * i;
      v[i] = amp * fn(stretch * x[i]);
    }
    dv = RVec(N);
    auto at = [&](int i) { return v[(i % N + N) % N]; };
    for (int i = 0; i < N; ++i) dv[i] = (-at(i + 2) + 8 * at(i + 1) - 8 * at(i - 1) + at(i - 2)) / (12 * h);
  }
  [[nodiscard]] double sum_sq() const { return h * v.squaredNorm(); }
  [[nodiscard]] double sum_dsq() const { return h * dv.squaredNorm(); }
  [[nodiscard]] double sum_pow(double p) const { return h * v.cwiseAbs().array().pow(p).sum(); }
  [[nodiscard]] double sum_x2_sq() const { return h * (x.array().square() * v.array().square()).sum(); }
  [[nodiscard]] double central_fraction() const {
    double in = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (std::abs(x[i]) <= 0.25 * h * x.size()) in += v[i] * v[i];
    return in / v.squaredNorm();
  }
};

struct PlaneQuantities {
  double dy = 0, ydx = 0, lp = 0, l2 = 0, grad = 0;
};

inline PlaneQuantities plane_quantities(const Axis& X, const Axis& Y, double p) {
  PlaneQuantities q;
  q.dy = X.sum_sq() * Y.sum_dsq();
  q.ydx = X.sum_dsq() * Y.sum_x2_sq();
  q.lp = X.sum_pow(p) * Y.sum_pow(p);
  q.l2 = X.sum_sq() * Y.sum_sq();
  q.grad = X.sum_dsq() * Y.sum_sq() + X.sum_sq() * Y.sum_dsq();
  return q;
}

inline void require_inside(const Axis& X, const Axis& Y, const char* what) {
  const double frac = X.central_fraction() * Y.central_fraction();
  if (frac < 1 - 1e-10)
    throw DomainOverflow(std::string(what) + ": scaled profile leaves the central half of the surrogate box");
}

}  // namespace detail

/// Anisotropic scaling u(r, sigma, a, b)(x, y) = r^sigma u(r^a x, r^b y) and
/// the isotropic one r u(r^alpha x): measured norm ratios against the power laws.
inline AnisotropicReport anisotropic_identities(const SeparableProfile& u, double r, double sigma, double a, double b,
                                                double p = 2.0, double alpha = 1.0, PlaneOptions opt = {}) {
  if (!(r > 0)) throw ConfigurationError("anisotropic_identities: r must be positive");
  if (!(p >= 1)) throw ConfigurationError("anisotropic_identities: p must be at least 1");
  AnisotropicReport rep;
  rep.r = r;
  rep.sigma = sigma;
  rep.a = a;
  rep.b = b;
  rep.alpha = alpha;
  const double w = std::max(u.width_x, u.width_y);
  rep.box = opt.box_factor * w;
  auto axis_points = [&](double width, std::initializer_list<double> stretches) {
    double narrow = width;
    for (double s : stretches) narrow = std::min(narrow, width / s);
    return detail::next_pow2(rep.box / (narrow / opt.points_per_width));
  };
  const double sx = std::pow(r, a), sy = std::pow(r, b), si = std::pow(r, alpha);
  rep.grid_x = axis_points(u.width_x, {sx, si});
  rep.grid_y = axis_points(u.width_y, {sy, si});
  if (2 * rep.grid_x > opt.max_points || 2 * rep.grid_y > opt.max_points)
    throw DomainOverflow("anisotropic_identities: scaled profile needs a finer grid than allowed");

  struct Law {
    const char* name;
    double exponent;
    double detail::PlaneQuantities::*field;
    bool isotropic;
  };
  const std::vector<Law> laws = {
      {"dy", b + 2 * sigma - a, &detail::PlaneQuantities::dy, false},
      {"y_dx", 2 * sigma + a - 3 * b, &detail::PlaneQuantities::ydx, false},
      {"Lp", sigma * p - a - b, &detail::PlaneQuantities::lp, false},
      {"L2", 2 * sigma - a - b, &detail::PlaneQuantities::l2, false},
      // r^{2 + 2 alpha - n alpha} with n = 2
      {"gradient", 2.0, &detail::PlaneQuantities::grad, true},
  };

  std::vector<std::vector<double>> errors(laws.size()), measured(laws.size());
  for (int level = 0; level < 2; ++level) {
    const int Nx = rep.grid_x << level, Ny = rep.grid_y << level;
    const detail::Axis bx(rep.box, Nx, u.f, 1.0, 1.0), by(rep.box, Ny, u.g, 1.0, 1.0);
    const detail::Axis ax(rep.box, Nx, u.f, std::pow(r, sigma), sx), ay(rep.box, Ny, u.g, 1.0, sy);
    const detail::Axis ix(rep.box, Nx, u.f, r, si), iy(rep.box, Ny, u.g, 1.0, si);
    detail::require_inside(bx, by, "anisotropic_identities");
    detail::require_inside(ax, ay, "anisotropic_identities");
    detail::require_inside(ix, iy, "anisotropic_identities");
    const auto base = detail::plane_quantities(bx, by, p);
    const auto aniso = detail::plane_quantities(ax, ay, p);
    const auto iso = detail::plane_quantities(ix, iy, p);
    for (std::size_t k = 0; k < laws.size(); ++k) {
      const double num = (laws[k].isotropic ? iso : aniso).*(laws[k].field);
      const double ratio = num / (base.*(laws[k].field));
      const double pred = std::pow(r, laws[k].exponent);
      measured[k].push_back(ratio);
      errors[k].push_back(std::abs(ratio / pred - 1));
    }
  }
  rep.all_pass = true;
  for (std::size_t k = 0; k < laws.size(); ++k) {
    ScalingLawCheck c;
    c.name = laws[k].name;
    c.exponent = laws[k].exponent;
    c.predicted = std::pow(r, c.exponent);
    c.measured = measured[k][1];
    c.error = errors[k][0];
    c.error_refined = errors[k][1];
    c.reduction = c.error_refined > 0 ? c.error / c.error_refined : std::numeric_limits<double>::infinity();
    const bool ordered = c.error < opt.noise_floor || c.reduction >= 4.0;
    c.pass = c.error_refined <= opt.tolerance && ordered;
    rep.all_pass = rep.all_pass && c.pass;
    rep.laws.push_back(c);
  }
  return rep;
}

struct NegativeEnergyStep {
  double lambda = 1;
  double mass = 0;
  double lp = 0;    // int |u|^{p+1}
  double grad = 0;  // ||grad u||^2
  double energy = 0;
  double mass_error = 0;  // |mass - beta|
  double lp_law_error = 0;
  double grad_law_error = 0;
  double ratio_law_error = 0;
};

struct NegativeEnergyReport {
  int n = 1;
  double p = 2, beta = 1, alpha = 1;
  double box = 0;
  int grid = 0;
  double ratio_exponent = 0;  // p - 1 - 4/n
  std::vector<NegativeEnergyStep> steps;
  bool reached = false;
  double lambda_final = 1;
  double max_law_error = 0;
  double max_mass_error = 0;
};

struct NegativeEnergyResult {
  NegativeEnergyReport report;
  Field<TorusBasis> field;
};

/// Mass-preserving dilations u -> lambda u(lambda^{2/n} x) of a Gaussian bump
/// with ||u||^2 = beta, followed until the energy turns negative.
inline NegativeEnergyResult negative_energy_construction(int n, double p, double beta, double shrink = 0.8,
                                                         double width = 1.0) {
  if (n < 1 || n > 2) throw ConfigurationError("negative_energy_construction supports n = 1 or 2");
  if (!(p > 1) || !(p < 1 + 4.0 / n)) throw ConfigurationError("negative_energy_construction needs p in (1, 1 + 4/n)");
  if (!(beta > 0)) throw ConfigurationError("beta must be positive");
  if (!(shrink > 0 && shrink < 1)) throw ConfigurationError("shrink factor must lie in (0, 1)");
  NegativeEnergyReport rep;
  rep.n = n;
  rep.p = p;
  rep.beta = beta;
  rep.alpha = 2.0 / n;
  rep.ratio_exponent = p - 1 - 4.0 / n;

  // Closed-form norms of the unit-amplitude Gaussian size the surrogate box;
  // all reported values are measured on the grid.
  const double s = width;
  const double g_mass = std::pow(pi * s * s, 0.5 * n);
  const double a0 = std::sqrt(beta / g_mass);
  const double G0 = a0 * a0 * std::pow(pi * s * s, 0.5 * n) * n / (2 * s * s);
  const double P0 = std::pow(a0, p + 1) * std::pow(2 * pi * s * s / (p + 1), 0.5 * n);
  const double expo = 4.0 / n - (p - 1);
  const double lam_star = std::pow(2 * P0 / ((p + 1) * G0), 1.0 / expo);
  double lam_min = 1.0;
  while (lam_min > lam_star && lam_min > 1e-6) lam_min *= shrink;
  rep.box = std::max(32.0 * s, 32.0 * s / std::pow(lam_min, rep.alpha));
  rep.grid = detail::next_pow2(rep.box / (s / 4));
  const double max_grid = n == 1 ? (1 << 20) : 2048;
  if (rep.grid > max_grid) throw DomainOverflow("negative_energy_construction: surrogate box would be too large");

  TorusSpec ts;
  ts.n = n;
  ts.period = rep.box;
  ts.grid_points = rep.grid;
  auto basis = std::make_shared<TorusBasis>(ts);
  const TorusBasis& b = *basis;

  auto sample = [&](double lam) {
    CVec g(b.grid_size());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const auto x = b.grid_point(i);
      double d2 = 0;
      for (double xi : x) d2 += (xi - 0.5 * rep.box) * (xi - 0.5 * rep.box);
      g[i] = lam * a0 * std::exp(-0.5 * std::pow(lam, 2 * rep.alpha) * d2 / (s * s));
    }
    return g;
  };
  auto central_fraction = [&](const CVec& g) {
    double in = 0, all = 0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const auto x = b.grid_point(i);
      bool inside = true;
      for (double xi : x) inside = inside && std::abs(xi - 0.5 * rep.box) <= 0.25 * rep.box;
      const double v = std::norm(g[i]);
      all += v;
      if (inside) in += v;
    }
    return in / all;
  };

  NegativeEnergyStep base;
  CVec c;
  for (double lam = 1.0; lam >= 1e-6; lam *= shrink) {
    const CVec g = sample(lam);
    if (central_fraction(g) < 1 - 1e-10) throw DomainOverflow("negative_energy_construction: dilated bump overflows");
    c = b.from_grid(g);
    NegativeEnergyStep st;
    st.lambda = lam;
    st.mass = mass(b, c);
    st.lp = lp_integral(b, c, p);
    st.grad = grad_sq(b, c);
    st.energy = 0.5 * st.grad - st.lp / (p + 1);
    st.mass_error = std::abs(st.mass - beta);
    if (rep.steps.empty()) base = st;
    st.lp_law_error = std::abs(st.lp / (base.lp * std::pow(lam, p - 1)) - 1);
    st.grad_law_error = std::abs(st.grad / (base.grad * std::pow(lam, 4.0 / n)) - 1);
    st.ratio_law_error =
        std::abs((st.lp / st.grad) / ((base.lp / base.grad) * std::pow(lam, rep.ratio_exponent)) - 1);
    rep.max_law_error = std::max({rep.max_law_error, st.lp_law_error, st.grad_law_error, st.ratio_law_error});
    rep.max_mass_error = std::max(rep.max_mass_error, st.mass_error);
    rep.steps.push_back(st);
    rep.lambda_final = lam;
    if (st.energy < 0) {
      rep.reached = true;
      break;
    }
  }
  return {rep, Field<TorusBasis>(basis, c)};
}

}  // namespace travwave
