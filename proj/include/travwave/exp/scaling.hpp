#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/rational.hpp>

#include "travwave/basis/field.hpp"
#include "travwave/basis/radial.hpp"
#include "travwave/basis/sphere.hpp"
#include "travwave/basis/torus.hpp"
#include "travwave/common.hpp"
#include "travwave/min/minimizer.hpp"
#include "travwave/ops/operators.hpp"

namespace travwave {

namespace detail {

inline int next_pow2(double x) {
  int n = 8;
  while (n < x) n *= 2;
  return n;
}

/// Least-squares slope of log y against log x over the points from `skip` on.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, std::size_t skip) {
  if (x.size() != y.size()) throw ConsistencyError("loglog_slope: length mismatch");
  if (x.size() < skip + 2) skip = 0;
  if (x.size() < 2) throw InsufficientData("loglog_slope needs two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = skip; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

}  // namespace detail

/// Torus T^n_k: period multiplied by k, grid refined so the resolution per unit length is kept.
inline TorusSpec scaled_spec(const TorusSpec& base, double k) {
  TorusSpec s = base;
  s.period = base.period * k;
  s.grid_points = detail::next_pow2(std::max<double>(base.grid_points, std::ceil(8 * s.period)));
  return s;
}

/// Sphere of radius r: same harmonic truncation, metric scaled by r^2.
inline SphereSpec scaled_spec(const SphereSpec& base, double r) {
  SphereSpec s = base;
  s.metric_scale = base.metric_scale * r * r;
  return s;
}

struct ScalingSweepResult {
  std::vector<double> scales;
  std::vector<double> volumes;
  std::vector<double> constant_branch;         // assembled F of the forced constant
  std::vector<double> constant_branch_closed;  // m^2 A^{2/(p+1)} V^{(p-1)/(p+1)}
  std::vector<double> constant_branch_stated;  // m^2 A^{1/(p+1)} V^{p/(p+1)}
  std::vector<double> minimized;
  std::vector<double> x_norms;
  std::vector<double> residuals;
  std::vector<Classification> classification;
  std::vector<bool> converged;
  std::vector<bool> broken;  // minimized below the constant branch by the margin
  std::optional<double> breaking_scale;
  double closed_form_defect = 0;  // max relative gap, assembled vs correct closed form
  double stated_form_defect = 0;  // max relative gap, assembled vs stated closed form
  double slope = 0;               // log-log slope of the assembled branch (after three points)
  double slope_stated = 0;        // np/(p+1)
  double slope_correct = 0;       // (p-1)/(p+1)
  int n = 1;
  double p = 3;
};

/// Constant-candidate value of F_{m,0,X} under int |u|^{p+1} = A on volume V.
inline double constant_branch_correct(double m, double A, double V, double p) {
  return m * m * std::pow(A, 2.0 / (p + 1)) * std::pow(V, (p - 1) / (p + 1));
}
inline double constant_branch_stated(double m, double A, double V, double p) {
  return m * m * std::pow(A, 1.0 / (p + 1)) * std::pow(V, p / (p + 1));
}

/// Metric-scaling sweep: forced constant against the FMin minimiser at each scale.
template <class Spec>
ScalingSweepResult scaling_sweep(const Spec& base, const KillingSpec& X, double m_mass, double p, double A,
                                 const std::vector<double>& scales, ProblemSpec pr = {}) {
  using Basis = std::conditional_t<std::is_same_v<Spec, TorusSpec>, TorusBasis, SphereBasis>;
  if (scales.empty()) throw ConfigurationError("scaling_sweep needs at least one scale");
  if (regime_of(X.speed_bound()) != SpeedRegime::Elliptic)
    throw ParameterRegimeError("scaling_sweep needs a subsonic Killing field (b < 1)");
  pr.equation = Equation::NLKG;
  pr.scheme = Scheme::FMin;
  pr.constraint = ConstraintKind::LpPlusOne;
  pr.constraint_value = A;
  pr.lambda = 0.0;
  pr.m_mass = m_mass;
  pr.p = p;

  ScalingSweepResult out;
  out.n = base.n;
  out.p = p;
  out.slope_stated = base.n * p / (p + 1);
  out.slope_correct = (p - 1) / (p + 1);
  for (double s : scales) {
    if (!(s > 0)) throw ConfigurationError("scales must be positive");
    auto b = std::make_shared<Basis>(scaled_spec(base, s));
    const double V = b->volume();
    const double c = std::pow(A / V, 1.0 / (p + 1));
    const CVec u = b->constant_field(c);
    const double assembled = form_F_nlkg(*b, u, X, 0.0, m_mass);
    const double closed = constant_branch_correct(m_mass, A, V, p);
    const double stated = constant_branch_stated(m_mass, A, V, p);
    out.scales.push_back(s);
    out.volumes.push_back(V);
    out.constant_branch.push_back(assembled);
    out.constant_branch_closed.push_back(closed);
    out.constant_branch_stated.push_back(stated);
    out.closed_form_defect = std::max(out.closed_form_defect, std::abs(assembled - closed) / std::abs(closed));
    out.stated_form_defect = std::max(out.stated_form_defect, std::abs(assembled - stated) / std::abs(stated));

    MinimizeResult<Basis> r;
    bool conv = true;
    try {
      r = minimize(b, pr, X);
    } catch (const NonConverged<Basis>& e) {
      r = e.best;
      conv = false;
    }
    out.minimized.push_back(r.objective);
    out.x_norms.push_back(r.x_norm);
    out.residuals.push_back(r.residual);
    out.classification.push_back(r.classification);
    out.converged.push_back(conv);
    const bool br = conv && r.objective < assembled - 1e-8 * std::abs(assembled);
    out.broken.push_back(br);
    if (br && r.classification == Classification::Travelling && !out.breaking_scale) out.breaking_scale = s;
  }
  if (out.scales.size() >= 2) out.slope = detail::loglog_slope(out.scales, out.constant_branch, 3);
  return out;
}

/// Positive constant solving (m^2 - lambda^2) c = K c^p.
inline double trivial_constant(double m_mass, double lambda, double K, double p) {
  const double w = m_mass * m_mass - lambda * lambda;
  if (!(w > 0)) throw ParameterRegimeError("no positive constant solution: need m^2 > lambda^2");
  if (!(K > 0) || !(p > 1)) throw ConfigurationError("trivial_constant needs K > 0 and p > 1");
  return std::pow(w / K, 1.0 / (p - 1));
}

/// Relative NLKG residual of the trivial constant on a given manifold.
template <class Basis>
double trivial_constant_residual(const Basis& b, const KillingSpec& X, double m_mass, double lambda, double K, double p) {
  const double c = trivial_constant(m_mass, lambda, K, p);
  ProblemSpec pr;
  pr.equation = Equation::NLKG;
  pr.scheme = Scheme::FMin;
  pr.constraint = ConstraintKind::LpPlusOne;
  pr.m_mass = m_mass;
  pr.lambda = lambda;
  pr.p = p;
  pr.K = K;
  return verify_pde(b, pr, X, b.constant_field(c), K);
}

struct GNSample {
  std::string label;
  double ratio = 0;
  double identity_defect = 0;  // relative
};

struct GNReport {
  double gamma = 0;
  double C_estimate = 0;
  std::string argmax;
  int samples = 0;
  double identity_max_defect = 0;
  std::vector<GNSample> table;
};

/// gamma(p+1) < 2 against p < 1 + 4/n in exact rational arithmetic.
struct GNGateRow {
  int n = 1;
  boost::rational<long long> p;
  boost::rational<long long> gamma;
  bool by_gamma = false;
  bool by_p = false;
};

inline GNGateRow gn_gate(int n, boost::rational<long long> p) {
  using R = boost::rational<long long>;
  if (n < 1) throw ConfigurationError("gn_gate: n must be positive");
  GNGateRow row;
  row.n = n;
  row.p = p;
  row.gamma = R(n, 2) - R(n) / (p + 1);
  row.by_gamma = row.gamma * (p + 1) < R(2);
  row.by_p = p < R(1) + R(4, n);
  return row;
}

namespace detail {

/// Localised bump centred at the first grid point (or at r = 0).
template <class Basis>
CVec bump_field(const Basis& b, double width) {
  CVec g(b.grid_size());
  if constexpr (std::is_same_v<Basis, RadialBasis>) {
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const double r = b.nodes()[i];
      g[i] = std::exp(-0.5 * r * r / (width * width));
    }
  } else {
    const auto x0 = b.grid_point(0);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const auto x = b.grid_point(i);
      double d2 = 0;
      for (std::size_t a = 0; a < x.size(); ++a) {
        double d = x[a] - x0[a];
        if constexpr (std::is_same_v<Basis, TorusBasis>) {
          const double P = b.spec().period;
          d -= P * std::round(d / P);
          d *= std::sqrt(b.spec().metric_scale);
        } else {
          d *= std::sqrt(b.spec().metric_scale);
        }
        d2 += d * d;
      }
      g[i] = std::exp(-0.5 * d2 / (width * width));
    }
  }
  return b.from_grid(g);
}

template <class Basis>
bool mode_active(const Basis& b, Eigen::Index k) {
  if constexpr (requires { b.is_active(k); })
    return b.is_active(k);
  else
    return true;
}

}  // namespace detail

/// The zero Killing field of the matching kind.
template <class Basis>
KillingSpec zero_killing(const Basis& b) {
  if constexpr (std::is_same_v<Basis, TorusBasis>)
    return KillingSpec::torus(std::vector<double>(static_cast<std::size_t>(b.dimension()), 0.0));
  else if constexpr (std::is_same_v<Basis, SphereBasis>)
    return KillingSpec::sphere(0.0);
  else
    return KillingSpec::radial(0.0);
}

/// Lower bound for the Gagliardo-Nirenberg constant plus the F / energy identity on every sample.
template <class Basis>
GNReport gn_scan(const Basis& b, double p, int n_samples, const std::optional<KillingSpec>& X = std::nullopt, double lambda = 0,
                 double m_mass = 1, std::uint64_t seed = default_seed) {
  const int n = b.dimension();
  if (!(p > 1)) throw ConfigurationError("gn_scan: p must exceed 1");
  if (n > 2 && !(p < (n + 2.0) / (n - 2.0))) throw ConfigurationError("gn_scan: p is not subcritical");
  GNReport rep;
  rep.gamma = 0.5 * n - n / (p + 1);
  const KillingSpec Xe = X ? *X : zero_killing(b);

  auto record = [&](const std::string& label, const CVec& c) {
    const Norms nm = norms(b, c, p);
    if (!(nm.l2 > 0)) return;
    GNSample s;
    s.label = label;
    s.ratio = nm.lp1 / (std::pow(nm.l2, 1 - rep.gamma) * std::pow(nm.h1, rep.gamma));
    const auto [F, rhs] = energy_identity(b, c, Xe, lambda, m_mass, p);
    s.identity_defect = std::abs(F - rhs) / std::max({std::abs(F), std::abs(rhs), 1e-300});
    rep.identity_max_defect = std::max(rep.identity_max_defect, s.identity_defect);
    if (s.ratio > rep.C_estimate) {
      rep.C_estimate = s.ratio;
      rep.argmax = label;
    }
    rep.table.push_back(s);
  };

  std::mt19937_64 rng(seed);
  for (int i = 0; i < n_samples; ++i) record("random-" + std::to_string(i), b.random_field(rng, 1 + i % 6));
  if constexpr (Basis::diagonal) {
    record("constant", b.constant_field(1.0));
    // Highest active modes.
    const RVec lap = b.neg_laplacian_eigs();
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < lap.size(); ++k)
      if (detail::mode_active(b, k)) idx.push_back(k);
    std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index c) { return lap[a] > lap[c]; });
    for (std::size_t j = 0; j < std::min<std::size_t>(3, idx.size()); ++j) {
      CVec c = CVec::Zero(b.size());
      c[idx[j]] = 1.0;
      record("mode-" + b.mode_label(idx[j]), c);
    }
  }
  for (double w : {0.05, 0.1, 0.2, 0.4}) {
    const double scale = std::pow(b.volume(), 1.0 / n);
    record("bump-" + std::to_string(w), detail::bump_field(b, w * scale));
  }
  rep.samples = static_cast<int>(rep.table.size());
  return rep;
}

}  // namespace travwave
