#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "travwave/basis/field.hpp"
#include "travwave/basis/radial.hpp"
#include "travwave/common.hpp"
#include "travwave/min/minimizer.hpp"
#include "travwave/ops/operators.hpp"

namespace travwave {

// ---------------------------------------------------------------------------
// Vanishing at infinity

struct VanishCriteria {
  double integral_value = 0;  // int_1^{r_max} dr / A
  double tail_estimate = 0;   // geometric extrapolation from the last dyadic blocks
  double block_ratio = 0;     // (last block) / (previous block)
  bool integral_holds = false;

  double A_at_rmax = 0;
  bool A_increasing = false;   // over the last two dyadic blocks
  double sup_log_derivative = 0;  // sup_{r >= 1} |A'/A|
  double sup_log_derivative_inner = 0;
  bool growth_holds = false;

  bool holds = false;         // either criterion
  bool inconclusive = false;  // neither
  bool below_lower_bound = false;  // A dips below the configured A_lower_bound
};

inline VanishCriteria check_vanish_criteria(const RadialSpec& spec) {
  spec.validate();
  if (!spec.A) throw ConfigurationError("check_vanish_criteria needs the weight as a function");
  const double h = spec.spacing();
  const double R = spec.r_max;
  int beyond = 0;
  for (Eigen::Index i = 0; i < spec.grid.size(); ++i)
    if (spec.grid[i] >= 1.0) ++beyond;
  if (beyond < 16) throw InsufficientData("check_vanish_criteria: fewer than 16 nodes beyond r = 1");
  if (R < 8) throw InsufficientData("check_vanish_criteria: r_max must be at least 8 for dyadic blocks");

  auto integral = [&](double a, double b) {
    // Composite Simpson on the grid spacing.
    int m = std::max(2, static_cast<int>(std::ceil((b - a) / h)));
    if (m % 2) ++m;
    const double dh = (b - a) / m;
    double s = 1 / spec.A(a) + 1 / spec.A(b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) / spec.A(a + i * dh);
    return s * dh / 3;
  };
  VanishCriteria v;
  v.integral_value = integral(1.0, R);
  const double b1 = integral(R / 4, R / 2), b2 = integral(R / 2, R);
  v.block_ratio = b1 > 0 ? b2 / b1 : std::numeric_limits<double>::infinity();
  v.integral_holds = v.block_ratio < 0.9;
  v.tail_estimate = v.integral_holds ? b2 * v.block_ratio / (1 - v.block_ratio) : std::numeric_limits<double>::infinity();

  v.A_at_rmax = spec.A(R);
  v.A_increasing = spec.A(R) > spec.A(R / 2) && spec.A(R / 2) > spec.A(R / 4) && spec.A(R) >= 2 * spec.A(R / 4);
  double sup_all = 0, sup_inner = 0;
  for (Eigen::Index i = 0; i < spec.grid.size(); ++i) {
    const double r = spec.grid[i];
    if (r < 1.0) continue;
    const double lo = std::max(r - h, 0.0), hi = r + h;
    const double d = (spec.A(hi) - spec.A(lo)) / (hi - lo);
    const double q = std::abs(d / spec.A(r));
    sup_all = std::max(sup_all, q);
    if (r <= R / 2) sup_inner = std::max(sup_inner, q);
  }
  v.sup_log_derivative = sup_all;
  v.sup_log_derivative_inner = sup_inner;
  v.growth_holds = v.A_increasing && std::isfinite(sup_all) && sup_all <= 2 * sup_inner + 1e-12;
  v.holds = v.integral_holds || v.growth_holds;
  v.inconclusive = !v.holds;
  for (Eigen::Index i = 0; i < spec.weight_A.size(); ++i)
    if (spec.weight_A[i] < spec.A_lower_bound) v.below_lower_bound = true;
  return v;
}

// ---------------------------------------------------------------------------
// Radial minimisation with a domain check

struct RadialMinimizeResult {
  MinimizeResult<RadialBasis> result;
  double objective_doubled = 0;
  double domain_sensitivity = 0;  // relative change under r_max doubling
  VanishCriteria criteria;
  std::vector<std::string> warnings;
};

inline RadialMinimizeResult minimize_radial(const ProblemSpec& pr, const RadialSpec& spec, const KillingSpec& X,
                                            double domain_tolerance = 1e-6) {
  RadialMinimizeResult out;
  try {
    out.criteria = check_vanish_criteria(spec);
    if (!out.criteria.holds) out.warnings.push_back("neither vanishing criterion holds for this weight");
    if (out.criteria.below_lower_bound) out.warnings.push_back("A dips below the configured lower bound");
  } catch (const InsufficientData& e) {
    out.warnings.push_back(e.what());
  }
  auto b = std::make_shared<RadialBasis>(spec);
  auto b2 = std::make_shared<RadialBasis>(spec.doubled());
  out.result = minimize(b, pr, X);
  const auto r2 = minimize(b2, pr, X);
  out.objective_doubled = r2.objective;
  out.domain_sensitivity =
      std::abs(r2.objective - out.result.objective) / std::max(std::abs(out.result.objective), 1e-300);
  if (out.domain_sensitivity >= domain_tolerance)
    throw IncreaseDomain("objective moves by " + std::to_string(out.domain_sensitivity) +
                         " under r_max doubling; enlarge the domain");
  return out;
}

// ---------------------------------------------------------------------------
// Technical assumption I_beta < -(m^2 - lambda^2) beta / 2

struct TechnicalAssumption {
  bool holds = false;
  double margin = 0;  // threshold - I_est (positive when the inequality holds)
  double I_est = 0;
  double threshold = 0;
  double I_minimizer = std::numeric_limits<double>::quiet_NaN();
  double I_construction = std::numeric_limits<double>::quiet_NaN();
  bool used_construction = false;
};

namespace detail {

/// Best energy over mass-preserving dilations lambda g(lambda^{2/n} r) of a
/// Gaussian on the radial grid, each renormalised to mass beta.
inline double radial_dilation_energy(const RadialBasis& b, double beta, double p, double K) {
  const int n = b.dimension();
  const double alpha = 2.0 / n;
  const RVec& r = b.nodes();
  const double R = b.spec().r_max;
  const KillingSpec X0 = KillingSpec::radial(0.0);
  double best = std::numeric_limits<double>::infinity();
  for (int j = -48; j <= 24; ++j) {
    const double lam = std::pow(2.0, j / 4.0);
    CVec c(b.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      const double z = std::pow(lam, alpha) * r[i];
      c[i] = lam * std::exp(-0.5 * z * z);
    }
    b.project(c);
    const double m = mass(b, c);
    if (!(m > 0)) continue;
    double outer = 0;
    for (Eigen::Index i = 0; i < c.size(); ++i)
      if (r[i] > 0.5 * R) outer += std::norm(c[i]) * b.grid_weights()[i];
    if (outer > 1e-10 * m) continue;  // does not fit the domain
    // Needs at least a few nodes across the bump.
    if (std::pow(lam, -alpha) < 4 * b.spacing()) continue;
    c *= std::sqrt(beta / m);
    best = std::min(best, energy_nls(b, c, X0, p, K));
  }
  return best;
}

}  // namespace detail

inline TechnicalAssumption technical_assumption(ProblemSpec pr, const RadialSpec& spec) {
  if (pr.scheme != Scheme::EnergyMin) throw ConfigurationError("technical_assumption needs the EnergyMin scheme");
  TechnicalAssumption t;
  const double beta = pr.constraint_value;
  t.threshold = -(pr.m_mass * pr.m_mass - pr.lambda * pr.lambda) * beta / 2;
  auto b = std::make_shared<RadialBasis>(spec);
  // On radial data the Killing terms vanish, so the NLKG energy reduces to the NLS one.
  pr.equation = Equation::NLS;
  pr.constraint = ConstraintKind::Mass;
  try {
    t.I_minimizer = minimize(b, pr, KillingSpec::radial(0.0)).objective;
  } catch (const NonConverged<RadialBasis>& e) {
    t.I_minimizer = e.best.objective;
  }
  t.I_est = t.I_minimizer;
  if (!(t.I_est < t.threshold)) {
    t.I_construction = detail::radial_dilation_energy(*b, beta, pr.p, pr.K);
    t.used_construction = true;
    t.I_est = std::min(t.I_est, t.I_construction);
  }
  t.holds = t.I_est < t.threshold;
  t.margin = t.threshold - t.I_est;
  return t;
}

// ---------------------------------------------------------------------------
// Concentration-compactness diagnostics

enum class CCVerdict { Vanishing, Concentration, Splitting, Inconclusive };

inline const char* to_string(CCVerdict v) {
  switch (v) {
    case CCVerdict::Vanishing: return "Vanishing";
    case CCVerdict::Concentration: return "Concentration";
    case CCVerdict::Splitting: return "Splitting";
    case CCVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct SplitWitness {
  double inner_centre = 0, inner_mass = 0;
  double outer_centre = 0, outer_mass = 0;
  double separation = 0;
};

struct CCReport {
  CCVerdict verdict = CCVerdict::Inconclusive;
  double beta = 0;
  std::vector<double> epsilons;
  std::vector<double> radii;
  std::vector<std::vector<double>> sup_window;  // [nu][R]
  std::vector<std::vector<double>> centre;      // [nu][R], argmax centre
  std::vector<std::vector<double>> R_of_eps;    // [eps][nu], infinity if no radius captures beta - eps
  std::vector<SplitWitness> split;              // per nu, at the largest radius
  double alpha = 0;
  bool vanishing = false, concentration = false, splitting = false;
};

namespace detail {

/// Prefix sums of the node masses of |u|^{p+1}.
inline RVec lp_prefix(const RadialBasis& b, const CVec& c, double p) {
  const RVec dens = (b.to_grid(c).cwiseAbs().array().pow(p + 1) * b.grid_weights().array()).matrix();
  RVec pre(dens.size() + 1);
  pre[0] = 0;
  for (Eigen::Index i = 0; i < dens.size(); ++i) pre[i + 1] = pre[i] + dens[i];
  return pre;
}

/// Mass in [c - R, c + R] for the node-centred window at node i.
inline double window_mass(const RVec& pre, const RVec& r, Eigen::Index i, double R) {
  const auto lo = std::lower_bound(r.data(), r.data() + r.size(), r[i] - R - 1e-12) - r.data();
  const auto hi = std::upper_bound(r.data(), r.data() + r.size(), r[i] + R + 1e-12) - r.data();
  return pre[hi] - pre[lo];
}

}  // namespace detail

/// Default schedule: eps = {0.1, 0.03, 0.01} beta and dyadic radii up to r_max/4.
inline std::vector<double> default_cc_radii(const RadialBasis& b) {
  std::vector<double> radii;
  for (double R = b.spec().r_max / 4; R >= 4 * b.spacing(); R /= 2) radii.push_back(R);
  std::reverse(radii.begin(), radii.end());
  return radii;
}

inline CCReport cc_classify(const std::vector<Field<RadialBasis>>& seq, double p, std::vector<double> epsilons = {},
                            std::vector<double> radii = {}) {
  if (seq.size() < 4) throw InsufficientData("cc_classify needs at least four sequence elements");
  const RadialBasis& b = *seq.front().basis;
  for (const auto& u : seq) {
    if (!u.basis) throw BasisMismatch("cc_classify: field without basis");
    if (u.basis != seq.front().basis &&
        (u.basis->size() != b.size() || (u.basis->grid_weights() - b.grid_weights()).cwiseAbs().maxCoeff() > 0))
      throw BasisMismatch("cc_classify: all fields must share the radial grid");
  }
  CCReport rep;
  std::vector<RVec> pre;
  for (const auto& u : seq) pre.push_back(detail::lp_prefix(b, u.coeffs, p));
  rep.beta = pre.front()[pre.front().size() - 1];
  for (const auto& P : pre)
    if (std::abs(P[P.size() - 1] - rep.beta) > 1e-8 * rep.beta)
      throw ConsistencyError("cc_classify: int |u|^{p+1} must be constant along the sequence");
  if (epsilons.empty()) epsilons = {0.1 * rep.beta, 0.03 * rep.beta, 0.01 * rep.beta};
  if (radii.empty()) radii = default_cc_radii(b);
  std::sort(radii.begin(), radii.end());
  std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
  rep.epsilons = epsilons;
  rep.radii = radii;
  const RVec& r = b.nodes();
  const std::size_t nu = seq.size(), nR = radii.size();

  rep.sup_window.assign(nu, std::vector<double>(nR, 0.0));
  rep.centre.assign(nu, std::vector<double>(nR, 0.0));
  for (std::size_t v = 0; v < nu; ++v)
    for (std::size_t k = 0; k < nR; ++k)
      for (Eigen::Index i = 0; i < r.size(); ++i) {
        const double m = detail::window_mass(pre[v], r, i, radii[k]);
        if (m > rep.sup_window[v][k]) {
          rep.sup_window[v][k] = m;
          rep.centre[v][k] = r[i];
        }
      }

  // Vanishing: for every R the sup window mass decreases along the sequence and ends below eps_v.
  const double eps_v = epsilons.front();
  rep.vanishing = true;
  for (std::size_t k = 0; k < nR; ++k) {
    for (std::size_t v = 1; v < nu; ++v)
      rep.vanishing = rep.vanishing && rep.sup_window[v][k] <= rep.sup_window[v - 1][k] * (1 + 1e-12);
    rep.vanishing = rep.vanishing && rep.sup_window[nu - 1][k] < eps_v;
  }

  // Concentration: R(eps) finite for every element and bounded along the sequence (one dyadic
  // step of slack between the two halves absorbs centre jitter).
  const double inf = std::numeric_limits<double>::infinity();
  rep.R_of_eps.assign(epsilons.size(), std::vector<double>(nu, inf));
  rep.concentration = true;
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    for (std::size_t v = 0; v < nu; ++v)
      for (std::size_t k = 0; k < nR; ++k)
        if (rep.sup_window[v][k] >= rep.beta - epsilons[e]) {
          rep.R_of_eps[e][v] = radii[k];
          break;
        }
    const auto& row = rep.R_of_eps[e];
    const std::size_t half = nu / 2;
    const double first = *std::max_element(row.begin(), row.begin() + static_cast<long>(half));
    const double last = *std::max_element(row.begin() + static_cast<long>(half), row.end());
    rep.concentration = rep.concentration && std::isfinite(last) && std::isfinite(first) && last <= 2 * first;
  }

  // Splitting: two disjoint windows at the largest radius whose masses settle at alpha and beta - alpha
  // while their separation grows.
  const double Rs = radii.back();
  for (std::size_t v = 0; v < nu; ++v) {
    Eigen::Index i1 = 0;
    double m1 = -1;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      const double m = detail::window_mass(pre[v], r, i, Rs);
      if (m > m1) {
        m1 = m;
        i1 = i;
      }
    }
    Eigen::Index i2 = -1;
    double m2 = -1;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      if (std::abs(r[i] - r[i1]) <= 2 * Rs) continue;
      const double m = detail::window_mass(pre[v], r, i, Rs);
      if (m > m2) {
        m2 = m;
        i2 = i;
      }
    }
    SplitWitness w;
    if (i2 < 0) {
      w.inner_centre = r[i1];
      w.inner_mass = m1;
    } else {
      const bool first_inner = r[i1] < r[i2];
      w.inner_centre = first_inner ? r[i1] : r[i2];
      w.inner_mass = first_inner ? m1 : m2;
      w.outer_centre = first_inner ? r[i2] : r[i1];
      w.outer_mass = first_inner ? m2 : m1;
      w.separation = w.outer_centre - w.inner_centre;
    }
    rep.split.push_back(w);
  }
  const std::size_t half = nu / 2;
  double alpha = 0;
  for (std::size_t v = half; v < nu; ++v) alpha += rep.split[v].inner_mass;
  alpha /= static_cast<double>(nu - half);
  rep.alpha = alpha;
  const double eps_min = epsilons.back();
  rep.splitting = alpha > eps_v && rep.beta - alpha > eps_v;
  for (std::size_t v = half; v < nu; ++v) {
    const auto& w = rep.split[v];
    rep.splitting = rep.splitting && w.separation > 0 && std::abs(w.inner_mass - alpha) < eps_min &&
                    std::abs(w.outer_mass - (rep.beta - alpha)) < eps_min;
    if (v > half) rep.splitting = rep.splitting && w.separation > rep.split[v - 1].separation;
  }

  const int count = int(rep.vanishing) + int(rep.concentration) + int(rep.splitting);
  if (count == 1)
    rep.verdict = rep.vanishing ? CCVerdict::Vanishing : rep.concentration ? CCVerdict::Concentration : CCVerdict::Splitting;
  return rep;
}

/// Archetype sequences with int |u|^{p+1} = beta on every element.
enum class CCArchetype { Vanishing, Concentration, Splitting };

inline const char* to_string(CCArchetype a) {
  switch (a) {
    case CCArchetype::Vanishing: return "Vanishing";
    case CCArchetype::Concentration: return "Concentration";
    case CCArchetype::Splitting: return "Splitting";
  }
  return "?";
}

struct ArchetypeSequence {
  std::vector<Field<RadialBasis>> fields;
  double alpha = 0;  // splitting: mass of the inner bump
};

inline ArchetypeSequence cc_archetype(CCArchetype kind, std::shared_ptr<const RadialBasis> b, double p, double beta,
                                     std::uint64_t seed, int length = 6) {
  if (length < 1) throw ConfigurationError("archetype length must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const RVec& r = b->nodes();
  auto bump = [&](double c, double s) {
    CVec v(b->size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = std::exp(-0.5 * std::pow((r[i] - c) / s, 2));
    return v;
  };
  auto normalise = [&](CVec v, double target) {
    b->project(v);
    v *= std::pow(target / lp_integral(*b, v, p), 1.0 / (p + 1));
    return v;
  };
  ArchetypeSequence out;
  const double s0 = 0.8 + 0.4 * U(rng);
  const double c0 = 20 + 20 * U(rng);
  const double a = 0.3 + 0.4 * U(rng);
  for (int v = 0; v < length; ++v) {
    CVec c;
    switch (kind) {
      case CCArchetype::Vanishing:
        c = normalise(bump(0.0, s0 * std::pow(2.0, v + 3)), beta);
        break;
      case CCArchetype::Concentration:
        c = normalise(bump(c0 + 2 * (U(rng) - 0.5), s0), beta);
        break;
      case CCArchetype::Splitting: {
        const double d = 16 * std::pow(2.0, v);
        CVec first = normalise(bump(c0, s0), a * beta);
        CVec second = normalise(bump(c0 + d, s0), (1 - a) * beta);
        c = normalise(CVec(first + second), beta);
        out.alpha = a * beta;
        break;
      }
    }
    out.fields.emplace_back(b, c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Splitting cutoffs

struct SplittingCutoffs {
  RVec chi_sharp, chi_flat;
  CVec u_sharp, u_flat;
  double seam_l2 = 0, seam_grad = 0, seam_lp = 0;
  double seam_mass = 0;
  double F_defect = 0;  // |F(u) - F(u#) - F(u_b)|
  double F_bound = 0;   // (2 + |m^2 - lambda^2|) * (seam_l2 + seam_grad)
  double lp_defect = 0;  // |int|u|^{p+1} - int|u#|^{p+1} - int|u_b|^{p+1}|
  double lipschitz_sharp = 0, lipschitz_flat = 0;
  bool bound_holds = false;
};

/// chi# = 1 on r <= d, ramps to 0 on [d, d+1]; chi_b = 0 on r <= d+1, ramps to 1 on [d+1, d+2].
inline SplittingCutoffs splitting_cutoffs(const Field<RadialBasis>& u, double d, double p, double m_mass = 1.0,
                                          double lambda = 0.0) {
  const RadialBasis& b = *u.basis;
  const double R = b.spec().r_max;
  if (!(d >= 0) || !(d + 2 < R)) throw GeometryError("splitting_cutoffs: collars must fit inside (0, r_max)");
  const RVec& r = b.nodes();
  const Eigen::Index N = r.size();
  SplittingCutoffs s;
  s.chi_sharp = RVec(N);
  s.chi_flat = RVec(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    s.chi_sharp[i] = std::clamp(d + 1 - r[i], 0.0, 1.0);
    s.chi_flat[i] = std::clamp(r[i] - (d + 1), 0.0, 1.0);
  }
  s.u_sharp = (u.coeffs.array() * s.chi_sharp.cast<cplx>().array()).matrix();
  s.u_flat = (u.coeffs.array() * s.chi_flat.cast<cplx>().array()).matrix();
  b.project(s.u_sharp);
  b.project(s.u_flat);
  const double h = b.spacing();
  for (Eigen::Index i = 0; i + 1 < N; ++i) {
    s.lipschitz_sharp = std::max(s.lipschitz_sharp, std::abs(s.chi_sharp[i + 1] - s.chi_sharp[i]) / h);
    s.lipschitz_flat = std::max(s.lipschitz_flat, std::abs(s.chi_flat[i + 1] - s.chi_flat[i]) / h);
  }

  // Seam integrals over the collars, widened by the derivative stencil reach.
  const double lo = d - 2 * h, hi = d + 2 + 2 * h;
  const CVec g = b.to_grid(u.coeffs);
  for (Eigen::Index i = 0; i < N; ++i) {
    if (r[i] < lo || r[i] > hi) continue;
    s.seam_l2 += std::norm(g[i]) * b.grid_weights()[i];
    s.seam_lp += std::pow(std::abs(g[i]), p + 1) * b.grid_weights()[i];
  }
  const CVec du = b.derivative().cast<cplx>() * u.coeffs;
  for (Eigen::Index c = 0; c < du.size(); ++c) {
    const double rm = 0.5 * (r[c] + r[c + 1]);
    if (rm < lo || rm > hi) continue;
    s.seam_grad += std::norm(du[c]) * b.midpoint_weights()[c];
  }
  s.seam_mass = s.seam_l2 + s.seam_grad + s.seam_lp;

  const KillingSpec X0 = KillingSpec::radial(0.0);
  auto F = [&](const CVec& c) { return form_F_nlkg(b, c, X0, lambda, m_mass); };
  s.F_defect = std::abs(F(u.coeffs) - F(s.u_sharp) - F(s.u_flat));
  s.F_bound = (2 + std::abs(m_mass * m_mass - lambda * lambda)) * (s.seam_l2 + s.seam_grad);
  s.lp_defect = std::abs(lp_integral(b, u.coeffs, p) - lp_integral(b, s.u_sharp, p) - lp_integral(b, s.u_flat, p));
  s.bound_holds = s.F_defect <= s.F_bound + 1e-12 && s.lp_defect <= s.seam_lp + 1e-12;
  return s;
}

// ---------------------------------------------------------------------------
// Strict subadditivity on estimated infima

struct SubadditivityRow {
  std::string kind;  // "scaling" or "split"
  double beta = 0, other = 0;  // sigma * beta, or eta
  double lhs = 0, rhs = 0;
  bool holds = false;
};

struct LemmaL1Report {
  bool hypothesis_holds = true;  // I_beta < -(m^2 - lambda^2) beta / 2 for every entry
  std::vector<double> hypothesis_failures;
  std::vector<SubadditivityRow> rows;
  bool all_hold = false;
};

/// I_{sigma beta} < sigma I_beta and I_beta < I_{beta - eta} + I_eta on the supplied estimates.
inline LemmaL1Report lemma_l1_check(const std::map<double, double>& I, double m_mass, double lambda, double sigma,
                                    double margin = 1e-8) {
  if (!(sigma > 1)) throw ConfigurationError("lemma_l1_check needs sigma > 1");
  if (I.size() < 2) throw InsufficientData("lemma_l1_check needs at least two beta entries");
  auto find = [&](double key) -> std::optional<double> {
    for (const auto& [k, v] : I)
      if (std::abs(k - key) <= 1e-12 * std::max(1.0, std::abs(key))) return v;
    return std::nullopt;
  };
  LemmaL1Report rep;
  const double w = m_mass * m_mass - lambda * lambda;
  for (const auto& [beta, val] : I)
    if (!(val < -w * beta / 2)) {
      rep.hypothesis_holds = false;
      rep.hypothesis_failures.push_back(beta);
    }
  for (const auto& [beta, val] : I) {
    if (auto big = find(sigma * beta)) {
      SubadditivityRow row{"scaling", beta, sigma * beta, *big, sigma * val, false};
      row.holds = row.lhs < row.rhs - margin;
      rep.rows.push_back(row);
    }
    for (const auto& [eta, ival] : I) {
      if (!(eta < beta) || eta > beta - eta + 1e-12) continue;  // each unordered split once
      if (auto rest = find(beta - eta)) {
        SubadditivityRow row{"split", beta, eta, val, *rest + ival, false};
        row.holds = row.lhs < row.rhs - margin;
        rep.rows.push_back(row);
      }
    }
  }
  if (rep.rows.empty()) throw InsufficientData("lemma_l1_check: no (beta, sigma beta) or (beta, eta) pairs present");
  rep.all_hold = std::all_of(rep.rows.begin(), rep.rows.end(), [](const auto& r) { return r.holds; });
  return rep;
}

/// I_beta estimate: best radial NLS energy at mass beta.
inline double estimate_I(double beta, ProblemSpec pr, const RadialSpec& spec) {
  pr.equation = Equation::NLS;
  pr.scheme = Scheme::EnergyMin;
  pr.constraint = ConstraintKind::Mass;
  pr.constraint_value = beta;
  auto b = std::make_shared<RadialBasis>(spec);
  try {
    return minimize(b, pr, KillingSpec::radial(0.0)).objective;
  } catch (const NonConverged<RadialBasis>& e) {
    return e.best.objective;
  }
}

}  // namespace travwave
