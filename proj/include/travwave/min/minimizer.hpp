#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "travwave/basis/field.hpp"
#include "travwave/common.hpp"
#include "travwave/min/problem.hpp"
#include "travwave/ops/killing.hpp"
#include "travwave/ops/operators.hpp"
#include "travwave/ops/spectrum.hpp"

namespace travwave {

enum class Classification { Constant, StandingOnly, Travelling };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::Constant: return "Constant";
    case Classification::StandingOnly: return "StandingOnly";
    case Classification::Travelling: return "Travelling";
  }
  return "?";
}

struct StartSummary {
  std::string label;
  double objective = 0;
  int iterations = 0;
  bool converged = false;
  double x_norm = 0;
};

template <class Basis>
struct MinimizeResult {
  Field<Basis> u;
  double objective = 0;
  double multiplier = 0;       // lambda (NLS EnergyMin), m^2 - lambda^2 (NLKG EnergyMin), K (FMin), kappa (two nonlinearities)
  double multiplier_imag = 0;  // imaginary part of the recovered multiplier
  double residual = 0;
  double x_norm = 0;
  double constraint_value = 0;  // measured at exit
  Classification classification = Classification::Constant;
  int iterations = 0;
  bool converged = false;
  std::vector<double> descent_log;
  std::string start_label;
  std::vector<StartSummary> starts;
  std::uint64_t seed = default_seed;
  std::optional<double> subspace_mu;
  double subspace_defect = 0;  // max over iterates of ||Xu - i mu u|| / ||u||
};

struct NonConvergedBase : Error {
  using Error::Error;
};

/// Every start hit the iteration cap; `best` is the lowest objective reached.
template <class Basis>
struct NonConverged : NonConvergedBase {
  NonConverged(const std::string& what, MinimizeResult<Basis> b) : NonConvergedBase(what), best(std::move(b)) {}
  MinimizeResult<Basis> best;
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finaliser: decorrelates per-start streams.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline double re(cplx z) { return z.real(); }

}  // namespace detail

/// Objective, constraint and their L^2 gradients for one problem on one basis.
struct ProblemFunctions {
  std::function<double(const CVec&)> objective;
  std::function<CVec(const CVec&)> gradient;
  std::function<CVec(const CVec&)> hessian_linear;  // linear part of the gradient map
  std::function<double(const CVec&)> constraint;
  std::function<CVec(const CVec&)> constraint_gradient;
  double degree = 2;  // homogeneity of the constraint
  double shift = 1;   // preconditioner shift
};

template <class Basis>
ProblemFunctions make_functions(const Basis& b, const ProblemSpec& pr, const KillingSpec& X) {
  ProblemFunctions f;
  const double p = pr.p, K = pr.K, lam = pr.lambda;
  const double omega = pr.m_mass * pr.m_mass - lam * lam;
  const Basis* bp = &b;
  if (pr.equation == Equation::TwoNonlinearity) {
    f.objective = [bp, lam, p](const CVec& c) {
      return grad_sq(*bp, c) + lam * mass(*bp, c) - 2.0 / (p + 1) * lp_integral(*bp, c, p);
    };
    f.gradient = [bp, lam, p](const CVec& c) -> CVec {
      return 2.0 * (bp->neg_laplacian(c) + lam * c) - 2.0 * nonlinearity(*bp, c, p);
    };
    f.hessian_linear = [bp, lam](const CVec& c) -> CVec { return 2.0 * (bp->neg_laplacian(c) + lam * c); };
    const double q = pr.q;
    f.constraint = [bp, q](const CVec& c) { return lp_integral(*bp, c, q); };
    f.constraint_gradient = [bp, q](const CVec& c) -> CVec { return (q + 1) * nonlinearity(*bp, c, q); };
    f.degree = q + 1;
    f.shift = std::max(1.0, lam);
    return f;
  }
  const bool nls = pr.equation == Equation::NLS;
  auto lin = [bp, X, lam, nls](const CVec& c) -> CVec {
    return nls ? apply_nls_operator(*bp, c, X) : apply_nlkg_operator(*bp, c, X, lam);
  };
  if (pr.scheme == Scheme::EnergyMin) {
    f.objective = [bp, X, lam, p, K, nls](const CVec& c) {
      return nls ? energy_nls(*bp, c, X, p, K) : energy_nlkg(*bp, c, X, lam, p, K);
    };
    f.gradient = [bp, lin, p, K](const CVec& c) -> CVec { return lin(c) - K * nonlinearity(*bp, c, p); };
    f.hessian_linear = lin;
    f.constraint = [bp](const CVec& c) { return mass(*bp, c); };
    f.constraint_gradient = [](const CVec& c) -> CVec { return 2.0 * c; };
    f.degree = 2;
    f.shift = 1.0;
  } else {
    const double s = nls ? lam : omega;
    f.objective = [bp, X, lam, nls, pr](const CVec& c) {
      return nls ? form_F_nls(*bp, c, X, lam) : form_F_nlkg(*bp, c, X, lam, pr.m_mass);
    };
    f.gradient = [lin, s](const CVec& c) -> CVec { return 2.0 * (lin(c) + s * c); };
    f.hessian_linear = f.gradient;
    f.constraint = [bp, p](const CVec& c) { return lp_integral(*bp, c, p); };
    f.constraint_gradient = [bp, p](const CVec& c) -> CVec { return (p + 1) * nonlinearity(*bp, c, p); };
    f.degree = p + 1;
    f.shift = std::max(1.0, s);
  }
  return f;
}

/// Linear projection applied to every iterate, gradient and search direction:
/// the basis' own constraints, optionally V_mu, optionally real fields.
template <class Basis>
struct IterateProjector {
  const Basis* b = nullptr;
  std::optional<RVec> mask;  // 1 on modes of V_mu
  bool real_only = false;

  void operator()(CVec& c) const {
    b->project(c);
    if (mask) c = (c.array() * mask->cast<cplx>().array()).matrix();
    if (real_only) {
      const CVec g = b->to_grid(c);
      c = b->from_grid(CVec(g.real().cast<cplx>()));
    }
  }
  [[nodiscard]] CVec applied(const CVec& c) const {
    CVec o = c;
    (*this)(o);
    return o;
  }
};

/// Indicator of the modes with X u = i mu u.
template <class Basis>
RVec subspace_mask(const Basis& b, const KillingSpec& X, double mu) {
  static_assert(Basis::diagonal, "V_mu restriction needs a basis diagonalising X");
  const CVec e = b.killing_eigs(X);
  RVec m = RVec::Zero(b.size());
  const double tol = 1e-9 * std::max(1.0, std::abs(mu));
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    bool active = true;
    if constexpr (requires { b.is_active(i); }) active = b.is_active(i);
    if (active && std::abs(e[i].imag() - mu) < tol && std::abs(e[i].real()) < tol) m[i] = 1.0;
  }
  if (m.sum() == 0) throw SubspaceEmpty("V_mu is empty at this truncation");
  return m;
}

struct DescentOptions {
  double armijo = 1e-4;
  double backtrack = 0.5;
  double growth = 2.0;
  double max_step = 1.0;  // cap on the step, in units of tau0; 2 tau0 is neutral for the top modes
};

struct StartOutcome {
  CVec c;
  double objective = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> log;
  double subspace_defect = 0;
};

/// One start of preconditioned projected-gradient descent on the constraint surface.
///
/// Search direction D = P^{-1} g - mu P^{-1} n with mu chosen so that D is tangent
/// (Re <n, D> = 0), P = -Delta + shift. The step u - tau D is pulled back onto the
/// constraint by rescaling; tau comes from Armijo backtracking starting at twice
/// the last accepted step.
template <class Basis>
StartOutcome descend(const Basis& b, const ProblemFunctions& f, const ProblemSpec& pr, const IterateProjector<Basis>& proj,
                     CVec u, const std::function<double(const CVec&)>& subspace_check = {}, DescentOptions opt = {}) {
  auto retract = [&](CVec& c) {
    proj(c);
    const double cv = f.constraint(c);
    if (!(cv > 0) || !std::isfinite(cv)) throw ConsistencyError("descent: iterate left the constraint domain");
    c *= std::pow(pr.constraint_value / cv, 1.0 / f.degree);
  };
  auto rinner = [&](const CVec& a, const CVec& c) { return detail::re(b.inner(a, c)); };
  auto bnorm = [&](const CVec& a) { return std::sqrt(std::max(0.0, rinner(a, a))); };

  StartOutcome out;
  retract(u);
  double J = f.objective(u);
  out.log.push_back(J);
  if (subspace_check) out.subspace_defect = subspace_check(u);

  const auto P = b.make_preconditioner(f.shift);
  // Step scale from the dominant eigenvalue of P^{-1} H (power iteration).
  double tau0 = 1.0;
  {
    CVec v = u;
    for (int i = 0; i < 20; ++i) {
      CVec w = P(f.hessian_linear(v));
      proj(w);
      const double nv = bnorm(v), nw = bnorm(w);
      if (nw == 0 || nv == 0) break;
      tau0 = nv / nw;
      v = w / nw;
    }
  }
  double tau = tau0;
  double last_change = std::numeric_limits<double>::infinity();

  for (int it = 0; it < pr.max_iterations; ++it) {
    CVec g = f.gradient(u);
    proj(g);
    CVec n = f.constraint_gradient(u);
    proj(n);
    // Convergence: tangent part of the plain L^2 gradient.
    const double nn = rinner(n, n);
    const double mu_l2 = rinner(g, n) / nn;
    const double gt = bnorm(CVec(g - mu_l2 * n));
    const double scale = std::max({bnorm(g), std::abs(mu_l2) * std::sqrt(nn), 1e-300});
    const double rel = gt / scale;
    if (rel < pr.tol_gradient && last_change < pr.tol_objective) {
      out.converged = true;
      break;
    }
    CVec Pg = P(g), Pn = P(n);
    const double mu = rinner(n, Pg) / rinner(n, Pn);
    CVec D = Pg - mu * Pn;
    proj(D);
    const double slope = rinner(g, D);
    if (!(slope > 0)) {
      out.converged = rel < 100 * pr.tol_gradient;
      break;
    }
    double t = std::min(tau * opt.growth, opt.max_step * tau0);
    bool accepted = false;
    CVec trial;
    double Jt = 0;
    while (t > 1e-16 * tau0) {
      trial = u - t * D;
      retract(trial);
      Jt = f.objective(trial);
      if (Jt < J && Jt <= J - opt.armijo * t * slope) {
        accepted = true;
        break;
      }
      t *= opt.backtrack;
    }
    if (!accepted) {
      // No decrease resolvable in double precision.
      out.converged = rel < 100 * pr.tol_gradient;
      break;
    }
    last_change = std::abs(J - Jt) / std::max(std::abs(J), 1e-300);
    tau = t;
    u = trial;
    J = Jt;
    out.log.push_back(J);
    ++out.iterations;
    if (subspace_check) out.subspace_defect = std::max(out.subspace_defect, subspace_check(u));
  }
  out.c = u;
  out.objective = J;
  return out;
}

/// Multiplier of the auxiliary equation as a complex number (imaginary part is
/// a diagnostic): lambda for NLS EnergyMin, m^2 - lambda^2 for NLKG EnergyMin,
/// K for FMin, the coefficient of |u|^{q-1}u for two nonlinearities.
template <class Basis>
cplx recover_multiplier(const Basis& b, const ProblemSpec& pr, const KillingSpec& X, const CVec& c,
                        const std::optional<RVec>& mask = std::nullopt) {
  auto pj = [&](CVec v) {
    if (mask) v = (v.array() * mask->cast<cplx>().array()).matrix();
    b.project(v);
    return v;
  };
  const double m2 = mass(b, c);
  if (!(m2 > 0)) throw ConsistencyError("recover_multiplier: zero field");
  if (pr.equation == Equation::TwoNonlinearity) {
    const CVec lhs = pj(CVec(b.neg_laplacian(c) + pr.lambda * c - nonlinearity(b, c, pr.p)));
    const cplx denom = b.inner(pj(nonlinearity(b, c, pr.q)), c);
    return b.inner(lhs, c) / denom;
  }
  const bool nls = pr.equation == Equation::NLS;
  const CVec lin = nls ? apply_nls_operator(b, c, X) : apply_nlkg_operator(b, c, X, pr.lambda);
  const CVec N = pj(nonlinearity(b, c, pr.p));
  if (pr.scheme == Scheme::EnergyMin) return -b.inner(CVec(lin - pr.K * N), c) / m2;
  const double s = nls ? pr.lambda : pr.m_mass * pr.m_mass - pr.lambda * pr.lambda;
  return b.inner(CVec(lin + s * c), c) / b.inner(N, c);
}

/// Relative L^2 defect of the auxiliary equation, ||L - R|| / max(||L||, ||R||),
/// with L the linear side and R the nonlinear side at the given multiplier.
template <class Basis>
double verify_pde(const Basis& b, const ProblemSpec& pr, const KillingSpec& X, const CVec& c, double multiplier,
                  const std::optional<RVec>& mask = std::nullopt) {
  auto pj = [&](CVec v) {
    if (mask) v = (v.array() * mask->cast<cplx>().array()).matrix();
    b.project(v);
    return v;
  };
  auto nrm = [&](const CVec& v) { return std::sqrt(std::max(0.0, mass(b, v))); };
  CVec L, R;
  if (pr.equation == Equation::TwoNonlinearity) {
    L = pj(CVec(b.neg_laplacian(c) + pr.lambda * c));
    R = pj(CVec(nonlinearity(b, c, pr.p) + multiplier * nonlinearity(b, c, pr.q)));
  } else {
    const bool nls = pr.equation == Equation::NLS;
    const CVec lin = nls ? apply_nls_operator(b, c, X) : apply_nlkg_operator(b, c, X, pr.lambda);
    double s = 0, K = pr.K;
    if (pr.scheme == Scheme::EnergyMin) {
      s = multiplier;
    } else {
      s = nls ? pr.lambda : pr.m_mass * pr.m_mass - pr.lambda * pr.lambda;
      K = multiplier;
    }
    L = pj(CVec(lin + s * c));
    R = pj(CVec(K * nonlinearity(b, c, pr.p)));
  }
  const double scale = std::max(nrm(L), nrm(R));
  if (scale == 0) return 0.0;
  return nrm(CVec(L - R)) / scale;
}

/// Constant if ||u - mean u|| < 1e-8 ||u||; Travelling if ||Xu|| > 1e-6 ||u||_{H^1}.
template <class Basis>
Classification classify(const Basis& b, const CVec& c, const KillingSpec& X) {
  const CVec one = b.constant_field(1.0);
  const double vol = mass(b, one);
  const cplx mean = b.inner(c, one) / vol;
  const double nu = std::sqrt(mass(b, c));
  if (std::sqrt(mass(b, CVec(c - mean * one))) < 1e-8 * nu) return Classification::Constant;
  const double xn = std::sqrt(mass(b, b.killing(c, X)));
  const double h1 = std::sqrt(mass(b, c) + grad_sq(b, c));
  return xn > 1e-6 * h1 ? Classification::Travelling : Classification::StandingOnly;
}

/// Refuses parameter sets outside the regime where the minimisation is well posed.
template <class Basis>
void check_preconditions(const Basis& b, const ProblemSpec& pr, const KillingSpec& X) {
  const double speed = X.speed_bound();
  const bool supersonic = regime_of(speed) == SpeedRegime::Supersonic;
  if (pr.equation == Equation::TwoNonlinearity) return;
  if (supersonic && !pr.subspace_mu)
    throw ParameterRegimeError(
        "supersonic Killing field: -Delta + X^2 is indefinite, so straightforward minimisation is not possible; "
        "restrict to a subspace V_mu (subspace_mu)");
  if (pr.subspace_mu) return;
  if constexpr (Basis::diagonal) {
    const SpectrumReport rep = coercivity_check(b, X, pr.lambda, pr.m_mass, {}, 0, false);
    if (pr.equation == Equation::NLS && pr.scheme == Scheme::FMin && !rep.nls_coercive)
      throw ParameterRegimeError("coercivity fails: need lambda > -alpha, alpha = " + std::to_string(rep.alpha));
    if (pr.equation == Equation::NLKG && !rep.nlkg_coercive)
      throw ParameterRegimeError("coercivity fails: need m^2 > lambda^2 - beta(lambda), beta = " +
                                 std::to_string(rep.beta_lambda));
  } else {
    if (regime_of(speed) != SpeedRegime::Elliptic)
      throw ParameterRegimeError("radial minimisation needs a cross-section field with speed below 1");
    if (pr.equation == Equation::NLKG && !(pr.m_mass * pr.m_mass > pr.lambda * pr.lambda))
      throw ParameterRegimeError("coercivity fails on the radial domain: need m^2 > lambda^2");
    if (pr.equation == Equation::NLS && pr.scheme == Scheme::FMin && !(pr.lambda > 0))
      throw ParameterRegimeError("coercivity fails on the radial domain: need lambda > 0");
  }
}

/// Multistart constrained minimisation.
template <class B>
MinimizeResult<std::remove_const_t<B>> minimize(std::shared_ptr<B> basis_in, const ProblemSpec& pr, const KillingSpec& X,
                                                const std::vector<CVec>& inits = {}) {
  using Basis = std::remove_const_t<B>;
  const std::shared_ptr<const Basis> basis = basis_in;
  const Basis& b = *basis;
  pr.validate(b.dimension());
  if (pr.real_only && pr.subspace_mu && std::abs(*pr.subspace_mu) > 0)
    throw ConfigurationError("real_only is incompatible with a nonzero subspace_mu");
  if (pr.equation == Equation::TwoNonlinearity && pr.subspace_mu)
    throw ConfigurationError("the two-nonlinearity problem has no Killing term to restrict by");
  check_preconditions(b, pr, X);

  IterateProjector<Basis> proj;
  proj.b = &b;
  proj.real_only = pr.real_only;
  std::function<double(const CVec&)> sub_check;
  if (pr.subspace_mu) {
    if constexpr (Basis::diagonal) {
      proj.mask = subspace_mask(b, X, *pr.subspace_mu);
      const double mu = *pr.subspace_mu;
      sub_check = [&b, X, mu](const CVec& c) {
        const double nu = std::sqrt(mass(b, c));
        return std::sqrt(mass(b, CVec(b.killing(c, X) - cplx(0, mu) * c))) / std::max(nu, 1e-300);
      };
    } else {
      throw ConfigurationError("V_mu restriction is only available on tori and spheres");
    }
  }
  const ProblemFunctions f = make_functions(b, pr, X);

  struct Start {
    std::string label;
    CVec c;
  };
  std::vector<Start> starts;
  const bool constant_ok =
      Basis::diagonal && pr.include_constant && (!pr.subspace_mu || std::abs(*pr.subspace_mu) < 1e-12);
  if (constant_ok) starts.push_back({"constant", b.constant_field(1.0)});
  if constexpr (requires { b.origin_bump(); })
    if (pr.include_constant) starts.push_back({"origin", b.origin_bump()});
  for (int i = 0; i < pr.random_starts; ++i) {
    std::mt19937_64 rng(detail::mix_seed(pr.seed, static_cast<std::uint64_t>(i)));
    CVec c = b.random_field(rng, pr.random_cutoff);
    if (pr.subspace_mu) {
      // Random data inside V_mu: seed every mode of the subspace.
      std::normal_distribution<double> nd(0.0, 1.0);
      for (Eigen::Index k = 0; k < c.size(); ++k)
        if ((*proj.mask)[k] > 0) c[k] += 0.1 * cplx(nd(rng), nd(rng));
    }
    starts.push_back({"random-" + std::to_string(i), c});
  }
  for (std::size_t i = 0; i < inits.size(); ++i) {
    if (inits[i].size() != b.size()) throw BasisMismatch("initial field does not match the basis");
    starts.push_back({"user-" + std::to_string(i), inits[i]});
  }
  if (starts.empty()) throw ConfigurationError("minimize: no starting fields");

  std::vector<std::optional<StartOutcome>> outcomes(starts.size());
  std::vector<std::string> failures(starts.size());
  auto run = [&](std::size_t i) {
    try {
      CVec c0 = proj.applied(starts[i].c);
      if (!(f.constraint(c0) > 0)) throw ConsistencyError("start vanishes after projection");
      outcomes[i] = descend(b, f, pr, proj, c0, sub_check);
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  };
  const int threads = std::max(1, std::min<int>(pr.threads, static_cast<int>(starts.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < starts.size(); ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < starts.size(); i += threads) run(i);
      });
    for (auto& th : pool) th.join();
  }

  MinimizeResult<Basis> res;
  res.seed = pr.seed;
  res.subspace_mu = pr.subspace_mu;
  std::vector<double> xnorms(starts.size(), 0.0);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    StartSummary s;
    s.label = starts[i].label;
    if (outcomes[i]) {
      s.objective = outcomes[i]->objective;
      s.iterations = outcomes[i]->iterations;
      s.converged = outcomes[i]->converged;
      xnorms[i] = std::sqrt(mass(b, b.killing(outcomes[i]->c, X)));
      s.x_norm = xnorms[i];
    } else {
      s.objective = std::numeric_limits<double>::quiet_NaN();
    }
    res.starts.push_back(s);
  }
  auto better = [&](std::size_t i, std::size_t j) {
    const double a = outcomes[i]->objective, c = outcomes[j]->objective;
    if (std::abs(a - c) <= 1e-12 * std::max(1.0, std::abs(c))) return xnorms[i] > xnorms[j];
    return a < c;
  };
  std::optional<std::size_t> best, best_any;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (!outcomes[i]) continue;
    if (!best_any || better(i, *best_any)) best_any = i;
    if (outcomes[i]->converged && (!best || better(i, *best))) best = i;
  }
  if (!best_any) throw ConsistencyError("minimize: every start failed: " + failures.front());
  const std::size_t pick = best ? *best : *best_any;
  const StartOutcome& o = *outcomes[pick];
  res.u = Field<Basis>(basis, o.c);
  res.objective = o.objective;
  res.iterations = o.iterations;
  res.converged = o.converged;
  res.descent_log = o.log;
  res.start_label = starts[pick].label;
  res.subspace_defect = o.subspace_defect;
  const cplx mult = recover_multiplier(b, pr, X, o.c, proj.mask);
  res.multiplier = mult.real();
  res.multiplier_imag = mult.imag();
  res.residual = verify_pde(b, pr, X, o.c, res.multiplier, proj.mask);
  res.x_norm = std::sqrt(mass(b, b.killing(o.c, X)));
  res.constraint_value = f.constraint(o.c);
  res.classification = classify(b, o.c, X);
  if (!best) throw NonConverged<Basis>("minimize: every start hit the iteration cap", res);
  return res;
}

/// minimize restricted to V_mu = {u : X u = i mu u}.
template <class B>
MinimizeResult<std::remove_const_t<B>> minimize_in_Vmu(std::shared_ptr<B> basis, ProblemSpec pr, const KillingSpec& X, double mu,
                                      const std::vector<CVec>& inits = {}) {
  pr.subspace_mu = mu;
  return minimize(std::move(basis), pr, X, inits);
}

/// E#_mu(u) = (1/2)||grad u||^2 - K/(p+1) int |u|^{p+1}.
template <class Basis>
double reduced_energy(const Basis& b, const CVec& c, double p, double K = 1.0) {
  return 0.5 * grad_sq(b, c) - K / (p + 1) * lp_integral(b, c, p);
}

/// For u in V_mu: (energy_nlkg, E#_mu - ((mu^2 + 2 lambda mu)/2)||u||^2,
/// E#_mu - ((mu + lambda)^2/2)||u||^2). The first two agree; the third is the
/// form with an extra lambda^2 ||u||^2 / 2.
template <class Basis>
std::array<double, 3> vmu_identity(const Basis& b, const CVec& c, const KillingSpec& X, double lambda, double mu, double p,
                                   double K = 1.0) {
  const double E = energy_nlkg(b, c, X, lambda, p, K);
  const double Es = reduced_energy(b, c, p, K);
  const double m2 = mass(b, c);
  return {E, Es - 0.5 * (mu * mu + 2 * lambda * mu) * m2, Es - 0.5 * (mu + lambda) * (mu + lambda) * m2};
}

}  // namespace travwave
