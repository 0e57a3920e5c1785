#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "travwave/common.hpp"

namespace travwave {

enum class Equation { NLS, NLKG, TwoNonlinearity };
enum class Scheme { EnergyMin, FMin };
enum class ConstraintKind { Mass, LpPlusOne };

inline const char* to_string(Equation e) {
  switch (e) {
    case Equation::NLS: return "NLS";
    case Equation::NLKG: return "NLKG";
    case Equation::TwoNonlinearity: return "TwoNonlinearity";
  }
  return "?";
}
inline const char* to_string(Scheme s) { return s == Scheme::EnergyMin ? "EnergyMin" : "FMin"; }
inline const char* to_string(ConstraintKind c) { return c == ConstraintKind::Mass ? "Mass" : "LpPlusOne"; }

/// Everything the minimizer needs to know about one constrained problem.
///
/// EnergyMin fixes the mass ||u||^2 = beta and minimises the energy; FMin fixes
/// int |u|^{p+1} = A and minimises the quadratic form. For the two-nonlinearity
/// problem the constraint is int |u|^{q+1} = beta.
struct ProblemSpec {
  Equation equation = Equation::NLKG;
  double lambda = 0.0;
  double m_mass = 1.0;
  double p = 3.0;
  double q = 0.0;
  double K = 1.0;
  ConstraintKind constraint = ConstraintKind::Mass;
  double constraint_value = 1.0;
  Scheme scheme = Scheme::EnergyMin;
  std::optional<double> subspace_mu;

  double tol_objective = 1e-10;  // relative objective change
  double tol_gradient = 1e-8;    // relative tangent-gradient norm
  int max_iterations = 5000;
  int random_starts = 3;
  int random_cutoff = 4;
  bool include_constant = true;  // constant start on compact manifolds, origin bump on radial domains
  bool real_only = false;
  std::uint64_t seed = default_seed;
  int threads = 1;

  /// Largest admissible p for the scheme on an n-dimensional manifold
  /// (infinity where the range is unbounded).
  [[nodiscard]] static double p_upper(Scheme s, int n) {
    if (s == Scheme::EnergyMin) return 1.0 + 4.0 / n;
    if (n <= 2) return std::numeric_limits<double>::infinity();
    return (n + 2.0) / (n - 2.0);
  }

  void validate(int n) const {
    if (!(p > 1)) throw ConfigurationError("p must exceed 1");
    if (!(K > 0)) throw ConfigurationError("K must be positive");
    if (!(constraint_value > 0)) throw ConfigurationError("constraint value must be positive");
    if (max_iterations < 1) throw ConfigurationError("max_iterations must be positive");
    if (random_starts < 0) throw ConfigurationError("random_starts must be non-negative");
    if (threads < 1) throw ConfigurationError("threads must be at least 1");
    if (equation == Equation::TwoNonlinearity) {
      if (!(q > p)) throw ConfigurationError("two-nonlinearity problem needs q > p");
      if (constraint != ConstraintKind::LpPlusOne)
        throw ConfigurationError("two-nonlinearity problem constrains int |u|^{q+1}");
      if (n >= 3 && !(q < (n + 2.0) / (n - 2.0))) throw ConfigurationError("q outside the subcritical range");
      return;
    }
    const bool matches = (scheme == Scheme::EnergyMin && constraint == ConstraintKind::Mass) ||
                         (scheme == Scheme::FMin && constraint == ConstraintKind::LpPlusOne);
    if (!matches) throw ConfigurationError("EnergyMin fixes the mass; FMin fixes int |u|^{p+1}");
    if (!(p < p_upper(scheme, n)))
      throw ConfigurationError(scheme == Scheme::EnergyMin ? "EnergyMin needs p in (1, 1 + 4/n)"
                                                           : "FMin needs p in (1, (n+2)/(n-2))");
  }
};

}  // namespace travwave
