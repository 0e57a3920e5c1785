#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "travwave/common.hpp"

namespace travwave {

/// Symbolic Killing field X together with its speed bound b, sup <X,X> <= b^2.
///
/// Speeds are measured in the metric of the manifold the field is used on:
/// when a manifold carries a metric scale r, the operator multipliers are
/// divided by sqrt(r) so the advertised bound stays the pointwise length.
struct KillingSpec {
  enum class Kind { TorusConstant, SphereRotation, RadialInduced };

  Kind kind = Kind::TorusConstant;
  std::vector<double> velocity;  // torus: constant vector c
  int plane_i = 0;               // sphere: rotation in the (x_i, x_j) plane, 0-based
  int plane_j = 1;
  double speed = 0.0;  // sphere: factor b of b * X_ij; radial: bound of the cross-section field
  std::string cross_section;  // radial: free-form description of the field on N

  static KillingSpec torus(std::vector<double> c) {
    KillingSpec k;
    k.kind = Kind::TorusConstant;
    k.velocity = std::move(c);
    return k;
  }
  static KillingSpec sphere(double b, int i = 0, int j = 1) {
    if (i == j) throw ConfigurationError("sphere rotation needs two distinct axes");
    KillingSpec k;
    k.kind = Kind::SphereRotation;
    k.speed = b;
    k.plane_i = std::min(i, j);
    k.plane_j = std::max(i, j);
    // X_ij and X_ji differ by a sign.
    if (i > j) k.speed = -b;
    return k;
  }
  static KillingSpec radial(double cross_section_bound, std::string description = "rotation of N") {
    KillingSpec k;
    k.kind = Kind::RadialInduced;
    k.speed = cross_section_bound;
    k.cross_section = std::move(description);
    return k;
  }

  /// b in sup <X, X> <= b^2.
  [[nodiscard]] double speed_bound() const {
    switch (kind) {
      case Kind::TorusConstant: {
        double s = 0;
        for (double c : velocity) s += c * c;
        return std::sqrt(s);
      }
      case Kind::SphereRotation:
      case Kind::RadialInduced:
        return std::abs(speed);
    }
    return 0.0;
  }

  /// X + eps * other, for fields of the same kind on the same manifold.
  [[nodiscard]] KillingSpec perturbed(const KillingSpec& other, double eps) const {
    if (other.kind != kind) throw InvalidPerturbation("perturbation changes the Killing field kind");
    KillingSpec out = *this;
    switch (kind) {
      case Kind::TorusConstant:
        if (other.velocity.size() != velocity.size())
          throw InvalidPerturbation("perturbation velocity has the wrong dimension");
        for (std::size_t d = 0; d < velocity.size(); ++d) out.velocity[d] += eps * other.velocity[d];
        break;
      case Kind::SphereRotation:
        if (other.plane_i != plane_i || other.plane_j != plane_j)
          throw InvalidPerturbation("sphere perturbation must rotate in the same plane");
        out.speed += eps * other.speed;
        break;
      case Kind::RadialInduced:
        out.speed += eps * other.speed;
        break;
    }
    return out;
  }
};

enum class SpeedRegime { Elliptic, Sonic, Supersonic };

inline SpeedRegime regime_of(double b) {
  constexpr double tol = 1e-12;
  if (b < 1.0 - tol) return SpeedRegime::Elliptic;
  if (b > 1.0 + tol) return SpeedRegime::Supersonic;
  return SpeedRegime::Sonic;
}

inline const char* to_string(SpeedRegime r) {
  switch (r) {
    case SpeedRegime::Elliptic: return "elliptic";
    case SpeedRegime::Sonic: return "sonic";
    case SpeedRegime::Supersonic: return "supersonic";
  }
  return "?";
}

}  // namespace travwave
