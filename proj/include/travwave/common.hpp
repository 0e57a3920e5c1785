#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace travwave {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

inline constexpr double pi = std::numbers::pi;

/// Global default seed for randomized initialisation. Every output that
/// depends on randomness records the seed it used.
inline constexpr std::uint64_t default_seed = 20240611ULL;

// Error hierarchy. Each class corresponds to one failure mode callers can
// react to; the CLI maps them to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigurationError : Error {
  using Error::Error;
};
struct BasisMismatch : Error {
  using Error::Error;
};
struct ConsistencyError : Error {
  using Error::Error;
};
struct EigensolverError : Error {
  using Error::Error;
};
struct AssemblyError : Error {
  using Error::Error;
};
struct ParameterRegimeError : Error {
  using Error::Error;
};
struct SubspaceEmpty : Error {
  using Error::Error;
};
struct DomainOverflow : Error {
  using Error::Error;
};
struct InvalidPerturbation : Error {
  using Error::Error;
};
struct IncreaseDomain : Error {
  using Error::Error;
};
struct InsufficientData : Error {
  using Error::Error;
};
struct GeometryError : Error {
  using Error::Error;
};

}  // namespace travwave
