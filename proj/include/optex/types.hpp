#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace optex {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorKind {
  AllDeficient,
  ZeroMatrix,
  NoConvergence,
  DeficientStart,
  NotOrthogonal,
  InvariantSubspace,
  SingularPencil,
  Stagnated,
  PreconditionViolated,
  ParseError,
  UnsupportedFormat,
  IoError,
  ConfigError,
  NotFinite,
  TooLarge,
  InconsistentState,
};

const char* to_string(ErrorKind kind) noexcept;

/// Exception carrying a machine-checkable reason.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline constexpr double kEps = 2.220446049250313e-16;

}  // namespace optex
