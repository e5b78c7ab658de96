#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>

namespace infsup {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base class of everything this library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GramNotSpd : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct NonPositiveCoefficient : Error {
  using Error::Error;
};
struct DegenerateConstants : Error {
  using Error::Error;
};
struct ForwardMinorationFails : Error {
  using Error::Error;
};
struct SingularSystem : Error {
  using Error::Error;
};
struct UncertifiedCoarseSystem : Error {
  using Error::Error;
};
struct SingularFineSystem : Error {
  using Error::Error;
};
struct ConformityViolation : Error {
  using Error::Error;
};
struct InfeasibleDims : Error {
  using Error::Error;
};
struct UnsupportedProfile : Error {
  using Error::Error;
};
/// File or format problem (Matrix Market, manifest).
struct IoError : Error {
  using Error::Error;
};

/// Numerical-rank and verdict tolerances. rank_tol is relative to the
/// largest singular value of whatever operator is being ranked; check_tol
/// is the slack admitted when a computed quantity is compared against a
/// certified bound or a consistency identity.
struct Tolerances {
  double rank_tol = 1e-10;
  double check_tol = 1e-10;
};

constexpr double kDefaultRankTol = 1e-10;
constexpr double kDefaultCheckTol = 1e-10;

/// An extremal quantity whose feasible set may be empty. `vacuous` marks
/// that case; `value` then carries the documented convention of the
/// operation (0 for subspace angles, +infinity for minorations over an
/// empty domain). Reports must render the flag, never the sentinel number.
struct ExtremalValue {
  double value = 0.0;
  bool vacuous = false;
};

inline double infinity() { return std::numeric_limits<double>::infinity(); }

}  // namespace infsup
