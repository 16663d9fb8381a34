#pragma once

#include <complex>
#include <limits>

#include <Eigen/Dense>

namespace linrel {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

namespace tol {
/// Singular values at or below rank_relative * (largest singular value) are
/// treated as zero.
inline constexpr double kRankRelative = 1e-9;
/// Below this, a matrix is treated as identically zero.
inline constexpr double kRankAbsolute = 1e-12;
/// Subspace containment and equality (gap-based).
inline constexpr double kEquality = 1e-8;
/// Slack on numerical inequalities.
inline constexpr double kSlack = 1e-9;
/// Orthonormality accepted for caller-supplied bases.
inline constexpr double kOrthonormal = 1e-12;
/// Singular values / gaps inside this band are reported as ambiguous.
inline constexpr double kAmbiguousLow = 1e-10;
inline constexpr double kAmbiguousHigh = 1e-6;
}  // namespace tol

}  // namespace linrel
