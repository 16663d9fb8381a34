#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "linrel/relation.hpp"

namespace linrel {

/// The single-valued operator induced by a relation T on its domain:
/// x -> P_{T(0)^perp} y(x), with Y/T(0) identified isometrically with
/// T(0)^perp and X/N(T) with D(T) n N(T)^perp.
class OperatorPart {
 public:
  explicit OperatorPart(const LinearRelation& t);

  [[nodiscard]] const LinearRelation& relation() const noexcept { return relation_; }
  /// Orthonormal basis of D(T) (x_dim x d).
  [[nodiscard]] const Matrix& dom_basis() const noexcept { return dom_basis_; }
  /// Orthonormal basis of D(T) n N(T)^perp.
  [[nodiscard]] const Matrix& quot_dom_basis() const noexcept { return quot_basis_; }
  /// y_dim x d: images of the dom_basis columns modulo T(0).
  [[nodiscard]] const Matrix& matrix_full() const noexcept { return full_; }
  /// y_dim x (d - alpha): images of the quot_dom_basis columns modulo T(0).
  [[nodiscard]] const Matrix& matrix_quot() const noexcept { return quot_; }
  /// Descending.
  [[nodiscard]] const Eigen::VectorXd& full_singular_values() const noexcept { return full_sv_; }
  [[nodiscard]] const Eigen::VectorXd& quot_singular_values() const noexcept { return quot_sv_; }

  /// ||Tx|| = dist(y, T(0)) for any y in T(x); x must lie in D(T).
  [[nodiscard]] double norm_at(const Vector& x) const;
  /// P_{T(0)^perp} y(x) for each column of xs (no domain check).
  [[nodiscard]] Matrix apply(const Matrix& xs) const;

 private:
  LinearRelation relation_;
  Matrix dom_basis_;
  Matrix quot_basis_;
  Matrix mv_projector_complement_;
  Matrix full_;
  Matrix quot_;
  Eigen::VectorXd full_sv_;
  Eigen::VectorXd quot_sv_;
};

[[nodiscard]] double relation_norm_at(const LinearRelation& t, const Vector& x);
/// sup of ||Tx|| over the unit ball of D(T); 0 when D(T) = {0}.
[[nodiscard]] double norm(const LinearRelation& t);
[[nodiscard]] double norm(const OperatorPart& op);
/// Minimum modulus; +infinity when D(T) is contained in N(T).
[[nodiscard]] double gamma(const LinearRelation& t);
[[nodiscard]] double gamma(const OperatorPart& op);
/// dim N(T).
[[nodiscard]] int alpha(const LinearRelation& t);
/// codim R(T) = y_dim - dim R(T).
[[nodiscard]] int beta(const LinearRelation& t);
/// Largest dimension of a subspace of D(T) on which ||Tx|| <= eps ||x||.
[[nodiscard]] int alpha_prime_eps(const LinearRelation& t, double eps);
[[nodiscard]] int alpha_prime_eps(const OperatorPart& op, double eps);
/// The eps -> 0+ value of alpha_prime_eps.
[[nodiscard]] int alpha_prime(const LinearRelation& t);
/// alpha_prime of the adjoint.
[[nodiscard]] int beta_prime(const LinearRelation& t);
/// ||x|| + ||Tx||.
[[nodiscard]] double graph_norm_at(const LinearRelation& t, const Vector& x);

enum class Provenance { exact, heuristic, supplied };

[[nodiscard]] std::string to_string(Provenance p);
[[nodiscard]] Provenance provenance_from_string(const std::string& s);

/// sigma, tau with ||Bx|| <= sigma ||x|| + tau ||Ax|| on D(A).
struct RelativeBound {
  double sigma = 0.0;
  double tau = 0.0;
  Provenance provenance = Provenance::supplied;
  std::optional<Vector> witness;
  /// For heuristic fits: the exact tau = 0 constant, always valid.
  std::optional<double> certified_sigma;
};

/// Throws HypothesisError unless D(A) is contained in D(B) and B(0) in A(0).
void check_standing_hypotheses(const LinearRelation& a, const LinearRelation& b);

/// Smallest sigma for the given tau. tau = 0 is exact (largest singular
/// value of B's operator part restricted to D(A)); tau > 0 is a multi-start
/// projected gradient ascent and only a lower estimate of the true minimum.
[[nodiscard]] RelativeBound fit_relative_bound(const LinearRelation& a, const LinearRelation& b, double tau,
                                               int starts = 32, std::uint64_t seed = 0);

struct BoundCheck {
  bool holds = true;
  double worst_residual = 0.0;
  Vector witness;
};

/// Samples `trials` random unit vectors of D(A) together with the right
/// singular vectors of both restricted operator parts.
[[nodiscard]] BoundCheck check_relative_bound(const LinearRelation& a, const LinearRelation& b,
                                              const RelativeBound& bound, int trials, std::uint64_t seed);

/// Multiplier k on sigma: pencil 1, alpha 2, full/range 3.
enum class RadiusKind { pencil = 1, alpha = 2, full = 3, range = 3 };

/// gamma / (k sigma + tau gamma), with gamma = inf read as the limit 1/tau
/// (or +inf when tau = 0) and a zero denominator giving +inf.
[[nodiscard]] double stability_radius(double gamma_val, const RelativeBound& bound, RadiusKind kind);

}  // namespace linrel
