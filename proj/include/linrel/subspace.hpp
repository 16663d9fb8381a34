#pragma once

#include <cstdint>

#include "linrel/types.hpp"

namespace linrel {

class Rng;

/// A subspace of complex coordinate space C^n, stored as an orthonormal
/// basis. The zero subspace has an empty basis. Immutable.
class Subspace {
 public:
  /// Orthonormal basis of the column span of `vectors`. Singular values at
  /// or below tol * (largest) are discarded; a matrix whose largest singular
  /// value is below the absolute floor spans the zero subspace.
  [[nodiscard]] static Subspace span(const Matrix& vectors, double tol = tol::kRankRelative);
  /// Wraps a basis that is already orthonormal (checked).
  [[nodiscard]] static Subspace from_orthonormal(Matrix basis);
  [[nodiscard]] static Subspace zero(Index ambient);
  [[nodiscard]] static Subspace full(Index ambient);
  /// Span of the given coordinate axes.
  [[nodiscard]] static Subspace axes(Index ambient, std::initializer_list<Index> indices);

  [[nodiscard]] Index ambient() const noexcept { return basis_.rows(); }
  [[nodiscard]] Index dim() const noexcept { return basis_.cols(); }
  [[nodiscard]] bool is_zero() const noexcept { return basis_.cols() == 0; }
  [[nodiscard]] bool is_full() const noexcept { return basis_.cols() == basis_.rows(); }
  [[nodiscard]] const Matrix& basis() const noexcept { return basis_; }
  [[nodiscard]] double tol() const noexcept { return tol_; }
  /// Smallest kept singular value relative to the largest (1 when nothing
  /// was decided numerically).
  [[nodiscard]] double rank_margin() const noexcept { return margin_; }

  [[nodiscard]] Matrix projector() const;
  [[nodiscard]] Vector project(const Vector& v) const;

 private:
  Subspace(Matrix basis, double tol, double margin) : basis_(std::move(basis)), tol_(tol), margin_(margin) {}

  Matrix basis_;
  double tol_ = 0.0;
  double margin_ = 1.0;
};

[[nodiscard]] Subspace sum(const Subspace& s1, const Subspace& s2);
[[nodiscard]] Subspace intersect(const Subspace& s1, const Subspace& s2);
[[nodiscard]] Subspace orth_complement(const Subspace& s);

/// {f : sum_i f_i s_i = 0 for all s in S}: the bilinear (unconjugated)
/// pairing with the dual identified coordinate-wise.
[[nodiscard]] Subspace annihilator(const Subspace& s);
/// Same computation, named for subspaces of the dual space.
[[nodiscard]] inline Subspace pre_annihilator(const Subspace& s) { return annihilator(s); }

[[nodiscard]] double distance(const Vector& v, const Subspace& s);

/// sup over unit u in M of dist(u, N); 0 when M is the zero subspace.
[[nodiscard]] double gap(const Subspace& m, const Subspace& n);

[[nodiscard]] bool contains(const Subspace& outer, const Subspace& inner, double tol = tol::kEquality);
/// Mutual containment.
[[nodiscard]] bool same(const Subspace& s1, const Subspace& s2, double tol = tol::kEquality);

[[nodiscard]] Subspace apply_map(const Matrix& f, const Subspace& s);

/// Orthonormalized complex Gaussian frame; deterministic in seed.
[[nodiscard]] Subspace random_subspace(Index ambient, Index dim, std::uint64_t seed);
[[nodiscard]] Subspace random_subspace(Index ambient, Index dim, Rng& rng);

/// Rank of a matrix under the module's rule (relative tol, absolute floor).
[[nodiscard]] Index numerical_rank(const Eigen::VectorXd& singular_values, double tol = tol::kRankRelative);

/// Orthonormal basis of the null space of m (m.cols() rows).
[[nodiscard]] Matrix null_space(const Matrix& m, double tol = tol::kRankRelative);

}  // namespace linrel
