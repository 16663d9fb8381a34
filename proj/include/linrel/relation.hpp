#pragma once

#include <memory>

#include "linrel/subspace.hpp"
#include "linrel/types.hpp"

namespace linrel {

namespace detail {
struct RelationParts;
}

/// A linear relation (multivalued linear operator) from X = C^x_dim to
/// Y = C^y_dim, represented by its graph in X (+) Y with coordinates stacked
/// x-then-y. Every relation here is closed. Values outside the domain are
/// empty sets and have no representation.
///
/// Domain, range, kernel and multivalued part are derived lazily and shared
/// between copies; the object is safe to share across threads.
class LinearRelation {
 public:
  LinearRelation(Subspace graph, Index x_dim, Index y_dim);

  /// Graph {(x, A x)} of an everywhere defined single-valued operator.
  [[nodiscard]] static LinearRelation from_matrix(const Matrix& a);
  [[nodiscard]] static LinearRelation from_graph(Subspace graph, Index x_dim, Index y_dim);

  [[nodiscard]] Index x_dim() const noexcept { return x_dim_; }
  [[nodiscard]] Index y_dim() const noexcept { return y_dim_; }
  [[nodiscard]] const Subspace& graph() const noexcept { return graph_; }

  [[nodiscard]] const Subspace& domain() const;
  [[nodiscard]] const Subspace& range() const;
  [[nodiscard]] const Subspace& kernel() const;
  /// T(0).
  [[nodiscard]] const Subspace& multivalued_part() const;

  /// One element y of T(x) for each column x of xs (minimum-norm graph
  /// coefficients). Columns must lie in the domain; see metrics for the
  /// checked form.
  [[nodiscard]] Matrix particular_values(const Matrix& xs) const;

 private:
  Index x_dim_;
  Index y_dim_;
  Subspace graph_;
  std::shared_ptr<detail::RelationParts> parts_;
};

/// Block swap (x, y) -> (y, x).
[[nodiscard]] LinearRelation inverse(const LinearRelation& t);
/// x -> lambda T(x); lambda = 0 maps D(T) to {0}.
[[nodiscard]] LinearRelation scalar_mul(Scalar lambda, const LinearRelation& t);
/// x -> S(x) + T(x) on D(S) n D(T).
[[nodiscard]] LinearRelation add(const LinearRelation& s, const LinearRelation& t);
/// A - lambda B.
[[nodiscard]] LinearRelation pencil(const LinearRelation& a, const LinearRelation& b, Scalar lambda);
/// T(M) = union of T(m) over m in M n D(T).
[[nodiscard]] Subspace image(const LinearRelation& t, const Subspace& m);
/// T^{-1}(N) = {x : N n T(x) nonempty}.
[[nodiscard]] Subspace preimage(const LinearRelation& t, const Subspace& n);
/// Relation from Y to X whose graph (stored y-then-x) is the bilinear
/// annihilator of {(y, -x) : (x, y) in G(T)}.
[[nodiscard]] LinearRelation adjoint(const LinearRelation& t);
/// Mutual graph containment.
[[nodiscard]] bool equals(const LinearRelation& s, const LinearRelation& t, double tol = tol::kEquality);

/// The subspace M (+) Y of X (+) Y and its mirror X (+) N.
[[nodiscard]] Subspace lift_x(const Subspace& m, Index y_dim);
[[nodiscard]] Subspace lift_y(Index x_dim, const Subspace& n);

}  // namespace linrel
