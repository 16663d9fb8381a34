#include "linrel/relation.hpp"

#include <mutex>
#include <optional>
#include <string>

#include "linrel/errors.hpp"

namespace linrel {

namespace detail {

struct RelationParts {
  std::once_flag domain_once, range_once, kernel_once, mv_once, solver_once;
  std::optional<Subspace> domain, range, kernel, mv;
  std::optional<Eigen::CompleteOrthogonalDecomposition<Matrix>> x_solver;
};

}  // namespace detail

namespace {

Matrix top_rows(const Subspace& s, Index rows) { return s.basis().topRows(rows); }
Matrix bottom_rows(const Subspace& s, Index rows) { return s.basis().bottomRows(rows); }

Subspace span_in(Index ambient, const Matrix& vectors) {
  if (vectors.cols() == 0) {
    return Subspace::zero(ambient);
  }
  return Subspace::span(vectors);
}

void require_same_shape(const LinearRelation& s, const LinearRelation& t, const char* op) {
  if (s.x_dim() != t.x_dim() || s.y_dim() != t.y_dim()) {
    throw DimensionError(std::string(op) + ": relations map between spaces of different dimensions");
  }
}

}  // namespace

LinearRelation::LinearRelation(Subspace graph, Index x_dim, Index y_dim)
    : x_dim_(x_dim), y_dim_(y_dim), graph_(std::move(graph)), parts_(std::make_shared<detail::RelationParts>()) {
  if (x_dim <= 0 || y_dim <= 0) {
    throw DimensionError("relation: x_dim and y_dim must be positive");
  }
  if (graph_.ambient() != x_dim + y_dim) {
    throw DimensionError("relation: graph ambient " + std::to_string(graph_.ambient()) + " != x_dim + y_dim = " +
                         std::to_string(x_dim + y_dim));
  }
}

LinearRelation LinearRelation::from_matrix(const Matrix& a) {
  const Index x = a.cols();
  const Index y = a.rows();
  Matrix g(x + y, x);
  g << Matrix::Identity(x, x), a;
  return LinearRelation(Subspace::span(g), x, y);
}

LinearRelation LinearRelation::from_graph(Subspace graph, Index x_dim, Index y_dim) {
  return LinearRelation(std::move(graph), x_dim, y_dim);
}

const Subspace& LinearRelation::domain() const {
  std::call_once(parts_->domain_once, [&] { parts_->domain = span_in(x_dim_, top_rows(graph_, x_dim_)); });
  return *parts_->domain;
}

const Subspace& LinearRelation::range() const {
  std::call_once(parts_->range_once, [&] { parts_->range = span_in(y_dim_, bottom_rows(graph_, y_dim_)); });
  return *parts_->range;
}

const Subspace& LinearRelation::kernel() const {
  // Graph vectors with vanishing y-part, projected to X.
  std::call_once(parts_->kernel_once, [&] {
    if (graph_.is_zero()) {
      parts_->kernel = Subspace::zero(x_dim_);
      return;
    }
    const Matrix coeffs = null_space(bottom_rows(graph_, y_dim_));
    parts_->kernel = span_in(x_dim_, top_rows(graph_, x_dim_) * coeffs);
  });
  return *parts_->kernel;
}

const Subspace& LinearRelation::multivalued_part() const {
  std::call_once(parts_->mv_once, [&] {
    if (graph_.is_zero()) {
      parts_->mv = Subspace::zero(y_dim_);
      return;
    }
    const Matrix coeffs = null_space(top_rows(graph_, x_dim_));
    parts_->mv = span_in(y_dim_, bottom_rows(graph_, y_dim_) * coeffs);
  });
  return *parts_->mv;
}

Matrix LinearRelation::particular_values(const Matrix& xs) const {
  if (xs.rows() != x_dim_) {
    throw DimensionError("particular_values: vectors must have x_dim rows");
  }
  if (graph_.is_zero()) {
    return Matrix::Zero(y_dim_, xs.cols());
  }
  std::call_once(parts_->solver_once, [&] {
    const Matrix top = top_rows(graph_, x_dim_);
    parts_->x_solver.emplace(top.rows(), top.cols());
    parts_->x_solver->setThreshold(tol::kRankRelative);
    parts_->x_solver->compute(top);
  });
  const Matrix coeffs = parts_->x_solver->solve(xs);
  return bottom_rows(graph_, y_dim_) * coeffs;
}

Subspace lift_x(const Subspace& m, Index y_dim) {
  const Index x = m.ambient();
  Matrix b = Matrix::Zero(x + y_dim, m.dim() + y_dim);
  b.topLeftCorner(x, m.dim()) = m.basis();
  b.bottomRightCorner(y_dim, y_dim) = Matrix::Identity(y_dim, y_dim);
  return Subspace::from_orthonormal(std::move(b));
}

Subspace lift_y(Index x_dim, const Subspace& n) {
  const Index y = n.ambient();
  Matrix b = Matrix::Zero(x_dim + y, x_dim + n.dim());
  b.topLeftCorner(x_dim, x_dim) = Matrix::Identity(x_dim, x_dim);
  b.bottomRightCorner(y, n.dim()) = n.basis();
  return Subspace::from_orthonormal(std::move(b));
}

LinearRelation inverse(const LinearRelation& t) {
  const Index x = t.x_dim();
  const Index y = t.y_dim();
  Matrix swapped(x + y, t.graph().dim());
  swapped << t.graph().basis().bottomRows(y), t.graph().basis().topRows(x);
  return LinearRelation(Subspace::from_orthonormal(std::move(swapped)), y, x);
}

LinearRelation scalar_mul(Scalar lambda, const LinearRelation& t) {
  const Index x = t.x_dim();
  const Index y = t.y_dim();
  const Subspace& dom = t.domain();
  if (lambda == Scalar(0.0)) {
    Matrix g = Matrix::Zero(x + y, dom.dim());
    g.topRows(x) = dom.basis();
    return LinearRelation(span_in(x + y, g), x, y);
  }
  // For lambda != 0, lambda T(0) = T(0); build from the domain and the
  // multivalued part so small |lambda| does not erode T(0) numerically.
  const Subspace& mv = t.multivalued_part();
  Matrix g = Matrix::Zero(x + y, dom.dim() + mv.dim());
  g.topLeftCorner(x, dom.dim()) = dom.basis();
  g.bottomLeftCorner(y, dom.dim()) = lambda * t.particular_values(dom.basis());
  g.bottomRightCorner(y, mv.dim()) = mv.basis();
  return LinearRelation(span_in(x + y, g), x, y);
}

LinearRelation add(const LinearRelation& s, const LinearRelation& t) {
  require_same_shape(s, t, "add");
  const Index x = s.x_dim();
  const Index y = s.y_dim();
  const Index n = x + 2 * y;
  const Matrix& gs = s.graph().basis();
  const Matrix& gt = t.graph().basis();
  // {(x, y, z) : (x, y) in G(S)} and {(x, y, z) : (x, z) in G(T)} inside X (+) Y (+) Y.
  Matrix l1 = Matrix::Zero(n, gs.cols() + y);
  l1.block(0, 0, x, gs.cols()) = gs.topRows(x);
  l1.block(x, 0, y, gs.cols()) = gs.bottomRows(y);
  l1.block(x + y, gs.cols(), y, y) = Matrix::Identity(y, y);
  Matrix l2 = Matrix::Zero(n, gt.cols() + y);
  l2.block(0, 0, x, gt.cols()) = gt.topRows(x);
  l2.block(x + y, 0, y, gt.cols()) = gt.bottomRows(y);
  l2.block(x, gt.cols(), y, y) = Matrix::Identity(y, y);
  const Subspace both = intersect(Subspace::from_orthonormal(std::move(l1)), Subspace::from_orthonormal(std::move(l2)));
  Matrix fold = Matrix::Zero(x + y, n);
  fold.topLeftCorner(x, x) = Matrix::Identity(x, x);
  fold.block(x, x, y, y) = Matrix::Identity(y, y);
  fold.block(x, x + y, y, y) = Matrix::Identity(y, y);
  if (both.is_zero()) {
    return LinearRelation(Subspace::zero(x + y), x, y);
  }
  return LinearRelation(apply_map(fold, both), x, y);
}

LinearRelation pencil(const LinearRelation& a, const LinearRelation& b, Scalar lambda) {
  return add(a, scalar_mul(-lambda, b));
}

Subspace image(const LinearRelation& t, const Subspace& m) {
  if (m.ambient() != t.x_dim()) {
    throw DimensionError("image: subspace ambient must equal x_dim");
  }
  const Subspace slice = intersect(t.graph(), lift_x(m, t.y_dim()));
  return span_in(t.y_dim(), slice.basis().bottomRows(t.y_dim()));
}

Subspace preimage(const LinearRelation& t, const Subspace& n) {
  if (n.ambient() != t.y_dim()) {
    throw DimensionError("preimage: subspace ambient must equal y_dim");
  }
  const Subspace slice = intersect(t.graph(), lift_y(t.x_dim(), n));
  return span_in(t.x_dim(), slice.basis().topRows(t.x_dim()));
}

LinearRelation adjoint(const LinearRelation& t) {
  const Index x = t.x_dim();
  const Index y = t.y_dim();
  Matrix w(y + x, t.graph().dim());
  w << t.graph().basis().bottomRows(y), -t.graph().basis().topRows(x);
  const Subspace flipped = Subspace::from_orthonormal(std::move(w));
  return LinearRelation(annihilator(flipped), y, x);
}

bool equals(const LinearRelation& s, const LinearRelation& t, double tol) {
  if (s.x_dim() != t.x_dim() || s.y_dim() != t.y_dim()) {
    return false;
  }
  return same(s.graph(), t.graph(), tol);
}

}  // namespace linrel
