#include "linrel/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "linrel/conditioning.hpp"
#include "linrel/errors.hpp"
#include "linrel/random.hpp"

namespace linrel {

namespace {

void require_same_ambient(const Subspace& a, const Subspace& b, const char* op) {
  if (a.ambient() != b.ambient()) {
    throw DimensionError(std::string(op) + ": ambient dimensions differ (" + std::to_string(a.ambient()) + " vs " +
                         std::to_string(b.ambient()) + ")");
  }
}

bool all_finite(const Matrix& m) {
  return m.array().real().allFinite() && m.array().imag().allFinite();
}

}  // namespace

Index numerical_rank(const Eigen::VectorXd& singular_values, double tol) {
  if (singular_values.size() == 0) {
    return 0;
  }
  const double largest = singular_values(0);
  if (largest <= tol::kRankAbsolute) {
    return 0;
  }
  Index rank = 0;
  for (Index i = 0; i < singular_values.size(); ++i) {
    const double rel = singular_values(i) / largest;
    note_rank_decision(rel, tol);
    if (rel > tol) {
      ++rank;
    }
  }
  return rank;
}

Subspace Subspace::span(const Matrix& vectors, double tol) {
  if (vectors.rows() == 0) {
    throw DimensionError("span: ambient dimension must be positive");
  }
  if (tol < 0.0) {
    throw DimensionError("span: tolerance must be non-negative");
  }
  if (!all_finite(vectors)) {
    throw DimensionError("span: non-finite entries");
  }
  if (vectors.cols() == 0) {
    return Subspace(Matrix(vectors.rows(), 0), tol, 1.0);
  }
  Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Index rank = numerical_rank(sv, tol);
  const double margin = rank > 0 ? sv(rank - 1) / sv(0) : 1.0;
  return Subspace(svd.matrixU().leftCols(rank), tol, margin);
}

Subspace Subspace::from_orthonormal(Matrix basis) {
  if (basis.rows() == 0) {
    throw DimensionError("from_orthonormal: ambient dimension must be positive");
  }
  const Index k = basis.cols();
  if (k > 0) {
    const double err = (basis.adjoint() * basis - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
    if (!(err <= 1e3 * tol::kOrthonormal)) {
      // Not orthonormal enough to trust as-is; fall back to re-orthonormalizing.
      return span(basis);
    }
  }
  return Subspace(std::move(basis), tol::kRankRelative, 1.0);
}

Subspace Subspace::zero(Index ambient) {
  if (ambient <= 0) {
    throw DimensionError("zero: ambient dimension must be positive");
  }
  return Subspace(Matrix(ambient, 0), tol::kRankRelative, 1.0);
}

Subspace Subspace::full(Index ambient) {
  if (ambient <= 0) {
    throw DimensionError("full: ambient dimension must be positive");
  }
  return Subspace(Matrix::Identity(ambient, ambient), tol::kRankRelative, 1.0);
}

Subspace Subspace::axes(Index ambient, std::initializer_list<Index> indices) {
  if (ambient <= 0) {
    throw DimensionError("axes: ambient dimension must be positive");
  }
  Matrix b = Matrix::Zero(ambient, static_cast<Index>(indices.size()));
  Index j = 0;
  for (Index i : indices) {
    if (i < 0 || i >= ambient) {
      throw DimensionError("axes: index out of range");
    }
    b(i, j++) = 1.0;
  }
  return span(b);
}

Matrix Subspace::projector() const { return basis_ * basis_.adjoint(); }

Vector Subspace::project(const Vector& v) const {
  if (v.size() != ambient()) {
    throw DimensionError("project: vector length differs from ambient dimension");
  }
  return basis_ * (basis_.adjoint() * v);
}

Subspace sum(const Subspace& s1, const Subspace& s2) {
  require_same_ambient(s1, s2, "sum");
  if (s1.is_zero()) {
    return s2;
  }
  if (s2.is_zero()) {
    return s1;
  }
  Matrix stacked(s1.ambient(), s1.dim() + s2.dim());
  stacked << s1.basis(), s2.basis();
  return Subspace::span(stacked);
}

Subspace orth_complement(const Subspace& s) {
  const Index n = s.ambient();
  const Index k = s.dim();
  if (k == 0) {
    return Subspace::full(n);
  }
  if (k == n) {
    return Subspace::zero(n);
  }
  Eigen::HouseholderQR<Matrix> qr(s.basis());
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return Subspace::from_orthonormal(q.rightCols(n - k));
}

Subspace intersect(const Subspace& s1, const Subspace& s2) {
  require_same_ambient(s1, s2, "intersect");
  if (s1.is_zero() || s2.is_full()) {
    return s1;
  }
  if (s2.is_zero() || s1.is_full()) {
    return s2;
  }
  return orth_complement(sum(orth_complement(s1), orth_complement(s2)));
}

Subspace annihilator(const Subspace& s) {
  return Subspace::from_orthonormal(orth_complement(s).basis().conjugate());
}

double distance(const Vector& v, const Subspace& s) {
  if (v.size() != s.ambient()) {
    throw DimensionError("distance: vector length differs from ambient dimension");
  }
  if (s.is_zero()) {
    return v.norm();
  }
  return (v - s.project(v)).norm();
}

double gap(const Subspace& m, const Subspace& n) {
  require_same_ambient(m, n, "gap");
  if (m.is_zero()) {
    return 0.0;
  }
  if (n.is_zero()) {
    return 1.0;
  }
  const Matrix residual = m.basis() - n.basis() * (n.basis().adjoint() * m.basis());
  Eigen::JacobiSVD<Matrix> svd(residual);
  return std::clamp(svd.singularValues()(0), 0.0, 1.0);
}

bool contains(const Subspace& outer, const Subspace& inner, double tol) {
  require_same_ambient(outer, inner, "contains");
  if (inner.is_zero()) {
    return true;
  }
  if (inner.dim() > outer.dim()) {
    return false;
  }
  const double g = gap(inner, outer);
  note_containment(g);
  return g <= tol;
}

bool same(const Subspace& s1, const Subspace& s2, double tol) {
  return s1.dim() == s2.dim() && contains(s1, s2, tol) && contains(s2, s1, tol);
}

Subspace apply_map(const Matrix& f, const Subspace& s) {
  if (f.cols() != s.ambient()) {
    throw DimensionError("apply_map: map has " + std::to_string(f.cols()) + " columns, subspace ambient is " +
                         std::to_string(s.ambient()));
  }
  return Subspace::span(f * s.basis());
}

Subspace random_subspace(Index ambient, Index dim, Rng& rng) {
  if (ambient <= 0) {
    throw DimensionError("random_subspace: ambient dimension must be positive");
  }
  if (dim < 0 || dim > ambient) {
    throw DimensionError("random_subspace: dim " + std::to_string(dim) + " outside [0, " + std::to_string(ambient) +
                         "]");
  }
  return Subspace::from_orthonormal(rng.orthonormal_frame(ambient, dim));
}

Subspace random_subspace(Index ambient, Index dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_subspace(ambient, dim, rng);
}

Matrix null_space(const Matrix& m, double tol) {
  const Index n = m.cols();
  if (n == 0) {
    return Matrix(0, 0);
  }
  if (m.rows() == 0) {
    return Matrix::Identity(n, n);
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Index rank = numerical_rank(svd.singularValues(), tol);
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace linrel
