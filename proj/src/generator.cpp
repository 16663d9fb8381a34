#include <cmath>
#include <string>

#include "linrel/errors.hpp"
#include "linrel/random.hpp"
#include "linrel/stability.hpp"

namespace linrel {

namespace {

void require(bool ok, const std::string& constraint, const InstanceSpec& s) {
  if (!ok) {
    throw InfeasibleSpec("infeasible instance spec: " + constraint + " (x_dim=" + std::to_string(s.x_dim) +
                         ", y_dim=" + std::to_string(s.y_dim) + ", alpha=" + std::to_string(s.alpha) +
                         ", mv_dim=" + std::to_string(s.mv_dim) + ", dom_codim=" + std::to_string(s.dom_codim) +
                         (s.beta ? ", beta=" + std::to_string(*s.beta) : std::string()) + ")");
  }
}

Matrix hstack(const Matrix& l, const Matrix& r) {
  Matrix out(l.rows(), l.cols() + r.cols());
  out << l, r;
  return out;
}

}  // namespace

int implied_beta(const InstanceSpec& s) {
  require(s.x_dim >= 1, "x_dim >= 1", s);
  require(s.y_dim >= 1, "y_dim >= 1", s);
  require(s.alpha >= 0 && s.mv_dim >= 0 && s.dom_codim >= 0, "alpha, mv_dim, dom_codim >= 0", s);
  require(s.alpha + s.dom_codim <= s.x_dim, "alpha + dom_codim <= x_dim", s);
  require(s.mv_dim <= s.y_dim, "mv_dim <= y_dim", s);
  const int rank = s.x_dim - s.dom_codim - s.alpha;
  require(rank + s.mv_dim <= s.y_dim, "(x_dim - dom_codim - alpha) + mv_dim <= y_dim", s);
  const int beta = s.y_dim - rank - s.mv_dim;
  if (s.beta) {
    require(*s.beta >= 0, "beta >= 0", s);
    require(*s.beta + s.mv_dim <= s.y_dim, "beta + mv_dim <= y_dim", s);
    require(*s.beta == beta, "beta = y_dim - (x_dim - dom_codim - alpha) - mv_dim = " + std::to_string(beta), s);
  }
  return beta;
}

Measured measure(const LinearRelation& a, const LinearRelation& b) {
  Measured m;
  m.alpha = alpha(a);
  m.beta = beta(a);
  m.mv_dim = static_cast<int>(a.multivalued_part().dim());
  m.dom_codim = static_cast<int>(a.x_dim() - a.domain().dim());
  m.gamma = gamma(a);
  m.nu = nu(a, b);
  return m;
}

Instance generate(const InstanceSpec& spec) {
  const int beta = implied_beta(spec);
  const Index x = spec.x_dim;
  const Index y = spec.y_dim;
  const Index d = x - spec.dom_codim;
  const Index r = d - spec.alpha;
  Rng rng(spec.seed);

  const Matrix dom = rng.orthonormal_frame(x, d);
  const Matrix frame = rng.orthonormal_frame(d, d);
  const Matrix k = dom * frame.leftCols(spec.alpha);
  const Matrix q = dom * frame.rightCols(r);

  const Matrix mv_frame = rng.orthonormal_frame(y, y);
  const Matrix a0 = mv_frame.leftCols(spec.mv_dim);
  const Matrix a0_perp = mv_frame.rightCols(y - spec.mv_dim);
  Matrix w = a0_perp * rng.orthonormal_frame(y - spec.mv_dim, r);
  for (Index i = 0; i < r; ++i) {
    w.col(i) *= rng.uniform(0.5, 2.0);
  }

  Matrix ga = Matrix::Zero(x + y, r + spec.alpha + spec.mv_dim);
  ga.block(0, 0, x, r) = q;
  ga.block(x, 0, y, r) = w;
  ga.block(0, r, x, spec.alpha) = k;
  ga.block(x, r + spec.alpha, y, spec.mv_dim) = a0;
  LinearRelation a(Subspace::span(ga), x, y);

  Matrix g = rng.gaussian(y, x) / std::sqrt(static_cast<double>(x));
  if (spec.force_nu_infinite && spec.alpha > 0) {
    g = g * (Matrix::Identity(x, x) - k * k.adjoint());
  }
  const int b0_dim = spec.mv_dim == 0 ? 0 : rng.uniform_int(0, spec.mv_dim);
  Matrix b0 = a0 * rng.orthonormal_frame(spec.mv_dim, b0_dim);
  Matrix gb = Matrix::Zero(x + y, x);
  gb.topRows(x) = Matrix::Identity(x, x);
  gb.bottomRows(y) = g;
  Matrix b0_cols = Matrix::Zero(x + y, b0_dim);
  b0_cols.bottomRows(y) = b0;
  LinearRelation b(Subspace::span(hstack(gb, b0_cols)), x, y);

  Instance out{spec, a, b, measure(a, b)};
  out.spec.beta = beta;
  const Measured& m = out.measured;
  if (m.alpha != spec.alpha || m.beta != beta || m.mv_dim != spec.mv_dim || m.dom_codim != spec.dom_codim ||
      (spec.force_nu_infinite && !m.nu.is_infinite())) {
    throw Error("generate: measured indices do not match the spec (seed " + std::to_string(spec.seed) + ")");
  }
  return out;
}

}  // namespace linrel
