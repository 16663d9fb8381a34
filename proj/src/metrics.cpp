#include "linrel/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "linrel/errors.hpp"
#include "linrel/random.hpp"

namespace linrel {

namespace {

Eigen::VectorXd singular_values(const Matrix& m) {
  if (m.size() == 0) {
    return Eigen::VectorXd(0);
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

/// B's operator part evaluated on the columns of D(A)'s basis.
Matrix restricted_operator(const OperatorPart& op, const Matrix& basis) { return op.apply(basis); }

}  // namespace

OperatorPart::OperatorPart(const LinearRelation& t) : relation_(t) {
  const Subspace& dom = t.domain();
  const Subspace quot = intersect(dom, orth_complement(t.kernel()));
  dom_basis_ = dom.basis();
  quot_basis_ = quot.basis();
  const Index y = t.y_dim();
  mv_projector_complement_ = Matrix::Identity(y, y) - t.multivalued_part().projector();
  full_ = apply(dom_basis_);
  quot_ = apply(quot_basis_);
  full_sv_ = singular_values(full_);
  quot_sv_ = singular_values(quot_);
}

Matrix OperatorPart::apply(const Matrix& xs) const {
  if (xs.cols() == 0) {
    return Matrix(relation_.y_dim(), 0);
  }
  return mv_projector_complement_ * relation_.particular_values(xs);
}

double OperatorPart::norm_at(const Vector& x) const {
  if (x.size() != relation_.x_dim()) {
    throw DimensionError("norm_at: vector length must equal x_dim");
  }
  const double residual = distance(x, relation_.domain());
  if (residual > tol::kEquality * std::max(1.0, x.norm())) {
    throw DomainError("vector is not in the domain of the relation (residual " + std::to_string(residual) + ")",
                      residual);
  }
  return apply(x).norm();
}

double relation_norm_at(const LinearRelation& t, const Vector& x) { return OperatorPart(t).norm_at(x); }

double norm(const OperatorPart& op) {
  const auto& sv = op.full_singular_values();
  return sv.size() == 0 ? 0.0 : sv(0);
}

double norm(const LinearRelation& t) { return norm(OperatorPart(t)); }

double gamma(const OperatorPart& op) {
  const auto& sv = op.quot_singular_values();
  if (sv.size() == 0) {
    return kInfinity;
  }
  return sv(sv.size() - 1);
}

double gamma(const LinearRelation& t) { return gamma(OperatorPart(t)); }

int alpha(const LinearRelation& t) { return static_cast<int>(t.kernel().dim()); }

int beta(const LinearRelation& t) { return static_cast<int>(t.y_dim() - t.range().dim()); }

int alpha_prime_eps(const OperatorPart& op, double eps) {
  if (eps < 0.0) {
    throw std::invalid_argument("alpha_prime_eps: eps must be non-negative");
  }
  const auto& sv = op.quot_singular_values();
  const auto small = std::count_if(sv.begin(), sv.end(), [eps](double s) { return s <= eps; });
  return static_cast<int>(op.relation().kernel().dim()) + static_cast<int>(small);
}

int alpha_prime_eps(const LinearRelation& t, double eps) { return alpha_prime_eps(OperatorPart(t), eps); }

int alpha_prime(const LinearRelation& t) {
  const OperatorPart op(t);
  const double g = gamma(op);
  if (std::isinf(g)) {
    return alpha(t);
  }
  return alpha_prime_eps(op, 0.5 * g);
}

int beta_prime(const LinearRelation& t) { return alpha_prime(adjoint(t)); }

double graph_norm_at(const LinearRelation& t, const Vector& x) { return x.norm() + relation_norm_at(t, x); }

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::exact:
      return "exact";
    case Provenance::heuristic:
      return "heuristic";
    case Provenance::supplied:
      return "supplied";
  }
  return "supplied";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "exact") {
    return Provenance::exact;
  }
  if (s == "heuristic") {
    return Provenance::heuristic;
  }
  if (s == "supplied") {
    return Provenance::supplied;
  }
  throw std::invalid_argument("unknown provenance '" + s + "'");
}

void check_standing_hypotheses(const LinearRelation& a, const LinearRelation& b) {
  if (a.x_dim() != b.x_dim() || a.y_dim() != b.y_dim()) {
    throw DimensionError("A and B map between spaces of different dimensions");
  }
  if (!contains(b.domain(), a.domain())) {
    const double g = gap(a.domain(), b.domain());
    throw HypothesisError("D(A) is not contained in D(B) (gap " + std::to_string(g) + ")", "domain", g);
  }
  if (!contains(a.multivalued_part(), b.multivalued_part())) {
    const double g = gap(b.multivalued_part(), a.multivalued_part());
    throw HypothesisError("B(0) is not contained in A(0) (gap " + std::to_string(g) + ")", "multivalued_part", g);
  }
}

RelativeBound fit_relative_bound(const LinearRelation& a, const LinearRelation& b, double tau, int starts,
                                 std::uint64_t seed) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("fit_relative_bound: tau must be finite and non-negative");
  }
  check_standing_hypotheses(a, b);
  const OperatorPart op_a(a);
  const OperatorPart op_b(b);
  const Matrix& dom = op_a.dom_basis();
  const Index d = dom.cols();

  RelativeBound out;
  out.tau = tau;
  if (d == 0) {
    out.sigma = 0.0;
    out.provenance = tau == 0.0 ? Provenance::exact : Provenance::heuristic;
    if (tau > 0.0) {
      out.certified_sigma = 0.0;
    }
    return out;
  }
  const Matrix mb = restricted_operator(op_b, dom);
  Eigen::JacobiSVD<Matrix> svd_b(mb, Eigen::ComputeFullV);
  const double exact_sigma = svd_b.singularValues()(0);
  if (tau == 0.0) {
    out.sigma = exact_sigma;
    out.provenance = Provenance::exact;
    out.witness = Vector(dom * svd_b.matrixV().col(0));
    return out;
  }

  const Matrix ma = restricted_operator(op_a, dom);
  auto objective = [&](const Vector& c) { return (mb * c).norm() - tau * (ma * c).norm(); };
  auto gradient = [&](const Vector& c) {
    Vector g = Vector::Zero(d);
    const Vector bc = mb * c;
    const Vector ac = ma * c;
    if (bc.norm() > tol::kRankAbsolute) {
      g += mb.adjoint() * bc / bc.norm();
    }
    if (ac.norm() > tol::kRankAbsolute) {
      g -= tau * (ma.adjoint() * ac / ac.norm());
    }
    return g;
  };

  Rng rng(seed);
  std::vector<Vector> seeds;
  for (Index j = 0; j < d; ++j) {
    seeds.emplace_back(svd_b.matrixV().col(j));
  }
  for (int s = 0; s < starts; ++s) {
    seeds.push_back(rng.gaussian(d).normalized());
  }
  double best = -kInfinity;
  Vector best_c = seeds.front();
  for (Vector c : seeds) {
    double f = objective(c);
    double step = 1.0;
    for (int it = 0; it < 200 && step > 1e-12; ++it) {
      Vector g = gradient(c);
      g -= c * (c.adjoint() * g)(0).real();  // tangent component
      if (g.norm() < 1e-14) {
        break;
      }
      const Vector trial = (c + step * g).normalized();
      const double ft = objective(trial);
      if (ft > f) {
        c = trial;
        f = ft;
        step *= 1.5;
      } else {
        step *= 0.5;
      }
    }
    if (f > best) {
      best = f;
      best_c = c;
    }
  }
  out.sigma = std::max(0.0, best);
  out.provenance = Provenance::heuristic;
  out.witness = Vector(dom * best_c);
  out.certified_sigma = exact_sigma;
  return out;
}

BoundCheck check_relative_bound(const LinearRelation& a, const LinearRelation& b, const RelativeBound& bound,
                                int trials, std::uint64_t seed) {
  check_standing_hypotheses(a, b);
  const OperatorPart op_a(a);
  const OperatorPart op_b(b);
  const Matrix& dom = op_a.dom_basis();
  const Index d = dom.cols();
  BoundCheck out;
  out.witness = Vector::Zero(a.x_dim());
  if (d == 0) {
    return out;
  }
  const Matrix mb = restricted_operator(op_b, dom);
  const Matrix ma = restricted_operator(op_a, dom);

  std::vector<Vector> samples;
  Eigen::JacobiSVD<Matrix> svd_b(mb, Eigen::ComputeFullV);
  Eigen::JacobiSVD<Matrix> svd_a(ma, Eigen::ComputeFullV);
  for (Index j = 0; j < d; ++j) {
    samples.emplace_back(svd_b.matrixV().col(j));
    samples.emplace_back(svd_a.matrixV().col(j));
  }
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    samples.push_back(rng.gaussian(d).normalized());
  }
  double worst = -kInfinity;
  for (const Vector& c : samples) {
    const double lhs = (mb * c).norm();
    const double rhs = bound.sigma * c.norm() + bound.tau * (ma * c).norm();
    const double residual = lhs - rhs;
    if (residual > worst) {
      worst = residual;
      out.witness = dom * c;
    }
  }
  out.worst_residual = worst;
  out.holds = worst <= tol::kSlack;
  return out;
}

double stability_radius(double gamma_val, const RelativeBound& bound, RadiusKind kind) {
  if (!(gamma_val > 0.0)) {
    throw std::invalid_argument("stability_radius: gamma must be positive or infinite");
  }
  if (bound.sigma < 0.0 || bound.tau < 0.0 || !std::isfinite(bound.sigma) || !std::isfinite(bound.tau)) {
    throw std::invalid_argument("stability_radius: sigma and tau must be finite and non-negative");
  }
  const double k = static_cast<double>(static_cast<int>(kind));
  if (std::isinf(gamma_val)) {
    return bound.tau > 0.0 ? 1.0 / bound.tau : kInfinity;
  }
  const double denom = k * bound.sigma + bound.tau * gamma_val;
  if (denom == 0.0) {
    return kInfinity;
  }
  return gamma_val / denom;
}

}  // namespace linrel
