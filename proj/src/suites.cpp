#include "linrel/suites.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

#include "linrel/conditioning.hpp"
#include "linrel/errors.hpp"
#include "linrel/parallel.hpp"
#include "linrel/random.hpp"
#include "linrel/stability.hpp"

namespace linrel {

namespace {

constexpr int kMaxResample = 8;

std::uint64_t next_seed(Rng& rng) {
  return static_cast<std::uint64_t>(rng.uniform() * 9007199254740992.0) ^
         (static_cast<std::uint64_t>(rng.uniform() * 2048.0) << 53);
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

/// Runs fn under a conditioning scope: ambiguous rank or containment
/// decisions turn the outcome into indeterminate.
void check(CheckReport& r, const std::string& lemma, const std::function<bool(std::string&)>& fn) {
  std::string detail;
  bool ok = false;
  bool clean = false;
  {
    ConditioningScope scope;
    ok = fn(detail);
    clean = scope.clean();
  }
  if (!clean) {
    r.record(lemma, Verdict::indeterminate);
  } else {
    r.record(lemma, ok ? Verdict::pass : Verdict::fail, detail);
  }
}

void merge_report(CheckReport& into, const CheckReport& from, const std::string& prefix = {}) {
  for (const auto& [name, t] : from.tallies) {
    into.tallies[prefix + name].merge(t);
  }
  for (const auto& f : from.failures) {
    into.failures.push_back(prefix + f);
  }
}

/// Calls make(rng) until it returns without ambiguous decisions or throwing
/// Error, up to kMaxResample attempts.
template <typename F>
auto build_clean(Rng& rng, int& resampled, F make) -> decltype(make(rng)) {
  for (int attempt = 0;; ++attempt) {
    ConditioningScope scope;
    try {
      auto value = make(rng);
      if (scope.clean() || attempt + 1 >= kMaxResample) {
        return value;
      }
    } catch (const Error&) {
      if (attempt + 1 >= kMaxResample) {
        throw;
      }
    }
    ++resampled;
  }
}

InstanceSpec random_spec(Rng& rng, int x, int y, bool allow_partial) {
  InstanceSpec s;
  s.x_dim = x;
  s.y_dim = y;
  s.dom_codim = allow_partial ? rng.uniform_int(0, x - 1) : 0;
  const int d = x - s.dom_codim;
  s.alpha = rng.uniform_int(std::max(0, d - y), d);
  const int rank = d - s.alpha;
  s.mv_dim = rng.uniform_int(0, y - rank);
  s.seed = next_seed(rng);
  return s;
}

LinearRelation random_relation(Rng& rng, int x, int y) {
  switch (rng.uniform_int(0, 3)) {
    case 0:
      return LinearRelation(random_subspace(x + y, rng.uniform_int(0, x + y), rng), x, y);
    case 1:
      return LinearRelation::from_matrix(rng.gaussian(y, x));
    default: {
      InstanceSpec s = random_spec(rng, x, y, true);
      s.dom_codim = rng.uniform_int(0, x);
      s.alpha = std::min(s.alpha, x - s.dom_codim);
      const int rank = x - s.dom_codim - s.alpha;
      if (rank > y) {
        s.alpha = x - s.dom_codim - y;
      }
      s.mv_dim = std::min(s.mv_dim, y - (x - s.dom_codim - s.alpha));
      return generate(s).a;
    }
  }
}

/// Everywhere defined, possibly multivalued.
LinearRelation random_total_relation(Rng& rng, int x, int y) {
  const Matrix g = rng.gaussian(y, x);
  const int mv = rng.uniform_int(0, y);
  const Matrix mv_basis = rng.orthonormal_frame(y, mv);
  Matrix graph = Matrix::Zero(x + y, x + mv);
  graph.topLeftCorner(x, x) = Matrix::Identity(x, x);
  graph.bottomLeftCorner(y, x) = g;
  graph.bottomRightCorner(y, mv) = mv_basis;
  return LinearRelation(Subspace::span(graph), x, y);
}

Json pair_json(const LinearRelation& a, const LinearRelation& b) {
  return Json{{"A", to_json(a)}, {"B", to_json(b)}};
}

double scale_of(const Vector& v) { return std::max(1.0, v.norm()); }

// ---------------------------------------------------------------- algebra

TrialResult algebra_trial(Rng& rng) {
  TrialResult out;
  struct Data {
    int x, y;
    LinearRelation t, s, total;
    Subspace m, n, nd;
    Instance pair;
    Scalar lambda;
  };
  const Data d = build_clean(rng, out.resampled, [](Rng& r) {
    const int x = r.uniform_int(1, 6);
    const int y = r.uniform_int(1, 6);
    LinearRelation t = random_relation(r, x, y);
    LinearRelation s = random_relation(r, x, y);
    LinearRelation total = random_total_relation(r, x, y);
    Subspace m = random_subspace(x, r.uniform_int(0, x), r);
    Subspace n = random_subspace(y, r.uniform_int(0, y), r);
    const Matrix& db = t.domain().basis();
    Subspace nd = db.cols() == 0 ? Subspace::zero(x)
                                 : Subspace::span(db * r.orthonormal_frame(db.cols(), r.uniform_int(0, db.cols())));
    if (nd.ambient() != x) {
      nd = Subspace::zero(x);
    }
    Instance pair = generate(random_spec(r, x, y, true));
    const Scalar lambda = std::polar(r.uniform(0.2, 2.0), r.uniform(0.0, 2.0 * std::numbers::pi));
    return Data{x, y, t, s, total, m, n, nd, pair, lambda};
  });
  const auto& t = d.t;
  CheckReport& r = out.report;

  check(r, "t_tinv", [&](std::string& why) {
    why = "T T^{-1}(N) differs from N n R(T) + T(0)";
    return same(image(t, preimage(t, d.n)), sum(intersect(d.n, t.range()), t.multivalued_part()));
  });
  check(r, "tinv_t", [&](std::string& why) {
    why = "T^{-1} T(M) differs from M n D(T) + N(T)";
    return same(preimage(t, image(t, d.m)), sum(intersect(d.m, t.domain()), t.kernel()));
  });
  check(r, "image_additivity", [&](std::string& why) {
    why = "T(M + N) differs from T(M) + T(N) for N in D(T)";
    return same(image(t, sum(d.m, d.nd)), sum(image(t, d.m), image(t, d.nd)));
  });
  check(r, "fiber_dimension", [&](std::string& why) {
    const Index g = t.graph().dim();
    why = "dim G=" + std::to_string(g) + " dim D=" + std::to_string(t.domain().dim()) +
          " dim T(0)=" + std::to_string(t.multivalued_part().dim()) + " dim R=" + std::to_string(t.range().dim()) +
          " dim N=" + std::to_string(t.kernel().dim());
    return g == t.domain().dim() + t.multivalued_part().dim() && g == t.range().dim() + t.kernel().dim();
  });
  check(r, "fiber_affine", [&](std::string& why) {
    if (t.graph().is_zero()) {
      return true;
    }
    const Vector c = rng.gaussian(t.graph().dim());
    const Vector g = t.graph().basis() * c;
    const Vector x = g.head(t.x_dim());
    const Vector y = g.tail(t.y_dim());
    const Vector yp = t.particular_values(x);
    const double dist = distance(y - yp, t.multivalued_part());
    why = "y - y(x) is " + num(dist) + " away from T(0)";
    return dist <= tol::kEquality * scale_of(y);
  });
  check(r, "double_inverse", [&](std::string& why) {
    why = "inverse(inverse(T)) != T";
    return equals(inverse(inverse(t)), t);
  });
  check(r, "double_adjoint", [&](std::string& why) {
    why = "adjoint(adjoint(T)) != T";
    return equals(adjoint(adjoint(t)), t);
  });
  check(r, "inverse_parts", [&](std::string& why) {
    const LinearRelation inv = inverse(t);
    why = "D(T^{-1}) != R(T) or N(T^{-1}) != T(0)";
    return same(inv.domain(), t.range()) && same(inv.kernel(), t.multivalued_part());
  });
  check(r, "sum_parts", [&](std::string& why) {
    const LinearRelation st = add(d.s, t);
    why = "D(S+T) != D(S) n D(T) or (S+T)(0) != S(0) + T(0)";
    return same(st.domain(), intersect(d.s.domain(), t.domain())) &&
           same(st.multivalued_part(), sum(d.s.multivalued_part(), t.multivalued_part()));
  });
  check(r, "adjoint_scalar", [&](std::string& why) {
    why = "(lambda T)' != lambda T'";
    return equals(adjoint(scalar_mul(d.lambda, t)), scalar_mul(d.lambda, adjoint(t)));
  });
  check(r, "adjoint_sum", [&](std::string& why) {
    why = "(T + S)' != T' + S' with S everywhere defined";
    return equals(adjoint(add(t, d.total)), add(adjoint(t), adjoint(d.total)));
  });

  const auto& a = d.pair.a;
  const auto& b = d.pair.b;
  check(r, "pencil_eigen", [&](std::string& why) {
    const LinearRelation p = pencil(a, b, d.lambda);
    const Subspace target = sum(a.multivalued_part(), b.multivalued_part());
    const Subspace& dom = a.domain();
    std::vector<Vector> samples;
    for (Index j = 0; j < p.kernel().dim(); ++j) {
      samples.emplace_back(p.kernel().basis().col(j));
    }
    if (!dom.is_zero()) {
      samples.emplace_back(dom.basis() * rng.gaussian(dom.dim()));
    }
    for (const Vector& v : samples) {
      const Vector w = a.particular_values(v) - d.lambda * b.particular_values(v);
      const bool meets = distance(w, target) <= tol::kEquality * scale_of(v);
      const bool in_kernel = distance(v, p.kernel()) <= tol::kEquality * scale_of(v);
      if (meets != in_kernel) {
        why = "kernel membership and fiber intersection disagree";
        return false;
      }
    }
    return true;
  });
  check(r, "lemma_t0", [&](std::string& why) {
    // {(x1, x2, y) : (x1, y) in G(A), (x2, y) in G(B)} inside X (+) X (+) Y.
    const Index x = a.x_dim();
    const Index y = a.y_dim();
    const Matrix& ga = a.graph().basis();
    const Matrix& gb = b.graph().basis();
    Matrix l1 = Matrix::Zero(2 * x + y, ga.cols() + x);
    l1.topLeftCorner(x, ga.cols()) = ga.topRows(x);
    l1.bottomLeftCorner(y, ga.cols()) = ga.bottomRows(y);
    l1.block(x, ga.cols(), x, x) = Matrix::Identity(x, x);
    Matrix l2 = Matrix::Zero(2 * x + y, gb.cols() + x);
    l2.block(x, 0, x, gb.cols()) = gb.topRows(x);
    l2.bottomLeftCorner(y, gb.cols()) = gb.bottomRows(y);
    l2.block(0, gb.cols(), x, x) = Matrix::Identity(x, x);
    const Subspace both = intersect(Subspace::span(l1), Subspace::span(l2));
    if (both.is_zero()) {
      return true;
    }
    const Vector v = both.basis() * rng.gaussian(both.dim());
    const Vector diff = a.particular_values(v.head(x)) - b.particular_values(v.segment(x, x));
    const double dist = distance(diff, a.multivalued_part());
    why = "y1 - y2 is " + num(dist) + " away from A(0)";
    return dist <= tol::kEquality * scale_of(v);
  });

  out.instance = Json{{"T", to_json(t)},     {"S", to_json(d.s)},         {"S_total", to_json(d.total)},
                      {"M", to_json(d.m)},   {"N", to_json(d.n)},         {"N_in_domain", to_json(d.nd)},
                      {"pair", pair_json(a, b)}, {"lambda", scalar_to_json(d.lambda)}};
  return out;
}

// ---------------------------------------------------------------- duality

bool close_reals(double u, double v) {
  if (std::isinf(u) || std::isinf(v)) {
    return std::isinf(u) && std::isinf(v);
  }
  return std::abs(u - v) <= tol::kEquality * std::max(1.0, std::max(std::abs(u), std::abs(v)));
}

TrialResult duality_trial(Rng& rng) {
  TrialResult out;
  struct Data {
    LinearRelation t;
    Instance pair;
  };
  const Data d = build_clean(rng, out.resampled, [](Rng& r) {
    const int x = r.uniform_int(1, 7);
    const int y = r.uniform_int(1, 7);
    LinearRelation t = random_relation(r, x, y);
    Instance pair = generate(random_spec(r, x, y, true));
    return Data{t, pair};
  });
  const auto& t = d.t;
  const LinearRelation td = adjoint(t);
  CheckReport& r = out.report;

  check(r, "null_space_a", [&](std::string& why) {
    why = "N(T') != R(T)^perp";
    return same(td.kernel(), annihilator(t.range()));
  });
  check(r, "null_space_b", [&](std::string& why) {
    why = "T'(0) != D(T)^perp";
    return same(td.multivalued_part(), annihilator(t.domain()));
  });
  check(r, "null_space_c", [&](std::string& why) {
    why = "N(T) != R(T')^top";
    return same(t.kernel(), pre_annihilator(td.range()));
  });
  check(r, "null_space_d", [&](std::string& why) {
    why = "T(0) != D(T')^top";
    return same(t.multivalued_part(), pre_annihilator(td.domain()));
  });
  check(r, "equality", [&](std::string& why) {
    why = "alpha(T')=" + std::to_string(alpha(td)) + " beta(T)=" + std::to_string(beta(t));
    return alpha(td) == beta(t);
  });
  check(r, "beta_prime", [&](std::string& why) {
    why = "beta'(T)=" + std::to_string(beta_prime(t)) + " beta(T)=" + std::to_string(beta(t));
    return beta_prime(t) == beta(t);
  });
  check(r, "norm_adjoint", [&](std::string& why) {
    const double u = norm(t);
    const double v = norm(td);
    why = "||T||=" + num(u) + " ||T'||=" + num(v);
    return close_reals(u, v);
  });
  check(r, "gamma_adjoint", [&](std::string& why) {
    const double u = gamma(t);
    const double v = gamma(td);
    why = "gamma(T)=" + num(u) + " gamma(T')=" + num(v);
    return close_reals(u, v);
  });
  const OperatorPart op(t);
  check(r, "gamma_inverse_norm", [&](std::string& why) {
    const Matrix& q = op.matrix_quot();
    if (q.cols() == 0) {
      return std::isinf(gamma(op));
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(q);
    const Matrix pinv = cod.pseudoInverse();
    Eigen::JacobiSVD<Matrix> svd(pinv);
    const double prod = gamma(op) * svd.singularValues()(0);
    why = "gamma * ||A^{-1}|| = " + num(prod);
    return std::abs(prod - 1.0) <= tol::kEquality;
  });
  check(r, "quot_injective", [&](std::string& why) {
    const auto& sv = op.quot_singular_values();
    why = "induced operator has a nontrivial kernel";
    return sv.size() == 0 || numerical_rank(sv) == sv.size();
  });
  check(r, "norm_at_bound", [&](std::string& why) {
    const Subspace& dom = t.domain();
    if (dom.is_zero()) {
      return true;
    }
    for (int s = 0; s < 4; ++s) {
      const Vector x = dom.basis() * rng.gaussian(dom.dim());
      const double lhs = relation_norm_at(t, x);
      const double rhs = norm(op) * x.norm();
      if (lhs > rhs + tol::kSlack * scale_of(x)) {
        why = "||Tx||=" + num(lhs) + " > ||T|| ||x||=" + num(rhs);
        return false;
      }
    }
    return true;
  });
  check(r, "alpha_prime_monotone", [&](std::string& why) {
    const auto& sv = op.quot_singular_values();
    int prev = alpha_prime_eps(op, 0.0);
    for (int k = 1; k <= 12; ++k) {
      const double eps = std::pow(10.0, -6.0 + 0.75 * k);
      const int cur = alpha_prime_eps(op, eps);
      if (cur < prev) {
        why = "alpha'_eps decreased at eps=" + num(eps);
        return false;
      }
      prev = cur;
    }
    const double below = sv.size() == 0 ? 1.0 : 0.5 * sv(sv.size() - 1);
    why = "alpha'_eps below the smallest singular value differs from alpha";
    return alpha_prime_eps(op, below) == alpha(t) && alpha_prime(t) == alpha(t);
  });

  const auto& a = d.pair.a;
  const auto& b = d.pair.b;
  check(r, "norm_difference", [&](std::string& why) {
    // S = A, T = B: D(A) in D(B) and B(0) in A(0).
    const Subspace& dom = a.domain();
    if (dom.is_zero()) {
      return true;
    }
    const LinearRelation ab = add(a, b);
    for (int s = 0; s < 4; ++s) {
      const Vector x = dom.basis() * rng.gaussian(dom.dim());
      const double lhs = relation_norm_at(ab, x);
      const double rhs = relation_norm_at(a, x) - relation_norm_at(b, x);
      if (lhs < rhs - tol::kSlack * scale_of(x)) {
        why = "||Sx + Tx||=" + num(lhs) + " < ||Sx|| - ||Tx||=" + num(rhs);
        return false;
      }
    }
    return true;
  });

  out.instance = Json{{"T", to_json(t)}, {"pair", pair_json(a, b)}};
  return out;
}

// ---------------------------------------------------------------- gap

TrialResult gap_trial(Rng& rng) {
  TrialResult out;
  struct Data {
    Subspace m, n;
    Vector x;
  };
  const Data d = build_clean(rng, out.resampled, [](Rng& r) {
    const int amb = r.uniform_int(1, 8);
    const int dm = r.uniform_int(0, amb);
    Subspace m = random_subspace(amb, dm, r);
    Subspace n = Subspace::zero(amb);
    switch (r.uniform_int(0, 2)) {
      case 0:
        n = random_subspace(amb, r.uniform_int(0, amb), r);
        break;
      case 1: {
        // A tilt of M, optionally widened or narrowed.
        const int dn = std::clamp(dm + r.uniform_int(-1, 1), 0, amb);
        Matrix v = Matrix::Zero(amb, 0);
        if (dm > 0) {
          v = m.basis() + r.uniform(0.01, 0.6) * r.gaussian(amb, dm);
        }
        Matrix cols(amb, v.cols() + std::max(0, dn - dm));
        cols << v, r.gaussian(amb, std::max(0, dn - dm));
        n = cols.cols() == 0 ? Subspace::zero(amb) : Subspace::span(cols.leftCols(std::min<Index>(dn, cols.cols())));
        break;
      }
      default: {
        // N contains M.
        const Matrix extra = r.gaussian(amb, r.uniform_int(0, amb - dm));
        Matrix cols(amb, dm + extra.cols());
        cols << m.basis(), extra;
        n = cols.cols() == 0 ? Subspace::zero(amb) : Subspace::span(cols);
        break;
      }
    }
    return Data{m, n, r.gaussian(amb)};
  });
  const auto& m = d.m;
  const auto& n = d.n;
  CheckReport& r = out.report;
  const double g = gap(m, n);

  check(r, "kato", [&](std::string& why) {
    why = "gap=" + num(g) + " but dim M=" + std::to_string(m.dim()) + " > dim N=" + std::to_string(n.dim());
    return !(g < 1.0 - 1e-6) || m.dim() <= n.dim();
  });
  check(r, "gap_range", [&](std::string& why) {
    why = "gap=" + num(g);
    return g >= 0.0 && g <= 1.0;
  });
  check(r, "gap_zero_iff_contained", [&](std::string& why) {
    why = "gap=" + num(g) + " disagrees with containment";
    return (g <= tol::kEquality) == contains(n, m);
  });
  check(r, "asymmetry", [&](std::string& why) {
    const double back = gap(n, m);
    why = "dim N > dim M but gap(N, M)=" + num(back);
    return n.dim() <= m.dim() || back >= 1.0 - tol::kSlack;
  });
  check(r, "dimension_formula", [&](std::string& why) {
    why = "dim(M+N) + dim(M n N) != dim M + dim N";
    return sum(m, n).dim() + intersect(m, n).dim() == m.dim() + n.dim();
  });
  check(r, "annihilator", [&](std::string& why) {
    const Subspace ann = annihilator(m);
    why = "annihilator dimension or biduality fails";
    return ann.dim() == m.ambient() - m.dim() && same(annihilator(ann), m) &&
           same(orth_complement(orth_complement(m)), m);
  });
  check(r, "projector", [&](std::string& why) {
    const Matrix p = m.projector();
    const double idem = (p * p - p).norm();
    const double herm = (p - p.adjoint()).norm();
    why = "||P^2 - P||=" + num(idem) + " ||P - P*||=" + num(herm);
    return idem <= 1e-10 && herm <= 1e-10;
  });
  const bool x_in_n = distance(d.x, n) <= tol::kEquality * scale_of(d.x);
  if (x_in_n) {
    r.record("extra", Verdict::not_applicable);
  } else {
    const AffineGapWitness w = affine_gap_witness(d.x, m, n, 0.05, next_seed(rng));
    r.record("extra", w.found ? Verdict::pass : Verdict::indeterminate);
  }
  out.instance = Json{{"M", to_json(m)}, {"N", to_json(n)}, {"x", Json::array()}};
  for (Index i = 0; i < d.x.size(); ++i) {
    out.instance["x"].push_back(scalar_to_json(d.x(i)));
  }
  return out;
}

// ---------------------------------------------------------------- chains

struct JordanPair {
  LinearRelation a;
  LinearRelation b;
  int k;
};

/// A = P diag(J_k, R) Q, B = P Q with J_k a nilpotent Jordan block and R
/// invertible diagonal; nu(A:B) = k.
JordanPair jordan_pair(Rng& rng, int n, int k) {
  Matrix core = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < k; ++i) {
    core(i, i + 1) = 1.0;
  }
  for (int i = k; i < n; ++i) {
    core(i, i) = std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 2.0 * std::numbers::pi));
  }
  const Matrix p = rng.orthonormal_frame(n, n);
  const Matrix q = rng.orthonormal_frame(n, n);
  return {LinearRelation::from_matrix(p * core * q), LinearRelation::from_matrix(p * q), k};
}

void chain_structure_checks(CheckReport& r, const LinearRelation& a, const LinearRelation& b) {
  const int len = static_cast<int>(a.x_dim()) + 2;
  const auto ms = m_chain(a, b, len);
  const auto ns = n_chain(a, b, len);
  check(r, "monotone", [&](std::string& why) {
    for (std::size_t i = 1; i < ms.size(); ++i) {
      if (!contains(ms[i - 1], ms[i]) || ms[i].dim() >= ms[i - 1].dim()) {
        why = "M chain not strictly decreasing at " + std::to_string(i);
        return false;
      }
    }
    for (std::size_t i = 1; i < ns.size(); ++i) {
      if (!contains(ns[i], ns[i - 1]) || ns[i].dim() <= ns[i - 1].dim()) {
        why = "N chain not strictly increasing at " + std::to_string(i + 1);
        return false;
      }
    }
    why = "chain did not stabilize within x_dim + 1 steps";
    return static_cast<int>(ms.size()) <= a.x_dim() + 1 && static_cast<int>(ns.size()) <= a.x_dim() + 1;
  });
  check(r, "sandwich", [&](std::string& why) {
    for (const auto& mi : ms) {
      if (!contains(mi, b.kernel())) {
        why = "N(B) escapes some M_n";
        return false;
      }
    }
    for (const auto& ni : ns) {
      if (!contains(a.domain(), ni)) {
        why = "some N_n leaves D(A)";
        return false;
      }
    }
    return true;
  });
  check(r, "n1_kernel", [&](std::string& why) {
    why = "N_1 != N(A)";
    return same(ns.front(), a.kernel());
  });
  for (int n = 1; n <= a.x_dim(); ++n) {
    const std::string tag = "n=" + std::to_string(n);
    std::optional<EquivalentConditions> eq;
    check(r, "equivalent_agree", [&](std::string& why) {
      eq = check_equivalent_conditions(a, b, n);
      why = tag + ": conditions (1)..(n) disagree";
      return eq->agree;
    });
    if (eq) {
      check(r, "equivalent_kappa", [&](std::string& why) {
        why = tag + ": all conditions hold but kappa fails";
        return eq->kappa_implied;
      });
    }
  }
  if (contains(b.kernel(), a.kernel())) {
    check(r, "nu_sufficient", [&](std::string& why) {
      why = "N(A) in N(B) but nu finite";
      return nu(a, b).is_infinite();
    });
  } else {
    r.record("nu_sufficient", Verdict::not_applicable);
  }
}

void nu_duality_checks(CheckReport& r, const LinearRelation& a, const LinearRelation& b) {
  std::optional<NuDuality> res;
  bool clean = false;
  {
    ConditioningScope scope;
    res = verify_nu_duality(a, b);
    clean = scope.clean();
  }
  for (const char* lemma : {"equality_m", "equality_v", "adjoint_sequences"}) {
    if (!res->applicable) {
      r.record(lemma, Verdict::not_applicable);
      continue;
    }
    if (!clean) {
      r.record(lemma, Verdict::indeterminate);
      continue;
    }
    const std::string l = lemma;
    const bool ok = l == "equality_m" ? res->equality_m : l == "equality_v" ? res->equality_v : res->adjoint_sequences;
    std::string why;
    for (const auto& note : res->notes) {
      why += note + "; ";
    }
    r.record(lemma, ok ? Verdict::pass : Verdict::fail, why);
  }
}

TrialResult chains_trial(Rng& rng) {
  TrialResult out;
  struct Data {
    LinearRelation a1, b1, a2, b2;
    int jordan_k;
  };
  const Data d = build_clean(rng, out.resampled, [](Rng& r) {
    const int x = r.uniform_int(1, 6);
    const int y = r.uniform_int(1, 6);
    Instance general = generate(random_spec(r, x, y, true));
    int k = 0;
    if (r.uniform_int(0, 1) == 0) {
      const int n = r.uniform_int(1, 6);
      k = r.uniform_int(1, n);
      JordanPair jp = jordan_pair(r, n, k);
      return Data{general.a, general.b, jp.a, jp.b, k};
    }
    Instance total = generate(random_spec(r, x, y, false));
    return Data{general.a, general.b, total.a, total.b, 0};
  });
  CheckReport& r = out.report;
  chain_structure_checks(r, d.a1, d.b1);
  chain_structure_checks(r, d.a2, d.b2);
  nu_duality_checks(r, d.a2, d.b2);
  if (d.jordan_k > 0) {
    check(r, "jordan_nu", [&](std::string& why) {
      const ChainIndex n = nu(d.a2, d.b2);
      why = "nu=" + to_string(n) + " expected " + std::to_string(d.jordan_k);
      return n == ChainIndex::finite(d.jordan_k);
    });
  }
  out.instance = Json{{"general", pair_json(d.a1, d.b1)}, {"everywhere_defined", pair_json(d.a2, d.b2)},
                      {"jordan_k", d.jordan_k}};
  return out;
}

// ---------------------------------------------------------------- perturbation

/// Everywhere defined B with B(0) in A(0), scaled so that ||B|| = target.
LinearRelation scaled_perturbation(Rng& rng, const LinearRelation& a, double target) {
  const Index x = a.x_dim();
  const Index y = a.y_dim();
  const Subspace& a0 = a.multivalued_part();
  const Matrix b0 = a0.basis() * rng.orthonormal_frame(a0.dim(), rng.uniform_int(0, static_cast<int>(a0.dim())));
  Matrix g = rng.gaussian(y, x);
  Matrix graph = Matrix::Zero(x + y, x + b0.cols());
  graph.topLeftCorner(x, x) = Matrix::Identity(x, x);
  graph.bottomLeftCorner(y, x) = g;
  graph.bottomRightCorner(y, b0.cols()) = b0;
  LinearRelation b(Subspace::span(graph), x, y);
  const double current = norm(b);
  if (current <= 0.0) {
    return b;
  }
  return scalar_mul(target / current, b);
}

TrialResult perturbation_trial(Rng& rng) {
  TrialResult out;
  struct Data {
    LinearRelation a, b_small, b_any, b_rel;
    RelativeBound rel;
  };
  const Data d = build_clean(rng, out.resampled, [](Rng& r) {
    const int x = r.uniform_int(1, 6);
    const int y = r.uniform_int(1, 6);
    Instance inst = generate(random_spec(r, x, y, true));
    const double g = inst.measured.gamma;
    const double base = std::isinf(g) ? 1.0 : g;
    LinearRelation small = scaled_perturbation(r, inst.a, r.uniform(0.05, 0.95) * base);
    LinearRelation any = scaled_perturbation(r, inst.a, r.uniform(0.05, 2.5) * base);
    // B = cA + E with supplied sigma = ||E||, tau = |c|.
    const double c_mod = r.uniform(0.05, 0.6);
    const Scalar c = std::polar(c_mod, r.uniform(0.0, 2.0 * std::numbers::pi));
    LinearRelation e = LinearRelation::from_matrix(r.gaussian(y, x));
    const double e_norm = norm(e);
    const double want = r.uniform(0.05, 0.95) * (1.0 - c_mod) * base;
    if (e_norm > 0.0) {
      e = scalar_mul(want / e_norm, e);
    }
    RelativeBound rel;
    rel.sigma = norm(e) * (1.0 + 1e-12);
    rel.tau = c_mod;
    rel.provenance = Provenance::supplied;
    LinearRelation b_rel = add(scalar_mul(c, inst.a), e);
    return Data{inst.a, small, any, b_rel, rel};
  });
  CheckReport& r = out.report;
  auto run = [&](const LinearRelation& b, const std::optional<RelativeBound>& bound) {
    ConditioningScope scope;
    const CheckReport rep = verify_perturbation(d.a, b, bound);
    if (scope.clean()) {
      merge_report(r, rep);
    } else {
      for (const auto& [name, t] : rep.tallies) {
        r.record(name, t.not_applicable > 0 ? Verdict::not_applicable : Verdict::indeterminate);
      }
    }
  };
  run(d.b_small, std::nullopt);
  run(d.b_any, std::nullopt);
  run(d.b_rel, d.rel);
  out.instance = Json{{"A", to_json(d.a)},
                      {"B_small", to_json(d.b_small)},
                      {"B_any", to_json(d.b_any)},
                      {"B_relative", to_json(d.b_rel)},
                      {"relative_bound", to_json(d.rel)}};
  return out;
}

// ---------------------------------------------------------------- stability

TrialResult stability_trial(Rng& rng, int trial) {
  TrialResult out;
  const int family = trial % 4;
  struct Data {
    LinearRelation a, b;
    RelativeBound bound;
  };
  const Data d = build_clean(rng, out.resampled, [family](Rng& r) {
    const int x = r.uniform_int(1, 5);
    const int y = r.uniform_int(1, 5);
    InstanceSpec spec = random_spec(r, x, y, true);
    if (family == 2) {
      spec.alpha = 0;
      const int rank = x - spec.dom_codim;
      if (rank > y) {
        spec.dom_codim = x - y;
      }
      spec.mv_dim = std::min(spec.mv_dim, y - (x - spec.dom_codim));
    }
    spec.force_nu_infinite = true;
    Instance inst = generate(spec);
    const Scalar c = std::polar(r.uniform(0.3, 2.0), r.uniform(0.0, 2.0 * std::numbers::pi));
    switch (family) {
      case 1: {
        RelativeBound bound;
        bound.sigma = 0.0;
        bound.tau = std::abs(c) * (1.0 + 1e-12);
        bound.provenance = Provenance::supplied;
        return Data{inst.a, scalar_mul(c, inst.a), bound};
      }
      case 3: {
        // B = cA + E with N(A) in N(E).
        const Matrix k = inst.a.kernel().basis();
        Matrix g = r.gaussian(y, x) * r.uniform(0.05, 1.0);
        g = g * (Matrix::Identity(x, x) - k * k.adjoint());
        const LinearRelation e = LinearRelation::from_matrix(g);
        RelativeBound bound;
        bound.sigma = norm(e) * (1.0 + 1e-12);
        bound.tau = std::abs(c) * (1.0 + 1e-12);
        bound.provenance = Provenance::supplied;
        return Data{inst.a, add(scalar_mul(c, inst.a), e), bound};
      }
      default:
        return Data{inst.a, inst.b, fit_relative_bound(inst.a, inst.b, 0.0)};
    }
  });
  CheckReport& r = out.report;
  const ChainIndex n = nu(d.a, d.b);
  check(r, "nu_infinite", [&](std::string& why) {
    why = "family instance has nu = " + to_string(n);
    return n.is_infinite();
  });
  const SweepReport rep = sweep(d.a, d.b, d.bound, default_grid(
      stability_radius(gamma(d.a), d.bound, RadiusKind::full), GridOptions{8, 8, 10.0}));
  merge_report(r, verify_stability(rep, stability_gate(d.a, d.b)));
  merge_report(r, verify_gap_bound(rep, n));
  out.instance = Json{{"family", family}, {"A", to_json(d.a)}, {"B", to_json(d.b)}, {"bound", to_json(d.bound)}};
  return out;
}

std::uint64_t suite_stream(const std::string& suite) { return fnv1a(suite); }

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"algebra", "duality", "gap", "chains", "perturbation", "stability"};
  return names;
}

int SuiteResult::fail_count() const {
  int f = 0;
  for (const auto& [name, t] : lemmas) {
    f += t.fail;
  }
  return f;
}

TrialResult run_trial(const std::string& suite, std::uint64_t seed, int trial) {
  Rng rng(derive_seed(derive_seed(seed, suite_stream(suite)), static_cast<std::uint64_t>(trial)));
  TrialResult res;
  if (suite == "algebra") {
    res = algebra_trial(rng);
  } else if (suite == "duality") {
    res = duality_trial(rng);
  } else if (suite == "gap") {
    res = gap_trial(rng);
  } else if (suite == "chains") {
    res = chains_trial(rng);
  } else if (suite == "perturbation") {
    res = perturbation_trial(rng);
  } else if (suite == "stability") {
    res = stability_trial(rng, trial);
  } else {
    throw std::invalid_argument("unknown suite '" + suite + "'");
  }
  res.report.finalize();
  return res;
}

SuiteResult run_suite(const std::string& suite, int trials, std::uint64_t seed) {
  if (trials < 0) {
    throw std::invalid_argument("trials must be non-negative");
  }
  std::vector<TrialResult> results(static_cast<std::size_t>(trials));
  parallel_for(results.size(), [&](std::size_t i) { results[i] = run_trial(suite, seed, static_cast<int>(i)); });
  SuiteResult out;
  out.name = suite;
  out.trials = trials;
  std::uint64_t h = fnv1a(suite);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const TrialResult& t = results[i];
    h = fnv1a(t.instance.dump(), h);
    out.resampled += t.resampled;
    for (const auto& [name, tally] : t.report.tallies) {
      out.lemmas[name].merge(tally);
      if (tally.fail > 0) {
        TrialFailure f;
        f.suite = suite;
        f.lemma = name;
        f.seed = seed;
        f.trial = static_cast<int>(i);
        for (const auto& msg : t.report.failures) {
          if (msg.rfind(name + ":", 0) == 0) {
            f.detail = msg;
            break;
          }
        }
        f.instance = t.instance;
        out.failures.push_back(std::move(f));
      }
    }
  }
  out.instance_digest = hex64(h);
  return out;
}

std::vector<SuiteResult> run_verify(const std::string& suite, int trials, std::uint64_t seed) {
  std::vector<SuiteResult> out;
  if (suite == "all") {
    for (const auto& name : suite_names()) {
      out.push_back(run_suite(name, trials, seed));
    }
  } else {
    out.push_back(run_suite(suite, trials, seed));
  }
  return out;
}

Json to_json(const TrialFailure& f) {
  return Json{{"suite", f.suite},   {"lemma", f.lemma},   {"seed", f.seed},
              {"trial", f.trial},   {"detail", f.detail}, {"instance", f.instance}};
}

Json summary_json(const std::string& suite, int trials, std::uint64_t seed, const std::vector<SuiteResult>& results) {
  Json suites = Json::array();
  LemmaTally total;
  for (const auto& s : results) {
    Json lemmas = Json::object();
    for (const auto& [name, t] : s.lemmas) {
      lemmas[name] = to_json(t);
      total.merge(t);
    }
    Json failures = Json::array();
    for (const auto& f : s.failures) {
      failures.push_back(to_json(f));
    }
    suites.push_back(Json{{"name", s.name},
                          {"trials", s.trials},
                          {"instance_digest", s.instance_digest},
                          {"resampled", s.resampled},
                          {"lemmas", std::move(lemmas)},
                          {"failures", std::move(failures)}});
  }
  return Json{{"tool", "linrel"},
              {"version", kVersion},
              {"schema", kSchemaVersion},
              {"command", "verify"},
              {"suite", suite},
              {"seed", seed},
              {"trials", trials},
              {"tolerances", tolerances_json()},
              {"suites", std::move(suites)},
              {"totals", to_json(total)},
              {"ok", total.fail == 0}};
}

}  // namespace linrel
