#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "linrel/conditioning.hpp"
#include "linrel/errors.hpp"
#include "linrel/parallel.hpp"
#include "linrel/random.hpp"
#include "linrel/stability.hpp"

namespace linrel {

namespace {

constexpr double kTheoremSlack = 1e-7;
constexpr int kBoundTrials = 64;

std::string format_lambda(Scalar l) {
  std::ostringstream os;
  os.precision(17);
  os << "lambda=(" << l.real() << "," << l.imag() << ")";
  return os.str();
}

bool strictly_below(double value, double limit) {
  if (std::isinf(limit)) {
    return std::isfinite(value);
  }
  return value < limit - 1e-9 * std::max(1.0, limit);
}

SweepRecord evaluate(const LinearRelation& a, const LinearRelation& b, const SweepReport& base, Scalar lambda) {
  SweepRecord rec;
  rec.lambda = lambda;
  ConditioningScope scope;
  const LinearRelation p = pencil(a, b, lambda);
  const OperatorPart op(p);
  rec.alpha = alpha(p);
  rec.beta = beta(p);
  rec.gamma = gamma(op);
  rec.gap_forward = gap(a.kernel(), p.kernel());
  rec.gap_backward = gap(p.kernel(), a.kernel());
  const double mod = std::abs(lambda);
  const double s = base.bound.sigma;
  const double t = base.bound.tau;
  if (std::isinf(base.gamma_a)) {
    if (t * mod < 1.0) {
      rec.bound_finishing = 0.0;
    }
  } else {
    const double denom = base.gamma_a - mod * (s + t * base.gamma_a);
    if (denom > 0.0) {
      rec.bound_finishing = s * mod / denom;
    }
  }
  rec.inside_pencil = strictly_inside(lambda, base.radii.pencil);
  rec.inside_alpha = strictly_inside(lambda, base.radii.alpha);
  rec.inside_full = strictly_inside(lambda, base.radii.full);
  rec.indeterminate = !scope.clean();
  return rec;
}

}  // namespace

int SweepReport::indeterminate_count() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.indeterminate; }));
}

bool strictly_inside(Scalar lambda, double r) { return strictly_below(std::abs(lambda), r); }

std::vector<Scalar> default_grid(double radius, const GridOptions& options) {
  std::vector<Scalar> grid;
  if (options.points <= 0) {
    return grid;
  }
  if (!(radius > 0.0)) {
    throw std::invalid_argument("default_grid: radius must be positive");
  }
  const double outer = 0.999 * (std::isinf(radius) ? options.infinite_cap : radius);
  const int phases = std::max(1, options.phases);
  grid.emplace_back(0.0, 0.0);
  for (int i = 0; i < options.points; ++i) {
    const double e = options.points == 1 ? 0.0 : -3.0 + 3.0 * i / (options.points - 1);
    const double mod = outer * std::pow(10.0, e);
    for (int k = 0; k < phases; ++k) {
      grid.push_back(std::polar(mod, 2.0 * std::numbers::pi * k / phases));
    }
  }
  return grid;
}

SweepReport sweep(const LinearRelation& a, const LinearRelation& b, const RelativeBound& bound,
                  const std::vector<Scalar>& grid) {
  check_standing_hypotheses(a, b);
  const BoundCheck check = check_relative_bound(a, b, bound, kBoundTrials, 0);
  if (!check.holds) {
    throw HypothesisError("relative bound (sigma, tau) is violated by residual " +
                              std::to_string(check.worst_residual),
                          "relative_bound", check.worst_residual);
  }
  SweepReport rep;
  rep.bound = bound;
  rep.gamma_a = gamma(a);
  rep.alpha_a = alpha(a);
  rep.beta_a = beta(a);
  rep.range_exceeds_mv = !contains(a.multivalued_part(), a.range());
  rep.radii.pencil = stability_radius(rep.gamma_a, bound, RadiusKind::pencil);
  rep.radii.alpha = stability_radius(rep.gamma_a, bound, RadiusKind::alpha);
  rep.radii.full = stability_radius(rep.gamma_a, bound, RadiusKind::full);
  rep.records.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { rep.records[i] = evaluate(a, b, rep, grid[i]); });
  return rep;
}

CheckReport verify_perturbation(const LinearRelation& a, const LinearRelation& b,
                                const std::optional<RelativeBound>& supplied) {
  CheckReport out;
  try {
    check_standing_hypotheses(a, b);
  } catch (const HypothesisError& e) {
    out.reason = e.what();
    out.record("complete_1", Verdict::not_applicable);
    out.record("complete", Verdict::not_applicable);
    out.finalize();
    return out;
  }
  ConditioningScope scope;
  const int alpha_a = alpha(a);
  const int beta_a = beta(a);
  const double gamma_a = gamma(a);
  const LinearRelation s = add(a, b);
  const int alpha_s = alpha(s);
  const int beta_s = beta(s);
  const bool clean = scope.clean();
  const bool conclusion = alpha_s <= alpha_a && beta_s <= beta_a;
  std::ostringstream detail;
  detail << "alpha(A)=" << alpha_a << " alpha(A+B)=" << alpha_s << " beta(A)=" << beta_a << " beta(A+B)=" << beta_s;
  auto verdict = [&](bool applies) {
    if (!applies) {
      return Verdict::not_applicable;
    }
    if (!clean) {
      return Verdict::indeterminate;
    }
    return conclusion ? Verdict::pass : Verdict::fail;
  };

  const double norm_b = norm(b);
  out.record("complete_1", verdict(strictly_below(norm_b, gamma_a)), detail.str());

  bool complete_applies = false;
  const RelativeBound exact = fit_relative_bound(a, b, 0.0);
  auto satisfies = [&](const RelativeBound& rb) {
    if (std::isinf(gamma_a)) {
      return rb.tau < 1.0;
    }
    return strictly_below(rb.sigma + rb.tau * gamma_a, gamma_a);
  };
  complete_applies = satisfies(exact);
  if (!complete_applies && supplied) {
    const BoundCheck check = check_relative_bound(a, b, *supplied, kBoundTrials, 0);
    complete_applies = check.holds && satisfies(*supplied);
    if (!check.holds) {
      out.reason = "supplied relative bound is violated";
    }
  }
  out.record("complete", verdict(complete_applies), detail.str());
  out.finalize();
  return out;
}

CheckReport verify_gap_bound(const SweepReport& report, const ChainIndex& nu_ab) {
  CheckReport out;
  if (!nu_ab.is_infinite()) {
    out.reason = "nu(A:B) = " + to_string(nu_ab) + " is finite";
    out.record("finishing", Verdict::not_applicable);
    out.finalize();
    return out;
  }
  for (const auto& rec : report.records) {
    if (!rec.bound_finishing) {
      continue;
    }
    if (rec.indeterminate) {
      out.record("finishing", Verdict::indeterminate);
      continue;
    }
    const bool ok = rec.gap_forward <= *rec.bound_finishing + kTheoremSlack;
    std::ostringstream d;
    d.precision(17);
    d << format_lambda(rec.lambda) << " gap=" << rec.gap_forward << " bound=" << *rec.bound_finishing;
    out.record("finishing", ok ? Verdict::pass : Verdict::fail, d.str());
  }
  out.finalize();
  return out;
}

CheckReport verify_gap_bound(const LinearRelation& a, const LinearRelation& b, const RelativeBound& bound,
                             const std::vector<Scalar>& grid) {
  const ChainIndex n = nu(a, b);
  if (!n.is_infinite()) {
    return verify_gap_bound(SweepReport{}, n);
  }
  return verify_gap_bound(sweep(a, b, bound, grid), n);
}

bool stability_gate(const LinearRelation& a, const LinearRelation& b) {
  return nu(a, b).is_infinite() || contains(b.kernel(), a.kernel());
}

CheckReport verify_stability(const SweepReport& report, bool gate_open) {
  CheckReport out;
  if (!gate_open) {
    out.reason = "nu(A:B) is finite and N(A) is not contained in N(B)";
    out.record("constancy", Verdict::not_applicable);
    out.finalize();
    return out;
  }
  const double g = report.gamma_a;
  const double s = report.bound.sigma;
  const double t = report.bound.tau;
  for (const auto& rec : report.records) {
    const std::string where = format_lambda(rec.lambda);
    if (rec.indeterminate) {
      if (rec.inside_full) {
        out.record("constancy", Verdict::indeterminate);
        out.record("gamma_lower_bound", Verdict::indeterminate);
      }
      if (rec.inside_pencil) {
        out.record("one_direction", Verdict::indeterminate);
        out.record("dichotomy", Verdict::indeterminate);
      }
      continue;
    }
    if (rec.inside_full) {
      const bool constant = rec.alpha == report.alpha_a && rec.beta == report.beta_a;
      out.record("constancy", constant ? Verdict::pass : Verdict::fail,
                 where + " alpha=" + std::to_string(rec.alpha) + " beta=" + std::to_string(rec.beta) +
                     " expected " + std::to_string(report.alpha_a) + "," + std::to_string(report.beta_a));
      bool ok = true;
      if (std::isinf(g)) {
        ok = std::isinf(rec.gamma);
      } else {
        const double lower = g - (3.0 * s + t * g) * std::abs(rec.lambda);
        ok = rec.gamma >= lower - kTheoremSlack;
      }
      out.record("gamma_lower_bound", ok ? Verdict::pass : Verdict::fail,
                 where + " gamma=" + std::to_string(rec.gamma));
    }
    if (rec.inside_pencil) {
      out.record("one_direction", rec.alpha <= report.alpha_a ? Verdict::pass : Verdict::fail,
                 where + " alpha=" + std::to_string(rec.alpha));
      if (report.range_exceeds_mv) {
        out.record("dichotomy", std::isinf(rec.gamma) ? Verdict::fail : Verdict::pass,
                   where + " pencil is totally degenerate");
      } else {
        out.record("dichotomy", Verdict::not_applicable);
      }
    }
  }
  out.finalize();
  if (out.tallies.empty()) {
    out.verdict = Verdict::pass;
    out.reason = "no admissible grid point";
  }
  return out;
}

CheckReport verify_stability(const LinearRelation& a, const LinearRelation& b, const RelativeBound& bound,
                             const std::vector<Scalar>& grid) {
  if (!stability_gate(a, b)) {
    return verify_stability(SweepReport{}, false);
  }
  return verify_stability(sweep(a, b, bound, grid), true);
}

AffineGapWitness affine_gap_witness(const Vector& x, const Subspace& m, const Subspace& n, double eps,
                                    std::uint64_t seed) {
  if (x.size() != m.ambient() || m.ambient() != n.ambient()) {
    throw DimensionError("affine_gap_witness: ambient dimensions differ");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("affine_gap_witness: eps must lie in (0, 1)");
  }
  const double off = distance(x, n);
  if (off <= tol::kEquality * std::max(1.0, x.norm())) {
    throw DomainError("affine_gap_witness: x lies in N", off);
  }
  const Index amb = x.size();
  const Index k = n.dim();
  const Matrix away = Matrix::Identity(amb, amb) - m.projector();
  auto ratio = [&](const Vector& v) { return (away * v).norm() / v.norm(); };
  const Matrix& nb = n.basis();

  // Rayleigh quotient of (I - P_M) over span(x, N), rescaled into the coset.
  Matrix z(amb, k + 1);
  z.col(0) = x;
  z.rightCols(k) = nb;
  Eigen::HouseholderQR<Matrix> qr(z);
  const Matrix q = qr.householderQ() * Matrix::Identity(amb, k + 1);
  const Matrix r = qr.matrixQR().topRows(k + 1).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Matrix> svd(away * q, Eigen::ComputeFullV);

  std::vector<Vector> starts;  // coset coordinates c, x0 = x + N c
  starts.emplace_back(Vector::Zero(k));
  for (Index j = 0; j < svd.matrixV().cols(); ++j) {
    const Vector w = r.triangularView<Eigen::Upper>().solve(Vector(svd.matrixV().col(j)));
    if (std::abs(w(0)) > 1e-12) {
      starts.emplace_back(w.tail(k) / w(0));
    }
  }
  Rng rng(seed);
  for (int s = 0; s < 8 && k > 0; ++s) {
    starts.push_back(rng.gaussian(k));
  }

  AffineGapWitness best;
  best.x0 = x;
  best.ratio = ratio(x);
  for (Vector c : starts) {
    double f = ratio(x + nb * c);
    double step = 1.0;
    for (int it = 0; it < 100 && k > 0 && step > 1e-10; ++it) {
      bool improved = false;
      for (Index j = 0; j < k && !improved; ++j) {
        for (const Scalar dir : {Scalar(1, 0), Scalar(-1, 0), Scalar(0, 1), Scalar(0, -1)}) {
          Vector trial = c;
          trial(j) += step * dir;
          const double ft = ratio(x + nb * trial);
          if (ft > f) {
            c = trial;
            f = ft;
            improved = true;
            break;
          }
        }
      }
      if (!improved) {
        step *= 0.5;
      }
    }
    if (f > best.ratio) {
      best.ratio = f;
      best.x0 = x + nb * c;
    }
  }
  const double delta = gap(m, n);
  best.bound = (1.0 - eps) * (1.0 - delta) / (1.0 + delta);
  best.found = best.ratio >= best.bound;
  return best;
}

}  // namespace linrel
