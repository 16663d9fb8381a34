#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "linrel/chains.hpp"
#include "linrel/errors.hpp"
#include "linrel/metrics.hpp"
#include "linrel/stability.hpp"

using namespace linrel;

namespace {

Matrix diag(std::initializer_list<Scalar> d) {
  Matrix m = Matrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  Index i = 0;
  for (auto s : d) {
    m(i, i) = s;
    ++i;
  }
  return m;
}

LinearRelation mat(const Matrix& m) { return LinearRelation::from_matrix(m); }

RelativeBound bound(double s, double t, Provenance p = Provenance::supplied) {
  return {s, t, p, std::nullopt, std::nullopt};
}

std::vector<Scalar> ring(double modulus, int phases) {
  std::vector<Scalar> out;
  for (int k = 0; k < phases; ++k) {
    out.push_back(std::polar(modulus, 2.0 * std::numbers::pi * k / phases));
  }
  return out;
}

}  // namespace

TEST(ImpliedBeta, ValidatesSpec) {
  InstanceSpec s;
  s.x_dim = 2;
  s.y_dim = 2;
  s.alpha = 1;
  EXPECT_EQ(implied_beta(s), 1);
  s.beta = 0;
  EXPECT_THROW((void)implied_beta(s), InfeasibleSpec);
  s.beta.reset();
  s.alpha = 3;
  EXPECT_THROW((void)implied_beta(s), InfeasibleSpec);
  s.alpha = 0;
  s.mv_dim = 3;
  EXPECT_THROW((void)implied_beta(s), InfeasibleSpec);
}

TEST(Generate, MatchesSpecAndIsDeterministic) {
  InstanceSpec s;
  s.x_dim = 2;
  s.y_dim = 2;
  s.alpha = 1;
  s.beta = 1;
  s.seed = 7;
  const Instance inst = generate(s);
  EXPECT_EQ(alpha(inst.a), 1);
  EXPECT_EQ(beta(inst.a), 1);
  EXPECT_EQ(inst.measured.alpha, 1);
  EXPECT_TRUE(inst.b.domain().is_full());
  EXPECT_TRUE(contains(inst.a.multivalued_part(), inst.b.multivalued_part()));
  const Instance again = generate(s);
  EXPECT_EQ((inst.a.graph().projector() - again.a.graph().projector()).norm(), 0.0);
  EXPECT_EQ((inst.b.graph().projector() - again.b.graph().projector()).norm(), 0.0);
}

TEST(Generate, FullKernelGivesInfiniteGamma) {
  InstanceSpec s;
  s.x_dim = 3;
  s.y_dim = 2;
  s.alpha = 3;
  s.seed = 1;
  const Instance inst = generate(s);
  EXPECT_EQ(inst.measured.gamma, kInfinity);
}

TEST(Generate, VariedSpecs) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    InstanceSpec s;
    s.x_dim = 2 + static_cast<int>(seed % 4);
    s.y_dim = 2 + static_cast<int>((seed / 4) % 4);
    s.dom_codim = static_cast<int>(seed % 2);
    s.alpha = static_cast<int>(seed % 2);
    s.mv_dim = static_cast<int>((seed / 2) % 2);
    s.force_nu_infinite = seed % 3 == 0;
    s.seed = seed;
    if (s.x_dim - s.dom_codim - s.alpha + s.mv_dim > s.y_dim) {
      EXPECT_THROW((void)implied_beta(s), InfeasibleSpec);
      continue;
    }
    const Instance inst = generate(s);
    EXPECT_EQ(inst.measured.alpha, s.alpha);
    EXPECT_EQ(inst.measured.beta, implied_beta(s));
    EXPECT_EQ(inst.measured.mv_dim, s.mv_dim);
    EXPECT_EQ(inst.measured.dom_codim, s.dom_codim);
    if (s.force_nu_infinite) {
      EXPECT_TRUE(inst.measured.nu.is_infinite());
    }
  }
}

TEST(Grid, Shape) {
  const auto g = default_grid(1.0, {4, 3, 10.0});
  ASSERT_EQ(g.size(), 13u);
  EXPECT_EQ(g[0], Scalar(0.0));
  for (const auto& l : g) {
    EXPECT_TRUE(strictly_inside(l, 1.0));
  }
  EXPECT_TRUE(default_grid(1.0, {0, 8, 10.0}).empty());
  EXPECT_NEAR(std::abs(default_grid(kInfinity, {2, 1, 10.0}).back()), 0.999 * 10.0, 1e-12);
}

TEST(Sweep, WorkedInstanceIsConstant) {
  const auto a = mat(diag({0.0, 1.0}));
  const auto grid = default_grid(1.0);
  const auto rep = sweep(a, a, bound(0.0, 1.0, Provenance::exact), grid);
  EXPECT_NEAR(rep.radii.full, 1.0, 1e-15);
  ASSERT_EQ(rep.records.size(), grid.size());
  for (const auto& r : rep.records) {
    EXPECT_EQ(r.alpha, 1);
    EXPECT_EQ(r.beta, 1);
    EXPECT_TRUE(r.inside_full);
    EXPECT_NEAR(r.gap_forward, 0.0, 1e-12);
  }
  EXPECT_EQ(verify_stability(rep, stability_gate(a, a)).verdict, Verdict::pass);
  EXPECT_EQ(verify_gap_bound(rep, nu(a, a)).verdict, Verdict::pass);
  for (const auto& r : rep.records) {
    ASSERT_TRUE(r.bound_finishing.has_value());
    EXPECT_EQ(*r.bound_finishing, 0.0);
  }
}

TEST(Sweep, RingNearTheRadius) {
  const auto a = mat(diag({0.0, 1.0}));
  const auto rep = sweep(a, a, bound(0.0, 1.0), ring(0.999, 8));
  for (const auto& r : rep.records) {
    EXPECT_EQ(r.alpha, 1);
    EXPECT_EQ(r.beta, 1);
  }
}

TEST(Sweep, NuFiniteJump) {
  const auto a = mat(diag({0.0, 1.0}));
  const auto b = mat(Matrix::Identity(2, 2));
  EXPECT_EQ(nu(a, b), ChainIndex::finite(1));
  const auto rep = sweep(a, b, bound(1.0, 0.0), {Scalar(0.0), Scalar(0.1), Scalar(0.0, 0.2)});
  EXPECT_EQ(rep.records[0].alpha, 1);
  EXPECT_EQ(rep.records[1].alpha, 0);
  EXPECT_EQ(rep.records[2].alpha, 0);
  EXPECT_EQ(verify_gap_bound(rep, nu(a, b)).verdict, Verdict::not_applicable);
}

TEST(Sweep, EmptyGridAndBadBound) {
  const auto a = mat(diag({0.0, 1.0}));
  const auto b = mat(Matrix::Identity(2, 2));
  EXPECT_TRUE(sweep(a, b, bound(1.0, 0.0), {}).records.empty());
  try {
    (void)sweep(a, b, bound(0.5, 0.0), {Scalar(0.1)});
    FAIL() << "expected HypothesisError";
  } catch (const HypothesisError& e) {
    EXPECT_EQ(e.which(), "relative_bound");
  }
}

TEST(Stability, InvertibleA) {
  const auto a = mat(diag({2.0, 3.0}));
  const auto b = mat(Matrix::Identity(2, 2));
  const auto bd = fit_relative_bound(a, b, 0.0);
  EXPECT_NEAR(stability_radius(gamma(a), bd, RadiusKind::full), 2.0 / 3.0, 1e-12);
  const auto rep = verify_stability(a, b, bd, default_grid(2.0 / 3.0));
  EXPECT_EQ(rep.verdict, Verdict::pass);
}

TEST(Stability, EmptyAdmissibleGridIsVacuous) {
  const auto a = mat(diag({2.0, 3.0}));
  const auto b = mat(Matrix::Identity(2, 2));
  const auto rep = verify_stability(a, b, bound(1.0, 0.0), {});
  EXPECT_NE(rep.verdict, Verdict::fail);
}

// The gate admits kernel(A) inside kernel(B). The reverse containment
// kernel(B) inside kernel(A) does not protect alpha: here kernel(B) = {0}
// and alpha jumps as soon as lambda leaves 0.
TEST(Stability, ReverseKernelContainmentIsNotSufficient) {
  const auto a = mat(diag({0.0, 1.0}));
  const auto b = mat(Matrix::Identity(2, 2));
  ASSERT_TRUE(contains(a.kernel(), b.kernel()));
  EXPECT_FALSE(stability_gate(a, b));
  const auto rep = sweep(a, b, bound(1.0, 0.0), {Scalar(0.0), Scalar(0.05)});
  EXPECT_LT(0.05, rep.radii.full);
  EXPECT_NE(rep.records[0].alpha, rep.records[1].alpha);
  EXPECT_EQ(verify_stability(rep, stability_gate(a, b)).verdict, Verdict::not_applicable);
  EXPECT_EQ(verify_stability(rep, true).verdict, Verdict::fail);
}

TEST(Perturbation, Examples) {
  const auto id = mat(Matrix::Identity(2, 2));
  EXPECT_EQ(verify_perturbation(id, mat(0.5 * Matrix::Identity(2, 2))).verdict, Verdict::pass);
  EXPECT_EQ(verify_perturbation(mat(diag({0.0, 1.0})), mat(diag({0.0, 0.5}))).verdict, Verdict::pass);
  EXPECT_EQ(verify_perturbation(id, mat(2.0 * Matrix::Identity(2, 2))).verdict, Verdict::not_applicable);
}

TEST(Witness, Examples) {
  const Subspace m = Subspace::axes(2, {0});
  Vector x(2);
  x << 0.3, 1.0;
  const auto same_w = affine_gap_witness(x, m, m, 0.1);
  EXPECT_NEAR(same_w.bound, 0.9, 1e-12);
  EXPECT_TRUE(same_w.found);
  EXPECT_NEAR(same_w.ratio, 1.0, 1e-6);

  Vector e2 = Vector::Zero(2);
  e2(1) = 1.0;
  const auto far = affine_gap_witness(e2, m, Subspace::axes(2, {0}), 0.1);
  EXPECT_TRUE(far.found);

  Matrix d(2, 1);
  d << 1.0, 1.0;
  const Subspace n = Subspace::span(d);
  const auto w = affine_gap_witness(e2, m, n, 0.1);
  const double delta = std::sqrt(2.0) / 2.0;
  EXPECT_NEAR(w.bound, 0.9 * (1.0 - delta) / (1.0 + delta), 1e-12);
  EXPECT_TRUE(w.found);
  EXPECT_GE(w.ratio, 0.1716 * 0.9);
  EXPECT_THROW((void)affine_gap_witness(d.col(0), m, n, 0.1), DomainError);
}

TEST(Witness, UnitGapBoundIsZero) {
  const auto w = affine_gap_witness(Vector::Ones(2), Subspace::axes(2, {0}), Subspace::axes(2, {1}), 0.2);
  EXPECT_NEAR(w.bound, 0.0, 1e-12);
  EXPECT_TRUE(w.found);
}

TEST(Determinism, SweepRecordsRepeat) {
  InstanceSpec s;
  s.x_dim = 3;
  s.y_dim = 3;
  s.alpha = 1;
  s.force_nu_infinite = true;
  s.seed = 3;
  const Instance inst = generate(s);
  const auto bd = fit_relative_bound(inst.a, inst.b, 0.0);
  const auto grid = default_grid(stability_radius(gamma(inst.a), bd, RadiusKind::full));
  const auto r1 = sweep(inst.a, inst.b, bd, grid);
  const auto r2 = sweep(inst.a, inst.b, bd, grid);
  ASSERT_EQ(r1.records.size(), r2.records.size());
  for (std::size_t i = 0; i < r1.records.size(); ++i) {
    EXPECT_EQ(r1.records[i].gamma, r2.records[i].gamma);
    EXPECT_EQ(r1.records[i].gap_forward, r2.records[i].gap_forward);
  }
  EXPECT_EQ(verify_stability(r1, true).verdict, Verdict::pass);
}
