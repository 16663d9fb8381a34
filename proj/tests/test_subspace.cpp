#include <gtest/gtest.h>

#include <cmath>

#include "linrel/conditioning.hpp"
#include "linrel/errors.hpp"
#include "linrel/random.hpp"
#include "linrel/subspace.hpp"
#include "oracles.hpp"

using namespace linrel;

namespace {

Matrix col(std::initializer_list<Scalar> v) {
  Matrix m(static_cast<Index>(v.size()), 1);
  Index i = 0;
  for (auto s : v) {
    m(i++, 0) = s;
  }
  return m;
}

double projector_distance(const Subspace& a, const Subspace& b) { return (a.projector() - b.projector()).norm(); }

}  // namespace

TEST(Span, KeepsOrthonormalColumn) {
  const Subspace s = Subspace::span(col({1.0, 0.0}));
  EXPECT_EQ(s.dim(), 1);
  EXPECT_NEAR(std::abs(s.basis()(0, 0)), 1.0, 1e-15);
}

TEST(Span, DropsDependentColumn) {
  Matrix m(2, 2);
  m << 1.0, 2.0, 0.0, 0.0;
  EXPECT_EQ(Subspace::span(m).dim(), 1);
}

TEST(Span, RelativeToleranceDropsTinySingularValue) {
  Matrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1e-15;
  const auto sv = oracle::singular_values(m);
  ASSERT_LT(sv[1] / sv[0], 1e-9);
  EXPECT_EQ(Subspace::span(m, 1e-9).dim(), 1);
}

TEST(Span, RejectsEmptyAmbientAndNonFinite) {
  EXPECT_THROW((void)Subspace::span(Matrix(0, 1)), DimensionError);
  Matrix m = col({1.0, std::nan("")});
  EXPECT_THROW((void)Subspace::span(m), DimensionError);
}

TEST(Span, ZeroMatrixGivesZeroSubspace) { EXPECT_TRUE(Subspace::span(Matrix::Zero(3, 2)).is_zero()); }

TEST(Sum, PlaneFromAxes) {
  const Subspace s = sum(Subspace::axes(3, {0}), Subspace::axes(3, {1}));
  EXPECT_EQ(s.dim(), 2);
  EXPECT_TRUE(same(s, Subspace::axes(3, {0, 1})));
}

TEST(Sum, Idempotent) {
  const Subspace s = random_subspace(5, 3, 11);
  EXPECT_LT(projector_distance(sum(s, s), s), 1e-10);
}

TEST(Sum, TiltedLine) {
  const Subspace a = Subspace::axes(2, {0});
  const Subspace b = Subspace::span(col({1.0, 1.0}));
  Matrix stacked(2, 2);
  stacked << a.basis(), b.basis();
  EXPECT_EQ(sum(a, b).dim(), oracle::rank(stacked));
  EXPECT_EQ(sum(a, b).dim(), 2);
}

TEST(Intersect, TwoPlanesMeetInALine) {
  const Subspace p = Subspace::axes(3, {0, 1});
  const Subspace q = Subspace::axes(3, {1, 2});
  const Subspace i = intersect(p, q);
  // Oracle: null space of [P, -Q] mapped back through P.
  Matrix stacked(3, 4);
  stacked << p.basis(), -q.basis();
  Eigen::FullPivLU<Matrix> lu(stacked);
  const Matrix ker = lu.kernel();
  const Matrix v = p.basis() * ker.topRows(2);
  EXPECT_EQ(i.dim(), oracle::rank(v));
  EXPECT_TRUE(same(i, Subspace::axes(3, {1})));
}

TEST(Intersect, WithFullAndDisjoint) {
  const Subspace s = random_subspace(4, 2, 3);
  EXPECT_TRUE(same(intersect(s, Subspace::full(4)), s));
  EXPECT_TRUE(intersect(Subspace::axes(2, {0}), Subspace::axes(2, {1})).is_zero());
}

TEST(Complement, BasicAndInvolution) {
  EXPECT_TRUE(same(orth_complement(Subspace::axes(2, {0})), Subspace::axes(2, {1})));
  EXPECT_TRUE(orth_complement(Subspace::zero(3)).is_full());
  const Subspace s = random_subspace(6, 2, 5);
  EXPECT_LT(projector_distance(orth_complement(orth_complement(s)), s), 1e-10);
  EXPECT_LT((orth_complement(s).basis().adjoint() * s.basis()).norm(), 1e-10);
}

TEST(Annihilator, RealAxis) { EXPECT_TRUE(same(annihilator(Subspace::axes(2, {0})), Subspace::axes(2, {1}))); }

TEST(Annihilator, BilinearPairingOnComplexLine) {
  const Scalar i(0.0, 1.0);
  const Subspace s = Subspace::span(col({1.0, i}));
  const Subspace ann = annihilator(s);
  ASSERT_EQ(ann.dim(), 1);
  // Solved by hand: f1 + i f2 = 0, so f = (i, -1) up to scale, i.e. span (i, 1)-conjugate-orthogonal.
  const Vector f = ann.basis().col(0);
  EXPECT_LT(std::abs(f(0) * 1.0 + f(1) * i), 1e-12);
  EXPECT_TRUE(same(ann, Subspace::span(col({i, -1.0}))));
  EXPECT_FALSE(same(ann, orth_complement(s)));
}

TEST(Annihilator, Biduality) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Subspace s = random_subspace(5, static_cast<Index>(seed % 6), seed);
    EXPECT_EQ(annihilator(s).dim(), 5 - s.dim());
    EXPECT_LT(projector_distance(annihilator(annihilator(s)), s), 1e-10);
  }
}

TEST(Distance, Examples) {
  Vector e1 = Vector::Zero(2);
  e1(0) = 1.0;
  EXPECT_NEAR(distance(e1, Subspace::axes(2, {0})), 0.0, 1e-15);
  EXPECT_NEAR(distance(e1, Subspace::axes(2, {1})), 1.0, 1e-15);
  const Subspace diag = Subspace::span(col({1.0, 1.0}));
  const double expected = oracle::gap_by_sampling(col({1.0, 0.0}), diag.basis(), 200, 1);
  EXPECT_NEAR(distance(e1, diag), std::sqrt(2.0) / 2.0, 1e-12);
  EXPECT_NEAR(distance(e1, diag), expected, 1e-8);
}

TEST(Gap, Examples) {
  const Subspace s = random_subspace(4, 2, 9);
  EXPECT_NEAR(gap(s, s), 0.0, 1e-12);
  EXPECT_NEAR(gap(Subspace::axes(2, {0}), Subspace::axes(2, {1})), 1.0, 1e-15);
  const Subspace diag = Subspace::span(col({1.0, 1.0}));
  EXPECT_NEAR(gap(Subspace::axes(2, {0}), diag), std::sqrt(2.0) / 2.0, 1e-12);
  EXPECT_NEAR(gap(Subspace::axes(2, {0}), diag), oracle::gap_by_sampling(col({1.0, 0.0}), diag.basis(), 200, 2),
              1e-8);
}

TEST(Gap, ZeroSubspaceConventions) {
  EXPECT_EQ(gap(Subspace::zero(3), Subspace::axes(3, {0})), 0.0);
  EXPECT_EQ(gap(Subspace::axes(3, {0}), Subspace::zero(3)), 1.0);
}

TEST(Gap, AgreesWithSamplingOracle) {
  for (unsigned seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const Index amb = 1 + seed % 4;
    const Subspace m = random_subspace(amb, rng.uniform_int(0, static_cast<int>(amb)), rng);
    const Subspace n = random_subspace(amb, rng.uniform_int(0, static_cast<int>(amb)), rng);
    EXPECT_NEAR(gap(m, n), oracle::gap_by_sampling(m.basis(), n.basis(), 400, seed), 1e-6) << "seed " << seed;
  }
}

TEST(Contains, Examples) {
  EXPECT_TRUE(contains(Subspace::axes(3, {0, 1}), Subspace::axes(3, {0})));
  EXPECT_FALSE(contains(Subspace::axes(3, {0}), Subspace::axes(3, {0, 1})));
  EXPECT_TRUE(contains(random_subspace(4, 1, 1), Subspace::zero(4)));
}

TEST(ApplyMap, Examples) {
  const Subspace plane = Subspace::full(2);
  EXPECT_TRUE(same(apply_map(Matrix::Identity(2, 2), plane), plane));
  EXPECT_TRUE(apply_map(Matrix::Zero(2, 2), plane).is_zero());
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  EXPECT_EQ(apply_map(d, plane).dim(), oracle::rank(d));
  EXPECT_TRUE(same(apply_map(d, plane), Subspace::axes(2, {0})));
  EXPECT_THROW((void)apply_map(Matrix::Identity(3, 3), plane), DimensionError);
}

TEST(RandomSubspace, ExtremesAndDeterminism) {
  EXPECT_TRUE(random_subspace(4, 0, 1).is_zero());
  EXPECT_TRUE(random_subspace(4, 4, 1).is_full());
  EXPECT_EQ((random_subspace(5, 2, 42).projector() - random_subspace(5, 2, 42).projector()).norm(), 0.0);
  EXPECT_THROW((void)random_subspace(2, 3, 1), DimensionError);
}

TEST(Properties, ProjectorAndDimensionFormula) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const Index amb = rng.uniform_int(1, 10);
    const Subspace a = random_subspace(amb, rng.uniform_int(0, static_cast<int>(amb)), rng);
    const Subspace b = random_subspace(amb, rng.uniform_int(0, static_cast<int>(amb)), rng);
    const Matrix p = a.projector();
    EXPECT_LT((p * p - p).norm(), 1e-10);
    EXPECT_LT((p - p.adjoint()).norm(), 1e-10);
    EXPECT_EQ(sum(a, b).dim() + intersect(a, b).dim(), a.dim() + b.dim());
    const double g = gap(a, b);
    EXPECT_GE(g, 0.0);
    EXPECT_LE(g, 1.0);
    EXPECT_EQ(g <= 1e-8, contains(b, a));
  }
}

TEST(Properties, KatoDimensionBound) {
  int close_pairs = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const Index amb = rng.uniform_int(1, 6);
    const Subspace m = random_subspace(amb, rng.uniform_int(0, static_cast<int>(amb)), rng);
    const Matrix tilt = m.basis() + 0.3 * rng.gaussian(amb, m.dim());
    const Subspace n = m.is_zero() ? random_subspace(amb, rng.uniform_int(0, static_cast<int>(amb)), rng)
                                   : Subspace::span(tilt.leftCols(rng.uniform_int(0, static_cast<int>(m.dim()))));
    if (gap(m, n) < 1.0 - 1e-6) {
      ++close_pairs;
      EXPECT_LE(m.dim(), n.dim());
    }
  }
  EXPECT_GT(close_pairs, 20);
}

TEST(Properties, AsymmetryWitness) {
  // dim M < dim N: gap(M, N) can be small while gap(N, M) = 1.
  const Subspace m = Subspace::axes(3, {0});
  Matrix nb(3, 2);
  nb << 1.0, 0.0, 0.1, 0.0, 0.0, 1.0;
  const Subspace n = Subspace::span(nb);
  EXPECT_LT(gap(m, n), 1.0);
  EXPECT_NEAR(gap(n, m), 1.0, 1e-12);
}

TEST(Conditioning, FlagsNearCutRanks) {
  Matrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1e-8;
  ConditioningScope scope;
  (void)Subspace::span(m);
  EXPECT_FALSE(scope.clean());
  ConditioningScope fresh;
  (void)Subspace::span(Matrix::Identity(2, 2));
  EXPECT_TRUE(fresh.clean());
}
