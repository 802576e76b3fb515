#include "geodec/dof.hpp"
#include "grids.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace geodec;
using Q = Rational;

namespace {

MultiIndex mi(std::initializer_list<int> v) { return MultiIndex(std::vector<int>(v)); }

std::vector<std::size_t> block_sizes(const BlockTriangularReport& r) {
  std::vector<std::size_t> out;
  for (const auto& b : r.diagonal) out.push_back(b.rows);
  return out;
}

std::size_t count_kind(const DofSet<Q>& s, DofKind kind) {
  std::size_t c = 0;
  for (const auto& d : s.functionals) c += d.kind == kind;
  return c;
}

const ElementSpec argyris = ElementSpec::smooth({2, 1, 0}, 5);

}  // namespace

TEST(BuildDofs, Counts) {
  auto a = build_dofs(argyris, SimplexGeometry<Q>::reference(2));
  EXPECT_EQ(a.size(), 21u);
  EXPECT_EQ(count_kind(a, DofKind::VertexDerivative), 18u);
  EXPECT_EQ(count_kind(a, DofKind::FaceMoment), 3u);
  EXPECT_EQ(count_kind(a, DofKind::InteriorMoment), 0u);
  for (std::size_t p = 0; p < 3; ++p) EXPECT_EQ(a.piece_offsets[p + 1] - a.piece_offsets[p], 6u);

  auto l = build_dofs(ElementSpec::lagrange(2, 2), SimplexGeometry<Q>::reference(2));
  EXPECT_EQ(l.size(), 6u);

  auto z = build_dofs(ElementSpec::smooth({4, 2, 1, 0}, 9), grids::skew_simplex(3));
  EXPECT_EQ(z.size(), 220u);
  for (std::size_t p = 0; p < 4; ++p) EXPECT_EQ(z.piece_offsets[p + 1] - z.piece_offsets[p], 35u);
}

TEST(BuildDofs, InvalidSpecs) {
  EXPECT_THROW(ElementSpec::smooth({1, 1, 0}, 5), ConstraintViolation);
  EXPECT_THROW(ElementSpec::hermite(2, 2, 1), ConstraintViolation);
  EXPECT_THROW(ElementSpec::smooth2d(2, 1, 4), ConstraintViolation);
  EXPECT_THROW(ElementSpec::lagrange(2, 0), std::invalid_argument);
  EXPECT_THROW(build_dofs(argyris, SimplexGeometry<Q>::reference(3)), std::invalid_argument);
}

TEST(BuildDofs, DescriptorsFollowTheirNode) {
  auto s = build_dofs(ElementSpec::smooth({4, 2, 0}, 9), grids::skew_simplex(2));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& d = s.functionals[i];
    EXPECT_EQ(d.node, s.columns[i]);
    EXPECT_EQ(d.order, dist_to_face(d.node, d.owner));
    EXPECT_EQ(d.derivative, restrict_to(d.node, complement(d.owner)));
    EXPECT_LE(d.order, s.spec.order(d.owner.dim()));
  }
}

TEST(ApplyDof, Examples) {
  auto g = grids::skew_simplex(2);
  auto l = build_dofs(ElementSpec::lagrange(2, 3), g);
  EXPECT_EQ(apply_dof(l, 0, BernsteinPoly<Q>::monomial(mi({3, 0, 0}))), Q(1));
  const std::size_t interior = l.size() - 1;
  ASSERT_EQ(l.functionals[interior].kind, DofKind::InteriorMoment);
  EXPECT_GT(apply_dof(l, interior, BernsteinPoly<Q>::monomial(mi({1, 1, 1}))), Q(0));

  auto a = build_dofs(argyris, g);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& d = a.functionals[i];
    if (d.kind != DofKind::FaceMoment) continue;
    for (const auto& alpha : multi_indices(3, 5))
      if (dist_to_face(alpha, d.owner) > d.order)
        EXPECT_EQ(apply_dof(a, i, BernsteinPoly<Q>::monomial(alpha)), Q(0)) << d.str() << " " << alpha.str();
  }
}

// Moments of lambda^alpha against the owner weight computed directly from the
// normalized integral: (1/|T|) int_T lambda^{alpha + w} = (alpha+w)! n! / (|alpha+w| + n)!.
TEST(ApplyDof, InteriorMomentValue) {
  auto g = grids::skew_simplex(2);
  auto l = build_dofs(ElementSpec::lagrange(2, 4), g);
  for (std::size_t i = 0; i < l.size(); ++i) {
    const auto& d = l.functionals[i];
    if (d.kind != DofKind::InteriorMoment) continue;
    for (const auto& alpha : multi_indices(3, 4)) {
      const auto e = alpha + d.weight;
      Q expect(factorial(e[0]) * factorial(e[1]) * factorial(e[2]) * 2, factorial(e.degree() + 2));
      expect.canonicalize();
      EXPECT_EQ(apply_dof(l, i, BernsteinPoly<Q>::monomial(alpha)), expect);
    }
  }
}

TEST(DofMatrix, LinearSegment) {
  auto m = dof_matrix(ElementSpec::lagrange(1, 1), SimplexGeometry<Q>::reference(1));
  EXPECT_EQ(m.values, RationalMatrix::identity(2));
  EXPECT_NE(determinant(m.values), 0);
}

TEST(Unisolvence, ExactOnSkewAndReferenceSimplices) {
  for (const auto& spec : grids::exact_specs()) {
    for (const auto& g : {grids::skew_simplex(spec.n), SimplexGeometry<Q>::reference(spec.n)}) {
      auto rep = check_unisolvence(spec, g);
      EXPECT_TRUE(rep.invertible) << spec.str();
      EXPECT_EQ(rep.functionals, rep.dimension);
    }
  }
}

TEST(Unisolvence, RandomSimplices) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 4; ++t) {
    auto g2 = SimplexGeometry<Q>(oracle::random_simplex(2, rng));
    EXPECT_TRUE(check_unisolvence(argyris, g2).invertible);
    EXPECT_TRUE(check_unisolvence(ElementSpec::hermite(2, 5, 2), g2).invertible);
    auto g3 = SimplexGeometry<Q>(oracle::random_simplex(3, rng));
    EXPECT_TRUE(check_unisolvence(ElementSpec::smooth({2, 1, 0, 0}, 5), g3).invertible);
  }
}

TEST(Unisolvence, FramePoliciesAgree) {
  for (const auto& spec : {argyris, ElementSpec::smooth({4, 2, 0}, 9), ElementSpec::smooth({2, 1, 0, 0}, 5)}) {
    auto g = grids::skew_simplex(spec.n);
    EXPECT_TRUE(check_unisolvence(spec, g, FramePolicy::Canonical).invertible) << spec.str();
    EXPECT_TRUE(check_block_triangular(spec, g, FramePolicy::Canonical).holds) << spec.str();
  }
}

TEST(BlockTriangular, ArgyrisBlocks) {
  auto rep = check_block_triangular(argyris, grids::skew_simplex(2));
  EXPECT_TRUE(rep.holds);
  EXPECT_EQ(block_sizes(rep), (std::vector<std::size_t>{6, 6, 6, 1, 1, 1}));
  for (const auto& b : rep.diagonal) EXPECT_TRUE(b.invertible);
  EXPECT_TRUE(rep.violations.empty());
  EXPECT_TRUE(rep.level_violations.empty());
}

TEST(BlockTriangular, HoldsForEveryExactSpec) {
  for (const auto& spec : grids::exact_specs()) {
    auto rep = check_block_triangular(spec, grids::skew_simplex(spec.n));
    EXPECT_TRUE(rep.holds) << spec.str();
    for (const auto& b : rep.diagonal) EXPECT_EQ(b.rows, b.cols);
  }
}

// Column pieces taken with vertex radius r_0 - 1 = 1 (an inadmissible vector whose
// edge tubes overlap near the vertices) do not line up with the rows.
TEST(BlockTriangular, WrongRadiusIsWitnessed) {
  auto set = build_dofs(argyris, grids::skew_simplex(2));
  auto wrong = smooth_decomposition_by_tubes(2, 5, {1, 1, 0}, TubeScope::SubFacesOfF);
  EXPECT_FALSE(verify_partition(wrong).disjoint);
  auto rep = check_block_triangular(set, wrong);
  EXPECT_FALSE(rep.holds);
  bool mismatch = false;
  for (const auto& b : rep.diagonal) mismatch |= b.rows != b.cols || !b.invertible;
  EXPECT_TRUE(mismatch || !rep.violations.empty());
  EXPECT_FALSE(rep.violations.empty());
}

// A Lagrange functional on f annihilates the basis functions owned by faces
// that are not sub-faces of f: their traces on f vanish.
TEST(BlockTriangular, LagrangeZeroPattern) {
  for (int n = 1; n <= 3; ++n)
    for (int k = 1; k <= 4; ++k) {
      auto set = build_dofs(ElementSpec::lagrange(n, k), grids::skew_simplex(n));
      auto m = dof_matrix(set);
      for (std::size_t i = 0; i < set.size(); ++i)
        for (std::size_t j = 0; j < set.size(); ++j) {
          const auto& row_owner = set.functionals[i].owner;
          const auto& col_owner = set.functionals[j].owner;
          if (!row_owner.contains(col_owner)) EXPECT_EQ(m.values(i, j), Q(0));
        }
    }
}

TEST(DualBasis, LinearLagrangeIsBarycentric) {
  auto b = dual_basis(ElementSpec::lagrange(2, 1), grids::skew_simplex(2));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(b.function(i), BernsteinPoly<Q>::monomial(MultiIndex::unit(3, static_cast<int>(i))));
}

TEST(DualBasis, ArgyrisNodalBasis) {
  auto set = build_dofs(argyris, grids::skew_simplex(2));
  auto b = dual_basis(set);
  auto m = dof_matrix(set);
  EXPECT_EQ(m.values * b.coefficients, RationalMatrix::identity(21));
  for (std::size_t i = 0; i < 21; ++i) {
    auto values = apply_dofs(set, b.function(i));
    for (std::size_t j = 0; j < 21; ++j) EXPECT_EQ(values[j], Q(i == j ? 1 : 0));
  }
}

TEST(DualBasis, SingularSetIsRejected) {
  auto set = build_dofs(ElementSpec::lagrange(2, 2), SimplexGeometry<Q>::reference(2));
  set.columns[1] = set.columns[0];
  EXPECT_THROW(dual_basis(set), NotUnisolvent);
}

TEST(Dimensions, Examples) {
  auto h = dimension_table(ElementSpec::hermite(2, 3, 1));
  EXPECT_EQ(h.per_face, (std::vector<std::int64_t>{3, 0, 1}));
  EXPECT_EQ(h.total, 10);
  ASSERT_EQ(h.formulas.size(), 1u);
  EXPECT_EQ(h.formulas[0].total, Q(10));

  auto bz = dimension_table(argyris);
  EXPECT_EQ(bz.per_face, (std::vector<std::int64_t>{6, 1, 0}));
  EXPECT_EQ(bz.total, 21);
  ASSERT_EQ(bz.formulas.size(), 2u);
  EXPECT_EQ(bz.formulas[1].name, "bramble-zlamal");
  EXPECT_EQ(bz.formulas[1].total, Q(21));

  auto l = dimension_table(ElementSpec::lagrange(2, 3));
  EXPECT_EQ(l.per_face, (std::vector<std::int64_t>{1, 2, 1}));
  EXPECT_EQ(l.total, 10);
  EXPECT_TRUE(l.agree());

  auto b2 = dimension_table(ElementSpec::smooth({4, 2, 0}, 9));
  EXPECT_EQ(b2.per_face, (std::vector<std::int64_t>{15, 3, 1}));
  EXPECT_TRUE(b2.agree());
}

TEST(Dimensions, FormulasMatchEnumeration) {
  for (int n = 1; n <= 3; ++n)
    for (int m = 0; m <= 2; ++m)
      for (int k = 2 * m + 1; k <= 2 * m + 4; ++k) {
        auto t = dimension_table(ElementSpec::hermite(n, k, m));
        EXPECT_TRUE(t.agree()) << n << " " << k << " " << m;
        EXPECT_EQ(t.total, binomial(n + k, k));
      }
  for (int m = 0; m <= 3; ++m)
    for (int r0 = 2 * m; r0 <= 2 * m + 3; ++r0)
      for (int k = 2 * r0 + 1; k <= 2 * r0 + 4; ++k) {
        auto t = dimension_table(ElementSpec::smooth2d(r0, m, k));
        EXPECT_TRUE(t.agree()) << r0 << " " << m << " " << k;
        EXPECT_EQ(t.total, binomial(k + 2, 2));
      }
  auto mesh = dimension_table(ElementSpec::hermite(2, 3, 1), {4, 5, 2});
  EXPECT_EQ(mesh.total, 14);
  EXPECT_TRUE(mesh.agree());
}

TEST(Dimensions, BrambleZlamalSplit) {
  for (int m = 1; m <= 3; ++m) {
    auto t = dimension_table(ElementSpec::smooth2d(2 * m, m, 4 * m + 1));
    ASSERT_EQ(t.formulas.size(), 2u);
    EXPECT_TRUE(t.agree());
  }
  auto t = dimension_table(ElementSpec::smooth2d(4, 2, 9));
  EXPECT_EQ(t.per_face[0] * 3, 45);
  EXPECT_EQ(t.per_face[1] * 3, 9);
  EXPECT_EQ(t.per_face[2], 1);
}

TEST(IndexSets, TriangleDecompositionMatchesShiftedLattices) {
  for (int m = 0; m <= 3; ++m)
    for (int r0 = 2 * m; r0 <= 2 * m + 3; ++r0)
      for (int k = 2 * r0 + 1; k <= 2 * r0 + 4; ++k) {
        auto mismatch = smooth2d_index_sets_match(ElementSpec::smooth2d(r0, m, k));
        EXPECT_FALSE(mismatch.has_value()) << *mismatch;
      }
}

TEST(Neilan, ThreeDimensionalStokesParameters) {
  const auto spec = ElementSpec::smooth({2, 1, 0, 0}, 5);
  auto g = grids::skew_simplex(3);
  EXPECT_TRUE(check_unisolvence(spec, g).invertible);
  auto rep = check_block_triangular(spec, g);
  EXPECT_TRUE(rep.holds);
  EXPECT_EQ(build_dofs(spec, g).size(), 56u);
}

TEST(FloatPath, FourDimensionalC1SmokeTest) {
  const auto spec = ElementSpec::smooth({8, 4, 2, 1, 0}, 17);
  SimplexGeometry<double> g(std::vector<Vec<double>>{
      {0, 0, 0, 0}, {1, 0, 0, 0}, {0.1, 1, 0, 0}, {0, 0.2, 1, 0}, {0.1, 0, 0.1, 1}});
  auto set = build_dofs(spec, g, FramePolicy::Dual);
  EXPECT_EQ(set.size(), 5985u);
  auto rep = check_block_triangular(set);
  EXPECT_TRUE(rep.holds);
  for (const auto& b : rep.diagonal) EXPECT_TRUE(b.invertible) << b.face.str();
}

TEST(FloatPath, MatchesExactMatrix) {
  auto exact = dof_matrix(argyris, grids::skew_simplex(2));
  auto approx = dof_matrix(argyris, to_double(grids::skew_simplex(2)));
  for (std::size_t i = 0; i < 21; ++i)
    for (std::size_t j = 0; j < 21; ++j) EXPECT_NEAR(approx.values(i, j), exact.values(i, j).get_d(), 1e-12);
}

TEST(Assembly, ThreadedMatchesSerial) {
  const auto spec = ElementSpec::smooth({4, 2, 1, 0}, 9);
  auto g = grids::skew_simplex(3);
  EXPECT_EQ(dof_matrix(spec, g, FramePolicy::Dual, 1).values, dof_matrix(spec, g, FramePolicy::Dual, 3).values);
}
