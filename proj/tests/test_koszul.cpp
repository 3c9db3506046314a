#include <gtest/gtest.h>

#include "qorbit/koszul.hpp"
#include "qorbit/orbit.hpp"

using namespace qorbit;

namespace {

Scalar P(const char* s) { return parse_scalar(s); }

VectorS column(const MatrixS& m, std::size_t c) {
  VectorS v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, c);
  return v;
}

std::vector<HeckeSymmetry> small_symmetries() {
  return {builtin::flip(2), builtin::dj_gl(2, P("7/5")), builtin::q_super(1, 1, P("9/7")), builtin::superflip(1, 1)};
}

}  // namespace

TEST(HattedBasis, FlipIsStandard) {
  auto hs = builtin::flip(2);
  EXPECT_EQ(hatted_basis(hs, 2).matrix(), MatrixS::identity(16));
  EXPECT_EQ(hatted_basis(hs, 3).matrix(), MatrixS::identity(64));
}

TEST(HattedBasis, MatchesIndexFormula) {
  for (const auto& hs : {builtin::dj_gl(2, P("7/5")), builtin::q_super(1, 1, P("9/7"))}) {
    std::size_t N = hs.N, G = N * N;
    MatrixS T = hatted_basis(hs, 2).matrix();
    const MatrixS &R = hs.R.m, &Ri = hs.Rinv.m;
    // l_{i1}^{a1} ⊗ l_{b1}^{c1} R^{b1 a2}_{a1 i2} (R⁻¹)^{j1 j2}_{c1 a2}
    for (std::size_t i1 = 0; i1 < N; ++i1)
      for (std::size_t i2 = 0; i2 < N; ++i2)
        for (std::size_t j1 = 0; j1 < N; ++j1)
          for (std::size_t j2 = 0; j2 < N; ++j2) {
            VectorS expect(G * G);
            for (std::size_t a1 = 0; a1 < N; ++a1)
              for (std::size_t b1 = 0; b1 < N; ++b1)
                for (std::size_t c1 = 0; c1 < N; ++c1)
                  for (std::size_t a2 = 0; a2 < N; ++a2)
                    expect[(i1 * N + a1) * G + b1 * N + c1] += R(a1 * N + i2, b1 * N + a2) * Ri(c1 * N + a2, j1 * N + j2);
            EXPECT_EQ(column(T, hatted_index(N, 2, i1 * N + i2, j1 * N + j2)), expect) << hs.provenance;
          }
  }
}

TEST(HattedBasis, Invertible) {
  for (const auto& hs : small_symmetries()) {
    EXPECT_EQ(rank(hatted_basis(hs, 2).matrix()), 16u) << hs.provenance;
    EXPECT_EQ(rank(hatted_basis(hs, 3).matrix()), 64u) << hs.provenance;
  }
  EXPECT_EQ(rank(hatted_basis(builtin::dj_gl(3, P("5/3")), 2).matrix()), 81u);
}

TEST(Projectors, FlipIsClassical) {
  auto ps = build_projectors(builtin::flip(2));
  MatrixS I = MatrixS::identity(16);
  EXPECT_EQ(ps.Q * ps.Q, I);
  EXPECT_EQ(ps.Pplus, Scalar(1, 2) * (I + ps.Q));
  EXPECT_TRUE(ps.arity3_exact);
}

TEST(Projectors, AxiomsHold) {
  for (const auto& hs : small_symmetries()) {
    ProjectorSet ps;
    ASSERT_NO_THROW(ps = build_projectors(hs)) << hs.provenance;
    EXPECT_TRUE(ps.arity3_exact);
    EXPECT_EQ(ps.Pplus * ps.Pminus, MatrixS(16, 16)) << hs.provenance;
  }
  auto ps = build_projectors(builtin::dj_gl(3, P("5/3")));
  EXPECT_FALSE(ps.arity3_exact);
  EXPECT_EQ(ps.arity3_samples, 2u);
  EXPECT_EQ(rank(ps.Pplus), 45u);
  EXPECT_EQ(rank(ps.Pminus), 36u);
}

TEST(Projectors, ImagesAreTheRelationSpaces) {
  for (const auto& hs : small_symmetries()) {
    auto ps = build_projectors(hs);
    for (const auto& r : relation_space(hs, RelationKind::Minus).basis)
      EXPECT_TRUE(sparse_from_dense(ps.Pplus.apply(dense_from_sparse(r, 16))).empty()) << hs.provenance;
    for (const auto& r : relation_space(hs, RelationKind::Plus).basis) {
      VectorS v = dense_from_sparse(r, 16);
      EXPECT_EQ(ps.Pplus.apply(v), v) << hs.provenance;
    }
  }
}

TEST(Projectors, OracleColumn) {
  // Projection onto I₊ along I₋, computed independently of Q.
  auto dj = build_projectors(builtin::dj_gl(2, P("7/5")));
  VectorS e(16);
  e[0] = P("-300/1369"), e[3] = P("150/1369"), e[6] = P("1513/2738"), e[9] = P("1225/2738"), e[12] = P("150/1369");
  EXPECT_EQ(column(dj.Pplus, 6), e);
  auto sup = build_projectors(builtin::q_super(1, 1, P("9/7")));
  VectorS f(16);
  f[0] = P("1296/4225"), f[3] = P("-648/4225"), f[6] = P("4481/8450"), f[9] = P("-6561/8450"), f[12] = P("-648/4225");
  EXPECT_EQ(column(sup.Pplus, 6), f);
}

TEST(Projectors, Arity3EmbeddingIsHattedConjugation) {
  for (const auto& hs : small_symmetries()) {
    auto ps = build_projectors(hs);
    MatrixS T3 = hatted_basis(hs, 3).matrix(), T3inv = inverse(T3);
    TensorOp Q(4, 2, ps.Q);
    for (std::size_t pos = 1; pos <= 2; ++pos)
      EXPECT_EQ(T3 * hatted_conjugation(hs, 3, pos) * T3inv, embed_at(Q, pos, 3).m) << hs.provenance << " pos " << pos;
  }
}

TEST(TraceVector, FlipIsCyclic) {
  VectorS v = trace_vector(2, builtin::flip(2));
  // Tr L² = Σ l_a^b l_b^a
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) EXPECT_EQ(v[(a * 2 + b) * 4 + b * 2 + a], Scalar(1));
  EXPECT_EQ(sparse_from_dense(v).size(), 4u);
}

TEST(TraceVector, RoutesAgree) {
  for (const auto& hs : small_symmetries())
    for (std::size_t k : {2, 3}) EXPECT_TRUE(trace_routes_agree(k, hs)) << hs.provenance << " k=" << k;
  EXPECT_TRUE(trace_routes_agree(2, builtin::dj_gl(3, P("5/3"))));
  EXPECT_TRUE(trace_routes_agree(3, builtin::dj_gl(3, P("5/3"))));

  auto hs = builtin::dj_gl(2, P("7/5"));
  auto ps = build_projectors(hs);
  EXPECT_EQ(ps.T2inv.apply(word_vector(power_sum_element(2, hs), 2)), trace_vector(2, hs));
}

TEST(Conjecture1, HoldsForLowDegrees) {
  for (const auto& hs : small_symmetries()) {
    auto ps = build_projectors(hs);
    auto r = conjecture1_check(2, ps, hs);
    EXPECT_TRUE(r.passed) << hs.provenance << " " << r.name;
  }
  for (const auto& hs : {builtin::flip(2), builtin::superflip(1, 1), builtin::flip(3)}) {
    auto r = conjecture1_check(3, build_projectors(hs), hs);
    EXPECT_TRUE(r.passed) << hs.provenance << " " << r.name;
  }
  auto hs = builtin::dj_gl(3, P("5/3"));
  EXPECT_TRUE(conjecture1_check(2, build_projectors(hs), hs).passed);
}

// Away from q = 1 the cubic identity leaves an exact residual. Its
// coordinates in the structures I_A, I_B, R₂ come from composing the
// P₊₁/P₊₂ transformation table with the P₊⁽³⁾ coefficients (sympy), and
// agree with a projection onto I₊⊗L ∩ L⊗I₊ built without Q.
TEST(Conjecture1, CubicResidualAwayFromQEqualsOne) {
  for (const auto& hs : {builtin::dj_gl(2, P("7/5")), builtin::q_super(1, 1, P("9/7")), builtin::dj_gl(3, P("5/3"))}) {
    auto ps = build_projectors(hs);
    auto r = conjecture1_check(3, ps, hs);
    EXPECT_FALSE(r.passed) << hs.provenance;
    const Scalar& q = hs.q;
    Scalar den = q.pow(4) + q.pow(2) + Scalar(1), xi = hs.xi();
    Scalar cA = (q.pow(3) - q) / den, cB = -(q.pow(2) - Scalar(1)).pow(2) / (Scalar(2) * den);
    HattedBasis hb = hatted_basis(hs, 3);
    auto sv = [&](const TensorOp& X) { return hb.to_standard(structure_trace_vector(hs, X)); };
    TensorOp R1 = hs.R_at(1, 3), R2 = hs.R_at(2, 3);
    TensorOp IA = R1 * R2 * R1 + R1 + R2, IB = R1 * R2 + R2 * R1 - xi * (R1 + R2);
    VectorS expect = sv(qnum(2, q).pow(-2) * (cA * IA + cB * IB - xi * R2));
    EXPECT_EQ(r.residual, sparse_from_dense(expect)) << hs.provenance;
  }
  // dj_gl(2) at q = 7/5: the independent projection leaves 19 nonzero entries.
  auto hs = builtin::dj_gl(2, P("7/5"));
  EXPECT_EQ(conjecture1_check(3, build_projectors(hs), hs).residual.size(), 19u);
}

TEST(Conjecture1, TruncatedVectorFails) {
  auto hs = builtin::dj_gl(2, P("7/5"));
  auto ps = build_projectors(hs);
  VectorS v = word_vector(power_sum_element(3, hs), 3);
  v[1] += Scalar(1);
  EXPECT_NE(ps.p3(v), ps.p2(2, v));
}

TEST(P2Action, AllRows) {
  for (const auto& hs : small_symmetries()) {
    auto ps = build_projectors(hs);
    auto rows = p2_action_identity(ps, hs);
    EXPECT_EQ(rows.size(), 10u);
    for (const auto& r : rows) EXPECT_TRUE(r.passed) << hs.provenance << ": " << r.name;
  }
}

TEST(Differential, FirstFactor) {
  auto hs = builtin::dj_gl(2, P("7/5"));
  auto g = gradient_matrices(hs, 3);
  for (unsigned k = 1; k <= 3; ++k) {
    auto d1 = differential_d1(hs, k);
    NCPoly sum;
    for (std::size_t r = 0; r < d1.size(); ++r) {
      std::size_t i = r / 2, j = r % 2;
      EXPECT_EQ(d1[r].second, g.A(j * 2 + i, k - 1));
      sum += d1[r].first * d1[r].second;
    }
    EXPECT_EQ(sum, power_sum_element(k, hs));
  }
  auto k1 = differential_d1(hs, 1);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(k1[i * 2 + j].second, NCPoly(hs.C(j, i)));

  // Classical: d(Tr L²) has the cofactor l_j^i at d(l_i^j) before symmetrization.
  auto fl = differential_d1(builtin::flip(2), 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(fl[i * 2 + j].second, NCPoly::gen(2, j, i));
}

TEST(Differential, SquareVanishesAtR2) {
  for (const auto& hs : small_symmetries()) {
    auto r = d_squared_check_r2(build_projectors(hs));
    EXPECT_TRUE(r.passed) << hs.provenance;
  }
}
