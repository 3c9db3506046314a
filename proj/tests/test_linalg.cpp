#include <gtest/gtest.h>

#include <random>

#include "qorbit/linalg.hpp"

using namespace qorbit;

namespace {

Scalar P(const char* s) { return parse_scalar(s); }

MatrixS from_rows(std::size_t r, std::size_t c, const std::vector<Scalar>& v) {
  MatrixS m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = v[i * c + j];
  return m;
}

MatrixS random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, bool symbolic) {
  MatrixS m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      Scalar x(static_cast<long>(rng() % 9) - 4);
      if (symbolic && rng() % 3 == 0) x += Scalar::q().pow(static_cast<long>(rng() % 5) - 2);
      m(i, j) = x;
    }
  return m;
}

TensorOp dj2() {
  Scalar q = Scalar::q(), xi = q - q.inverse();
  MatrixS m(4, 4);
  m(0, 0) = q;
  m(3, 3) = q;
  m(2, 1) = 1;  // (1 0) <- (0 1)
  m(1, 2) = 1;
  m(1, 1) = xi;
  return TensorOp(2, 2, m);
}

}  // namespace

TEST(Linalg, EmbedAndKron) {
  TensorOp r = dj2();
  EXPECT_EQ(embed_at(r, 1, 2), r);
  EXPECT_EQ(embed_at(r, 2, 3).m, kron(MatrixS::identity(2), r.m));
  EXPECT_EQ(embed_at(r, 1, 3).m, kron(r.m, MatrixS::identity(2)));
  EXPECT_EQ(kron(MatrixS::identity(2), MatrixS::identity(2)), MatrixS::identity(4));
  EXPECT_THROW(embed_at(r, 3, 3), Error);
}

TEST(Linalg, ApplyAtMatchesEmbedding) {
  std::mt19937_64 rng(3);
  TensorOp r = dj2();
  VectorS v(8);
  for (auto& x : v) x = Scalar(static_cast<long>(rng() % 11) - 5);
  for (std::size_t pos = 1; pos <= 2; ++pos) EXPECT_EQ(apply_at(r, pos, 3, v), embed_at(r, pos, 3).m.apply(v));
}

TEST(Linalg, PartialTrace) {
  EXPECT_EQ(partial_trace(flip(2), 2).m, MatrixS::identity(2));
  EXPECT_EQ(partial_trace(TensorOp::identity(2, 2), 1).m, Scalar(2) * MatrixS::identity(2));
  TensorOp t = partial_trace(dj2(), 2);
  EXPECT_EQ(t.m(0, 0), P("2*q - 1/q"));
  EXPECT_EQ(t.m(1, 1), P("q"));
  EXPECT_TRUE(t.m(0, 1).is_zero() && t.m(1, 0).is_zero());
  // Full trace equals sequential partial traces.
  TensorOp r3 = embed_at(dj2(), 2, 3) * embed_at(dj2(), 1, 3);
  EXPECT_EQ(partial_trace(partial_trace(partial_trace(r3, 3), 2), 1).m(0, 0), r3.m.trace());
}

TEST(Linalg, PartialTraceLocality) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 5; ++t) {
    TensorOp a(2, 2, random_matrix(rng, 4, 4, true));
    MatrixS b = random_matrix(rng, 2, 2, true);
    TensorOp b2(2, 2, kron(MatrixS::identity(2), b)), b1(2, 2, kron(b, MatrixS::identity(2)));
    EXPECT_EQ(partial_trace(a * b1, 2).m, partial_trace(a, 2).m * b);
    EXPECT_EQ(partial_trace(a * b2, 2), partial_trace(b2 * a, 2));
  }
}

TEST(Linalg, Determinants) {
  EXPECT_EQ(det(MatrixS::identity(5)), Scalar(1));
  EXPECT_EQ(det(from_rows(2, 2, {P("a"), P("b"), P("c"), P("d")})), P("a*d - b*c"));
  MatrixS v = from_rows(3, 3, {1, P("mu1"), P("mu1^2"), 1, P("mu2"), P("mu2^2"), 1, P("mu3"), P("mu3^2")});
  EXPECT_EQ(det(v), P("(mu2-mu1)*(mu3-mu1)*(mu3-mu2)"));
  MatrixS w = from_rows(2, 2, {P("1/q"), P("1/(q+1)"), P("q"), 1});
  EXPECT_EQ(det(w), P("1/q - q/(q+1)"));
}

TEST(Linalg, DeterminantMatchesPivotProduct) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 6; ++t) {
    MatrixS m = random_matrix(rng, 4, 4, t % 2 == 1);
    // Product of pivots of an unnormalized elimination, computed here directly.
    MatrixS a = m;
    Scalar d(1);
    for (std::size_t c = 0; c < 4; ++c) {
      std::size_t p = c;
      while (p < 4 && a(p, c).is_zero()) ++p;
      if (p == 4) {
        d = Scalar();
        break;
      }
      if (p != c) {
        for (std::size_t j = 0; j < 4; ++j) std::swap(a(p, j), a(c, j));
        d = -d;
      }
      d *= a(c, c);
      for (std::size_t i = c + 1; i < 4; ++i) {
        Scalar f = a(i, c) / a(c, c);
        for (std::size_t j = 0; j < 4; ++j) a(i, j) -= f * a(c, j);
      }
    }
    EXPECT_EQ(det(m), d);
  }
}

TEST(Linalg, InverseRankNullspace) {
  std::mt19937_64 rng(9);
  MatrixS m = random_matrix(rng, 4, 4, true);
  if (!det(m).is_zero()) EXPECT_EQ(m * inverse(m), MatrixS::identity(4));
  MatrixS s = from_rows(2, 2, {1, 2, 2, 4});
  EXPECT_EQ(rank(s), 1u);
  try {
    inverse(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularMatrix);
  }
  auto ns = nullspace(s);
  ASSERT_EQ(ns.size(), 1u);
  EXPECT_TRUE(s.apply(ns[0])[0].is_zero());
  EXPECT_TRUE(s.apply(ns[0])[1].is_zero());
}

TEST(Linalg, Membership) {
  VectorS v{1, P("q"), 0};
  auto r = subspace_membership(v, {v});
  EXPECT_TRUE(r.member);
  EXPECT_EQ(r.coordinates[0], Scalar(1));
  auto r2 = subspace_membership({1, 0}, {{0, 1}});
  EXPECT_FALSE(r2.member);
  EXPECT_EQ(r2.residual, (VectorS{1, 0}));
}

TEST(Linalg, MembershipCertificateReconstructs) {
  std::mt19937_64 rng(20261019);
  for (int t = 0; t < 5; ++t) {
    std::vector<VectorS> span;
    for (int i = 0; i < 5; ++i) {
      VectorS s(8);
      for (auto& x : s) x = Scalar(static_cast<long>(rng() % 7) - 3) + (rng() % 4 == 0 ? Scalar::q() : Scalar());
      span.push_back(s);
    }
    VectorS v(8);
    for (int i = 0; i < 5; ++i) {
      Scalar c(static_cast<long>(rng() % 5) - 2);
      for (std::size_t j = 0; j < 8; ++j) v[j] += c * span[i][j];
    }
    auto r = subspace_membership(v, span);
    ASSERT_TRUE(r.member);
    VectorS back(8);
    for (int i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 8; ++j) back[j] += r.coordinates[i] * span[i][j];
    EXPECT_EQ(back, v);
  }
}

TEST(Linalg, MemoryCap) {
  std::size_t old = memory_cap();
  set_memory_cap(100);
  EXPECT_THROW(MatrixS(20, 20), Error);
  set_memory_cap(old);
}
