#include <gtest/gtest.h>

#include "qorbit/orbit.hpp"

using namespace qorbit;

namespace {

Scalar P(const char* s) { return parse_scalar(s); }

EigenvalueProfile profile(std::vector<Scalar> mu, std::vector<Scalar> nu, Scalar q,
                          std::optional<Scalar> h = std::nullopt) {
  EigenvalueProfile p;
  p.m = mu.size();
  p.n = nu.size();
  p.mu = std::move(mu);
  p.nu = std::move(nu);
  p.q = std::move(q);
  p.h = std::move(h);
  return p;
}

bool has(const RegularityVerdict& v, const std::string& kind, std::size_t i, std::size_t j) {
  for (const auto& x : v.violated)
    if (x.kind == kind && x.i == i && x.j == j) return true;
  return false;
}

Scalar trace_c(const HeckeSymmetry& hs) {
  Scalar t;
  for (std::size_t i = 0; i < hs.N; ++i) t += hs.C(i, i);
  return t;
}

}  // namespace

TEST(Regularity, Braided) {
  EXPECT_TRUE(regularity(profile({1, 2}, {}, 1)).regular);
  Scalar q = Scalar::q(), c = Scalar::symbol("c");
  auto v = regularity(profile({q * q * c, c}, {}, q));
  EXPECT_FALSE(v.regular);
  EXPECT_TRUE(has(v, "even-even", 1, 2));
  EXPECT_EQ(v.violated.size(), 1u);
  EXPECT_TRUE(regularity(EigenvalueProfile::symbolic(2, 1)).regular);
  auto odd = regularity(profile({P("3")}, {P("5"), P("5") * P("81/49")}, P("9/7")));
  EXPECT_TRUE(has(odd, "odd-odd", 2, 1));
  auto mixed = regularity(profile({P("81/49") * P("5")}, {P("5")}, P("9/7")));
  EXPECT_TRUE(has(mixed, "even-odd", 1, 1));
  auto same = regularity(profile({P("2"), P("2")}, {}, P("7/5")));
  EXPECT_TRUE(has(same, "coincident", 1, 2));
}

TEST(Regularity, NoncommutativeGl2) {
  Scalar h = Scalar::h();
  EXPECT_TRUE(regularity(profile({Scalar(0), 3 * h}, {}, 1, h)).regular);
  auto v = regularity(profile({Scalar(0), h}, {}, 1, h));
  EXPECT_FALSE(v.regular);
  EXPECT_TRUE(has(v, "even-even", 1, 2));

  // On the line μ̂₁ = q²μ̂₂ − qh the pair (1,2) is violated; the reversed
  // pair is violated as well exactly when q = 1 and h = 0.
  struct Point {
    Scalar q, h;
    bool both;
  };
  for (const auto& pt : {Point{Scalar(1), Scalar(0), true}, Point{P("7/5"), Scalar(0), false},
                         Point{Scalar(1), P("1/3"), false}, Point{P("7/5"), P("1/3"), false}}) {
    Scalar mu2(2), mu1 = pt.q * pt.q * mu2 - pt.q * pt.h;
    auto r = regularity(profile({mu1, mu2}, {}, pt.q, pt.h));
    EXPECT_TRUE(has(r, "even-even", 1, 2));
    EXPECT_EQ(has(r, "even-even", 2, 1), pt.both) << pt.q << " " << pt.h;
  }
  // q = 1, h = 0 is the classical restriction μ₁ ≠ μ₂.
  EXPECT_TRUE(regularity(profile({P("5"), P("4")}, {}, 1, Scalar(0))).regular);
  EXPECT_TRUE(regularity(profile({P("5"), P("4")}, {}, P("7/5"), Scalar(0))).regular);
  EXPECT_FALSE(regularity(profile({P("5"), P("4")}, {}, 1, Scalar(1))).regular);
}

TEST(Hankel, Values) {
  Scalar q = Scalar::q();
  auto one = hankel(EigenvalueProfile::symbolic(1, 0));
  EXPECT_EQ(one(0, 0), q.inverse());
  auto H = hankel(profile({1, 2}, {}, P("7/5")));
  EXPECT_EQ(H(0, 0), P("370/343"));
  EXPECT_EQ(H(0, 1), P("15/7"));
  EXPECT_EQ(H(1, 1), P("1465/343"));
  EXPECT_EQ(det(H), P("1825/117649"));
  auto H11 = hankel(profile({3}, {5}, P("9/7")));
  EXPECT_EQ(H11(0, 0), Scalar(0));
  EXPECT_EQ(H11(0, 1), P("-86/21"));
  EXPECT_EQ(det(H11), P("-7396/441"));
  auto flip = hankel(profile({1, 2}, {}, 1));
  EXPECT_EQ(flip(0, 0), Scalar(2));
  EXPECT_EQ(det(flip), Scalar(1));
}

TEST(Hankel, DeterminantFactorization) {
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{1, 0}, {2, 0}, {1, 1}, {2, 1}, {0, 2}}) {
    auto r = hankel_det_check(m, n, {});
    EXPECT_TRUE(r.passed) << m << "|" << n;
  }
  auto sampled = hankel_det_check(3, 2, {true, 42, 7});
  EXPECT_TRUE(sampled.passed) << sampled.residual_point;
  EXPECT_EQ(sampled.points, 7);
}

TEST(Gradient, Matrices) {
  auto hs = builtin::dj_gl(2, P("q"));
  auto g = gradient_matrices(hs, 3);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_EQ(g.A(j * 2 + i, 0), NCPoly(hs.C(j, i)));
      EXPECT_EQ(g.B(0, j * 2 + i), NCPoly(Scalar(i == j ? 1 : 0)));
    }
  EXPECT_EQ((g.B * g.A)(0, 0), NCPoly(trace_c(hs)));
  EXPECT_TRUE(gradient_word_identity(hs, g));
  for (const auto& other : {builtin::q_super(1, 1, P("9/7")), builtin::dj_gl(3, P("5/3")), builtin::q_super(2, 1, P("9/7"))})
    EXPECT_TRUE(gradient_word_identity(other, gradient_matrices(other, 3))) << other.provenance;
}

TEST(PowerReduction, Braided) {
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{1, 0}, {2, 0}, {1, 1}, {2, 1}}) {
    auto pr = EigenvalueProfile::symbolic(m, n);
    auto p = higher_power_reduction(pr, int(m + n + 2));
    EXPECT_EQ(p.size(), 2u);
  }
  auto one = higher_power_reduction(EigenvalueProfile::symbolic(1, 0), 2);
  EXPECT_EQ(one[0], Scalar::q().inverse() * Scalar::symbol("mu1").pow(2));
}

TEST(PowerReduction, Hatted) {
  Scalar h = Scalar::h();
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{1, 0}, {2, 0}, {1, 1}}) {
    auto generic = EigenvalueProfile::symbolic(m, n, Scalar::q(), h);
    EXPECT_EQ(higher_power_reduction(generic, int(m + n + 2)).size(), 2u);
    auto limit = EigenvalueProfile::symbolic(m, n, Scalar(1), h);
    EXPECT_EQ(higher_power_reduction(limit, int(m + n + 2)).size(), 2u);
  }
  // Hatted p̂₀ is still Tr_R I.
  auto pr = EigenvalueProfile::symbolic(2, 0, Scalar::q(), h);
  EXPECT_EQ(power_sums_param(0, pr)[0], trace_c(builtin::dj_gl(2, Scalar::q())));
}

TEST(HattedDims, LimitMatchesDisplay) {
  Scalar h = Scalar::h();
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{2, 0}, {1, 1}, {2, 1}, {1, 2}}) {
    auto pr = EigenvalueProfile::symbolic(m, n, Scalar::q(), h);
    auto qd = quantum_dims(pr);
    std::array<std::optional<mpq_class>, kMaxSymbols> at1{};
    at1[0] = mpq_class(1);
    for (std::size_t i = 0; i < m; ++i) {
      Scalar d(1);
      for (std::size_t p = 0; p < m; ++p)
        if (p != i) d *= (pr.mu[i] - pr.mu[p] - h) / (pr.mu[i] - pr.mu[p]);
      for (std::size_t j = 0; j < n; ++j) d *= (pr.mu[i] - pr.nu[j] + h) / (pr.mu[i] - pr.nu[j]);
      EXPECT_EQ(qd.d[i].specialize(at1), d);
    }
    for (std::size_t j = 0; j < n; ++j) {
      Scalar d(-1);
      for (std::size_t i = 0; i < m; ++i) d *= (pr.nu[j] - pr.mu[i] - h) / (pr.nu[j] - pr.mu[i]);
      for (std::size_t p = 0; p < n; ++p)
        if (p != j) d *= (pr.nu[j] - pr.nu[p] + h) / (pr.nu[j] - pr.nu[p]);
      EXPECT_EQ(qd.dprime[j].specialize(at1), d);
    }
  }
}

TEST(Cotangent, Idempotent) {
  struct Case {
    HeckeSymmetry hs;
    EigenvalueProfile pr;
  };
  std::vector<Case> cases = {{builtin::dj_gl(1, Scalar::q()), EigenvalueProfile::symbolic(1, 0)},
                             {builtin::flip(2), profile({1, 2}, {}, 1)},
                             {builtin::dj_gl(2, P("7/5")), profile({1, 2}, {}, P("7/5"))},
                             {builtin::q_super(1, 1, P("9/7")), profile({3}, {5}, P("9/7"))}};
  for (const auto& c : cases) {
    auto cd = cotangent(c.hs, c.pr);
    EXPECT_TRUE(cd.word_identity) << c.hs.provenance;
    EXPECT_TRUE(cd.structural) << c.hs.provenance;
    EXPECT_TRUE(cd.entrywise_checked) << c.hs.provenance;
    EXPECT_TRUE(cd.entrywise_passed) << c.hs.provenance << " " << cd.failure << ": " << cd.residual;
    EXPECT_EQ(cd.ebar + cd.e, NCMatrix::identity(c.hs.N * c.hs.N));
  }
  auto one = cotangent(builtin::dj_gl(1, Scalar::q()), EigenvalueProfile::symbolic(1, 0));
  EXPECT_EQ(one.ebar(0, 0), NCPoly(1));
}

TEST(Cotangent, RejectsBadInput) {
  auto hs = builtin::dj_gl(2, P("7/5"));
  try {
    cotangent(hs, profile({P("49/25"), Scalar(1)}, {}, P("7/5")));
    FAIL() << "expected ExceptionalProfile";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ExceptionalProfile);
  }
  EXPECT_THROW(cotangent(hs, profile({3}, {5}, P("7/5"))), Error);
  // A wrong value of the fixed power sums breaks idempotency.
  auto cd = cotangent(hs, profile({1, 2}, {}, P("7/5")));
  auto p = power_sums_param(2, profile({1, 2}, {}, P("7/5")));
  std::vector<NCPoly> gens = relation_space(hs, RelationKind::Minus).relations;
  gens.push_back(power_sum_element(1, hs) - NCPoly(p[1]));
  gens.push_back(power_sum_element(2, hs) - NCPoly(p[2] + Scalar(1)));
  FilteredIdeal wrong(2, gens, 4);
  bool all_zero = true;
  NCMatrix sq = cd.ebar * cd.ebar - cd.ebar;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) all_zero = all_zero && wrong.test(sq(r, c)).zero;
  EXPECT_FALSE(all_zero);
}

TEST(NcOrbit, Pipeline) {
  Scalar h = Scalar::h();
  struct Case {
    HeckeSymmetry hs;
    EigenvalueProfile pr;
  };
  std::vector<Case> cases = {{builtin::flip(2), profile({Scalar(0), 3 * h}, {}, 1, h)},
                             {builtin::dj_gl(2, P("7/5")), profile({1, 2}, {}, P("7/5"), P("1/3"))},
                             {builtin::q_super(1, 1, P("9/7")), profile({3}, {5}, P("9/7"), P("1/2"))},
                             {builtin::superflip(1, 1), profile({3}, {5}, 1, P("1/2"))}};
  for (const auto& c : cases) {
    auto nc = nc_orbit(c.hs, c.pr);
    EXPECT_EQ(nc.quotient.values.size(), 2u);
    EXPECT_TRUE(nc.cotangent.structural) << c.hs.provenance;
    EXPECT_TRUE(nc.cotangent.entrywise_passed) << c.hs.provenance << " " << nc.cotangent.failure << ": "
                                               << nc.cotangent.residual;
  }
  // h = 0 reproduces the braided pipeline.
  auto hs = builtin::dj_gl(2, P("7/5"));
  auto nc0 = nc_orbit(hs, profile({1, 2}, {}, P("7/5"), Scalar(0)));
  auto br = cotangent(hs, profile({1, 2}, {}, P("7/5")));
  EXPECT_EQ(nc0.cotangent.ebar, br.ebar);
}
