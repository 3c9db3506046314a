#include <gtest/gtest.h>

#include <random>

#include "qorbit/symfun.hpp"

using namespace qorbit;

namespace {

Scalar P(const char* s) { return parse_scalar(s); }
SymExpr a(int k) { return SymExpr::gen(k); }
SymExpr p(int k) { return SymExpr::gen(k, SymBasis::PowerSum); }
SymExpr c(const Scalar& x, SymBasis b = SymBasis::Elementary) { return SymExpr(x, b); }

std::vector<SymExpr> power_sum_gens(int K) {
  std::vector<SymExpr> v{SymExpr()};
  for (int k = 1; k <= K; ++k) v.push_back(p(k));
  return v;
}

EigenvalueProfile numeric_profile(std::vector<Scalar> mu, std::vector<Scalar> nu, Scalar q) {
  EigenvalueProfile pr;
  pr.m = mu.size();
  pr.n = nu.size();
  pr.mu = std::move(mu);
  pr.nu = std::move(nu);
  pr.q = std::move(q);
  return pr;
}

}  // namespace

TEST(Partition, Shapes) {
  EXPECT_EQ(mn_shape(3, 2), (Partition{2, 2, 2}));
  EXPECT_EQ(mn_shape(3, 2, 0, 1), (Partition{2, 2, 2, 1}));
  EXPECT_EQ(mn_shape(3, 2, 2), (Partition{3, 3, 2}));
  EXPECT_EQ(mn_shape(3, 2, 1, 2), (Partition{3, 2, 2, 2}));
  EXPECT_EQ(mn_shape(2, 0), Partition{});
  EXPECT_EQ(conjugate({3, 1}), (Partition{2, 1, 1}));
  EXPECT_THROW(normalize_partition({1, 2}), Error);
}

TEST(Newton, SmallCases) {
  auto av = newton_a_from_p(power_sum_gens(1), Scalar::q(), c(1, SymBasis::PowerSum));
  EXPECT_EQ(av[1], p(1));
  auto a2 = newton_a_from_p(power_sum_gens(2), Scalar::q(), c(1, SymBasis::PowerSum))[2];
  EXPECT_EQ(a2, P("q^2/(q^2+1)") * (p(1) * p(1)) - P("q/(q^2+1)") * p(2));
}

TEST(Newton, ClassicalAtQEqualsOne) {
  auto av = newton_a_from_p(power_sum_gens(3), Scalar(1), c(1, SymBasis::PowerSum));
  EXPECT_EQ(av[2], Scalar(1, 2) * (p(1) * p(1)) - Scalar(1, 2) * p(2));
  EXPECT_EQ(av[3], Scalar(1, 6) * (p(1) * p(1) * p(1)) - Scalar(1, 2) * (p(1) * p(2)) + Scalar(1, 3) * p(3));
}

TEST(Newton, RoundTrip) {
  std::mt19937_64 rng(1405);
  Scalar q(7, 5);
  std::vector<Scalar> pv{Scalar()};
  for (int k = 1; k <= 6; ++k) pv.push_back(Scalar(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 9)));
  auto av = newton_a_from_p(pv, q, Scalar(1));
  auto back = newton_p_from_a(av, q);
  for (int k = 1; k <= 6; ++k) EXPECT_EQ(back[k], pv[k]);
  // Symbolic round trip through the SymExpr basis change.
  SymExpr e = a(3) * a(1) - P("q") * a(2);
  EXPECT_EQ(to_elementary(to_power_sums(e, Scalar::q()), Scalar::q()), e);
}

TEST(Newton, SchurRoutesAgree) {
  for (const Scalar& q : {Scalar(7, 5), Scalar::q()}) {
    auto pv = power_sum_gens(4);
    SymExpr one = c(1, SymBasis::PowerSum);
    auto s1 = newton_s_from_p(pv, q, one);
    auto s2 = wronski_s_from_a(newton_a_from_p(pv, q, one));
    for (int k = 0; k <= 4; ++k) EXPECT_EQ(s1[k], s2[k]) << k;
  }
  std::vector<SymExpr> av{c(1), a(1), a(2)};
  auto s = wronski_s_from_a(av);
  EXPECT_EQ(s[1], a(1));
  EXPECT_EQ(s[2], a(1) * a(1) - a(2));
}

TEST(JacobiTrudi, SmallShapes) {
  EXPECT_EQ(jacobi_trudi({1}), a(1));
  EXPECT_EQ(jacobi_trudi({1, 1}), a(2));
  EXPECT_EQ(jacobi_trudi({2, 1}), a(1) * a(2) - a(3));
  EXPECT_EQ(jacobi_trudi({}), c(1));
  EXPECT_EQ(jacobi_trudi({2}), a(1) * a(1) - a(2));
}

TEST(ChCoefficients, SmallCases) {
  Scalar q = Scalar::q();
  auto c10 = ch_coefficients(1, 0, q);
  ASSERT_EQ(c10.size(), 2u);
  EXPECT_EQ(c10[0], c(1));
  EXPECT_EQ(c10[1], (-q) * a(1));
  auto c20 = ch_coefficients(2, 0, q);
  EXPECT_EQ(c20[2], (q * q) * a(2));
  auto c11 = ch_coefficients(1, 1, q);
  EXPECT_EQ(c11[0], a(1));
  EXPECT_EQ(c11[1], q.inverse() * jacobi_trudi({1, 1}) - q * jacobi_trudi({2}));
  EXPECT_EQ(c11[2], -jacobi_trudi({2, 1}));
}

// Term-by-term comparison with the displayed (3|2) identity.
TEST(ChCoefficients, ThreeTwoExample) {
  Scalar q = Scalar::q();
  auto sh = [](int k, int r) { return mn_shape(3, 2, k, r); };
  std::vector<std::vector<ChTerm>> expected{
      {{1, sh(0, 0)}},
      {{q.inverse(), sh(0, 1)}, {-q, sh(1, 0)}},
      {{q.pow(-2), sh(0, 2)}, {-1, sh(1, 1)}, {q.pow(2), sh(2, 0)}},
      {{-q.inverse(), sh(1, 2)}, {q, sh(2, 1)}, {-q.pow(3), sh(3, 0)}},
      {{1, sh(2, 2)}, {-q.pow(2), sh(3, 1)}},
      {{-q, sh(3, 2)}},
  };
  auto got = ch_schur_terms(3, 2, q);
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    ASSERT_EQ(got[i].size(), expected[i].size()) << i;
    for (const auto& e : expected[i]) {
      bool found = false;
      for (const auto& g : got[i])
        if (g.shape == e.shape) {
          EXPECT_EQ(g.coeff, e.coeff);
          found = true;
        }
      EXPECT_TRUE(found) << i << " " << partition_string(e.shape);
    }
  }
  auto cs = ch_coefficients(3, 2, q);
  EXPECT_EQ(cs[0], jacobi_trudi(mn_shape(3, 2)));
}

TEST(ChCoefficients, Factorized) {
  Scalar q = Scalar::q();
  auto f = ch_factorized(3, 2, q);
  ASSERT_EQ(f.even.size(), 4u);
  ASSERT_EQ(f.odd.size(), 3u);
  EXPECT_EQ(f.even[1].coeff, -q);
  EXPECT_EQ(f.even[3].coeff, -q.pow(3));
  EXPECT_EQ(f.even[2].shape, mn_shape(3, 2, 2));
  EXPECT_EQ(f.odd[1].coeff, q.inverse());
  EXPECT_EQ(f.odd[2].shape, mn_shape(3, 2, 0, 2));
  auto g = ch_factorized(2, 0, q);
  ASSERT_EQ(g.odd.size(), 1u);
  EXPECT_EQ(g.odd[0].coeff, Scalar(1));
  EXPECT_NO_THROW(ch_factorized(1, 1, q));
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      if (m + n > 0) EXPECT_NO_THROW(ch_factorized(m, n, q));
}

TEST(QuantumDims, Formulas) {
  auto at1 = quantum_dims(EigenvalueProfile::symbolic(2, 2, Scalar(1)));
  for (const auto& d : at1.d) EXPECT_EQ(d, Scalar(1));
  for (const auto& d : at1.dprime) EXPECT_EQ(d, Scalar(-1));
  EXPECT_EQ(quantum_dims(EigenvalueProfile::symbolic(1, 0)).d[0], P("1/q"));
  auto qd = quantum_dims(EigenvalueProfile::symbolic(1, 1));
  EXPECT_EQ(qd.d[0], P("(mu1 - q^2*nu1)/(q*(mu1 - nu1))"));
  EXPECT_EQ(qd.dprime[0], P("-q*(nu1 - mu1/q^2)/(nu1 - mu1)"));
}

TEST(QuantumDims, Degenerate) {
  try {
    quantum_dims(numeric_profile({1, 1}, {}, Scalar(2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateProfile);
  }
  EXPECT_THROW(quantum_dims(numeric_profile({3}, {3}, Scalar(2))), Error);
}

TEST(PowerSums, Parametrization) {
  auto cl = power_sums_param(4, EigenvalueProfile::symbolic(2, 1, Scalar(1)));
  for (int k = 0; k <= 4; ++k)
    EXPECT_EQ(cl[k], P("mu1").pow(k) + P("mu2").pow(k) - P("nu1").pow(k)) << k;
  auto one = power_sums_param(3, EigenvalueProfile::symbolic(1, 0));
  for (int k = 0; k <= 3; ++k) EXPECT_EQ(one[k], P("1/q") * P("mu1").pow(k));
  // (1|1): p_k = (mu - q^2 nu)(mu^k - nu^k)/(q (mu - nu)), polynomial in mu, nu.
  auto s11 = power_sums_param(3, EigenvalueProfile::symbolic(1, 1));
  EXPECT_EQ(s11[0], Scalar(0));
  EXPECT_EQ(s11[2], P("(mu1 - q^2*nu1)*(mu1 + nu1)/q"));
  EXPECT_EQ(s11[3], P("(mu1 - q^2*nu1)*(mu1^2 + mu1*nu1 + nu1^2)/q"));
  for (std::size_t m = 0; m <= 3; ++m)
    for (std::size_t n = 0; n <= 2; ++n)
      if (m + n > 0)
        EXPECT_EQ(power_sum_param(0, EigenvalueProfile::symbolic(m, n, Scalar(1))), Scalar(long(m) - long(n)));
}

TEST(SchurParam, ThreeTwoExample) {
  auto pr = EigenvalueProfile::symbolic(3, 2);
  Scalar box = schur_param(mn_shape(3, 2), pr);
  Scalar prod(1);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 2; ++j)
      prod *= Scalar::q().inverse() * Scalar::symbol("mu" + std::to_string(i)) - Scalar::q() * Scalar::symbol("nu" + std::to_string(j));
  EXPECT_EQ(box, prod);
  EXPECT_EQ(schur_param(mn_shape(3, 2, 3), pr), P("mu1*mu2*mu3/q^3") * prod);
  EXPECT_EQ(schur_param(mn_shape(3, 2, 0, 2), pr), P("q^2*nu1*nu2") * prod);
}

TEST(SchurParam, Vieta) {
  auto pr = EigenvalueProfile::symbolic(3, 2);
  Scalar q = Scalar::q();
  Scalar box = schur_param(mn_shape(3, 2), pr);
  auto s = [&](int k, int r) { return schur_param(mn_shape(3, 2, k, r), pr) / box; };
  EXPECT_EQ(q * s(1, 0), P("mu1 + mu2 + mu3"));
  EXPECT_EQ(q.pow(2) * s(2, 0), P("mu1*mu2 + mu1*mu3 + mu2*mu3"));
  EXPECT_EQ(q.pow(3) * s(3, 0), P("mu1*mu2*mu3"));
  EXPECT_EQ(-q.inverse() * s(0, 1), P("nu1 + nu2"));
  EXPECT_EQ(q.pow(-2) * s(0, 2), P("nu1*nu2"));
  // The generic Jacobi–Trudi route agrees with the closed product form.
  EXPECT_EQ(evaluate_on_profile(jacobi_trudi(mn_shape(3, 2)), pr), box);
}

TEST(ChCoefficients, RecurrenceOnProfiles) {
  for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 0}, {1, 1}, {2, 1}}) {
    auto pr = EigenvalueProfile::symbolic(m, n);
    auto cs = ch_coefficients_param(pr);
    std::size_t d = m + n;
    auto ps = power_sums_param(int(4 + d), pr);
    for (std::size_t k = 0; k <= 4; ++k) {
      Scalar sum;
      for (std::size_t i = 0; i <= d; ++i) sum += cs[i] * ps[k + d - i];
      EXPECT_TRUE(sum.is_zero()) << m << "|" << n << " k=" << k;
    }
  }
}

TEST(QuantumDims, HattedLimit) {
  auto pr = EigenvalueProfile::symbolic(2, 1, Scalar::q(), Scalar::h());
  auto qd = quantum_dims(pr);
  auto at1 = [](const Scalar& x) { return substitute(x, std::map<std::string, Scalar>{{"q", Scalar(1)}}); };
  EXPECT_EQ(at1(qd.d[0]), P("(mu1 - mu2 - h)/(mu1 - mu2) * (mu1 - nu1 + h)/(mu1 - nu1)"));
  EXPECT_EQ(at1(qd.d[1]), P("(mu2 - mu1 - h)/(mu2 - mu1) * (mu2 - nu1 + h)/(mu2 - nu1)"));
  EXPECT_EQ(at1(qd.dprime[0]), P("-(nu1 - mu1 - h)/(nu1 - mu1) * (nu1 - mu2 - h)/(nu1 - mu2)"));
  // h = 0 reduces to the unhatted formula.
  auto z = quantum_dims(EigenvalueProfile::symbolic(2, 1, Scalar::q(), Scalar(0)));
  EXPECT_EQ(z.d, quantum_dims(EigenvalueProfile::symbolic(2, 1)).d);
}
