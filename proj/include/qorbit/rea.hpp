#pragma once

// Reflection equation algebras. Equality in the quotient is tested by linear
// algebra on graded (or filtered) components of the free algebra.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qorbit/errors.hpp"
#include "qorbit/hecke.hpp"
#include "qorbit/linalg.hpp"
#include "qorbit/ncpoly.hpp"
#include "qorbit/scalar.hpp"
#include "qorbit/symfun.hpp"

namespace qorbit {

inline constexpr std::size_t kDefaultDegreeCap = 1000000;

enum class RelationKind { Minus, Plus, Mrea };

/// R L₁ R L₁ ∓ L₁ R L₁ R^{±1}, or the mREA matrix RL₁RL₁ − L₁RL₁R − h(RL₁ − L₁R).
inline NCMatrix relation_matrix(const HeckeSymmetry& hs, RelationKind kind, const Scalar& h = Scalar()) {
  NCMatrix R = lift(hs.R.m), L1 = first_copy(generator_matrix(hs.N));
  NCMatrix RL = R * L1;
  switch (kind) {
    case RelationKind::Minus: return RL * RL - L1 * RL * R;
    case RelationKind::Plus: return RL * RL + L1 * RL * lift(hs.Rinv.m);
    case RelationKind::Mrea: return RL * RL - L1 * RL * R - h * (RL - L1 * R);
  }
  return {};
}

class RelationSpace {
 public:
  HeckeSymmetry hs;
  RelationKind kind = RelationKind::Minus;
  Scalar h;
  std::vector<NCPoly> relations;  // nonzero entries of the relation matrix
  std::vector<SparseVec> basis;   // echelon basis of the degree-2 parts

  std::size_t dim() const { return basis.size(); }

  /// Echelon form of Σᵢ Vⁱ⊗I⊗V^{d−2−i}, cached per degree.
  std::shared_ptr<const SparseEchelon> component(std::uint32_t d, std::size_t cap = kDefaultDegreeCap) const {
    std::uint64_t G = hs.N * hs.N;
    if (checked_pow(G, d) > cap)
      fail(ErrorKind::ResourceLimit, "degree " + std::to_string(d) + " component exceeds the cap of " + std::to_string(cap));
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->by_degree.find(d);
    if (it != cache_->by_degree.end()) return it->second;
    auto ech = std::make_shared<SparseEchelon>();
    for (std::uint32_t i = 0; d >= 2 && i + 2 <= d; ++i) {
      std::uint64_t nu = checked_pow(G, i), nw = checked_pow(G, d - 2 - i), step = nw;
      std::uint64_t shift_u = checked_pow(G, d - i);
      for (const auto& r : basis)
        for (std::uint64_t u = 0; u < nu; ++u)
          for (std::uint64_t w = 0; w < nw; ++w) {
            SparseVec v;
            v.reserve(r.size());
            for (const auto& [c, x] : r) v.emplace_back(static_cast<std::size_t>(u * shift_u + c * step + w), x);
            ech->insert(v);
          }
    }
    cache_->by_degree.emplace(d, ech);
    return ech;
  }

 private:
  struct Cache {
    std::mutex mu;
    std::map<std::uint32_t, std::shared_ptr<SparseEchelon>> by_degree;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

inline RelationSpace relation_space(const HeckeSymmetry& hs, RelationKind kind, const Scalar& h = Scalar()) {
  RelationSpace rs;
  rs.hs = hs;
  rs.kind = kind;
  rs.h = h;
  NCMatrix m = relation_matrix(hs, kind, h);
  SparseEchelon ech;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m(r, c).is_zero()) continue;
      rs.relations.push_back(m(r, c));
      SparseVec v = m(r, c).coefficients(2);
      SparseVec res = ech.reduce(v);
      if (!res.empty()) {
        ech.insert(v);
        rs.basis.push_back(std::move(v));
      }
    }
  return rs;
}

/// dim I₋ + dim I₊ = N⁴ and I₋ ∩ I₊ = 0.
inline bool complementary(const RelationSpace& minus, const RelationSpace& plus) {
  std::size_t N4 = ipow(minus.hs.N, 4);
  if (minus.dim() + plus.dim() != N4) return false;
  SparseEchelon ech;
  for (const auto& v : minus.basis) ech.insert(v);
  for (const auto& v : plus.basis) ech.insert(v);
  return ech.rank() == N4;
}

struct ZeroTest {
  bool zero = true;
  NCPoly residual;
};

/// l̂_i^j → l_i^j + (h/ξ)δ_i^j.
inline NCPoly shift_to_rea(const NCPoly& x, const Scalar& q, const Scalar& h) {
  Scalar xi = q - q.inverse();
  if (xi.is_zero()) fail(ErrorKind::ShiftUnavailable, "the shift isomorphism needs q ≠ ±1");
  std::size_t N = x.N();
  Scalar c = h / xi;
  std::vector<NCPoly> image(N * N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) image[i * N + j] = NCPoly::gen(N, i, j) + (i == j ? NCPoly(c) : NCPoly());
  NCPoly out;
  for (const auto& [w, coeff] : x.terms()) {
    NCPoly t(coeff);
    for (auto g : NCPoly::letters(N, w)) t = t * image[g];
    out += t;
  }
  return out;
}

/// Tests x ≡ 0 in the quotient by the ideal generated by rs. mREA spaces
/// are routed through the shift to the REA.
inline ZeroTest is_zero_mod(const NCPoly& x, const RelationSpace& rs, std::size_t cap = kDefaultDegreeCap) {
  if (rs.kind == RelationKind::Mrea) {
    if (rs.hs.q.is_one()) fail(ErrorKind::ShiftUnavailable, "q = 1: use super_pbw_reduce");
    RelationSpace plain = rs;
    plain.kind = RelationKind::Minus;
    return is_zero_mod(shift_to_rea(x, rs.hs.q, rs.h), plain, cap);
  }
  ZeroTest out;
  if (x.is_zero()) return out;
  for (std::uint32_t d = x.low_degree(); d <= x.degree(); ++d) {
    SparseVec v = x.coefficients(d);
    if (v.empty()) continue;
    SparseVec res = d < 2 ? v : rs.component(d, cap)->reduce(v);
    for (const auto& [c, s] : res) out.residual += NCPoly::word(rs.hs.N, Word{d, c}, s);
  }
  out.zero = out.residual.is_zero();
  return out;
}

// ---------------------------------------------------------------------------
// Filtered ideals: span of u·g·w with deg ≤ D, for inhomogeneous generators.

class FilteredIdeal {
 public:
  FilteredIdeal(std::size_t N, const std::vector<NCPoly>& gens, std::uint32_t D, std::size_t cap = kDefaultDegreeCap)
      : N_(N), G_(N * N), D_(D) {
    offset_.push_back(0);
    for (std::uint32_t d = 0; d <= D; ++d) offset_.push_back(offset_.back() + checked_pow(G_, d));
    if (offset_.back() > cap) fail(ErrorKind::ResourceLimit, "filtered space exceeds the cap");
    for (const auto& g : gens) {
      if (g.is_zero() || g.degree() > D) continue;
      std::uint32_t dg = g.degree();
      for (std::uint32_t a = 0; a + dg <= D; ++a)
        for (std::uint32_t b = 0; a + b + dg <= D; ++b) {
          std::uint64_t nu = checked_pow(G_, a), nw = checked_pow(G_, b);
          for (std::uint64_t u = 0; u < nu; ++u)
            for (std::uint64_t w = 0; w < nw; ++w) {
              SparseVec v;
              for (const auto& [wd, c] : g.terms()) {
                std::uint64_t code = (u * checked_pow(G_, wd.deg) + wd.code) * nw + w;
                v.emplace_back(index(a + wd.deg + b, code), c);
              }
              std::sort(v.begin(), v.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
              ech_.insert(v);
            }
        }
    }
  }

  std::uint32_t max_degree() const { return D_; }
  std::size_t rank() const { return ech_.rank(); }

  ZeroTest test(const NCPoly& x) const {
    if (x.degree() > D_) fail(ErrorKind::ResourceLimit, "element degree exceeds the filtration bound");
    SparseVec v;
    for (const auto& [w, c] : x.terms()) v.emplace_back(index(w.deg, w.code), c);
    std::sort(v.begin(), v.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    ZeroTest out;
    for (const auto& [idx, s] : ech_.reduce(v)) {
      std::uint64_t flat = offset_.back() - 1 - idx;
      std::uint32_t d = 0;
      while (offset_[d + 1] <= flat) ++d;
      out.residual += NCPoly::word(N_, Word{d, flat - offset_[d]}, s);
    }
    out.zero = out.residual.is_zero();
    return out;
  }

 private:
  std::size_t N_;
  std::uint64_t G_;
  std::uint32_t D_;
  std::vector<std::uint64_t> offset_;
  SparseEchelon ech_;

  // Highest degree first, so residuals are expressed in low-degree words.
  std::size_t index(std::uint32_t d, std::uint64_t code) const {
    return static_cast<std::size_t>(offset_.back() - 1 - (offset_[d] + code));
  }
};

// ---------------------------------------------------------------------------
// Power sums, centrality, CH identity.

/// Tr_R L^k = Σ (L^k)_a^b C^b_a as a degree-k element.
inline NCPoly power_sum_element(unsigned k, const HeckeSymmetry& hs) {
  std::size_t N = hs.N;
  if (k == 0) {
    Scalar t;
    for (std::size_t a = 0; a < N; ++a) t += hs.C(a, a);
    return NCPoly(t);
  }
  NCMatrix Lk = power(generator_matrix(N), k);
  NCPoly out;
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      if (!hs.C(b, a).is_zero()) out += hs.C(b, a) * Lk(a, b);
  return out;
}

struct CheckReport {
  bool passed = true;
  std::size_t checked = 0;
  std::string failure;  // first failing item
  NCPoly residual;
};

inline CheckReport centrality_check(unsigned k, const RelationSpace& rs, std::size_t cap = kDefaultDegreeCap) {
  const auto& hs = rs.hs;
  NCPoly p = power_sum_element(k, hs);
  CheckReport rep;
  for (std::size_t i = 0; i < hs.N; ++i)
    for (std::size_t j = 0; j < hs.N; ++j) {
      NCPoly l = NCPoly::gen(hs.N, i, j);
      ZeroTest t = is_zero_mod(p * l - l * p, rs, cap);
      ++rep.checked;
      if (!t.zero && rep.passed) {
        rep.passed = false;
        rep.failure = "[Tr_R L^" + std::to_string(k) + ", l" + std::to_string(i + 1) + "^" + std::to_string(j + 1) + "]";
        rep.residual = t.residual;
      }
    }
  return rep;
}

/// CH coefficients c_0..c_{m+n} as elements of the algebra.
inline std::vector<NCPoly> ch_coefficient_elements(const HeckeSymmetry& hs, int m, int n) {
  auto cs = ch_coefficients(m, n, hs.q);
  std::vector<SymExpr> ps;
  int K = 0;
  for (const auto& c : cs) {
    ps.push_back(to_power_sums(c, hs.q));
    K = std::max(K, ps.back().max_index());
  }
  std::vector<NCPoly> pv(K + 1);
  for (int k = 1; k <= K; ++k) pv[k] = power_sum_element(k, hs);
  std::vector<NCPoly> out;
  for (const auto& p : ps) out.push_back(p.substitute(pv, NCPoly(1)));
  return out;
}

/// Entries of Σ c_i(L)·L^{m+n−i}.
inline NCMatrix ch_matrix(const HeckeSymmetry& hs, int m, int n) {
  auto c = ch_coefficient_elements(hs, m, n);
  NCMatrix L = generator_matrix(hs.N), acc(hs.N, hs.N), Lp = NCMatrix::identity(hs.N);
  for (int i = m + n; i >= 0; --i) {
    for (std::size_t a = 0; a < hs.N; ++a)
      for (std::size_t b = 0; b < hs.N; ++b) acc(a, b) += c[i] * Lp(a, b);
    if (i > 0) Lp = Lp * L;
  }
  return acc;
}

inline CheckReport ch_verify(const RelationSpace& rs, int m, int n, std::size_t cap = kDefaultDegreeCap) {
  NCMatrix ch = ch_matrix(rs.hs, m, n);
  CheckReport rep;
  for (std::size_t a = 0; a < ch.rows(); ++a)
    for (std::size_t b = 0; b < ch.cols(); ++b) {
      ZeroTest t = is_zero_mod(ch(a, b), rs, cap);
      ++rep.checked;
      if (!t.zero && rep.passed) {
        rep.passed = false;
        rep.failure = "entry (" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")";
        rep.residual = t.residual;
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Hatted CH identity: the CH identity rewritten through L = L̂ − (h/ξ)I.

/// Coefficient of L̂^j (j = 0..m+n) as a polynomial in p̂_1, p̂_2, ...;
/// p̂_0 is the scalar trC.
inline std::vector<SymExpr> hatted_ch(int m, int n, const Scalar& q, const Scalar& h, const Scalar& trC) {
  Scalar c = -(h / (q - q.inverse()));  // L = L̂ + c·I
  auto binom = [](int a, int b) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), a, b);
    return Scalar(mpq_class(r));
  };
  auto cs = ch_coefficients(m, n, q);
  int M = m + n, K = 0;
  std::vector<SymExpr> ps;
  for (const auto& x : cs) {
    ps.push_back(to_power_sums(x, q));
    K = std::max(K, ps.back().max_index());
  }
  std::vector<SymExpr> pv(K + 1);
  for (int k = 1; k <= K; ++k) {
    SymExpr s(binom(k, 0) * c.pow(k) * trC, SymBasis::PowerSum);
    for (int j = 1; j <= k; ++j) s += (binom(k, j) * c.pow(k - j)) * SymExpr::gen(j, SymBasis::PowerSum);
    pv[k] = s;
  }
  std::vector<SymExpr> out(M + 1, SymExpr(Scalar(), SymBasis::PowerSum));
  SymExpr one(Scalar(1), SymBasis::PowerSum);
  for (int i = 0; i <= M; ++i) {
    SymExpr ci = ps[i].substitute(pv, one);
    int r = M - i;
    for (int j = 0; j <= r; ++j) out[j] += (binom(r, j) * c.pow(r - j)) * ci;
  }
  return out;
}

/// Substitutes q = 1 in every coefficient; fails with PoleAtPoint if a pole survives.
inline SymExpr at_q_one(const SymExpr& e) {
  std::array<std::optional<mpq_class>, kMaxSymbols> vals{};
  vals[0] = mpq_class(1);
  SymExpr out(Scalar(), e.basis());
  for (const auto& [mono, c] : e.terms()) {
    SymExpr t(c.specialize(vals), e.basis());
    for (int k : mono) t *= SymExpr::gen(k, e.basis());
    out += t;
  }
  return out;
}

/// Σ_j coeff_j(p̂)·L̂^j with p̂_k realized by power_sum_element (the hatted generators).
inline NCMatrix hatted_ch_matrix(const HeckeSymmetry& hs, const std::vector<SymExpr>& coeffs) {
  int K = 0;
  for (const auto& c : coeffs) K = std::max(K, c.max_index());
  std::vector<NCPoly> pv(K + 1);
  for (int k = 1; k <= K; ++k) pv[k] = power_sum_element(k, hs);
  NCMatrix L = generator_matrix(hs.N), acc(hs.N, hs.N), Lp = NCMatrix::identity(hs.N);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    NCPoly cj = coeffs[j].substitute(pv, NCPoly(1));
    for (std::size_t a = 0; a < hs.N; ++a)
      for (std::size_t b = 0; b < hs.N; ++b) acc(a, b) += cj * Lp(a, b);
    Lp = Lp * L;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// q = 1: straightening in U(gl(m|n)_h).

/// Rewriting system read off the reduced mREA relations at q = 1. Degree-2
/// words are ordered descending pairs first, so each pivot rewrites an
/// out-of-order pair into ordered pairs plus an h-linear tail.
class SuperPbw {
 public:
  SuperPbw(const HeckeSymmetry& hs, const Scalar& h) : N_(hs.N), G_(hs.N * hs.N) {
    if (!hs.q.is_one()) fail(ErrorKind::InvalidArgument, "straightening is defined at q = 1");
    NCMatrix rel = relation_matrix(hs, RelationKind::Mrea, h);
    // Column order: pairs (g1 > g2), then (g1 == g2), then (g1 < g2), then single letters.
    for (int pass = 0; pass < 3; ++pass)
      for (std::size_t a = 0; a < G_; ++a)
        for (std::size_t b = 0; b < G_; ++b)
          if ((pass == 0 && a > b) || (pass == 1 && a == b) || (pass == 2 && a < b)) cols_.push_back(Word{2, a * G_ + b});
    for (std::size_t a = 0; a < G_; ++a) cols_.push_back(Word{1, a});
    std::map<Word, std::size_t> index;
    for (std::size_t i = 0; i < cols_.size(); ++i) index[cols_[i]] = i;
    std::vector<VectorS> rows;
    for (std::size_t r = 0; r < rel.rows(); ++r)
      for (std::size_t c = 0; c < rel.cols(); ++c) {
        if (rel(r, c).is_zero()) continue;
        VectorS v(cols_.size());
        for (const auto& [w, x] : rel(r, c).terms()) {
          if (w.deg == 0) fail(ErrorKind::InvalidArgument, "relation with a constant term");
          v[index.at(w)] = x;
        }
        rows.push_back(std::move(v));
      }
    MatrixS m(rows.size(), cols_.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < cols_.size(); ++c) m(r, c) = rows[r][c];
    RowReduced rr = rowreduce(m);
    for (std::size_t r = 0; r < rr.pivots.size(); ++r) {
      Word lead = cols_[rr.pivots[r]];
      if (lead.deg != 2) fail(ErrorKind::IdentityFailed, "relations force a linear dependence among generators");
      NCPoly rhs;
      for (std::size_t c = rr.pivots[r] + 1; c < cols_.size(); ++c)
        if (!rr.rref(r, c).is_zero()) rhs -= NCPoly::word(N_, cols_[c], rr.rref(r, c));
      rules_.emplace(lead.code, std::move(rhs));
    }
  }

  std::size_t rule_count() const { return rules_.size(); }
  bool is_leading_pair(std::size_t g1, std::size_t g2) const { return rules_.count(g1 * G_ + g2) > 0; }

  NCPoly reduce(const NCPoly& x, std::size_t max_steps = 10000000) const {
    std::map<Word, Scalar> work(x.terms().begin(), x.terms().end());
    NCPoly out;
    std::size_t steps = 0;
    while (!work.empty()) {
      if (++steps > max_steps) fail(ErrorKind::ResourceLimit, "straightening did not terminate within the step limit");
      // Highest word first so that contributions to it are complete.
      auto it = std::prev(work.end());
      Word w = it->first;
      Scalar c = it->second;
      work.erase(it);
      auto ls = NCPoly::letters(N_, w);
      std::size_t t = 0;
      while (t + 1 < ls.size() && !is_leading_pair(ls[t], ls[t + 1])) ++t;
      if (t + 1 >= ls.size()) {
        out += NCPoly::word(N_, w, c);
        continue;
      }
      NCPoly pre = NCPoly::word(N_, NCPoly::from_letters(N_, {ls.begin(), ls.begin() + t}));
      NCPoly post = NCPoly::word(N_, NCPoly::from_letters(N_, {ls.begin() + t + 2, ls.end()}));
      NCPoly repl = c * (pre * rules_.at(ls[t] * G_ + ls[t + 1]) * post);
      for (const auto& [rw, rc] : repl.terms()) {
        auto [jt, inserted] = work.try_emplace(rw, rc);
        if (!inserted) {
          jt->second += rc;
          if (jt->second.is_zero()) work.erase(jt);
        }
      }
    }
    return out;
  }

 private:
  std::size_t N_, G_;
  std::vector<Word> cols_;
  std::map<std::uint64_t, NCPoly> rules_;
};

}  // namespace qorbit
