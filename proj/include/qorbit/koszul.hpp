#pragma once

// Differential calculus on L^{⊗k} for k = 2, 3: the hatted bases
// L₁L_2̄(L_3̄), the operator Q, the projectors P±⁽²⁾ and P₊⁽³⁾, trace
// vectors of Tr_R L^k and the first differential d₁.
//
// Coordinates on L^{⊗k} are word codes (see ncpoly.hpp). The hatted basis
// element (L₁L_2̄…)_I^J has the index of the word whose t-th letter is
// I_t·N + J_t.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qorbit/errors.hpp"
#include "qorbit/hecke.hpp"
#include "qorbit/linalg.hpp"
#include "qorbit/ncpoly.hpp"
#include "qorbit/rea.hpp"

namespace qorbit {

/// k_q = q^{k−1} + q^{k−3} + … + q^{1−k}; defined at q = ±1 too.
inline Scalar qnum(long k, const Scalar& q) {
  Scalar s;
  for (long j = 0; j < k; ++j) s += q.pow(k - 1 - 2 * j);
  return s;
}

/// Hatted index of (I, J), both multi-indices on V^{⊗k}.
inline std::size_t hatted_index(std::size_t N, std::size_t k, std::size_t I, std::size_t J) {
  std::size_t code = 0;
  for (std::size_t t = k; t-- > 0;) {
    std::size_t p = ipow(N, t);
    code = code * N * N + ((I / p) % N) * N + (J / p) % N;
  }
  return code;
}

struct HattedBasis {
  std::size_t N = 0, k = 0;
  NCMatrix elements;  // (L₁L_2̄…)(I, J) on V^{⊗k}

  std::size_t dim() const { return ipow(N * N, k); }

  /// Word coordinates of Σ hat(I,J)·(L₁L_2̄…)_I^J.
  VectorS to_standard(const VectorS& hat) const {
    if (hat.size() != dim()) fail(ErrorKind::DimensionMismatch, "hatted vector has wrong size");
    VectorS out(dim());
    std::size_t M = ipow(N, k);
    for (std::size_t I = 0; I < M; ++I)
      for (std::size_t J = 0; J < M; ++J) {
        const Scalar& c = hat[hatted_index(N, k, I, J)];
        if (c.is_zero()) continue;
        for (const auto& [w, x] : elements(I, J).terms()) out[w.code] += c * x;
      }
    return out;
  }

  /// T_k: column h is the hatted basis vector h in word coordinates.
  MatrixS matrix() const {
    std::size_t D = dim(), M = ipow(N, k);
    check_memory(D * D, "hatted basis matrix");
    MatrixS T(D, D);
    for (std::size_t I = 0; I < M; ++I)
      for (std::size_t J = 0; J < M; ++J)
        for (const auto& [w, x] : elements(I, J).terms()) T(w.code, hatted_index(N, k, I, J)) = x;
    return T;
  }
};

/// L₁L_2̄ (k = 2) or L₁L_2̄L_3̄ (k = 3) with L_{i+1}̄ = R_i L_ī R_i⁻¹.
inline HattedBasis hatted_basis(const HeckeSymmetry& hs, std::size_t k) {
  if (k != 2 && k != 3) fail(ErrorKind::InvalidArgument, "hatted basis is built for arity 2 or 3");
  std::size_t N = hs.N, M = ipow(N, k), rest = ipow(N, k - 1);
  NCMatrix L = generator_matrix(N), L1(M, M);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t t = 0; t < rest; ++t) L1(a * rest + t, b * rest + t) = L(a, b);
  NCMatrix prod = L1, bar = L1;
  for (std::size_t i = 1; i < k; ++i) {
    bar = lift(hs.R_at(i, k).m) * bar * lift(hs.Rinv_at(i, k).m);
    prod = prod * bar;
  }
  return HattedBasis{N, k, std::move(prod)};
}

/// X ↦ R_pos X R_pos⁻¹ on hatted coordinates: h_I^J ↦ Σ R_I^K h_K^M (R⁻¹)_M^J.
/// With `inverse` the conjugation by R_pos⁻¹.
inline MatrixS hatted_conjugation(const HeckeSymmetry& hs, std::size_t k, std::size_t pos, bool inverse = false) {
  std::size_t N = hs.N, M = ipow(N, k), D = M * M;
  check_memory(D * D, "hatted conjugation");
  MatrixS A = (inverse ? hs.Rinv_at(pos, k) : hs.R_at(pos, k)).m;
  MatrixS B = (inverse ? hs.R_at(pos, k) : hs.Rinv_at(pos, k)).m;
  MatrixS Qt(D, D);
  for (std::size_t I = 0; I < M; ++I)
    for (std::size_t K = 0; K < M; ++K) {
      if (A(I, K).is_zero()) continue;
      for (std::size_t J = 0; J < M; ++J)
        for (std::size_t Mi = 0; Mi < M; ++Mi)
          if (!B(Mi, J).is_zero()) Qt(hatted_index(N, k, K, Mi), hatted_index(N, k, I, J)) += A(I, K) * B(Mi, J);
    }
  return Qt;
}

namespace detail {

inline VectorS axpy(VectorS a, const Scalar& f, const VectorS& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!b[i].is_zero()) a[i] += f * b[i];
  return a;
}

inline VectorS scaled(const Scalar& f, VectorS a) {
  for (auto& x : a) x *= f;
  return a;
}

}  // namespace detail

struct ProjectorOptions {
  std::size_t exact_max_N = 2;  // larger N checks arity-3 axioms on sample vectors
  std::uint64_t seed = 42;
  std::size_t trials = 2;
};

struct ProjectorSet {
  std::size_t N = 0;
  Scalar q;
  Scalar a, b, c3;  // P₊⁽³⁾ = c3·(P P P P P − a·P P P + b·P)
  HattedBasis hat2;
  MatrixS T2, T2inv;
  MatrixS Q, Qinv, Pplus, Pminus;  // on L⊗L in word coordinates
  bool arity3_exact = false;
  std::size_t arity3_samples = 0;

  /// P₊ᵢ⁽²⁾ on L^{⊗3} (i = 1, 2).
  VectorS p2(std::size_t pos, const VectorS& v) const { return apply_at(op_, pos, 3, v); }

  /// P₊⁽³⁾ by the displayed expression starting with P₊₁ (line 1) or P₊₂ (line 2).
  VectorS p3(const VectorS& v, int line = 1) const {
    std::size_t s = line == 1 ? 1 : 2, t = 3 - s;
    VectorS w1 = p2(s, v);
    VectorS w3 = p2(s, p2(t, w1));
    VectorS w5 = p2(s, p2(t, w3));
    return detail::scaled(c3, detail::axpy(detail::axpy(w5, -a, w3), b, w1));
  }

 private:
  TensorOp op_;
  friend ProjectorSet build_projectors(const HeckeSymmetry&, const ProjectorOptions&);
};

inline ProjectorSet build_projectors(const HeckeSymmetry& hs, const ProjectorOptions& opt = {}) {
  const Scalar& q = hs.q;
  Scalar two = qnum(2, q), three = qnum(3, q);
  if (two.is_zero() || three.is_zero()) fail(ErrorKind::BadDeformationParameter, "2_q or 3_q vanishes");
  ProjectorSet ps;
  ps.N = hs.N;
  ps.q = q;
  std::size_t G = hs.N * hs.N, D = G * G;
  ps.hat2 = hatted_basis(hs, 2);
  ps.T2 = ps.hat2.matrix();
  ps.T2inv = inverse(ps.T2);
  ps.Q = ps.T2 * hatted_conjugation(hs, 2, 1) * ps.T2inv;
  ps.Qinv = ps.T2 * hatted_conjugation(hs, 2, 1, true) * ps.T2inv;
  MatrixS I = MatrixS::identity(D);
  Scalar inv2 = two.pow(-2);
  ps.Pplus = inv2 * ((q.pow(2) + q.pow(-2)) * I + ps.Q + ps.Qinv);
  ps.Pminus = inv2 * (Scalar(2) * I - ps.Q - ps.Qinv);
  ps.a = (q.pow(4) + q.pow(2) + Scalar(4) + q.pow(-2) + q.pow(-4)) / two.pow(4);
  ps.b = qnum(4, q).pow(2) / two.pow(8);
  ps.c3 = two.pow(6) / (Scalar(4) * three.pow(2));
  ps.op_ = TensorOp(G, 2, ps.Pplus);

  auto require = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::ProjectorAxiomFailed, what);
  };
  require(ps.Q * ps.Qinv == I, "Q·Q⁻¹ ≠ Id");
  require(ps.Pplus * ps.Pplus == ps.Pplus, "P₊⁽²⁾ is not idempotent");
  require(ps.Pminus * ps.Pminus == ps.Pminus, "P₋⁽²⁾ is not idempotent");
  require(ps.Pplus + ps.Pminus == I, "P₊⁽²⁾ + P₋⁽²⁾ ≠ Id");

  std::size_t D3 = D * G;
  auto check3 = [&](const VectorS& v) {
    VectorS p = ps.p3(v, 1);
    require(p == ps.p3(v, 2), "the two expressions for P₊⁽³⁾ differ");
    require(ps.p3(p) == p, "P₊⁽³⁾ is not idempotent");
    require(ps.p3(ps.p2(1, v)) == p, "P₊⁽³⁾P₊₁⁽²⁾ ≠ P₊⁽³⁾");
    require(ps.p3(ps.p2(2, v)) == p, "P₊⁽³⁾P₊₂⁽²⁾ ≠ P₊⁽³⁾");
  };
  if (hs.N <= opt.exact_max_N) {
    ps.arity3_exact = true;
    for (std::size_t c = 0; c < D3; ++c) {
      VectorS e(D3);
      e[c] = Scalar(1);
      check3(e);
    }
  } else {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<long> dist(-9, 9);
    for (std::size_t t = 0; t < opt.trials; ++t) {
      VectorS v(D3);
      for (auto& x : v) x = Scalar(dist(rng));
      check3(v);
      ++ps.arity3_samples;
    }
  }
  return ps;
}

// ---------------------------------------------------------------------------
// Trace vectors.

/// Hatted coordinates of Tr_{R(1..k)}(L₁L_2̄… X) = Σ (L₁L_2̄…)_I^J (X·C^{⊗k})_J^I.
inline VectorS structure_trace_vector(const HeckeSymmetry& hs, const TensorOp& X) {
  std::size_t N = hs.N, k = X.arity, M = ipow(N, k);
  MatrixS Ck = hs.C;
  for (std::size_t t = 1; t < k; ++t) Ck = kron(Ck, hs.C);
  MatrixS Y = X.m * Ck;
  VectorS v(M * M);
  for (std::size_t I = 0; I < M; ++I)
    for (std::size_t J = 0; J < M; ++J) v[hatted_index(N, k, I, J)] = Y(J, I);
  return v;
}

/// Tr_R L² ≡ Tr_{R(12)}(L₁L_2̄R₁), Tr_R L³ ≡ Tr_{R(123)}(L₁L_2̄L_3̄R₂R₁).
inline VectorS trace_vector(std::size_t k, const HeckeSymmetry& hs) {
  if (k == 2) return structure_trace_vector(hs, hs.R_at(1, 2));
  if (k == 3) return structure_trace_vector(hs, hs.R_at(2, 3) * hs.R_at(1, 3));
  fail(ErrorKind::InvalidArgument, "trace vectors are defined for k = 2, 3");
}

inline VectorS word_vector(const NCPoly& p, std::uint32_t d) {
  std::size_t G = p.N() * p.N();
  return dense_from_sparse(p.coefficients(d), ipow(G, d));
}

/// The hatted trace vector and power_sum_element(k) give the same element.
inline bool trace_routes_agree(std::size_t k, const HeckeSymmetry& hs) {
  HattedBasis hb = hatted_basis(hs, k);
  return hb.to_standard(trace_vector(k, hs)) == word_vector(power_sum_element(unsigned(k), hs), unsigned(k));
}

// ---------------------------------------------------------------------------
// Identities.

struct KoszulReport {
  std::string name;
  bool passed = true;
  SparseVec residual;  // word coordinates
};

inline KoszulReport compare(std::string name, const VectorS& lhs, const VectorS& rhs) {
  KoszulReport r{std::move(name), true, {}};
  r.residual = sparse_from_dense(detail::axpy(lhs, Scalar(-1), rhs));
  r.passed = r.residual.empty();
  return r;
}

/// k = 2: P₊⁽²⁾v = v; k = 3: P₊⁽³⁾v = P₊₂⁽²⁾v, for v the trace vector of Tr_R L^k.
inline KoszulReport conjecture1_check(std::size_t k, const ProjectorSet& ps, const HeckeSymmetry& hs) {
  VectorS v = hatted_basis(hs, k).to_standard(trace_vector(k, hs));
  if (k == 2) return compare("conjecture1 k=2", ps.Pplus.apply(v), v);
  if (k == 3) return compare("conjecture1 k=3", ps.p3(v), ps.p2(2, v));
  fail(ErrorKind::InvalidArgument, "conjecture check is implemented for k = 2, 3");
}

/// The action of P₊ᵢ⁽²⁾ on R-matrix structures under Tr_{R(123)}, row by row.
inline std::vector<KoszulReport> p2_action_identity(const ProjectorSet& ps, const HeckeSymmetry& hs) {
  HattedBasis hb = hatted_basis(hs, 3);
  auto sv = [&](const TensorOp& X) { return hb.to_standard(structure_trace_vector(hs, X)); };
  TensorOp R1 = hs.R_at(1, 3), R2 = hs.R_at(2, 3);
  Scalar xi = hs.xi(), inv2 = qnum(2, hs.q).pow(-2);
  TensorOp R121 = R1 * R2 * R1, sym = R1 * R2 + R2 * R1;
  TensorOp IA = R121 + R1 + R2;
  TensorOp IB = sym - xi * (R1 + R2);
  TensorOp target = Scalar(2) * sym - xi * R1 + xi * R121;

  std::vector<KoszulReport> rows;
  rows.push_back(compare("P+2 on Tr_R L^3", ps.p2(2, sv(R2 * R1)), detail::scaled(inv2, sv(target))));
  rows.push_back(compare("structure rewrite", sv(target), sv(xi * IA + Scalar(2) * IB + xi * R2)));
  VectorS a = sv(IA), b = sv(IB);
  rows.push_back(compare("I_A fixed by P+1", ps.p2(1, a), a));
  rows.push_back(compare("I_A fixed by P+2", ps.p2(2, a), a));
  rows.push_back(compare("I_B fixed by P+1", ps.p2(1, b), b));
  rows.push_back(compare("I_B fixed by P+2", ps.p2(2, b), b));
  rows.push_back(compare("table R1", ps.p2(1, sv(R1)), sv(R1)));
  rows.push_back(compare("table R2", ps.p2(1, sv(R2)),
                         detail::scaled(inv2, sv(Scalar(2) * IA - xi * IB - (xi * xi + Scalar(2)) * R1))));
  rows.push_back(compare("table R1R2R1", ps.p2(1, sv(R121)),
                         detail::scaled(inv2, sv((xi * xi + Scalar(2)) * IA + xi * IB - Scalar(2) * R1))));
  rows.push_back(compare("table R1R2+R2R1", ps.p2(1, sv(sym)),
                         detail::scaled(inv2, sv(Scalar(2) * xi * IA + Scalar(4) * IB + Scalar(2) * xi * R1))));
  return rows;
}

/// d₁(Tr_R L^k) = Σ d(l_i^j) ⊗ (L^{k−1}C)_j^i; pairs are (l_i^j, cofactor),
/// ordered by generator i·N + j.
inline std::vector<std::pair<NCPoly, NCPoly>> differential_d1(const HeckeSymmetry& hs, unsigned k) {
  if (k < 1) fail(ErrorKind::InvalidArgument, "d₁ needs k ≥ 1");
  std::size_t N = hs.N;
  NCMatrix LC = power(generator_matrix(N), k - 1) * lift(hs.C);
  std::vector<std::pair<NCPoly, NCPoly>> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out.emplace_back(NCPoly::gen(N, i, j), LC(j, i));
  return out;
}

/// r = 2: Sym² → Λ¹⊗Sym¹ → Λ²; x ↦ 2·P₊x ↦ 2·P₋P₊x, checked on every basis word.
inline KoszulReport d_squared_check_r2(const ProjectorSet& ps) {
  MatrixS dd = Scalar(2) * (ps.Pminus * ps.Pplus);
  KoszulReport r{"d^2 r=2", true, {}};
  for (std::size_t c = 0; c < dd.cols() && r.passed; ++c) {
    VectorS col(dd.rows());
    for (std::size_t i = 0; i < dd.rows(); ++i) col[i] = dd(i, c);
    r.residual = sparse_from_dense(col);
    r.passed = r.residual.empty();
  }
  return r;
}

}  // namespace qorbit
