#pragma once

// Hecke symmetries, their skew-inverse, R-traces and bi-rank detection.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qorbit/errors.hpp"
#include "qorbit/linalg.hpp"
#include "qorbit/scalar.hpp"

namespace qorbit {

struct HeckeSymmetry {
  std::size_t N = 0;
  Scalar q;
  TensorOp R, Rinv;
  TensorOp Psi;
  MatrixS B, C;
  std::vector<int> parity;  // empty unless built as a graded symmetry
  std::string provenance;

  Scalar xi() const { return q - q.inverse(); }
  /// R_i on V^{⊗k} (1-based position).
  TensorOp R_at(std::size_t i, std::size_t k) const { return embed_at(R, i, k); }
  TensorOp Rinv_at(std::size_t i, std::size_t k) const { return embed_at(Rinv, i, k); }
};

inline TensorOp ybe_residual(const TensorOp& R) {
  TensorOp r12 = embed_at(R, 1, 3), r23 = embed_at(R, 2, 3);
  return r12 * r23 * r12 - r23 * r12 * r23;
}

inline TensorOp hecke_residual(const TensorOp& R, const Scalar& q) {
  TensorOp id = TensorOp::identity(R.N, 2);
  return (q * id - R) * (q.inverse() * id + R);
}

/// Solves Tr₂ R₁₂Ψ₂₃ = σ₁₃ for Ψ. The system splits into one N²×N² block:
/// M[(a,c),(b,x)] = R[(a x),(c b)] and Ψ[(b y),(x z)] = M⁻¹[(b,x),(z,y)].
inline TensorOp skew_inverse(const TensorOp& R) {
  std::size_t N = R.N, N2 = N * N;
  MatrixS M(N2, N2);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t c = 0; c < N; ++c)
      for (std::size_t b = 0; b < N; ++b)
        for (std::size_t x = 0; x < N; ++x) M(a * N + c, b * N + x) = R.m(a * N + x, c * N + b);
  MatrixS Mi;
  try {
    Mi = inverse(M);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularMatrix) throw;
    fail(ErrorKind::NotSkewInvertible, "R is not skew-invertible");
  }
  MatrixS psi(N2, N2);
  for (std::size_t b = 0; b < N; ++b)
    for (std::size_t y = 0; y < N; ++y)
      for (std::size_t x = 0; x < N; ++x)
        for (std::size_t z = 0; z < N; ++z) psi(b * N + y, x * N + z) = Mi(b * N + x, z * N + y);
  return TensorOp(N, 2, std::move(psi));
}

/// Tr₂(R₁₂Ψ₂₃) − σ₁₃ computed from the full product.
inline TensorOp skew_residual(const TensorOp& R, const TensorOp& Psi) {
  TensorOp t = partial_trace(embed_at(R, 1, 3) * embed_at(Psi, 2, 3), 2);
  return t - flip(R.N);
}

/// Validates R and computes Ψ, B = Tr₁Ψ, C = Tr₂Ψ.
inline HeckeSymmetry make_hecke(TensorOp R, Scalar q, std::string provenance, std::vector<int> parity = {}) {
  if (R.arity != 2) fail(ErrorKind::DimensionMismatch, "R must act on V⊗V");
  if (q.is_zero()) fail(ErrorKind::BadDeformationParameter, "q must be nonzero");
  if (!ybe_residual(R).m.is_zero()) fail(ErrorKind::NotYangBaxter, "braid relation fails for " + provenance);
  if (!hecke_residual(R, q).m.is_zero()) fail(ErrorKind::NotHecke, "Hecke condition fails for " + provenance);
  HeckeSymmetry hs;
  hs.N = R.N;
  hs.q = q;
  hs.Rinv = R - (q - q.inverse()) * TensorOp::identity(R.N, 2);
  hs.R = std::move(R);
  hs.Psi = skew_inverse(hs.R);
  if (!skew_residual(hs.R, hs.Psi).m.is_zero())
    fail(ErrorKind::NotSkewInvertible, "skew-inverse residual is nonzero for " + provenance);
  hs.B = partial_trace(hs.Psi, 1).m;
  hs.C = partial_trace(hs.Psi, 2).m;
  hs.parity = std::move(parity);
  hs.provenance = std::move(provenance);
  return hs;
}

namespace builtin {

inline HeckeSymmetry flip(std::size_t N) {
  if (N < 1) fail(ErrorKind::InvalidArgument, "N must be >= 1");
  return make_hecke(qorbit::flip(N), Scalar(1), "flip(" + std::to_string(N) + ")");
}

/// Even indices first: p(i) = 0 for i < m, 1 otherwise.
inline std::vector<int> parities(std::size_t m, std::size_t n) {
  std::vector<int> p(m + n, 0);
  for (std::size_t i = m; i < m + n; ++i) p[i] = 1;
  return p;
}

inline HeckeSymmetry superflip(std::size_t m, std::size_t n) {
  std::size_t N = m + n;
  if (N < 1) fail(ErrorKind::InvalidArgument, "m + n must be >= 1");
  auto p = parities(m, n);
  MatrixS s(N * N, N * N);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) s(a * N + b, b * N + a) = Scalar((p[a] && p[b]) ? -1 : 1);
  return make_hecke(TensorOp(N, 2, std::move(s)), Scalar(1),
                    "superflip(" + std::to_string(m) + "," + std::to_string(n) + ")", p);
}

/// Graded Drinfeld–Jimbo braiding; q_super(N, 0, q) is the GL(N) one.
inline HeckeSymmetry q_super(std::size_t m, std::size_t n, const Scalar& q) {
  std::size_t N = m + n;
  if (N < 1) fail(ErrorKind::InvalidArgument, "m + n must be >= 1");
  auto p = parities(m, n);
  Scalar xi = q - q.inverse();
  MatrixS r(N * N, N * N);
  for (std::size_t i = 0; i < N; ++i) {
    r(i * N + i, i * N + i) = p[i] ? -q.inverse() : q;
    for (std::size_t j = 0; j < N; ++j) {
      if (i == j) continue;
      r(j * N + i, i * N + j) = Scalar((p[i] && p[j]) ? -1 : 1);
      if (i < j) r(i * N + j, i * N + j) = xi;
    }
  }
  std::string name = n == 0 ? "dj_gl(" + std::to_string(m) + ")" : "q_super(" + std::to_string(m) + "," + std::to_string(n) + ")";
  return make_hecke(TensorOp(N, 2, std::move(r)), q, name, n == 0 ? std::vector<int>{} : p);
}

inline HeckeSymmetry dj_gl(std::size_t N, const Scalar& q) { return q_super(N, 0, q); }

}  // namespace builtin

// ---------------------------------------------------------------------------
// R-traces

/// Tr(M·C) for an N×N matrix over any coefficient algebra T.
template <class T>
T rtrace(const Matrix<T>& M, const HeckeSymmetry& hs) {
  if (M.rows() != hs.N || M.cols() != hs.N) fail(ErrorKind::DimensionMismatch, "rtrace needs an N×N matrix");
  T acc{};
  for (std::size_t a = 0; a < hs.N; ++a)
    for (std::size_t b = 0; b < hs.N; ++b)
      if (!hs.C(b, a).is_zero() && !M(a, b).is_zero()) acc += M(a, b) * hs.C(b, a);
  return acc;
}

/// Tr(op·C^{⊗k}).
inline Scalar multitrace(const TensorOp& op, const HeckeSymmetry& hs) {
  if (op.N != hs.N) fail(ErrorKind::DimensionMismatch, "operator and symmetry dimensions differ");
  std::size_t k = op.arity, D = op.m.rows(), N = hs.N;
  Scalar acc;
  // (C^{⊗k})[(b),(a)] = Π C[b_i][a_i]
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t b = 0; b < D; ++b) {
      const Scalar& x = op.m(a, b);
      if (x.is_zero()) continue;
      Scalar c(1);
      std::size_t aa = a, bb = b;
      for (std::size_t i = 0; i < k && !c.is_zero(); ++i) {
        c *= hs.C(bb % N, aa % N);
        aa /= N;
        bb /= N;
      }
      if (!c.is_zero()) acc += x * c;
    }
  return acc;
}

/// Tr_R(R_i^{±1} M) − Tr_R(M R_i^{±1}) for every position i; all zero when
/// the R-trace is cyclic.
inline std::vector<Scalar> cyclicity_residuals(const TensorOp& M, const HeckeSymmetry& hs) {
  std::vector<Scalar> out;
  for (std::size_t i = 1; i < M.arity; ++i)
    for (const TensorOp* r : {&hs.R, &hs.Rinv}) {
      TensorOp ri = embed_at(*r, i, M.arity);
      out.push_back(multitrace(ri * M, hs) - multitrace(M * ri, hs));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Bi-rank

struct RationalSeries {
  std::vector<Scalar> numerator;    // coefficients in t, ascending
  std::vector<Scalar> denominator;  // constant term 1
};

struct BiRankReport {
  std::vector<std::size_t> plus_dims, minus_dims;  // dim Sym^k, dim Λ^k for k = 0..depth
  RationalSeries minus_series;
  std::size_t m = 0, n = 0;
  std::size_t depth = 0;
};

namespace detail {

/// Dimensions of ∩_i ker (X_i)^T on V^{⊗k}, k = 0..depth. This is the
/// annihilator of Σ_i V^{⊗(i-1)}⊗Im X⊗V^{⊗(k-i-1)}, so its dimension equals
/// that of the quotient of V^{⊗k} by the span of the images.
inline std::vector<std::size_t> quotient_dims(const TensorOp& X, std::size_t depth) {
  std::size_t N = X.N;
  TensorOp Xt(N, 2, X.m.transpose());
  std::vector<std::size_t> dims{1};
  if (depth == 0) return dims;
  dims.push_back(N);
  // Basis of K_1 = V.
  std::vector<SparseVec> basis;
  for (std::size_t i = 0; i < N; ++i) basis.push_back({{i, Scalar(1)}});
  for (std::size_t k = 2; k <= depth; ++k) {
    std::size_t len = ipow(N, k);
    check_memory(len, "bi-rank tensor space");
    // Candidates (K_{k-1} ⊗ e_j) and their images under X^T on the last pair.
    std::vector<SparseVec> cand;
    SparseEchelon ech(true);
    std::vector<SparseVec> next;
    for (const auto& v : basis)
      for (std::size_t j = 0; j < N; ++j) {
        SparseVec w;
        w.reserve(v.size());
        for (const auto& [idx, x] : v) w.emplace_back(idx * N + j, x);
        // Image under X^T acting on factors k-1, k.
        std::map<std::size_t, Scalar> img;
        for (const auto& [idx, x] : w) {
          std::size_t hi = idx / (N * N), col = idx % (N * N);
          for (std::size_t row = 0; row < N * N; ++row) {
            const Scalar& e = Xt.m(row, col);
            if (!e.is_zero()) img[hi * N * N + row] += e * x;
          }
        }
        SparseVec sv;
        for (auto& [i, x] : img)
          if (!x.is_zero()) sv.emplace_back(i, std::move(x));
        cand.push_back(std::move(w));
        if (!ech.insert(sv)) {
          // Dependent image: the tracked combination gives a kernel vector.
          auto c = ech.express(sv);
          SparseVec kv = cand.back();
          for (const auto& [g, coef] : *c) kv = axpy(kv, -coef, cand[g]);
          next.push_back(std::move(kv));
        }
      }
    basis = std::move(next);
    dims.push_back(basis.size());
    if (basis.empty()) {
      while (dims.size() <= depth) dims.push_back(0);
      break;
    }
  }
  return dims;
}

/// Smallest-degree rational function a(t)/b(t), b(0) = 1, matching the
/// series through t^D with at least one spare equation. Ties go to the
/// smaller numerator degree.
inline std::optional<RationalSeries> reconstruct(const std::vector<Scalar>& c, std::size_t D) {
  for (std::size_t total = 0; total + 1 <= D; ++total)
    for (std::size_t b = 0; b <= total; ++b) {
      std::size_t a = total - b;
      if (D < a + b + 1) continue;
      // Unknowns β_1..β_b: Σ_{j=0}^{b} β_j c_{i-j} = 0 for i = a+1..D (β_0 = 1).
      std::size_t eqs = D - a;
      MatrixS sys(eqs, b + 1);
      for (std::size_t e = 0; e < eqs; ++e) {
        std::size_t i = a + 1 + e;
        for (std::size_t j = 1; j <= b; ++j)
          if (i >= j) sys(e, j - 1) = c[i - j];
        sys(e, b) = -c[i];
      }
      RowReduced rr = rowreduce(sys);
      if (!rr.pivots.empty() && rr.pivots.back() == b) continue;  // inconsistent
      if (rr.rank() < b) continue;                                  // not unique
      RationalSeries out;
      out.denominator.assign(b + 1, Scalar());
      out.denominator[0] = Scalar(1);
      for (std::size_t r = 0; r < rr.rank(); ++r) out.denominator[rr.pivots[r] + 1] = rr.rref(r, b);
      out.numerator.assign(a + 1, Scalar());
      for (std::size_t i = 0; i <= a; ++i)
        for (std::size_t j = 0; j <= std::min(i, b); ++j) out.numerator[i] += out.denominator[j] * c[i - j];
      if (!out.numerator.back().is_zero() && !out.denominator.back().is_zero()) return out;
    }
  return std::nullopt;
}

}  // namespace detail

/// Hilbert–Poincaré series of the R-symmetric and R-skew-symmetric algebras
/// through t^depth and the bi-rank read off the reconstructed P₋(t).
inline BiRankReport birank(const HeckeSymmetry& hs, std::size_t depth) {
  if (depth < 2) fail(ErrorKind::InvalidArgument, "depth must be >= 2");
  for (std::size_t k = 1; k <= depth; ++k)
    if (qnumber(static_cast<long>(k)).is_zero() ||
        (hs.q.is_rational() && sgn(qnumber_at(static_cast<long>(k), hs.q.rational())) == 0))
      fail(ErrorKind::BadDeformationParameter, std::to_string(k) + "_q vanishes");
  TensorOp id = TensorOp::identity(hs.N, 2);
  BiRankReport rep;
  rep.depth = depth;
  rep.minus_dims = detail::quotient_dims(hs.q.inverse() * id + hs.R, depth);
  rep.plus_dims = detail::quotient_dims(hs.q * id - hs.R, depth);
  std::vector<Scalar> c;
  for (auto d : rep.minus_dims) c.emplace_back(static_cast<long>(d));
  auto r1 = detail::reconstruct(c, depth - 1);
  auto r2 = detail::reconstruct(c, depth);
  if (!r1 || !r2 || r1->numerator != r2->numerator || r1->denominator != r2->denominator)
    fail(ErrorKind::InconclusiveDepth, "series did not stabilize by depth " + std::to_string(depth));
  rep.minus_series = *r2;
  rep.m = r2->numerator.size() - 1;
  rep.n = r2->denominator.size() - 1;
  return rep;
}

}  // namespace qorbit
