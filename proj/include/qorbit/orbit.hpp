#pragma once

// Braided orbits: the quotient of the REA (or mREA) fixing Tr_R L^k,
// k ≤ m+n, at parametrized values, and its cotangent idempotent.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qorbit/errors.hpp"
#include "qorbit/hecke.hpp"
#include "qorbit/linalg.hpp"
#include "qorbit/ncpoly.hpp"
#include "qorbit/rea.hpp"
#include "qorbit/scalar.hpp"
#include "qorbit/symfun.hpp"

namespace qorbit {

// ---------------------------------------------------------------------------
// Regularity

struct Violation {
  std::string kind;  // even-even, odd-odd, even-odd, coincident
  std::size_t i = 0, j = 0;  // 1-based
};

struct RegularityVerdict {
  bool regular = true;
  std::vector<Violation> violated;
  std::optional<Scalar> det;
};

/// The factors of the quantum dimensions must not vanish:
///   μ_i − q²μ_j + qh,  ν_i − q²ν_j + qh  (i ≠ j),  μ_i − q²ν_j + qh,
/// and the eigenvalues must be pairwise distinct. h = 0 when absent.
inline RegularityVerdict regularity(const EigenvalueProfile& pr) {
  if (pr.mu.size() != pr.m || pr.nu.size() != pr.n) fail(ErrorKind::DimensionMismatch, "eigenvalue counts do not match (m|n)");
  const Scalar& q = pr.q;
  Scalar q2 = q * q, qh = pr.h ? q * *pr.h : Scalar();
  RegularityVerdict v;
  auto add = [&](const char* kind, std::size_t i, std::size_t j) { v.violated.push_back({kind, i + 1, j + 1}); };
  for (std::size_t i = 0; i < pr.m; ++i)
    for (std::size_t j = 0; j < pr.m; ++j) {
      if (i == j) continue;
      if ((pr.mu[i] - q2 * pr.mu[j] + qh).is_zero()) add("even-even", i, j);
      if (i < j && pr.mu[i] == pr.mu[j]) add("coincident", i, j);
    }
  for (std::size_t i = 0; i < pr.n; ++i)
    for (std::size_t j = 0; j < pr.n; ++j) {
      if (i == j) continue;
      if ((pr.nu[i] - q2 * pr.nu[j] + qh).is_zero()) add("odd-odd", i, j);
      if (i < j && pr.nu[i] == pr.nu[j]) add("coincident", pr.m + i, pr.m + j);
    }
  for (std::size_t i = 0; i < pr.m; ++i)
    for (std::size_t j = 0; j < pr.n; ++j) {
      if ((pr.mu[i] - q2 * pr.nu[j] + qh).is_zero()) add("even-odd", i, j);
      if (pr.mu[i] == pr.nu[j]) add("coincident", i, pr.m + j);
    }
  v.regular = v.violated.empty();
  return v;
}

// ---------------------------------------------------------------------------
// Hankel matrix

inline MatrixS hankel(const EigenvalueProfile& pr) {
  std::size_t M = pr.m + pr.n;
  if (M == 0) fail(ErrorKind::InvalidArgument, "need m + n >= 1");
  auto p = power_sums_param(int(2 * M - 2), pr);
  MatrixS H(M, M);
  for (std::size_t k = 0; k < M; ++k)
    for (std::size_t l = 0; l < M; ++l) H(k, l) = p[k + l];
  return H;
}

/// Π d_i Π d'_j (Π_{i<j}(μ_i−μ_j) Π(μ_i−ν_j) Π_{i<j}(ν_i−ν_j))².
inline Scalar hankel_det_formula(const EigenvalueProfile& pr) {
  QuantumDims qd = quantum_dims(pr);
  Scalar prod(1), vd(1);
  for (const auto& d : qd.d) prod *= d;
  for (const auto& d : qd.dprime) prod *= d;
  for (std::size_t i = 0; i < pr.m; ++i)
    for (std::size_t j = i + 1; j < pr.m; ++j) vd *= pr.mu[i] - pr.mu[j];
  for (std::size_t i = 0; i < pr.m; ++i)
    for (std::size_t j = 0; j < pr.n; ++j) vd *= pr.mu[i] - pr.nu[j];
  for (std::size_t i = 0; i < pr.n; ++i)
    for (std::size_t j = i + 1; j < pr.n; ++j) vd *= pr.nu[i] - pr.nu[j];
  return prod * vd * vd;
}

struct DetStrategy {
  bool sampled = false;
  std::uint64_t seed = 42;
  int trials = 7;
};

struct DetCheck {
  bool passed = true;
  int points = 0;          // sampled points evaluated (0 for symbolic)
  std::string residual_point;  // first failing point
};

namespace detail {

inline Scalar random_rational(std::mt19937_64& rng) {
  long num = long(rng() % 1995) - 997, den = long(rng() % 97) + 1;
  if (num == 0) num = 1;
  return Scalar(mpq_class(num, den));
}

}  // namespace detail

inline DetCheck hankel_det_check(std::size_t m, std::size_t n, const DetStrategy& st) {
  DetCheck out;
  if (!st.sampled) {
    auto pr = EigenvalueProfile::symbolic(m, n);
    if (det(hankel(pr)) != hankel_det_formula(pr)) {
      out.passed = false;
      out.residual_point = "symbolic";
    }
    return out;
  }
  std::mt19937_64 rng(st.seed);
  while (out.points < st.trials) {
    EigenvalueProfile pr;
    pr.m = m;
    pr.n = n;
    pr.q = detail::random_rational(rng);
    for (std::size_t i = 0; i < m; ++i) pr.mu.push_back(detail::random_rational(rng));
    for (std::size_t j = 0; j < n; ++j) pr.nu.push_back(detail::random_rational(rng));
    if (!regularity(pr).regular) continue;
    ++out.points;
    if (det(hankel(pr)) != hankel_det_formula(pr)) {
      out.passed = false;
      std::string s = "q=" + pr.q.to_string();
      for (const auto& x : pr.mu) s += " mu=" + x.to_string();
      for (const auto& x : pr.nu) s += " nu=" + x.to_string();
      out.residual_point = s;
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gradient matrices. A row (j, i) ↦ j·N + i holds a^i_j(k) = (L^{k−1}·C)(j, i);
// B column (j, i) ↦ j·N + i holds b_i^j(k) = (L^{k−1})(i, j).

struct GradientMatrices {
  NCMatrix A, B;
};

inline GradientMatrices gradient_matrices(const HeckeSymmetry& hs, std::size_t K) {
  std::size_t N = hs.N;
  NCMatrix L = generator_matrix(N), Lp = NCMatrix::identity(N), C = lift(hs.C);
  GradientMatrices g{NCMatrix(N * N, K), NCMatrix(K, N * N)};
  for (std::size_t k = 0; k < K; ++k) {
    NCMatrix LC = Lp * C;
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t i = 0; i < N; ++i) {
        g.A(j * N + i, k) = LC(j, i);
        g.B(k, j * N + i) = Lp(i, j);
      }
    Lp = Lp * L;
  }
  return g;
}

/// (B·A)_{kl} = Tr_R L^{k+l−2} in the free algebra.
inline bool gradient_word_identity(const HeckeSymmetry& hs, const GradientMatrices& g) {
  NCMatrix BA = g.B * g.A;
  for (std::size_t k = 0; k < BA.rows(); ++k)
    for (std::size_t l = 0; l < BA.cols(); ++l)
      if (BA(k, l) != power_sum_element(unsigned(k + l), hs)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Power sums beyond m+n through the CH recurrence.

/// Tr_R I as a function of q alone (it does not depend on the eigenvalues).
inline Scalar trace_identity_symbolic(const EigenvalueProfile& pr) {
  EigenvalueProfile g = EigenvalueProfile::symbolic(pr.m, pr.n, Scalar::q());
  return power_sums_param(0, g)[0];
}

/// Values of the coefficients k_j of Σ_j k_j L^j = 0 (j = 0..m+n) on the profile;
/// for hatted profiles the shifted identity, with its q → 1 limit at q = 1.
inline std::vector<Scalar> recurrence_coefficients(const EigenvalueProfile& pr) {
  int m = int(pr.m), n = int(pr.n), M = m + n;
  std::vector<Scalar> out(M + 1);
  if (!pr.h) {
    auto c = ch_coefficients_param(pr);
    for (int j = 0; j <= M; ++j) out[j] = c[M - j];
    return out;
  }
  std::vector<SymExpr> coeffs;
  if (pr.q.is_one()) {
    Scalar trc = trace_identity_symbolic(pr);
    for (const auto& e : hatted_ch(m, n, Scalar::q(), *pr.h, trc)) coeffs.push_back(at_q_one(e));
  } else {
    coeffs = hatted_ch(m, n, pr.q, *pr.h, power_sums_param(0, pr)[0]);
  }
  int K = 1;
  for (const auto& e : coeffs) K = std::max(K, e.max_index());
  auto p = power_sums_param(K, pr);
  for (int j = 0; j <= M; ++j) out[j] = coeffs[j].substitute(p, Scalar(1));
  return out;
}

/// p_{m+n+1..K} from the recurrence, each checked against the parametrization.
inline std::vector<Scalar> higher_power_reduction(const EigenvalueProfile& pr, int K) {
  int M = int(pr.m + pr.n);
  auto k = recurrence_coefficients(pr);
  if (k[M].is_zero()) fail(ErrorKind::RecurrenceMismatch, "leading CH coefficient vanishes on the profile");
  auto param = power_sums_param(std::max(K, M), pr);
  std::vector<Scalar> p(param.begin(), param.begin() + M + 1), out;
  Scalar lead_inv = k[M].inverse();
  for (int t = M + 1; t <= K; ++t) {
    Scalar s;
    for (int j = 0; j < M; ++j) s += k[j] * p[t - M + j];
    Scalar next = -(s * lead_inv);
    if (next != param[t])
      fail(ErrorKind::RecurrenceMismatch, "recurrence disagrees with the parametrization at k = " + std::to_string(t));
    p.push_back(next);
    out.push_back(next);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cotangent idempotent

enum class OrbitMode { Braided, NC };

struct OrbitQuotient {
  std::string symmetry;
  EigenvalueProfile profile;
  std::vector<Scalar> values;  // p_1..p_{m+n}
  OrbitMode mode = OrbitMode::Braided;
};

struct CotangentData {
  GradientMatrices grad;
  MatrixS H, Hinv;
  NCMatrix ebar, e;
  bool word_identity = false;
  bool power_reduction = false;
  bool structural = false;
  bool entrywise_checked = false;
  bool entrywise_passed = false;
  std::uint32_t filtration_degree = 0;
  std::string certificate;
  std::string failure;
  NCPoly residual;
  bool verified() const { return structural && (!entrywise_checked || entrywise_passed); }
};

namespace detail {

inline std::size_t filtered_size(std::size_t N, std::uint32_t D) {
  std::size_t total = 0, term = 1;
  for (std::uint32_t d = 0; d <= D; ++d) {
    total += term;
    if (total > (std::size_t(1) << 40)) return total;
    term *= N * N;
  }
  return total;
}

inline CotangentData build_cotangent(const HeckeSymmetry& hs, const EigenvalueProfile& pr,
                                     const std::vector<NCPoly>& algebra_relations, std::size_t cap) {
  std::size_t M = pr.m + pr.n, N = hs.N;
  if (pr.q != hs.q) fail(ErrorKind::InvalidArgument, "profile q differs from the symmetry's q");
  auto verdict = regularity(pr);
  if (!verdict.regular) {
    const auto& v = verdict.violated.front();
    fail(ErrorKind::ExceptionalProfile,
         "profile is exceptional (" + v.kind + " " + std::to_string(v.i) + "," + std::to_string(v.j) + ")");
  }
  CotangentData cd;
  cd.H = hankel(pr);
  cd.Hinv = inverse(cd.H);
  cd.grad = gradient_matrices(hs, M);
  cd.word_identity = gradient_word_identity(hs, cd.grad);
  cd.ebar = cd.grad.A * lift(cd.Hinv) * cd.grad.B;
  cd.e = NCMatrix::identity(N * N) - cd.ebar;

  // Entries of B·A up to Tr_R L^{2M−2}: those beyond M come from the CH recurrence.
  int top = int(2 * M - 2);
  if (top > int(M)) higher_power_reduction(pr, top);
  cd.power_reduction = true;
  cd.structural = cd.word_identity && cd.power_reduction;
  cd.certificate = std::string(cd.word_identity ? "B·A = (Tr_R L^{k+l-2}) holds word by word" : "B·A word identity FAILED") +
                   "; Tr_R L^k for k <= " + std::to_string(top) + " reduce to parametrized values";

  std::uint32_t deg = 0;
  for (std::size_t r = 0; r < N * N; ++r)
    for (std::size_t c = 0; c < N * N; ++c) deg = std::max(deg, cd.ebar(r, c).degree());
  std::uint32_t D = std::max<std::uint32_t>(2 * deg, 2);
  cd.filtration_degree = D;
  if (filtered_size(N, D) > cap) {
    cd.certificate += "; entrywise check skipped (filtration degree " + std::to_string(D) + " exceeds the cap)";
    return cd;
  }
  auto p = power_sums_param(int(M), pr);
  std::vector<NCPoly> gens = algebra_relations;
  for (std::size_t k = 1; k <= M; ++k) gens.push_back(power_sum_element(unsigned(k), hs) - NCPoly(p[k]));
  FilteredIdeal ideal(N, gens, D, cap);
  NCMatrix sq = cd.ebar * cd.ebar - cd.ebar;
  NCMatrix esq = cd.e * cd.e - cd.e;
  cd.entrywise_checked = true;
  cd.entrywise_passed = true;
  for (std::size_t r = 0; r < N * N && cd.entrywise_passed; ++r)
    for (std::size_t c = 0; c < N * N; ++c) {
      for (const NCMatrix* mat : {&sq, &esq}) {
        ZeroTest t = ideal.test((*mat)(r, c));
        if (!t.zero) {
          cd.entrywise_passed = false;
          cd.failure = std::string(mat == &sq ? "ebar^2 - ebar" : "e^2 - e") + " entry (" + std::to_string(r + 1) + "," +
                       std::to_string(c + 1) + ")";
          cd.residual = t.residual;
          break;
        }
      }
      if (!cd.entrywise_passed) break;
    }
  cd.certificate += cd.entrywise_passed ? "; ebar^2 - ebar and e^2 - e reduce to 0 entrywise (filtration degree " +
                                              std::to_string(D) + ")"
                                        : "; entrywise reduction FAILED at " + cd.failure;
  return cd;
}

}  // namespace detail

inline CotangentData cotangent(const HeckeSymmetry& hs, const EigenvalueProfile& pr, std::size_t cap = kDefaultDegreeCap,
                               bool check_birank = true) {
  if (pr.h) fail(ErrorKind::InvalidArgument, "hatted profiles go through nc_orbit");
  if (check_birank) {
    auto br = birank(hs, pr.m + pr.n + 3);
    if (br.m != pr.m || br.n != pr.n)
      fail(ErrorKind::InvalidArgument, "bi-rank of " + hs.provenance + " is (" + std::to_string(br.m) + "|" +
                                           std::to_string(br.n) + "), profile is (" + std::to_string(pr.m) + "|" +
                                           std::to_string(pr.n) + ")");
  }
  return detail::build_cotangent(hs, pr, relation_space(hs, RelationKind::Minus).relations, cap);
}

struct NcOrbit {
  OrbitQuotient quotient;
  CotangentData cotangent;
};

/// The same pipeline over the mREA with hatted power sums.
inline NcOrbit nc_orbit(const HeckeSymmetry& hs, const EigenvalueProfile& pr, std::size_t cap = kDefaultDegreeCap) {
  if (!pr.h) fail(ErrorKind::InvalidArgument, "nc_orbit needs a profile with h");
  NcOrbit out;
  out.quotient.symmetry = hs.provenance;
  out.quotient.profile = pr;
  out.quotient.mode = OrbitMode::NC;
  auto p = power_sums_param(int(pr.m + pr.n), pr);
  out.quotient.values.assign(p.begin() + 1, p.end());
  out.cotangent = detail::build_cotangent(hs, pr, relation_space(hs, RelationKind::Mrea, *pr.h).relations, cap);
  return out;
}

}  // namespace qorbit
