#pragma once

// Symmetric-function calculus: quantum Newton relations, Schur functions via
// dual Jacobi–Trudi, Cayley–Hamilton coefficients and their parametrization
// by eigenvalues.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qorbit/errors.hpp"
#include "qorbit/linalg.hpp"
#include "qorbit/scalar.hpp"

namespace qorbit {

// ---------------------------------------------------------------------------
// Partitions

using Partition = std::vector<int>;

inline Partition normalize_partition(Partition p) {
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i] > p[i - 1]) fail(ErrorKind::InvalidArgument, "partition must be weakly decreasing");
  while (!p.empty() && p.back() == 0) p.pop_back();
  if (!p.empty() && p.back() < 0) fail(ErrorKind::InvalidArgument, "partition parts must be non-negative");
  return p;
}

inline Partition conjugate(const Partition& p) {
  Partition c;
  if (p.empty()) return c;
  for (int j = 1; j <= p.front(); ++j) {
    int len = 0;
    for (int x : p)
      if (x >= j) ++len;
    c.push_back(len);
  }
  return c;
}

/// ((n+1)^k, n^{m-k}, r); the other shapes are special cases.
inline Partition mn_shape(int m, int n, int k = 0, int r = 0) {
  if (k < 0 || k > m || r < 0) fail(ErrorKind::InvalidArgument, "bad [m|n] shape parameters");
  Partition p;
  for (int i = 0; i < k; ++i) p.push_back(n + 1);
  for (int i = k; i < m; ++i) p.push_back(n);
  p.push_back(r);
  return normalize_partition(p);
}

inline std::string partition_string(const Partition& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

// ---------------------------------------------------------------------------
// SymExpr: commutative polynomials in a_1, a_2, ... (or p_1, p_2, ...)

enum class SymBasis { Elementary, PowerSum };

class SymExpr {
 public:
  using Mono = std::vector<int>;  // sorted generator indices, each >= 1

  SymExpr() = default;
  explicit SymExpr(const Scalar& c, SymBasis b = SymBasis::Elementary) : basis_(b) {
    if (!c.is_zero()) t_[{}] = c;
  }
  static SymExpr gen(int k, SymBasis b = SymBasis::Elementary) {
    SymExpr e;
    e.basis_ = b;
    if (k == 0) {
      e.t_[{}] = Scalar(1);
    } else if (k > 0) {
      e.t_[{k}] = Scalar(1);
    }
    return e;  // generators with negative index are zero
  }

  SymBasis basis() const { return basis_; }
  const std::map<Mono, Scalar>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  int max_index() const {
    int k = 0;
    for (const auto& [m, c] : t_)
      for (int x : m) k = std::max(k, x);
    return k;
  }
  Scalar coefficient(const Mono& m) const {
    auto it = t_.find(m);
    return it == t_.end() ? Scalar() : it->second;
  }

  friend SymExpr operator+(SymExpr a, const SymExpr& b) {
    a.adopt(b);
    for (const auto& [m, c] : b.t_) a.add(m, c);
    return a;
  }
  friend SymExpr operator-(SymExpr a, const SymExpr& b) {
    a.adopt(b);
    for (const auto& [m, c] : b.t_) a.add(m, -c);
    return a;
  }
  SymExpr operator-() const {
    SymExpr r = *this;
    for (auto& [m, c] : r.t_) c = -c;
    return r;
  }
  friend SymExpr operator*(const SymExpr& a, const SymExpr& b) {
    SymExpr r;
    r.basis_ = a.t_.empty() ? b.basis_ : a.basis_;
    for (const auto& [ma, ca] : a.t_)
      for (const auto& [mb, cb] : b.t_) {
        Mono m;
        std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m));
        r.add(m, ca * cb);
      }
    return r;
  }
  friend SymExpr operator*(const Scalar& s, const SymExpr& a) {
    SymExpr r;
    r.basis_ = a.basis_;
    if (s.is_zero()) return r;
    for (const auto& [m, c] : a.t_) r.t_.emplace(m, s * c);
    return r;
  }
  SymExpr& operator+=(const SymExpr& b) { return *this = *this + b; }
  SymExpr& operator-=(const SymExpr& b) { return *this = *this - b; }
  SymExpr& operator*=(const SymExpr& b) { return *this = *this * b; }
  friend bool operator==(const SymExpr& a, const SymExpr& b) {
    return a.t_ == b.t_ && (a.t_.empty() || a.basis_ == b.basis_);
  }
  friend bool operator!=(const SymExpr& a, const SymExpr& b) { return !(a == b); }

  /// Ring homomorphism sending generator k to values[k] (values[0] unused).
  template <class T>
  T substitute(const std::vector<T>& values, const T& one) const {
    T acc = T();
    for (const auto& [m, c] : t_) {
      T term = one;
      for (int k : m) {
        if (static_cast<std::size_t>(k) >= values.size()) fail(ErrorKind::IndexOutOfRange, "generator value missing");
        term = term * values[k];
      }
      acc = acc + c * term;
    }
    return acc;
  }

  std::string to_string() const {
    if (t_.empty()) return "0";
    const char* g = basis_ == SymBasis::Elementary ? "a" : "p";
    std::string s;
    for (const auto& [m, c] : t_) {
      if (!s.empty()) s += " + ";
      s += "(" + c.to_string() + ")";
      for (int k : m) s += "*" + std::string(g) + std::to_string(k);
    }
    return s;
  }

 private:
  SymBasis basis_ = SymBasis::Elementary;
  std::map<Mono, Scalar> t_;

  void adopt(const SymExpr& b) {
    if (t_.empty()) basis_ = b.basis_;
  }
  void add(const Mono& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = t_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }
};

inline std::ostream& operator<<(std::ostream& os, const SymExpr& e) { return os << e.to_string(); }

// ---------------------------------------------------------------------------
// Newton and Wronski relations. `p`, `a`, `s` are indexed from 0; entry 0 of
// `p` is ignored, a_0 = s_0 = 1.

namespace detail {
inline Scalar checked_qnumber_inverse(long k, const Scalar& q) {
  Scalar kq = qnumber(k);
  if (q != Scalar::q()) kq = substitute(kq, std::map<std::string, Scalar>{{"q", q}});
  if (kq.is_zero()) fail(ErrorKind::BadDeformationParameter, std::to_string(k) + "_q vanishes");
  return kq.inverse();
}
inline Scalar sign(long k) { return Scalar(k % 2 == 0 ? 1 : -1); }
}  // namespace detail

template <class T>
std::vector<T> newton_a_from_p(const std::vector<T>& p, const Scalar& q, const T& one) {
  std::vector<T> a{one};
  for (std::size_t k = 1; k < p.size(); ++k) {
    T sum = T();
    for (std::size_t r = 0; r < k; ++r) sum = sum + (-q).pow(long(r)) * (a[r] * p[k - r]);
    a.push_back((-detail::sign(long(k)) * detail::checked_qnumber_inverse(long(k), q)) * sum);
  }
  return a;
}

template <class T>
std::vector<T> newton_p_from_a(const std::vector<T>& a, const Scalar& q) {
  std::vector<T> p{T()};
  for (std::size_t k = 1; k < a.size(); ++k) {
    Scalar kq = substitute(qnumber(long(k)), std::map<std::string, Scalar>{{"q", q}});
    T v = (-detail::sign(long(k)) * kq) * a[k];
    for (std::size_t r = 1; r < k; ++r) v = v - (-q).pow(long(r)) * (a[r] * p[k - r]);
    p.push_back(v);
  }
  return p;
}

template <class T>
std::vector<T> newton_s_from_p(const std::vector<T>& p, const Scalar& q, const T& one) {
  std::vector<T> s{one};
  for (std::size_t k = 1; k < p.size(); ++k) {
    T sum = T();
    for (std::size_t r = 0; r < k; ++r) sum = sum + q.pow(-long(r)) * (s[r] * p[k - r]);
    s.push_back(detail::checked_qnumber_inverse(long(k), q) * sum);
  }
  return s;
}

template <class T>
std::vector<T> wronski_s_from_a(const std::vector<T>& a) {
  std::vector<T> s{a.at(0)};
  for (std::size_t k = 1; k < a.size(); ++k) {
    T v = T();
    for (std::size_t r = 1; r <= k; ++r) v = v - detail::sign(long(r)) * (a[r] * s[k - r]);
    s.push_back(v);
  }
  return s;
}

/// a_k in the power-sum basis for k = 0..K.
inline std::vector<SymExpr> elementary_in_power_sums(int K, const Scalar& q) {
  std::vector<SymExpr> p{SymExpr()};
  for (int k = 1; k <= K; ++k) p.push_back(SymExpr::gen(k, SymBasis::PowerSum));
  return newton_a_from_p(p, q, SymExpr(Scalar(1), SymBasis::PowerSum));
}

/// Rewrites an expression in a_k as one in p_k.
inline SymExpr to_power_sums(const SymExpr& e, const Scalar& q) {
  if (e.basis() == SymBasis::PowerSum || e.is_zero()) return e;
  auto a = elementary_in_power_sums(e.max_index(), q);
  return e.substitute(a, SymExpr(Scalar(1), SymBasis::PowerSum));
}

/// Rewrites an expression in p_k as one in a_k.
inline SymExpr to_elementary(const SymExpr& e, const Scalar& q) {
  if (e.basis() == SymBasis::Elementary || e.is_zero()) return e;
  std::vector<SymExpr> a{SymExpr(Scalar(1))};
  for (int k = 1; k <= e.max_index(); ++k) a.push_back(SymExpr::gen(k));
  auto p = newton_p_from_a(a, q);
  return e.substitute(p, SymExpr(Scalar(1)));
}

// ---------------------------------------------------------------------------
// Schur functions and the Cayley–Hamilton coefficients

namespace detail {
template <class T>
T cofactor_det(const std::vector<std::vector<T>>& m, const T& one) {
  std::size_t n = m.size();
  if (n == 0) return one;
  if (n == 1) return m[0][0];
  T acc = T();
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<T>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<T> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[i][c]);
      minor.push_back(std::move(row));
    }
    T t = m[0][j] * cofactor_det(minor, one);
    acc = (j % 2 == 0) ? acc + t : acc - t;
  }
  return acc;
}
}  // namespace detail

/// s_λ = det[a_{λ'_i − i + j}].
inline SymExpr jacobi_trudi(const Partition& lambda) {
  Partition c = conjugate(normalize_partition(lambda));
  std::size_t l = c.size();
  std::vector<std::vector<SymExpr>> m(l, std::vector<SymExpr>(l));
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j) m[i][j] = SymExpr::gen(c[i] - int(i) + int(j));
  return detail::cofactor_det(m, SymExpr(Scalar(1)));
}

struct ChTerm {
  Scalar coeff;
  Partition shape;
};

/// Coefficient of L^{m+n-i} as a signed sum of Schur functions.
inline std::vector<std::vector<ChTerm>> ch_schur_terms(int m, int n, const Scalar& q) {
  if (m < 0 || n < 0 || m + n < 1) fail(ErrorKind::InvalidArgument, "need m, n >= 0 and m + n >= 1");
  std::vector<std::vector<ChTerm>> out;
  for (int i = 0; i <= m + n; ++i) {
    std::vector<ChTerm> row;
    for (int k = std::max(0, i - n); k <= std::min(i, m); ++k)
      row.push_back({detail::sign(k) * q.pow(2 * k - i), mn_shape(m, n, k, i - k)});
    out.push_back(std::move(row));
  }
  return out;
}

/// CH coefficients c_0..c_{m+n} (c_i multiplies L^{m+n-i}) in the a-basis.
inline std::vector<SymExpr> ch_coefficients(int m, int n, const Scalar& q) {
  std::vector<SymExpr> out;
  for (const auto& row : ch_schur_terms(m, n, q)) {
    SymExpr c;
    for (const auto& t : row) c += t.coeff * jacobi_trudi(t.shape);
    out.push_back(std::move(c));
  }
  return out;
}

struct FactorizedCh {
  std::vector<ChTerm> even;  // (-q)^k s_{[m|n]^k}, multiplies L^{m-k}
  std::vector<ChTerm> odd;   // q^{-r} s_{[m|n]_r}, multiplies L^{n-r}
};

namespace detail {
// Formal products of Schur symbols.
using SchurMono = std::vector<Partition>;
using SchurPoly = std::map<SchurMono, Scalar>;

inline void schur_add(SchurPoly& p, SchurMono m, const Scalar& c) {
  std::sort(m.begin(), m.end());
  auto [it, ins] = p.try_emplace(m, c);
  if (!ins) {
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
  }
}
}  // namespace detail

/// Factorized CH form. Verifies formally that s_{[m|n]}·(CH row i) equals
/// the i-th coefficient of the product once s_{[m|n]}·s_{[m|n]^k_r} is
/// rewritten as s_{[m|n]_r}·s_{[m|n]^k}.
inline FactorizedCh ch_factorized(int m, int n, const Scalar& q) {
  FactorizedCh f;
  for (int k = 0; k <= m; ++k) f.even.push_back({(-q).pow(k), mn_shape(m, n, k, 0)});
  for (int r = 0; r <= n; ++r) f.odd.push_back({q.pow(-r), mn_shape(m, n, 0, r)});
  Partition box = mn_shape(m, n);
  auto rows = ch_schur_terms(m, n, q);
  for (int i = 0; i <= m + n; ++i) {
    detail::SchurPoly lhs, rhs;
    for (const auto& t : rows[i]) {
      // Rewrite s_box · s_{[m|n]^k_r}; t.shape = [m|n]^k_r with r = i-k.
      int k = std::max(0, i - n);
      for (; k <= std::min(i, m); ++k)
        if (mn_shape(m, n, k, i - k) == t.shape) break;
      detail::schur_add(lhs, {mn_shape(m, n, 0, i - k), mn_shape(m, n, k, 0)}, t.coeff);
    }
    for (int k = 0; k <= m; ++k) {
      int r = i - k;
      if (r < 0 || r > n) continue;
      detail::schur_add(rhs, {f.even[k].shape, f.odd[r].shape}, f.even[k].coeff * f.odd[r].coeff);
    }
    if (lhs != rhs) fail(ErrorKind::FactorizationMismatch, "factorized CH differs in degree " + std::to_string(i));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Eigenvalue parametrization

struct EigenvalueProfile {
  std::size_t m = 0, n = 0;
  std::vector<Scalar> mu, nu;
  Scalar q = Scalar::q();
  std::optional<Scalar> h;  // set for the modified algebra (hatted eigenvalues)

  /// μ = mu1..mum, ν = nu1..nun as symbols.
  static EigenvalueProfile symbolic(std::size_t m, std::size_t n, const Scalar& q = Scalar::q(),
                                    std::optional<Scalar> h = std::nullopt) {
    if (m > kReservedIndexed || n > kReservedIndexed) fail(ErrorKind::InvalidArgument, "at most 6 eigenvalues per parity");
    EigenvalueProfile p;
    p.m = m;
    p.n = n;
    for (std::size_t i = 1; i <= m; ++i) p.mu.push_back(Scalar::symbol("mu" + std::to_string(i)));
    for (std::size_t j = 1; j <= n; ++j) p.nu.push_back(Scalar::symbol("nu" + std::to_string(j)));
    p.q = q;
    p.h = std::move(h);
    return p;
  }

  void check() const {
    if (mu.size() != m || nu.size() != n) fail(ErrorKind::DimensionMismatch, "eigenvalue counts do not match (m|n)");
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t p = i + 1; p < m; ++p)
        if (mu[i] == mu[p]) fail(ErrorKind::DegenerateProfile, "coincident even eigenvalues");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t p = i + 1; p < n; ++p)
        if (nu[i] == nu[p]) fail(ErrorKind::DegenerateProfile, "coincident odd eigenvalues");
    for (const auto& x : mu)
      for (const auto& y : nu)
        if (x == y) fail(ErrorKind::DegenerateProfile, "an even and an odd eigenvalue coincide");
  }
};

struct QuantumDims {
  std::vector<Scalar> d, dprime;
};

/// Quantum dimensions. Without h this is the classical-shape formula; with h
/// the eigenvalues are the hatted ones and the shifted factors are used.
inline QuantumDims quantum_dims(const EigenvalueProfile& pr) {
  pr.check();
  const Scalar& q = pr.q;
  Scalar qi = q.inverse(), q2 = q * q, qm2 = qi * qi;
  Scalar h = pr.h ? *pr.h : Scalar();
  Scalar even_shift = qi * h, odd_shift = q * h;
  QuantumDims out;
  for (std::size_t i = 0; i < pr.m; ++i) {
    Scalar d = qi;
    for (std::size_t p = 0; p < pr.m; ++p)
      if (p != i) d *= (pr.mu[i] - qm2 * pr.mu[p] - even_shift) / (pr.mu[i] - pr.mu[p]);
    for (std::size_t j = 0; j < pr.n; ++j) d *= (pr.mu[i] - q2 * pr.nu[j] + odd_shift) / (pr.mu[i] - pr.nu[j]);
    out.d.push_back(d);
  }
  for (std::size_t j = 0; j < pr.n; ++j) {
    Scalar d = -q;
    for (std::size_t i = 0; i < pr.m; ++i) d *= (pr.nu[j] - qm2 * pr.mu[i] - even_shift) / (pr.nu[j] - pr.mu[i]);
    for (std::size_t p = 0; p < pr.n; ++p)
      if (p != j) d *= (pr.nu[j] - q2 * pr.nu[p] + odd_shift) / (pr.nu[j] - pr.nu[p]);
    out.dprime.push_back(d);
  }
  return out;
}

/// p_k(μ,ν) = Σ d_i μ_i^k + Σ d'_j ν_j^k for k = 0..K. The terms are summed
/// over the common denominator Π(μ_i−μ_p)Π(μ_i−ν_j)Π(ν_j−ν_p), which keeps
/// the symbolic sums polynomial.
inline std::vector<Scalar> power_sums_param(int K, const EigenvalueProfile& pr) {
  QuantumDims qd = quantum_dims(pr);
  Scalar D(1);
  for (std::size_t i = 0; i < pr.m; ++i)
    for (std::size_t p = i + 1; p < pr.m; ++p) D *= pr.mu[i] - pr.mu[p];
  for (std::size_t i = 0; i < pr.m; ++i)
    for (std::size_t j = 0; j < pr.n; ++j) D *= pr.mu[i] - pr.nu[j];
  for (std::size_t j = 0; j < pr.n; ++j)
    for (std::size_t p = j + 1; p < pr.n; ++p) D *= pr.nu[j] - pr.nu[p];
  std::vector<Scalar> wd, wdp;
  for (const auto& d : qd.d) wd.push_back(d * D);
  for (const auto& d : qd.dprime) wdp.push_back(d * D);
  std::vector<Scalar> mupow(pr.m, Scalar(1)), nupow(pr.n, Scalar(1));
  std::vector<Scalar> out;
  Scalar Dinv = D.inverse();
  for (int k = 0; k <= K; ++k) {
    Scalar s;
    for (std::size_t i = 0; i < pr.m; ++i) s += wd[i] * mupow[i];
    for (std::size_t j = 0; j < pr.n; ++j) s += wdp[j] * nupow[j];
    out.push_back(s * Dinv);
    for (std::size_t i = 0; i < pr.m; ++i) mupow[i] *= pr.mu[i];
    for (std::size_t j = 0; j < pr.n; ++j) nupow[j] *= pr.nu[j];
  }
  return out;
}

inline Scalar power_sum_param(int k, const EigenvalueProfile& pr) {
  if (k < 0) fail(ErrorKind::InvalidArgument, "k must be >= 0");
  return power_sums_param(k, pr).back();
}

/// Evaluates a SymExpr on the profile through the power-sum parametrization.
inline Scalar evaluate_on_profile(const SymExpr& e, const EigenvalueProfile& pr) {
  SymExpr pe = to_power_sums(e, pr.q);
  auto p = power_sums_param(std::max(1, pe.max_index()), pr);
  return pe.substitute(p, Scalar(1));
}

/// Schur function on the profile; s_{[m|n]} uses the closed product form.
inline Scalar schur_param(const Partition& lambda, const EigenvalueProfile& pr) {
  if (pr.h) fail(ErrorKind::InvalidArgument, "Schur parametrization is defined for h = 0");
  if (normalize_partition(lambda) == mn_shape(int(pr.m), int(pr.n))) {
    pr.check();
    Scalar s(1), qi = pr.q.inverse();
    for (const auto& x : pr.mu)
      for (const auto& y : pr.nu) s *= qi * x - pr.q * y;
    return s;
  }
  return evaluate_on_profile(jacobi_trudi(lambda), pr);
}

/// CH coefficients c_0..c_{m+n} on the profile.
inline std::vector<Scalar> ch_coefficients_param(const EigenvalueProfile& pr) {
  std::vector<Scalar> out;
  for (const auto& c : ch_coefficients(int(pr.m), int(pr.n), pr.q)) out.push_back(evaluate_on_profile(c, pr));
  return out;
}

}  // namespace qorbit
