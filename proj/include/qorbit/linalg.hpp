#pragma once

// Exact dense and sparse linear algebra over Scalar.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qorbit/errors.hpp"
#include "qorbit/scalar.hpp"

namespace qorbit {

namespace detail {
inline std::atomic<std::size_t>& memory_cap_ref() {
  static std::atomic<std::size_t> cap{800'000'000};
  return cap;
}
}  // namespace detail

/// Maximum number of entries a single matrix or echelon may hold.
inline std::size_t memory_cap() { return detail::memory_cap_ref().load(); }
inline void set_memory_cap(std::size_t entries) { detail::memory_cap_ref().store(entries); }

inline void check_memory(std::size_t entries, const char* what) {
  if (entries > memory_cap())
    fail(ErrorKind::ResourceLimit, std::string(what) + " needs " + std::to_string(entries) + " entries, cap is " +
                                       std::to_string(memory_cap()));
}

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    check_memory(rows * cols, "matrix");
    data_.assign(rows * cols, T{});
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  T& at(std::size_t r, std::size_t c) {
    if (r >= rows_ || c >= cols_) fail(ErrorKind::IndexOutOfRange, "matrix index out of range");
    return (*this)(r, c);
  }
  const T& at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) fail(ErrorKind::IndexOutOfRange, "matrix index out of range");
    return (*this)(r, c);
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x.is_zero(); });
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    same_shape(a, b);
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    same_shape(a, b);
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= b.data_[i];
    return r;
  }
  Matrix operator-() const {
    Matrix r = *this;
    for (auto& x : r.data_) x = -x;
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) fail(ErrorKind::DimensionMismatch, "matmul shape mismatch");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& x = a(i, k);
        if (x.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const T& y = b(k, j);
          if (!y.is_zero()) r(i, j) += x * y;
        }
      }
    return r;
  }
  friend Matrix operator*(const Scalar& s, const Matrix& a) {
    Matrix r = a;
    if (s.is_one()) return r;
    for (auto& x : r.data_)
      if (!x.is_zero()) x = s * x;
    return r;
  }
  Matrix& operator+=(const Matrix& b) { return *this = *this + b; }
  Matrix& operator-=(const Matrix& b) { return *this = *this - b; }
  Matrix& operator*=(const Matrix& b) { return *this = *this * b; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  T trace() const {
    if (!square()) fail(ErrorKind::DimensionMismatch, "trace of non-square matrix");
    T t{};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols_) fail(ErrorKind::DimensionMismatch, "matrix-vector shape mismatch");
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        const T& x = (*this)(i, j);
        if (!x.is_zero() && !v[j].is_zero()) out[i] += x * v[j];
      }
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;

  static void same_shape(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorKind::DimensionMismatch, "shape mismatch");
  }
};

using MatrixS = Matrix<Scalar>;
using VectorS = std::vector<Scalar>;

template <class T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
    for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
      const T& x = a(i1, j1);
      if (x.is_zero()) continue;
      for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
        for (std::size_t j2 = 0; j2 < b.cols(); ++j2)
          if (!b(i2, j2).is_zero()) r(i1 * b.rows() + i2, j1 * b.cols() + j2) = x * b(i2, j2);
    }
  return r;
}

inline std::size_t ipow(std::size_t base, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= base;
  return r;
}

/// Operator on V^{⊗k}, dim V = N; multi-indices in lexicographic order.
struct TensorOp {
  std::size_t N = 0;
  std::size_t arity = 0;
  MatrixS m;

  TensorOp() = default;
  TensorOp(std::size_t n, std::size_t k, MatrixS mat) : N(n), arity(k), m(std::move(mat)) {
    if (m.rows() != ipow(N, k) || m.cols() != ipow(N, k))
      fail(ErrorKind::DimensionMismatch, "tensor operator size does not match N^k");
  }
  static TensorOp identity(std::size_t n, std::size_t k) { return TensorOp(n, k, MatrixS::identity(ipow(n, k))); }

  friend TensorOp operator*(const TensorOp& a, const TensorOp& b) {
    if (a.N != b.N || a.arity != b.arity) fail(ErrorKind::DimensionMismatch, "tensor operator mismatch");
    return TensorOp(a.N, a.arity, a.m * b.m);
  }
  friend TensorOp operator+(const TensorOp& a, const TensorOp& b) {
    if (a.N != b.N || a.arity != b.arity) fail(ErrorKind::DimensionMismatch, "tensor operator mismatch");
    return TensorOp(a.N, a.arity, a.m + b.m);
  }
  friend TensorOp operator-(const TensorOp& a, const TensorOp& b) {
    if (a.N != b.N || a.arity != b.arity) fail(ErrorKind::DimensionMismatch, "tensor operator mismatch");
    return TensorOp(a.N, a.arity, a.m - b.m);
  }
  friend TensorOp operator*(const Scalar& s, const TensorOp& a) { return TensorOp(a.N, a.arity, s * a.m); }
  friend bool operator==(const TensorOp& a, const TensorOp& b) {
    return a.N == b.N && a.arity == b.arity && a.m == b.m;
  }
};

inline TensorOp kron(const TensorOp& a, const TensorOp& b) {
  if (a.N != b.N) fail(ErrorKind::DimensionMismatch, "kron of operators on different spaces");
  return TensorOp(a.N, a.arity + b.arity, kron(a.m, b.m));
}

/// I^{⊗(pos-1)} ⊗ op ⊗ I^{⊗(k-pos-arity+1)}; positions are 1-based.
inline TensorOp embed_at(const TensorOp& op, std::size_t pos, std::size_t k) {
  if (pos < 1 || pos + op.arity - 1 > k) fail(ErrorKind::DimensionMismatch, "embedding position out of range");
  MatrixS m = op.m;
  if (pos > 1) m = kron(MatrixS::identity(ipow(op.N, pos - 1)), m);
  std::size_t after = k - (pos + op.arity - 1);
  if (after > 0) m = kron(m, MatrixS::identity(ipow(op.N, after)));
  return TensorOp(op.N, k, std::move(m));
}

/// Applies I^{⊗(pos-1)} ⊗ op ⊗ I^{...} to a vector in V^{⊗k} without
/// forming the embedded matrix.
inline VectorS apply_at(const TensorOp& op, std::size_t pos, std::size_t k, const VectorS& v) {
  std::size_t N = op.N, a = op.arity;
  if (pos < 1 || pos + a - 1 > k) fail(ErrorKind::DimensionMismatch, "embedding position out of range");
  if (v.size() != ipow(N, k)) fail(ErrorKind::DimensionMismatch, "vector size does not match N^k");
  std::size_t outer = ipow(N, pos - 1), mid = ipow(N, a), inner = ipow(N, k - pos - a + 1);
  VectorS out(v.size());
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t c = 0; c < mid; ++c)
      for (std::size_t i = 0; i < inner; ++i) {
        const Scalar& x = v[(o * mid + c) * inner + i];
        if (x.is_zero()) continue;
        for (std::size_t r = 0; r < mid; ++r) {
          const Scalar& e = op.m(r, c);
          if (!e.is_zero()) out[(o * mid + r) * inner + i] += e * x;
        }
      }
  return out;
}

/// Contracts tensor factor `space` (1-based).
inline TensorOp partial_trace(const TensorOp& op, std::size_t space) {
  if (space < 1 || space > op.arity) fail(ErrorKind::IndexOutOfRange, "partial trace space out of range");
  std::size_t N = op.N;
  std::size_t outer = ipow(N, space - 1), inner = ipow(N, op.arity - space);
  std::size_t d = outer * inner;
  MatrixS r(d, d);
  for (std::size_t ro = 0; ro < outer; ++ro)
    for (std::size_t ri = 0; ri < inner; ++ri)
      for (std::size_t co = 0; co < outer; ++co)
        for (std::size_t ci = 0; ci < inner; ++ci) {
          Scalar s;
          for (std::size_t t = 0; t < N; ++t) s += op.m((ro * N + t) * inner + ri, (co * N + t) * inner + ci);
          r(ro * inner + ri, co * inner + ci) = s;
        }
  return TensorOp(N, op.arity - 1, std::move(r));
}

/// Flip σ on V⊗V.
inline TensorOp flip(std::size_t N) {
  MatrixS m(N * N, N * N);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) m(a * N + b, b * N + a) = Scalar(1);
  return TensorOp(N, 2, std::move(m));
}

/// Matrix unit e_ij (row i, column j).
inline MatrixS unit(std::size_t N, std::size_t i, std::size_t j) {
  MatrixS m(N, N);
  m(i, j) = Scalar(1);
  return m;
}

// ---------------------------------------------------------------------------
// Elimination

struct RowReduced {
  MatrixS rref;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
  std::size_t rank() const { return pivots.size(); }
};

/// Reduced row echelon form. Pivot: first column left to right, first
/// nonzero row top to bottom.
inline RowReduced rowreduce(MatrixS m) {
  RowReduced out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Scalar inv = m(r, c).inverse();
    for (std::size_t j = c; j < m.cols(); ++j)
      if (!m(r, j).is_zero()) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Scalar f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rref = std::move(m);
  return out;
}

inline std::size_t rank(const MatrixS& m) { return rowreduce(m).rank(); }

inline MatrixS inverse(const MatrixS& m) {
  if (!m.square()) fail(ErrorKind::DimensionMismatch, "inverse of non-square matrix");
  std::size_t n = m.rows();
  MatrixS aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = Scalar(1);
  }
  RowReduced rr = rowreduce(std::move(aug));
  if (rr.rank() < n || rr.pivots[n - 1] != n - 1) fail(ErrorKind::SingularMatrix, "matrix is singular");
  MatrixS inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = rr.rref(i, n + j);
  return inv;
}

inline TensorOp inverse(const TensorOp& op) { return TensorOp(op.N, op.arity, inverse(op.m)); }

/// Basis of the right kernel {x : m x = 0}.
inline std::vector<VectorS> nullspace(const MatrixS& m) {
  RowReduced rr = rowreduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : rr.pivots) is_pivot[c] = true;
  std::vector<VectorS> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    VectorS v(m.cols());
    v[f] = Scalar(1);
    for (std::size_t i = 0; i < rr.pivots.size(); ++i) v[rr.pivots[i]] = -rr.rref(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Fraction-free determinant (Bareiss over polynomials after clearing row
/// denominators); plain Gaussian elimination when every entry is rational.
inline Scalar det(const MatrixS& m) {
  if (!m.square()) fail(ErrorKind::DimensionMismatch, "determinant of non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return Scalar(1);
  bool rational = true;
  for (std::size_t i = 0; i < n && rational; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!m(i, j).is_rational()) {
        rational = false;
        break;
      }
  if (rational) {
    std::vector<mpq_class> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j).rational();
    mpq_class d = 1;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t p = c;
      while (p < n && sgn(a[p * n + c]) == 0) ++p;
      if (p == n) return Scalar();
      if (p != c) {
        for (std::size_t j = 0; j < n; ++j) std::swap(a[p * n + j], a[c * n + j]);
        d = -d;
      }
      d *= a[c * n + c];
      for (std::size_t i = c + 1; i < n; ++i) {
        if (sgn(a[i * n + c]) == 0) continue;
        mpq_class f = a[i * n + c] / a[c * n + c];
        for (std::size_t j = c; j < n; ++j) a[i * n + j] -= f * a[c * n + j];
      }
    }
    return Scalar(d);
  }
  // Clear denominators row by row: row i is scaled by D_i.
  std::vector<Poly> a(n * n);
  Scalar scale(1);
  for (std::size_t i = 0; i < n; ++i) {
    Poly den(1);
    for (std::size_t j = 0; j < n; ++j) {
      Poly dj = m(i, j).denominator();
      if (dj.is_one()) continue;
      Poly g = gcd(den, dj);
      den = den * *divide_exact(dj, g);
    }
    scale *= Scalar::from_poly(den);
    for (std::size_t j = 0; j < n; ++j) {
      const Scalar& x = m(i, j);
      a[i * n + j] = x.numerator() * *divide_exact(den, x.denominator());
    }
  }
  int sign = 1;
  Poly prev(1);
  for (std::size_t c = 0; c + 1 < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p * n + c].is_zero()) ++p;
    if (p == n) return Scalar();
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[p * n + j], a[c * n + j]);
      sign = -sign;
    }
    for (std::size_t i = c + 1; i < n; ++i)
      for (std::size_t j = c + 1; j < n; ++j) {
        Poly t = a[c * n + c] * a[i * n + j] - a[i * n + c] * a[c * n + j];
        a[i * n + j] = prev.is_one() ? t : *divide_exact(t, prev);
      }
    prev = a[c * n + c];
  }
  Scalar d = Scalar::from_poly(a[n * n - 1]) / scale;
  return sign > 0 ? d : -d;
}

// ---------------------------------------------------------------------------
// Sparse echelon for membership tests in large spaces

using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;  // sorted by index, no zeros

inline SparseVec sparse_from_dense(const VectorS& v) {
  SparseVec s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) s.emplace_back(i, v[i]);
  return s;
}

inline VectorS dense_from_sparse(const SparseVec& s, std::size_t n) {
  VectorS v(n);
  for (const auto& [i, x] : s) v.at(i) = x;
  return v;
}

/// a + f * b
inline SparseVec axpy(const SparseVec& a, const Scalar& f, const SparseVec& b) {
  SparseVec r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      r.emplace_back(b[j].first, f * b[j].second);
      ++j;
    } else {
      Scalar s = a[i].second + f * b[j].second;
      if (!s.is_zero()) r.emplace_back(a[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  return r;
}

/// Row echelon keyed by leading (smallest) index with leading entry 1.
/// With tracking enabled every stored row remembers its expression in the
/// inserted generators.
class SparseEchelon {
 public:
  explicit SparseEchelon(bool track = false) : track_(track) {}

  std::size_t rank() const { return rows_.size(); }
  std::size_t generators() const { return ngen_; }

  /// Inserts a generator; returns true when it enlarged the span.
  bool insert(const SparseVec& v) {
    SparseVec comb;
    if (track_) comb.emplace_back(ngen_, Scalar(1));
    ++ngen_;
    auto [res, c] = reduce_impl(v, std::move(comb));
    if (res.empty()) return false;
    Scalar inv = res.front().second.inverse();
    for (auto& e : res) e.second *= inv;
    if (track_)
      for (auto& e : c) e.second *= inv;
    entries_ += res.size();
    check_memory(entries_, "echelon");
    std::size_t lead = res.front().first;
    rows_.emplace(lead, Row{std::move(res), std::move(c)});
    return true;
  }

  /// Residual after eliminating leading entries; empty iff v is in the span.
  SparseVec reduce(const SparseVec& v) const { return reduce_impl(v, {}).first; }
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }

  /// Coordinates of v in the inserted generators, if v lies in the span.
  std::optional<SparseVec> express(const SparseVec& v) const {
    if (!track_) fail(ErrorKind::InvalidArgument, "echelon was built without tracking");
    auto [res, c] = reduce_impl(v, {});
    if (!res.empty()) return std::nullopt;
    for (auto& e : c) e.second = -e.second;
    return c;
  }

 private:
  struct Row {
    SparseVec v;
    SparseVec comb;
  };
  bool track_;
  std::size_t ngen_ = 0, entries_ = 0;
  std::map<std::size_t, Row> rows_;

  // Returns (residual, comb) with residual = v + Σ comb·generators.
  std::pair<SparseVec, SparseVec> reduce_impl(SparseVec v, SparseVec comb) const {
    std::size_t start = 0;
    while (!v.empty()) {
      // Entries without a pivot row stay in the residual.
      std::size_t k = start;
      while (k < v.size() && !rows_.count(v[k].first)) ++k;
      if (k == v.size()) break;
      const Row& row = rows_.at(v[k].first);
      Scalar f = -v[k].second;
      v = axpy(v, f, row.v);
      if (track_) comb = axpy(comb, f, row.comb);
      start = k;
    }
    return {std::move(v), std::move(comb)};
  }
};

struct Membership {
  bool member = false;
  VectorS coordinates;  // in the order of the given span vectors
  VectorS residual;
};

inline Membership subspace_membership(const VectorS& v, const std::vector<VectorS>& span) {
  for (const auto& s : span)
    if (s.size() != v.size()) fail(ErrorKind::DimensionMismatch, "span vectors differ in length");
  SparseEchelon ech(true);
  for (const auto& s : span) ech.insert(sparse_from_dense(s));
  Membership out;
  SparseVec sv = sparse_from_dense(v);
  if (auto c = ech.express(sv)) {
    out.member = true;
    out.coordinates.assign(span.size(), Scalar());
    for (const auto& [i, x] : *c) out.coordinates[i] = x;
    out.residual.assign(v.size(), Scalar());
  } else {
    out.residual = dense_from_sparse(ech.reduce(sv), v.size());
  }
  return out;
}

}  // namespace qorbit
