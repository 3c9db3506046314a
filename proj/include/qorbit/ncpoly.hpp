#pragma once

// Noncommutative polynomials in the generators l_i^j of an N×N generating
// matrix. A degree-d word is coded in base G = N² (generator l_i^j has
// digit i·N + j), so the code of a word is also its index in the
// N^{2d}-dimensional space of degree-d words.

#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qorbit/errors.hpp"
#include "qorbit/linalg.hpp"
#include "qorbit/scalar.hpp"

namespace qorbit {

struct Word {
  std::uint32_t deg = 0;
  std::uint64_t code = 0;

  friend bool operator<(const Word& a, const Word& b) {
    return a.deg != b.deg ? a.deg < b.deg : a.code < b.code;
  }
  friend bool operator==(const Word& a, const Word& b) { return a.deg == b.deg && a.code == b.code; }
};

inline std::uint64_t checked_pow(std::uint64_t base, std::uint32_t e) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / base) fail(ErrorKind::ResourceLimit, "word too long to index");
    r *= base;
  }
  return r;
}

class NCPoly {
 public:
  NCPoly() = default;
  NCPoly(const Scalar& c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) t_[Word{}] = c;
  }
  NCPoly(long c) : NCPoly(Scalar(c)) {}  // NOLINT(google-explicit-constructor)

  /// l_i^j (0-based).
  static NCPoly gen(std::size_t N, std::size_t i, std::size_t j) {
    if (i >= N || j >= N) fail(ErrorKind::IndexOutOfRange, "generator index out of range");
    NCPoly p;
    p.N_ = N;
    p.t_[Word{1, i * N + j}] = Scalar(1);
    return p;
  }
  static NCPoly word(std::size_t N, Word w, const Scalar& c = Scalar(1)) {
    NCPoly p;
    p.N_ = N;
    if (!c.is_zero()) p.t_[w] = c;
    return p;
  }

  std::size_t N() const { return N_; }
  const std::map<Word, Scalar>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::uint32_t degree() const { return t_.empty() ? 0 : t_.rbegin()->first.deg; }
  std::uint32_t low_degree() const { return t_.empty() ? 0 : t_.begin()->first.deg; }
  bool is_homogeneous() const { return t_.empty() || degree() == low_degree(); }

  /// Degree-d component.
  NCPoly component(std::uint32_t d) const {
    NCPoly r;
    r.N_ = N_;
    for (auto it = t_.lower_bound(Word{d, 0}); it != t_.end() && it->first.deg == d; ++it) r.t_.insert(*it);
    return r;
  }

  /// Coefficients of the degree-d component indexed by word code.
  SparseVec coefficients(std::uint32_t d) const {
    SparseVec v;
    for (auto it = t_.lower_bound(Word{d, 0}); it != t_.end() && it->first.deg == d; ++it)
      v.emplace_back(static_cast<std::size_t>(it->first.code), it->second);
    return v;
  }

  friend NCPoly operator+(NCPoly a, const NCPoly& b) {
    a.adopt(b);
    for (const auto& [w, c] : b.t_) a.add(w, c);
    return a;
  }
  friend NCPoly operator-(NCPoly a, const NCPoly& b) {
    a.adopt(b);
    for (const auto& [w, c] : b.t_) a.add(w, -c);
    return a;
  }
  NCPoly operator-() const {
    NCPoly r = *this;
    for (auto& [w, c] : r.t_) c = -c;
    return r;
  }
  friend NCPoly operator*(const NCPoly& a, const NCPoly& b) {
    NCPoly r;
    r.N_ = a.N_ ? a.N_ : b.N_;
    if (a.N_ && b.N_ && a.N_ != b.N_) fail(ErrorKind::DimensionMismatch, "NC polynomials over different N");
    if (a.t_.empty() || b.t_.empty()) return r;
    std::uint64_t G = r.N_ * r.N_;
    for (const auto& [wa, ca] : a.t_)
      for (const auto& [wb, cb] : b.t_) {
        Word w{wa.deg + wb.deg, wb.deg == 0 ? wa.code : wa.code * checked_pow(G, wb.deg) + wb.code};
        r.add(w, ca * cb);
      }
    return r;
  }
  friend NCPoly operator*(const Scalar& s, const NCPoly& a) {
    NCPoly r;
    r.N_ = a.N_;
    if (s.is_zero()) return r;
    for (const auto& [w, c] : a.t_) r.t_.emplace(w, s * c);
    return r;
  }
  NCPoly& operator+=(const NCPoly& b) {
    adopt(b);
    for (const auto& [w, c] : b.t_) add(w, c);
    return *this;
  }
  NCPoly& operator-=(const NCPoly& b) {
    adopt(b);
    for (const auto& [w, c] : b.t_) add(w, -c);
    return *this;
  }
  NCPoly& operator*=(const NCPoly& b) { return *this = *this * b; }
  friend bool operator==(const NCPoly& a, const NCPoly& b) { return a.t_ == b.t_; }
  friend bool operator!=(const NCPoly& a, const NCPoly& b) { return !(a == b); }

  /// Applies f to every coefficient (e.g. evaluation at q).
  template <class F>
  NCPoly map_coefficients(F f) const {
    NCPoly r;
    r.N_ = N_;
    for (const auto& [w, c] : t_) r.add(w, f(c));
    return r;
  }

  /// Digits of a word, most significant (leftmost letter) first.
  static std::vector<std::size_t> letters(std::size_t N, Word w) {
    std::vector<std::size_t> out(w.deg);
    std::uint64_t c = w.code, G = N * N;
    for (std::uint32_t k = w.deg; k-- > 0;) {
      out[k] = static_cast<std::size_t>(c % G);
      c /= G;
    }
    return out;
  }
  static Word from_letters(std::size_t N, const std::vector<std::size_t>& ls) {
    Word w{static_cast<std::uint32_t>(ls.size()), 0};
    for (auto l : ls) w.code = w.code * (N * N) + l;
    return w;
  }

  std::string to_string() const {
    if (t_.empty()) return "0";
    std::string s;
    for (const auto& [w, c] : t_) {
      if (!s.empty()) s += " + ";
      bool unit = c.is_one() && w.deg > 0;
      if (!unit) s += "(" + c.to_string() + ")";
      bool first = unit;
      for (auto g : letters(N_, w)) {
        if (!first) s += "*";
        first = false;
        s += "l" + std::to_string(g / N_ + 1) + "^" + std::to_string(g % N_ + 1);
      }
    }
    return s;
  }

 private:
  std::size_t N_ = 0;
  std::map<Word, Scalar> t_;

  void adopt(const NCPoly& b) {
    if (!N_) N_ = b.N_;
  }
  void add(const Word& w, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = t_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }
};

inline std::ostream& operator<<(std::ostream& os, const NCPoly& p) { return os << p.to_string(); }

using NCMatrix = Matrix<NCPoly>;

/// The generating matrix L with L(i, j) = l_i^j.
inline NCMatrix generator_matrix(std::size_t N) {
  NCMatrix L(N, N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) L(i, j) = NCPoly::gen(N, i, j);
  return L;
}

inline NCMatrix lift(const MatrixS& m) {
  NCMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = NCPoly(m(i, j));
  return r;
}

/// L₁ = L ⊗ I on V⊗V.
inline NCMatrix first_copy(const NCMatrix& L) {
  std::size_t N = L.rows();
  NCMatrix r(N * N, N * N);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t t = 0; t < N; ++t) r(a * N + t, b * N + t) = L(a, b);
  return r;
}

inline NCMatrix power(const NCMatrix& L, unsigned k) {
  NCMatrix r = NCMatrix::identity(L.rows());
  for (unsigned i = 0; i < k; ++i) r = r * L;
  return r;
}

}  // namespace qorbit
