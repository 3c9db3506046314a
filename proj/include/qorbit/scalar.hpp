#pragma once

// Rational functions over Q in the symbols of the global SymbolTable.

#include <gmpxx.h>

#include <bit>
#include <cctype>
#include <ostream>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qorbit/errors.hpp"
#include "qorbit/poly.hpp"

namespace qorbit {

/// Normalized fraction num/den: coprime, den has leading coefficient 1.
/// Plain rationals skip the polynomial representation entirely.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : val_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(int v) : val_(v) {}   // NOLINT(google-explicit-constructor)
  Scalar(const mpq_class& v) : val_(v) { val_.canonicalize(); }  // NOLINT(google-explicit-constructor)
  Scalar(long n, long d) {
    if (d == 0) fail(ErrorKind::DivisionByZero, "zero denominator");
    val_ = mpq_class(n, d);
    val_.canonicalize();
  }

  static Scalar symbol(std::string_view name) {
    return from_poly(Poly::variable(SymbolTable::global().intern(name)));
  }
  static Scalar q() { return symbol("q"); }
  static Scalar h() { return symbol("h"); }
  static Scalar from_poly(const Poly& p) {
    if (p.is_constant()) return Scalar(p.constant_value());
    Scalar s;
    s.f_ = std::make_shared<const Frac>(Frac{p, Poly(1)});
    return s;
  }
  /// num/den with normalization.
  static Scalar fraction(const Poly& num, const Poly& den) {
    if (den.is_zero()) fail(ErrorKind::DivisionByZero, "zero denominator");
    if (num.is_zero()) return Scalar();
    if (den.is_constant()) return from_poly(num.scaled(mpq_class(1) / den.constant_value()));
    Poly g = gcd(num, den);
    Poly n = g.is_one() ? num : *divide_exact(num, g);
    Poly d = g.is_one() ? den : *divide_exact(den, g);
    return make_normalized(std::move(n), std::move(d));
  }

  bool is_rational() const { return !f_; }
  const mpq_class& rational() const {
    if (f_) fail(ErrorKind::InvalidArgument, "scalar is not a rational constant");
    return val_;
  }
  bool is_zero() const { return !f_ && sgn(val_) == 0; }
  bool is_one() const { return !f_ && val_ == 1; }
  Poly numerator() const { return f_ ? f_->num : Poly(val_); }
  Poly denominator() const { return f_ ? f_->den : Poly(1); }
  std::uint32_t support() const { return f_ ? (f_->num.support() | f_->den.support()) : 0u; }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (!a.f_ && !b.f_) return Scalar(mpq_class(a.val_ + b.val_));
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const Poly an = a.numerator(), ad = a.denominator(), bn = b.numerator(), bd = b.denominator();
    if (ad == bd) return fraction(an + bn, ad);
    if (ad.is_one()) return make_normalized(an * bd + bn, bd);
    if (bd.is_one()) return make_normalized(an + bn * ad, ad);
    Poly g = gcd(ad, bd);
    if (g.is_one()) return make_normalized(an * bd + bn * ad, ad * bd);
    Poly ad1 = *divide_exact(ad, g), bd1 = *divide_exact(bd, g);
    Poly num = an * bd1 + bn * ad1;
    if (num.is_zero()) return Scalar();
    Poly den = ad1 * bd;
    Poly g2 = gcd(num, g);
    if (!g2.is_one()) {
      num = *divide_exact(num, g2);
      den = *divide_exact(den, g2);
    }
    return make_normalized(std::move(num), std::move(den));
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
  Scalar operator-() const {
    if (!f_) return Scalar(mpq_class(-val_));
    Scalar s;
    s.f_ = std::make_shared<const Frac>(Frac{-f_->num, f_->den});
    return s;
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (!a.f_ && !b.f_) return Scalar(mpq_class(a.val_ * b.val_));
    if (a.is_zero() || b.is_zero()) return Scalar();
    if (!a.f_) return b.scaled(a.val_);
    if (!b.f_) return a.scaled(b.val_);
    const Poly &an = a.f_->num, &ad = a.f_->den, &bn = b.f_->num, &bd = b.f_->den;
    Poly g1 = gcd(an, bd), g2 = gcd(bn, ad);
    Poly n1 = g1.is_one() ? an : *divide_exact(an, g1);
    Poly d2 = g1.is_one() ? bd : *divide_exact(bd, g1);
    Poly n2 = g2.is_one() ? bn : *divide_exact(bn, g2);
    Poly d1 = g2.is_one() ? ad : *divide_exact(ad, g2);
    return make_normalized(n1 * n2, d1 * d2);
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  Scalar& operator/=(const Scalar& b) { return *this = *this / b; }

  Scalar inverse() const {
    if (is_zero()) fail(ErrorKind::DivisionByZero, "division by the zero scalar");
    if (!f_) return Scalar(mpq_class(1 / val_));
    return make_normalized(f_->den, f_->num);
  }

  Scalar scaled(const mpq_class& c) const {
    if (sgn(c) == 0) return Scalar();
    if (!f_) return Scalar(mpq_class(val_ * c));
    Scalar s;
    s.f_ = std::make_shared<const Frac>(Frac{f_->num.scaled(c), f_->den});
    return s;
  }

  /// Integer power; negative exponents invert.
  Scalar pow(long k) const {
    if (k < 0) return inverse().pow(-k);
    if (k == 0) return Scalar(1);
    if (!f_) {
      mpq_class r;
      mpz_pow_ui(r.get_num_mpz_t(), val_.get_num_mpz_t(), static_cast<unsigned long>(k));
      mpz_pow_ui(r.get_den_mpz_t(), val_.get_den_mpz_t(), static_cast<unsigned long>(k));
      r.canonicalize();
      return Scalar(r);
    }
    Scalar s;
    s.f_ = std::make_shared<const Frac>(Frac{f_->num.pow(static_cast<unsigned>(k)), f_->den.pow(static_cast<unsigned>(k))});
    return s;
  }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (!a.f_ && !b.f_) return a.val_ == b.val_;
    if (!a.f_ || !b.f_) return false;
    if (a.f_ == b.f_) return true;
    return a.f_->num == b.f_->num && a.f_->den == b.f_->den;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// Replaces the bound symbols by rationals; other symbols stay symbolic.
  Scalar specialize(const std::array<std::optional<mpq_class>, kMaxSymbols>& values) const {
    if (!f_) return *this;
    Poly d = f_->den.substitute(values);
    if (d.is_zero()) fail(ErrorKind::PoleAtPoint, "denominator vanishes at the given point");
    return fraction(f_->num.substitute(values), d);
  }

  std::string to_string() const {
    if (!f_) return val_.get_str();
    std::string n = f_->num.to_string();
    if (f_->den.is_one()) return n;
    std::string d = f_->den.to_string();
    if (f_->num.size() > 1) n = "(" + n + ")";
    if (f_->den.size() > 1 || std::popcount(f_->den.support()) > 1) d = "(" + d + ")";
    return n + "/" + d;
  }

 private:
  struct Frac {
    Poly num, den;
  };

  mpq_class val_{0};
  std::shared_ptr<const Frac> f_;

  // Assumes num/den coprime.
  static Scalar make_normalized(Poly num, Poly den) {
    if (den.is_zero()) fail(ErrorKind::DivisionByZero, "zero denominator");
    if (num.is_zero()) return Scalar();
    mpq_class lc = den.leading().c;
    if (lc != 1) {
      mpq_class inv = 1 / lc;
      num = num.scaled(inv);
      den = den.scaled(inv);
    }
    if (den.is_one()) return from_poly(num);
    Scalar s;
    s.f_ = std::make_shared<const Frac>(Frac{std::move(num), std::move(den)});
    return s;
  }
};

inline std::ostream& operator<<(std::ostream& os, const Scalar& x) { return os << x.to_string(); }

inline Scalar xi() { return Scalar::q() - Scalar::q().inverse(); }

/// k_q = (q^k - q^-k)/(q - q^-1); k_q for k <= 0 follows k_q = -(-k)_q.
inline Scalar qnumber(long k) {
  if (k == 0) return Scalar();
  if (k < 0) return -qnumber(-k);
  std::vector<Poly::Term> terms;
  for (long j = 0; j < k; ++j) terms.push_back({Poly::variable(0, static_cast<unsigned>(2 * j)).leading().m, mpq_class(1)});
  return Scalar::fraction(Poly::from_terms(terms), Poly::variable(0, static_cast<unsigned>(k - 1)));
}

/// Value of k_q at a rational q (k_q(1) = k).
inline mpq_class qnumber_at(long k, const mpq_class& qv) {
  if (k == 0) return 0;
  if (k < 0) return -qnumber_at(-k, qv);
  if (sgn(qv) == 0) fail(ErrorKind::PoleAtPoint, "q = 0");
  mpq_class s = 0, qi = 1 / qv, p = 1;
  for (long j = 0; j < k - 1; ++j) p *= qi;  // q^-(k-1)
  mpq_class q2 = qv * qv;
  for (long j = 0; j < k; ++j) {
    s += p;
    p *= q2;
  }
  return s;
}

using Bindings = std::map<std::string, mpq_class>;

inline std::array<std::optional<mpq_class>, kMaxSymbols> to_values(const Bindings& b) {
  std::array<std::optional<mpq_class>, kMaxSymbols> v{};
  for (const auto& [name, val] : b) {
    auto idx = SymbolTable::global().find(name);
    if (idx) v[*idx] = val;
  }
  return v;
}

inline mpq_class evaluate(const Scalar& x, const std::array<std::optional<mpq_class>, kMaxSymbols>& values) {
  if (x.is_rational()) return x.rational();
  std::uint32_t sup = x.support();
  for (std::size_t i = 0; i < kMaxSymbols; ++i)
    if ((sup & (1u << i)) && !values[i])
      fail(ErrorKind::UnboundSymbol, "symbol '" + SymbolTable::global().name(i) + "' is not bound");
  Poly d = x.denominator().substitute(values);
  if (d.is_zero()) fail(ErrorKind::PoleAtPoint, "denominator vanishes at the given point");
  return x.numerator().substitute(values).constant_value() / d.constant_value();
}

inline mpq_class evaluate(const Scalar& x, const Bindings& b) { return evaluate(x, to_values(b)); }

/// Substitutes Scalars for symbols (a ring homomorphism on polynomials,
/// extended to fractions).
inline Scalar substitute(const Scalar& x, const std::map<std::size_t, Scalar>& subs) {
  if (x.is_rational()) return x;
  auto apply = [&](const Poly& p) {
    std::map<std::pair<std::size_t, unsigned>, Scalar> cache;
    auto power = [&](std::size_t var, unsigned e) -> Scalar {
      auto key = std::make_pair(var, e);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      Scalar r = subs.at(var).pow(e);
      cache.emplace(key, r);
      return r;
    };
    Scalar acc;
    for (const auto& t : p.terms()) {
      Monomial rest;
      Scalar f(t.c);
      for (std::size_t i = 0; i < kMaxSymbols; ++i) {
        if (!t.m.e[i]) continue;
        if (subs.count(i))
          f *= power(i, t.m.e[i]);
        else
          rest.e[i] = t.m.e[i];
      }
      if (!rest.is_one()) f *= Scalar::from_poly(Poly::monomial(rest, 1));
      acc += f;
    }
    return acc;
  };
  Scalar d = apply(x.denominator());
  if (d.is_zero()) fail(ErrorKind::PoleAtPoint, "denominator vanishes after substitution");
  return apply(x.numerator()) / d;
}

inline Scalar substitute(const Scalar& x, const std::map<std::string, Scalar>& subs) {
  std::map<std::size_t, Scalar> by_index;
  for (const auto& [name, v] : subs) by_index.emplace(SymbolTable::global().intern(name), v);
  return substitute(x, by_index);
}

namespace detail {

class ScalarParser {
 public:
  explicit ScalarParser(std::string_view s) : s_(s) {}

  Scalar parse() {
    Scalar r = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::ParseError, msg + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  Scalar expr() {
    Scalar r = term();
    while (true) {
      if (eat('+'))
        r += term();
      else if (eat('-'))
        r -= term();
      else
        return r;
    }
  }
  Scalar term() {
    Scalar r = unary();
    while (true) {
      if (eat('*')) {
        r *= unary();
      } else if (eat('/')) {
        Scalar d = unary();
        if (d.is_zero()) fail(ErrorKind::DivisionByZero, "division by zero in '" + std::string(s_) + "'");
        r /= d;
      } else {
        return r;
      }
    }
  }
  Scalar unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  Scalar power() {
    Scalar b = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) error("expected non-negative integer exponent");
      if (pos_ - start > 4) error("exponent too large");
      b = b.pow(std::stol(std::string(s_.substr(start, pos_ - start))));
    }
    return b;
  }
  Scalar atom() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Scalar r = expr();
      if (!eat(')')) error("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Scalar(mpq_class(mpz_class(std::string(s_.substr(start, pos_ - start)))));
    }
    if (c >= 'a' && c <= 'z') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_') &&
             !std::isupper(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      return Scalar::symbol(s_.substr(start, pos_ - start));
    }
    error("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace detail

inline Scalar parse_scalar(std::string_view text) { return detail::ScalarParser(text).parse(); }

struct ProbableEquality {
  bool equal = false;
  int trials = 0;
  /// Upper bound on the chance that unequal inputs agree at every point.
  double error_bound = 0;
};

/// Randomized exact comparison. Points come from std::mt19937_64(seed):
/// each coordinate is (1 + r1 % 2^31) / (1 + r2 % 2^31), symbols drawn in
/// registration order. A false result is a certified inequality.
inline ProbableEquality probably_equal(const Scalar& x, const Scalar& y, int trials, std::uint64_t seed) {
  if (trials < 1) fail(ErrorKind::InvalidArgument, "trials must be >= 1");
  if (x == y) return {true, 1, 0.0};
  std::mt19937_64 rng(seed);
  std::uint32_t sup = x.support() | y.support();
  const std::uint64_t range = 1ull << 31;
  ProbableEquality out;
  for (int t = 0; t < trials; ++t) {
    bool done = false;
    for (int attempt = 0; attempt <= 10 && !done; ++attempt) {
      std::array<std::optional<mpq_class>, kMaxSymbols> v{};
      for (std::size_t i = 0; i < kMaxSymbols; ++i) {
        if (!(sup & (1u << i))) continue;
        unsigned long n = 1 + static_cast<unsigned long>(rng() % range);
        unsigned long d = 1 + static_cast<unsigned long>(rng() % range);
        mpq_class r(n, d);
        r.canonicalize();
        v[i] = r;
      }
      mpq_class a, b;
      try {
        a = evaluate(x, v);
        b = evaluate(y, v);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PoleAtPoint) throw;
        continue;
      }
      done = true;
      ++out.trials;
      if (a != b) return out;
    }
    if (!done) fail(ErrorKind::ResourceLimit, "too many pole points while sampling");
  }
  out.equal = true;
  // Degree of the cleared difference bounds the number of roots per line.
  double deg = static_cast<double>(x.numerator().total_degree() + x.denominator().total_degree() +
                                   y.numerator().total_degree() + y.denominator().total_degree());
  double p = deg / static_cast<double>(range);
  out.error_bound = 1.0;
  for (int t = 0; t < out.trials; ++t) out.error_bound *= p;
  return out;
}

}  // namespace qorbit
