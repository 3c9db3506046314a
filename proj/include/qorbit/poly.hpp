#pragma once

// Sparse multivariate polynomials over Q and their gcd.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qorbit/errors.hpp"

namespace qorbit {

inline constexpr std::size_t kMaxSymbols = 24;
inline constexpr std::size_t kReservedIndexed = 6;

/// Process-wide ordered symbol registry. `q`, `h`, `mu1..mu6`, `nu1..nu6` are
/// registered first, in that order; other names are appended on first use.
/// The registration index fixes the monomial order.
class SymbolTable {
 public:
  static SymbolTable& global() {
    static SymbolTable table;
    return table;
  }

  static bool valid_name(std::string_view s) {
    if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
      return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    });
  }

  std::size_t intern(std::string_view name) {
    std::lock_guard lock(mu_);
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    if (!valid_name(name)) fail(ErrorKind::ParseError, "invalid symbol name '" + std::string(name) + "'");
    if (names_.size() >= kMaxSymbols) fail(ErrorKind::ResourceLimit, "symbol table full");
    names_.emplace_back(name);
    return names_.size() - 1;
  }

  std::optional<std::size_t> find(std::string_view name) const {
    std::lock_guard lock(mu_);
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    return std::nullopt;
  }

  std::string name(std::size_t i) const {
    std::lock_guard lock(mu_);
    return names_.at(i);
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return names_.size();
  }

 private:
  SymbolTable() {
    names_ = {"q", "h"};
    for (std::size_t i = 1; i <= kReservedIndexed; ++i) names_.push_back("mu" + std::to_string(i));
    for (std::size_t i = 1; i <= kReservedIndexed; ++i) names_.push_back("nu" + std::to_string(i));
  }

  mutable std::mutex mu_;
  std::vector<std::string> names_;
};

struct Monomial {
  std::array<std::uint8_t, kMaxSymbols> e{};

  unsigned degree() const {
    unsigned d = 0;
    for (auto x : e) d += x;
    return d;
  }
  bool is_one() const {
    return std::all_of(e.begin(), e.end(), [](std::uint8_t x) { return x == 0; });
  }
  std::uint32_t support() const {
    std::uint32_t s = 0;
    for (std::size_t i = 0; i < kMaxSymbols; ++i)
      if (e[i]) s |= (1u << i);
    return s;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

  Monomial operator*(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxSymbols; ++i) {
      unsigned v = unsigned(e[i]) + o.e[i];
      if (v > 255) fail(ErrorKind::ResourceLimit, "exponent overflow");
      r.e[i] = static_cast<std::uint8_t>(v);
    }
    return r;
  }
  bool divides(const Monomial& o) const {
    for (std::size_t i = 0; i < kMaxSymbols; ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }
  Monomial operator/(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxSymbols; ++i) r.e[i] = static_cast<std::uint8_t>(e[i] - o.e[i]);
    return r;
  }
};

/// Graded lexicographic order: total degree first, then lexicographic on
/// symbol registration order.
inline bool grlex_greater(const Monomial& a, const Monomial& b) {
  unsigned da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  return a.e > b.e;
}

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : m.e) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex_greater(a, b); }
};

class Poly {
 public:
  struct Term {
    Monomial m;
    mpq_class c;
  };

  Poly() = default;
  explicit Poly(const mpq_class& c) {
    if (sgn(c) != 0) t_.push_back({Monomial{}, c});
  }
  explicit Poly(long c) : Poly(mpq_class(c)) {}

  static Poly variable(std::size_t idx, unsigned power = 1) {
    Monomial m;
    if (power > 255) fail(ErrorKind::ResourceLimit, "exponent overflow");
    m.e.at(idx) = static_cast<std::uint8_t>(power);
    Poly p;
    p.t_.push_back({m, mpq_class(1)});
    return p;
  }
  static Poly monomial(const Monomial& m, const mpq_class& c) {
    Poly p;
    if (sgn(c) != 0) p.t_.push_back({m, c});
    return p;
  }
  /// Builds from arbitrary terms (merged, zeros dropped, sorted).
  static Poly from_terms(std::vector<Term> terms) {
    Poly p;
    p.t_ = std::move(terms);
    p.canonicalize();
    return p;
  }

  const std::vector<Term>& terms() const { return t_; }
  std::size_t size() const { return t_.size(); }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].m.is_one()); }
  bool is_one() const { return t_.size() == 1 && t_[0].m.is_one() && t_[0].c == 1; }
  mpq_class constant_value() const { return t_.empty() ? mpq_class(0) : (t_.back().m.is_one() ? t_.back().c : mpq_class(0)); }
  const Term& leading() const { return t_.front(); }

  std::uint32_t support() const {
    std::uint32_t s = 0;
    for (const auto& t : t_) s |= t.m.support();
    return s;
  }
  unsigned total_degree() const { return t_.empty() ? 0 : t_.front().m.degree(); }
  unsigned degree_in(std::size_t var) const {
    unsigned d = 0;
    for (const auto& t : t_) d = std::max<unsigned>(d, t.m.e[var]);
    return d;
  }
  Monomial min_exponents() const {
    Monomial r;
    if (t_.empty()) return r;
    r = t_.front().m;
    for (const auto& t : t_)
      for (std::size_t i = 0; i < kMaxSymbols; ++i) r.e[i] = std::min(r.e[i], t.m.e[i]);
    return r;
  }

  /// Coefficients with respect to `var`, keyed by exponent; `var` removed.
  std::map<unsigned, Poly> coefficients_in(std::size_t var) const {
    std::map<unsigned, std::vector<Term>> buckets;
    for (const auto& t : t_) {
      Term s = t;
      unsigned d = s.m.e[var];
      s.m.e[var] = 0;
      buckets[d].push_back(std::move(s));
    }
    std::map<unsigned, Poly> out;
    for (auto& [d, v] : buckets) out.emplace(d, from_terms(std::move(v)));
    return out;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& t : r.t_) t.c = -t.c;
    return r;
  }
  friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
  friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }
  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.t_.size() == 1) return b.mul_term(a.t_[0].m, a.t_[0].c);
    if (b.t_.size() == 1) return a.mul_term(b.t_[0].m, b.t_[0].c);
    std::unordered_map<Monomial, mpq_class, MonomialHash> acc;
    acc.reserve(a.t_.size() * b.t_.size());
    mpq_class tmp;
    for (const auto& x : a.t_)
      for (const auto& y : b.t_) {
        mpq_mul(tmp.get_mpq_t(), x.c.get_mpq_t(), y.c.get_mpq_t());
        acc[x.m * y.m] += tmp;
      }
    Poly r;
    r.t_.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (sgn(c) != 0) r.t_.push_back({m, std::move(c)});
    std::sort(r.t_.begin(), r.t_.end(), [](const Term& u, const Term& v) { return grlex_greater(u.m, v.m); });
    return r;
  }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  Poly mul_term(const Monomial& m, const mpq_class& c) const {
    if (sgn(c) == 0) return {};
    Poly r;
    r.t_.reserve(t_.size());
    for (const auto& t : t_) r.t_.push_back({t.m * m, t.c * c});
    return r;  // multiplication by a monomial preserves the order
  }
  Poly scaled(const mpq_class& c) const { return mul_term(Monomial{}, c); }

  Poly pow(unsigned k) const {
    Poly r(1), b = *this;
    while (k) {
      if (k & 1u) r *= b;
      k >>= 1u;
      if (k) b *= b;
    }
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.t_.size() != b.t_.size()) return false;
    for (std::size_t i = 0; i < a.t_.size(); ++i)
      if (a.t_[i].m != b.t_[i].m || a.t_[i].c != b.t_[i].c) return false;
    return true;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Substitutes rational values for the bound symbols; unbound ones stay.
  Poly substitute(const std::array<std::optional<mpq_class>, kMaxSymbols>& values) const {
    std::vector<Term> out;
    out.reserve(t_.size());
    for (const auto& t : t_) {
      Term s{t.m, t.c};
      for (std::size_t i = 0; i < kMaxSymbols; ++i) {
        if (s.m.e[i] && values[i]) {
          mpq_class p;
          mpz_pow_ui(p.get_num_mpz_t(), values[i]->get_num_mpz_t(), s.m.e[i]);
          mpz_pow_ui(p.get_den_mpz_t(), values[i]->get_den_mpz_t(), s.m.e[i]);
          p.canonicalize();
          s.c *= p;
          s.m.e[i] = 0;
        }
      }
      if (sgn(s.c) != 0) out.push_back(std::move(s));
    }
    return from_terms(std::move(out));
  }

  std::string to_string() const {
    if (t_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& t : t_) {
      mpq_class c = t.c;
      bool neg = sgn(c) < 0;
      if (neg) c = -c;
      if (first) {
        if (neg) s += "-";
      } else {
        s += neg ? " - " : " + ";
      }
      first = false;
      bool unit = (c == 1);
      if (!unit || t.m.is_one()) s += c.get_str();
      bool need_star = !unit;
      for (std::size_t i = 0; i < kMaxSymbols; ++i) {
        if (!t.m.e[i]) continue;
        if (need_star) s += "*";
        s += SymbolTable::global().name(i);
        if (t.m.e[i] > 1) s += "^" + std::to_string(t.m.e[i]);
        need_star = true;
      }
    }
    return s;
  }

 private:
  std::vector<Term> t_;  // descending grlex, no zero coefficients

  void canonicalize() {
    std::sort(t_.begin(), t_.end(), [](const Term& u, const Term& v) { return grlex_greater(u.m, v.m); });
    std::vector<Term> out;
    out.reserve(t_.size());
    for (auto& t : t_) {
      if (!out.empty() && out.back().m == t.m)
        out.back().c += t.c;
      else
        out.push_back(std::move(t));
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return sgn(t.c) == 0; }), out.end());
    t_ = std::move(out);
  }

  static Poly merge(const Poly& a, const Poly& b, bool subtract) {
    Poly r;
    r.t_.reserve(a.t_.size() + b.t_.size());
    std::size_t i = 0, j = 0;
    while (i < a.t_.size() || j < b.t_.size()) {
      if (j == b.t_.size() || (i < a.t_.size() && grlex_greater(a.t_[i].m, b.t_[j].m))) {
        r.t_.push_back(a.t_[i++]);
      } else if (i == a.t_.size() || grlex_greater(b.t_[j].m, a.t_[i].m)) {
        r.t_.push_back({b.t_[j].m, subtract ? mpq_class(-b.t_[j].c) : b.t_[j].c});
        ++j;
      } else {
        mpq_class c = subtract ? mpq_class(a.t_[i].c - b.t_[j].c) : mpq_class(a.t_[i].c + b.t_[j].c);
        if (sgn(c) != 0) r.t_.push_back({a.t_[i].m, std::move(c)});
        ++i;
        ++j;
      }
    }
    return r;
  }
};

/// Exact division a / b; nullopt when b does not divide a.
inline std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) fail(ErrorKind::DivisionByZero, "polynomial division by zero");
  if (a.is_zero()) return Poly{};
  if (b.size() == 1) {
    const auto& lt = b.leading();
    std::vector<Poly::Term> out;
    out.reserve(a.size());
    for (const auto& t : a.terms()) {
      if (!lt.m.divides(t.m)) return std::nullopt;
      out.push_back({t.m / lt.m, t.c / lt.c});
    }
    return Poly::from_terms(std::move(out));
  }
  if (a.total_degree() < b.total_degree()) return std::nullopt;
  std::map<Monomial, mpq_class, GrlexGreater> r;
  for (const auto& t : a.terms()) r.emplace(t.m, t.c);
  const auto& lb = b.leading();
  std::vector<Poly::Term> quot;
  mpq_class tmp;
  while (!r.empty()) {
    auto it = r.begin();
    if (!lb.m.divides(it->first)) return std::nullopt;
    Monomial qm = it->first / lb.m;
    mpq_class qc = it->second / lb.c;
    for (const auto& t : b.terms()) {
      Monomial m = t.m * qm;
      mpq_mul(tmp.get_mpq_t(), t.c.get_mpq_t(), qc.get_mpq_t());
      auto [pos, inserted] = r.try_emplace(m, 0);
      pos->second -= tmp;
      if (sgn(pos->second) == 0) r.erase(pos);
    }
    quot.push_back({qm, std::move(qc)});
  }
  return Poly::from_terms(std::move(quot));
}

namespace detail {

inline mpz_class lcm_of_denominators(const Poly& p) {
  mpz_class l = 1;
  for (const auto& t : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.c.get_den_mpz_t());
  return l;
}

inline mpz_class integer_content(const Poly& p) {
  mpz_class g = 0;
  for (const auto& t : p.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_num_mpz_t());
    if (g == 1) break;
  }
  return g;
}

/// Scales p to a primitive integer polynomial with positive leading coefficient.
inline Poly primitive_integer(const Poly& p) {
  if (p.is_zero()) return p;
  mpq_class f(lcm_of_denominators(p));
  Poly r = p.scaled(f);
  mpz_class g = integer_content(r);
  if (sgn(r.leading().c) < 0) g = -g;
  return r.scaled(mpq_class(1) / mpq_class(g));
}

inline mpz_class max_norm(const Poly& p) {
  mpz_class m = 0;
  for (const auto& t : p.terms()) {
    mpz_class a = abs(t.c.get_num());
    if (a > m) m = a;
  }
  return m;
}

inline int first_var(std::uint32_t support) {
  for (std::size_t i = 0; i < kMaxSymbols; ++i)
    if (support & (1u << i)) return static_cast<int>(i);
  return -1;
}

inline Poly eval_var(const Poly& p, std::size_t var, const mpz_class& x) {
  std::array<std::optional<mpq_class>, kMaxSymbols> v{};
  v[var] = mpq_class(x);
  return p.substitute(v);
}

/// Reconstructs a polynomial in `var` from its image at var = x using the
/// symmetric x-adic expansion of each integer coefficient.
inline Poly interpolate(Poly h, std::size_t var, const mpz_class& x) {
  std::vector<Poly::Term> out;
  mpz_class half = x / 2;
  unsigned power = 0;
  while (!h.is_zero()) {
    std::vector<Poly::Term> g;
    for (const auto& t : h.terms()) {
      mpz_class c = t.c.get_num();
      mpz_class r;
      mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), x.get_mpz_t());
      if (r > half) r -= x;
      if (sgn(r) != 0) g.push_back({t.m, mpq_class(r)});
    }
    Poly gp = Poly::from_terms(g);
    for (auto t : gp.terms()) {
      if (power > 255) fail(ErrorKind::ResourceLimit, "exponent overflow in gcd interpolation");
      t.m.e[var] = static_cast<std::uint8_t>(power);
      out.push_back(std::move(t));
    }
    h = (h - gp).scaled(mpq_class(1) / mpq_class(x));
    ++power;
  }
  Poly r = Poly::from_terms(std::move(out));
  if (!r.is_zero() && sgn(r.leading().c) < 0) r = -r;
  return r;
}

struct HeuGcd {
  Poly g, cf, cg;
};

/// Heuristic gcd of integer polynomials (evaluation / interpolation).
/// Returns nullopt when the heuristic gives up.
inline std::optional<HeuGcd> heu_gcd(const Poly& f0, const Poly& g0, int budget = 6) {
  if (f0.is_constant() && g0.is_constant()) {
    mpz_class a = f0.constant_value().get_num(), b = g0.constant_value().get_num();
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (g == 0) g = 1;
    return HeuGcd{Poly(mpq_class(g)), Poly(mpq_class(a / g)), Poly(mpq_class(b / g))};
  }
  mpz_class cf = integer_content(f0), cg = integer_content(g0), c;
  mpz_gcd(c.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
  Poly f = f0.scaled(mpq_class(1) / mpq_class(c));
  Poly g = g0.scaled(mpq_class(1) / mpq_class(c));
  int var = first_var(f.support() | g.support());
  mpz_class fn = max_norm(f), gn = max_norm(g);
  mpz_class x = 2 * std::min(fn, gn) + 29;
  for (int i = 0; i < budget; ++i) {
    Poly ff = eval_var(f, var, x), gg = eval_var(g, var, x);
    if (!ff.is_zero() && !gg.is_zero()) {
      auto sub = heu_gcd(ff, gg, budget);
      if (sub) {
        Poly h = primitive_integer(interpolate(sub->g, var, x));
        if (!h.is_zero()) {
          auto qf = divide_exact(f, h);
          if (qf) {
            auto qg = divide_exact(g, h);
            if (qg) return HeuGcd{h.scaled(mpq_class(c)), *qf, *qg};
          }
        }
        Poly cff = interpolate(sub->cf, var, x);
        if (!cff.is_zero()) {
          auto hh = divide_exact(f, cff);
          if (hh) {
            auto qg = divide_exact(g, *hh);
            if (qg) return HeuGcd{hh->scaled(mpq_class(c)), cff, *qg};
          }
        }
        Poly cfg = interpolate(sub->cg, var, x);
        if (!cfg.is_zero()) {
          auto hh = divide_exact(g, cfg);
          if (hh) {
            auto qf = divide_exact(f, *hh);
            if (qf) return HeuGcd{hh->scaled(mpq_class(c)), *qf, cfg};
          }
        }
      }
    }
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), x.get_mpz_t());
    mpz_sqrt(s.get_mpz_t(), s.get_mpz_t());
    x = (73794 * x * s) / 27011;
  }
  return std::nullopt;
}

}  // namespace detail

Poly gcd(const Poly& a, const Poly& b);

namespace detail {

inline Poly content_in(const Poly& p, std::size_t var) {
  Poly g;
  for (const auto& [d, c] : p.coefficients_in(var)) {
    g = g.is_zero() ? c : gcd(g, c);
    if (g.is_constant()) return Poly(1);
  }
  return g;
}

inline Poly leading_coeff_in(const Poly& p, std::size_t var, unsigned* deg) {
  auto cs = p.coefficients_in(var);
  *deg = cs.rbegin()->first;
  return cs.rbegin()->second;
}

/// Primitive pseudo-remainder sequence; slow but unconditional.
inline Poly gcd_prs(const Poly& a, const Poly& b) {
  int var = first_var(a.support() | b.support());
  Poly ca = content_in(a, var), cb = content_in(b, var);
  Poly c = gcd(ca, cb);
  Poly f = *divide_exact(a, ca), g = *divide_exact(b, cb);
  if (f.degree_in(var) < g.degree_in(var)) std::swap(f, g);
  while (true) {
    if (g.degree_in(var) == 0) {
      g = Poly(1);
      break;
    }
    Poly r = f;
    unsigned dg;
    Poly lg = leading_coeff_in(g, var, &dg);
    while (!r.is_zero() && r.degree_in(var) >= dg) {
      unsigned dr;
      Poly lr = leading_coeff_in(r, var, &dr);
      r = lg * r - lr * Poly::variable(var, dr - dg) * g;
    }
    if (r.is_zero()) break;
    f = g;
    g = *divide_exact(r, content_in(r, var));
  }
  return primitive_integer(c * g);
}

}  // namespace detail

/// Greatest common divisor, normalized to a primitive integer polynomial with
/// positive leading coefficient (1 when coprime).
inline Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return detail::primitive_integer(b);
  if (b.is_zero()) return detail::primitive_integer(a);
  if (a.is_constant() || b.is_constant()) return Poly(1);
  Monomial ma = a.min_exponents(), mb = b.min_exponents(), mg;
  for (std::size_t i = 0; i < kMaxSymbols; ++i) mg.e[i] = std::min(ma.e[i], mb.e[i]);
  Poly mono = Poly::monomial(mg, 1);
  Poly a1 = ma.is_one() ? a : *divide_exact(a, Poly::monomial(ma, 1));
  Poly b1 = mb.is_one() ? b : *divide_exact(b, Poly::monomial(mb, 1));
  if (a1.is_constant() || b1.is_constant()) return mono;
  std::uint32_t sa = a1.support(), sb = b1.support();
  if (sa != sb) {
    // A variable present in only one operand: gcd divides each of its coefficients.
    const Poly& x = (sa & ~sb) ? a1 : b1;
    const Poly& y = (sa & ~sb) ? b1 : a1;
    int var = detail::first_var((sa & ~sb) ? (sa & ~sb) : (sb & ~sa));
    Poly g = y;
    for (const auto& [d, c] : x.coefficients_in(var)) {
      g = gcd(g, c);
      if (g.is_constant()) return mono;
    }
    return mono * g;
  }
  Poly pa = detail::primitive_integer(a1), pb = detail::primitive_integer(b1);
  if (pa == pb) return mono * pa;
  if (auto h = detail::heu_gcd(pa, pb)) return mono * detail::primitive_integer(h->g);
  return mono * detail::gcd_prs(pa, pb);
}

}  // namespace qorbit
