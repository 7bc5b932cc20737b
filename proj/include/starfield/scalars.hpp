#pragma once

// Exact scalar rings: rationals, Gaussian rationals, and formal unitary
// phases. No floating point anywhere.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace starfield {

using Rational = mpq_class;

struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

struct MathError : std::runtime_error {
  explicit MathError(const std::string& msg) : std::runtime_error(msg) {}
};

inline Rational ratOf(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Accepts "p" or "p/q" in base 10.
inline Rational ratParse(const std::string& s) {
  Rational q;
  if (s.empty() || mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
    throw SchemaError("bad rational: '" + s + "'");
  if (sgn(Rational(q.get_den())) == 0) throw SchemaError("zero denominator: '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string ratStr(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational factorial(unsigned n) {
  Rational r = 1;
  for (unsigned k = 2; k <= n; ++k) r *= ratOf(k);
  return r;
}

// ---------------------------------------------------------------------------
// GaussRational: re + i*im, the coefficient field for everything symbolic.

struct GaussRational {
  Rational re, im;

  GaussRational() : re(0), im(0) {}
  GaussRational(long n) : re(ratOf(n)), im(0) {}  // NOLINT(google-explicit-constructor)
  GaussRational(Rational r) : re(std::move(r)), im(0) {}  // NOLINT
  GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussRational iunit() { return GaussRational(ratOf(0), ratOf(1)); }
  // i^k, k taken mod 4.
  static GaussRational ipow(long k) {
    switch (((k % 4) + 4) % 4) {
      case 0: return GaussRational(1);
      case 1: return iunit();
      case 2: return GaussRational(-1);
      default: return GaussRational(ratOf(0), ratOf(-1));
    }
  }

  friend GaussRational operator+(const GaussRational& a, const GaussRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussRational operator-(const GaussRational& a, const GaussRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re, -a.im}; }
  friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussRational& operator+=(const GaussRational& o) { return *this = *this + o; }
  GaussRational& operator-=(const GaussRational& o) { return *this = *this - o; }
  GaussRational& operator*=(const GaussRational& o) { return *this = *this * o; }

  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const GaussRational& a) {
    return os << ratStr(a.re) << (sgn(a.im) < 0 ? "" : "+") << ratStr(a.im) << "i";
  }
};

inline bool isZero(const GaussRational& a) { return sgn(a.re) == 0 && sgn(a.im) == 0; }
inline GaussRational conj(const GaussRational& a) { return {a.re, -a.im}; }

// ---------------------------------------------------------------------------
// PhaseScalar: finite sums sum_r c_r e^{i r} with formal rational exponents.
// Equality is exponent-map equality; exponents add under multiplication.

struct PhaseScalar {
  std::map<Rational, GaussRational> terms;

  PhaseScalar() = default;
  explicit PhaseScalar(const GaussRational& c) {
    if (!starfield::isZero(c)) terms.emplace(ratOf(0), c);
  }
  // c * e^{i r}
  static PhaseScalar unitExp(const Rational& r, const GaussRational& c = GaussRational(1)) {
    PhaseScalar p;
    if (!starfield::isZero(c)) p.terms.emplace(r, c);
    return p;
  }

  void addTerm(const Rational& r, const GaussRational& c) {
    auto [it, fresh] = terms.try_emplace(r, c);
    if (!fresh) {
      it->second += c;
      if (starfield::isZero(it->second)) terms.erase(it);
    } else if (starfield::isZero(c)) {
      terms.erase(it);
    }
  }

  friend PhaseScalar operator+(const PhaseScalar& a, const PhaseScalar& b) {
    PhaseScalar r = a;
    for (const auto& [e, c] : b.terms) r.addTerm(e, c);
    return r;
  }
  friend PhaseScalar operator-(const PhaseScalar& a, const PhaseScalar& b) {
    PhaseScalar r = a;
    for (const auto& [e, c] : b.terms) r.addTerm(e, -c);
    return r;
  }
  friend PhaseScalar operator-(const PhaseScalar& a) {
    PhaseScalar r;
    for (const auto& [e, c] : a.terms) r.terms.emplace(e, -c);
    return r;
  }
  friend PhaseScalar operator*(const PhaseScalar& a, const PhaseScalar& b) {
    PhaseScalar r;
    for (const auto& [ea, ca] : a.terms)
      for (const auto& [eb, cb] : b.terms) r.addTerm(ea + eb, ca * cb);
    return r;
  }
  PhaseScalar& operator+=(const PhaseScalar& o) { return *this = *this + o; }
  PhaseScalar& operator*=(const PhaseScalar& o) { return *this = *this * o; }

  friend bool operator==(const PhaseScalar& a, const PhaseScalar& b) { return a.terms == b.terms; }
  friend bool operator!=(const PhaseScalar& a, const PhaseScalar& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const PhaseScalar& p) {
    if (p.terms.empty()) return os << "0";
    bool first = true;
    for (const auto& [e, c] : p.terms) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c << ")e^{i " << ratStr(e) << "}";
    }
    return os;
  }
};

inline bool isZero(const PhaseScalar& p) { return p.terms.empty(); }
inline PhaseScalar conj(const PhaseScalar& p) {
  PhaseScalar r;
  for (const auto& [e, c] : p.terms) r.terms.emplace(-e, conj(c));
  return r;
}

}  // namespace starfield
