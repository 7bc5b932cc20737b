#pragma once

// Truncated formal power series in hbar over an exact ring R, i.e. arithmetic
// in R[h]/(h^{K+1}). The truncation order travels with the value; mixed-order
// arithmetic truncates down to the smaller order.

#include <algorithm>
#include <vector>

#include "starfield/scalars.hpp"

namespace starfield {

template <class R>
struct HbarSeries {
  int K = 0;           // truncation order
  std::vector<R> c;    // coefficients 0..K, always size K+1

  HbarSeries() : c(1) {}
  explicit HbarSeries(int order) : K(order), c(order + 1) {}
  HbarSeries(int order, R constantTerm) : K(order), c(order + 1) {
    c[0] = std::move(constantTerm);
  }

  const R& at(int k) const { return c[k]; }
  R& at(int k) { return c[k]; }

  HbarSeries truncated(int order) const {
    HbarSeries r(std::min(order, K));
    for (int k = 0; k <= r.K; ++k) r.c[k] = c[k];
    return r;
  }

  friend HbarSeries operator+(const HbarSeries& a, const HbarSeries& b) {
    HbarSeries r(std::min(a.K, b.K));
    for (int k = 0; k <= r.K; ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
  }
  friend HbarSeries operator-(const HbarSeries& a, const HbarSeries& b) {
    HbarSeries r(std::min(a.K, b.K));
    for (int k = 0; k <= r.K; ++k) r.c[k] = a.c[k] - b.c[k];
    return r;
  }
  friend HbarSeries operator-(const HbarSeries& a) {
    HbarSeries r(a.K);
    for (int k = 0; k <= a.K; ++k) r.c[k] = -a.c[k];
    return r;
  }
  // Cauchy product truncated at the smaller order.
  friend HbarSeries operator*(const HbarSeries& a, const HbarSeries& b) {
    HbarSeries r(std::min(a.K, b.K));
    for (int i = 0; i <= a.K; ++i) {
      if (isZero(a.c[i])) continue;
      for (int j = 0; i + j <= r.K && j <= b.K; ++j) {
        if (isZero(b.c[j])) continue;
        r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
      }
    }
    return r;
  }
  HbarSeries& operator+=(const HbarSeries& o) { return *this = *this + o; }
  HbarSeries& operator-=(const HbarSeries& o) { return *this = *this - o; }
  HbarSeries& operator*=(const HbarSeries& o) { return *this = *this * o; }

  friend bool operator==(const HbarSeries& a, const HbarSeries& b) {
    if (a.K != b.K) return false;
    for (int k = 0; k <= a.K; ++k)
      if (!(a.c[k] == b.c[k])) return false;
    return true;
  }
  friend bool operator!=(const HbarSeries& a, const HbarSeries& b) { return !(a == b); }
};

template <class R>
bool isZero(const HbarSeries<R>& s) {
  for (const auto& x : s.c)
    if (!isZero(x)) return false;
  return true;
}

// Equality of all orders both sides retain.
template <class R>
bool equalTruncated(const HbarSeries<R>& a, const HbarSeries<R>& b) {
  int K = std::min(a.K, b.K);
  for (int k = 0; k <= K; ++k)
    if (!(a.c[k] == b.c[k])) return false;
  return true;
}

// hbar is real: conjugation acts coefficientwise.
template <class R>
HbarSeries<R> conj(const HbarSeries<R>& s) {
  HbarSeries<R> r(s.K);
  for (int k = 0; k <= s.K; ++k) r.c[k] = conj(s.c[k]);
  return r;
}

// Multiplication by hbar^j (coefficient shift, same truncation order).
template <class R>
HbarSeries<R> shiftHbar(const HbarSeries<R>& s, int j) {
  HbarSeries<R> r(s.K);
  for (int k = 0; k + j <= s.K; ++k) r.c[k + j] = s.c[k];
  return r;
}

template <class R, class S>
HbarSeries<R> scale(const HbarSeries<R>& s, const S& x) {
  HbarSeries<R> r(s.K);
  for (int k = 0; k <= s.K; ++k) r.c[k] = scaleCoeff(s.c[k], x);
  return r;
}

inline GaussRational scaleCoeff(const GaussRational& a, const GaussRational& x) { return a * x; }
inline GaussRational scaleCoeff(const GaussRational& a, const Rational& x) {
  return a * GaussRational(x);
}

// exp(theta * hbar) truncated at order K.
inline HbarSeries<GaussRational> expSeries(const GaussRational& theta, int K) {
  HbarSeries<GaussRational> r(K);
  GaussRational pow(1);
  for (int k = 0; k <= K; ++k) {
    r.c[k] = pow * GaussRational(ratOf(1) / factorial(k));
    pow *= theta;
  }
  return r;
}

}  // namespace starfield
