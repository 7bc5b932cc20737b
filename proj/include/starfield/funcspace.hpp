#pragma once

// Symbolic function spaces over GaussRational: polynomials on R^n and
// trigonometric polynomials on the torus R^n / 2pi Z^n. Both are finite
// exponent maps; derivatives and (for the torus) averaged integration are
// exact, so no transcendental constant ever enters scalar arithmetic.

#include <vector>

#include "starfield/hbar_series.hpp"
#include "starfield/scalars.hpp"

namespace starfield {

namespace detail {
template <class K>
void mapAdd(std::map<K, GaussRational>& m, const K& k, const GaussRational& c) {
  if (isZero(c)) return;
  auto [it, fresh] = m.try_emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (isZero(it->second)) m.erase(it);
  }
}
}  // namespace detail

// ---------------------------------------------------------------------------
// PolyFn: sum c_alpha x^alpha on R^n.

struct PolyFn {
  int n = 0;
  std::map<std::vector<int>, GaussRational> t;  // exponent >= 0 per entry

  PolyFn() = default;
  explicit PolyFn(int dim) : n(dim) {}

  static PolyFn constant(int dim, const GaussRational& c) {
    PolyFn f(dim);
    if (!isZero(c)) f.t.emplace(std::vector<int>(dim, 0), c);
    return f;
  }
  static PolyFn coordinate(int dim, int j, const GaussRational& c = GaussRational(1)) {
    PolyFn f(dim);
    std::vector<int> e(dim, 0);
    e[j] = 1;
    if (!isZero(c)) f.t.emplace(e, c);
    return f;
  }
  static PolyFn monomial(int dim, const std::vector<int>& e, const GaussRational& c) {
    PolyFn f(dim);
    if (!isZero(c)) f.t.emplace(e, c);
    return f;
  }

  friend PolyFn operator+(const PolyFn& a, const PolyFn& b) {
    PolyFn r = a;
    r.n = a.t.empty() ? b.n : a.n;
    for (const auto& [e, c] : b.t) detail::mapAdd(r.t, e, c);
    return r;
  }
  friend PolyFn operator-(const PolyFn& a, const PolyFn& b) {
    PolyFn r = a;
    r.n = a.t.empty() ? b.n : a.n;
    for (const auto& [e, c] : b.t) detail::mapAdd(r.t, e, -c);
    return r;
  }
  friend PolyFn operator-(const PolyFn& a) {
    PolyFn r(a.n);
    for (const auto& [e, c] : a.t) r.t.emplace(e, -c);
    return r;
  }
  friend PolyFn operator*(const PolyFn& a, const PolyFn& b) {
    PolyFn r(a.n ? a.n : b.n);
    for (const auto& [ea, ca] : a.t)
      for (const auto& [eb, cb] : b.t) {
        std::vector<int> e = ea;
        for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
        detail::mapAdd(r.t, e, ca * cb);
      }
    return r;
  }
  PolyFn& operator+=(const PolyFn& o) { return *this = *this + o; }
  PolyFn& operator-=(const PolyFn& o) { return *this = *this - o; }
  PolyFn& operator*=(const PolyFn& o) { return *this = *this * o; }
  friend bool operator==(const PolyFn& a, const PolyFn& b) { return a.t == b.t; }
  friend bool operator!=(const PolyFn& a, const PolyFn& b) { return !(a == b); }
};

inline bool isZero(const PolyFn& f) { return f.t.empty(); }
inline PolyFn conj(const PolyFn& f) {
  PolyFn r(f.n);
  for (const auto& [e, c] : f.t) r.t.emplace(e, conj(c));
  return r;
}
inline PolyFn scaleCoeff(const PolyFn& f, const GaussRational& x) {
  PolyFn r(f.n);
  if (isZero(x)) return r;
  for (const auto& [e, c] : f.t) r.t.emplace(e, c * x);
  return r;
}
// d/dx_j, exact.
inline PolyFn derive(const PolyFn& f, int j) {
  PolyFn r(f.n);
  for (const auto& [e, c] : f.t) {
    if (e[j] == 0) continue;
    std::vector<int> e2 = e;
    e2[j] -= 1;
    detail::mapAdd(r.t, e2, c * GaussRational(ratOf(e[j])));
  }
  return r;
}
inline int totalDegree(const PolyFn& f) {
  int d = 0;
  for (const auto& [e, c] : f.t) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Affine torus map x -> A x + (pi/2) q with A integral and q an integer
// vector of quarter periods. Quarter periods are the largest translation
// lattice whose mode phases i^{<k,q>} stay inside Q(i).

struct AffineTorusMap {
  std::vector<std::vector<long>> A;  // n x n, must be GL(n,Z) for groupoid use
  std::vector<long> quarter;         // n entries

  static AffineTorusMap identity(int n) {
    AffineTorusMap m;
    m.A.assign(n, std::vector<long>(n, 0));
    for (int i = 0; i < n; ++i) m.A[i][i] = 1;
    m.quarter.assign(n, 0);
    return m;
  }
  int dim() const { return (int)A.size(); }

  friend bool operator==(const AffineTorusMap& a, const AffineTorusMap& b) {
    return a.A == b.A && a.quarter == b.quarter;
  }
};

// phi_a after phi_b, i.e. x -> phi_a(phi_b(x)).
inline AffineTorusMap composeMaps(const AffineTorusMap& a, const AffineTorusMap& b) {
  int n = a.dim();
  AffineTorusMap r = AffineTorusMap::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      long s = 0;
      for (int k = 0; k < n; ++k) s += a.A[i][k] * b.A[k][j];
      r.A[i][j] = s;
    }
  for (int i = 0; i < n; ++i) {
    long s = a.quarter[i];
    for (int k = 0; k < n; ++k) s += a.A[i][k] * b.quarter[k];
    r.quarter[i] = s;
  }
  return r;
}

inline long detInt(const std::vector<std::vector<long>>& A);

// Inverse of a GL(n,Z) matrix via adjugate; throws unless det = +-1.
inline std::vector<std::vector<long>> invertUnimodular(const std::vector<std::vector<long>>& A);

// ---------------------------------------------------------------------------
// TrigFn: sum c_k e^{i<k,x>} on T^n = R^n / 2pi Z^n.

struct TrigFn {
  int n = 0;
  std::map<std::vector<int>, GaussRational> t;  // mode k in Z^n

  TrigFn() = default;
  explicit TrigFn(int dim) : n(dim) {}

  static TrigFn constant(int dim, const GaussRational& c) {
    TrigFn f(dim);
    if (!isZero(c)) f.t.emplace(std::vector<int>(dim, 0), c);
    return f;
  }
  static TrigFn mode(int dim, const std::vector<int>& k, const GaussRational& c = GaussRational(1)) {
    TrigFn f(dim);
    if (!isZero(c)) f.t.emplace(k, c);
    return f;
  }

  friend TrigFn operator+(const TrigFn& a, const TrigFn& b) {
    TrigFn r = a;
    r.n = a.t.empty() ? b.n : a.n;
    for (const auto& [k, c] : b.t) detail::mapAdd(r.t, k, c);
    return r;
  }
  friend TrigFn operator-(const TrigFn& a, const TrigFn& b) {
    TrigFn r = a;
    r.n = a.t.empty() ? b.n : a.n;
    for (const auto& [k, c] : b.t) detail::mapAdd(r.t, k, -c);
    return r;
  }
  friend TrigFn operator-(const TrigFn& a) {
    TrigFn r(a.n);
    for (const auto& [k, c] : a.t) r.t.emplace(k, -c);
    return r;
  }
  friend TrigFn operator*(const TrigFn& a, const TrigFn& b) {
    TrigFn r(a.n ? a.n : b.n);
    for (const auto& [ka, ca] : a.t)
      for (const auto& [kb, cb] : b.t) {
        std::vector<int> k = ka;
        for (size_t i = 0; i < k.size(); ++i) k[i] += kb[i];
        detail::mapAdd(r.t, k, ca * cb);
      }
    return r;
  }
  TrigFn& operator+=(const TrigFn& o) { return *this = *this + o; }
  TrigFn& operator-=(const TrigFn& o) { return *this = *this - o; }
  TrigFn& operator*=(const TrigFn& o) { return *this = *this * o; }
  friend bool operator==(const TrigFn& a, const TrigFn& b) { return a.t == b.t; }
  friend bool operator!=(const TrigFn& a, const TrigFn& b) { return !(a == b); }
};

inline bool isZero(const TrigFn& f) { return f.t.empty(); }
// Pointwise complex conjugate: c_k e_k -> conj(c_k) e_{-k}.
inline TrigFn conj(const TrigFn& f) {
  TrigFn r(f.n);
  for (const auto& [k, c] : f.t) {
    std::vector<int> mk(k.size());
    for (size_t i = 0; i < k.size(); ++i) mk[i] = -k[i];
    r.t.emplace(mk, conj(c));
  }
  return r;
}
inline TrigFn scaleCoeff(const TrigFn& f, const GaussRational& x) {
  TrigFn r(f.n);
  if (isZero(x)) return r;
  for (const auto& [k, c] : f.t) r.t.emplace(k, c * x);
  return r;
}
// d/dx_j acts modewise as multiplication by i k_j.
inline TrigFn derive(const TrigFn& f, int j) {
  TrigFn r(f.n);
  for (const auto& [k, c] : f.t) {
    if (k[j] == 0) continue;
    r.t.emplace(k, c * GaussRational(ratOf(0), ratOf(k[j])));
  }
  return r;
}
// Normalized (total mass 1) integral: the zero-mode coefficient.
inline GaussRational average(const TrigFn& f) {
  std::vector<int> zero(f.n, 0);
  auto it = f.t.find(zero);
  return it == f.t.end() ? GaussRational(0) : it->second;
}
// f(phi(x)) for phi(x) = A x + (pi/2) q: mode k picks up phase i^{<k,q>} and
// transforms to A^T k.
inline TrigFn substAffine(const TrigFn& f, const AffineTorusMap& phi) {
  TrigFn r(f.n);
  for (const auto& [k, c] : f.t) {
    std::vector<int> k2(k.size(), 0);
    long qdot = 0;
    for (size_t i = 0; i < k.size(); ++i) {
      qdot += (long)k[i] * phi.quarter[i];
      for (size_t j = 0; j < k.size(); ++j) k2[j] += k[i] * (int)phi.A[i][j];
    }
    detail::mapAdd(r.t, k2, c * GaussRational::ipow(qdot));
  }
  return r;
}

inline long detInt(const std::vector<std::vector<long>>& A) {
  int n = (int)A.size();
  if (n == 0) return 1;
  if (n == 1) return A[0][0];
  long det = 0;
  for (int j = 0; j < n; ++j) {
    std::vector<std::vector<long>> minorM;
    for (int r = 1; r < n; ++r) {
      std::vector<long> row;
      for (int c = 0; c < n; ++c)
        if (c != j) row.push_back(A[r][c]);
      minorM.push_back(row);
    }
    long term = A[0][j] * detInt(minorM);
    det += (j % 2 == 0) ? term : -term;
  }
  return det;
}

inline std::vector<std::vector<long>> invertUnimodular(const std::vector<std::vector<long>>& A) {
  int n = (int)A.size();
  long d = detInt(A);
  if (d != 1 && d != -1) throw MathError("matrix is not in GL(n,Z)");
  std::vector<std::vector<long>> inv(n, std::vector<long>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<std::vector<long>> minorM;
      for (int r = 0; r < n; ++r) {
        if (r == i) continue;
        std::vector<long> row;
        for (int c = 0; c < n; ++c)
          if (c != j) row.push_back(A[r][c]);
        minorM.push_back(row);
      }
      long cof = detInt(minorM);
      if ((i + j) % 2) cof = -cof;
      inv[j][i] = cof * d;  // d = 1/d for d = +-1
    }
  return inv;
}

// hbar-series of base functions (the symbol spaces of the star products).
using TrigSeries = HbarSeries<TrigFn>;
using PolySeries = HbarSeries<PolyFn>;

inline TrigSeries substAffine(const TrigSeries& f, const AffineTorusMap& phi) {
  TrigSeries r(f.K);
  for (int k = 0; k <= f.K; ++k) r.c[k] = substAffine(f.c[k], phi);
  return r;
}
inline GaussRational atMode(const TrigFn& f, const std::vector<int>& k) {
  auto it = f.t.find(k);
  return it == f.t.end() ? GaussRational(0) : it->second;
}

}  // namespace starfield
