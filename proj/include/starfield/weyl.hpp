#pragma once

// The Weyl algebra bundle over a single Darboux chart (R^{2n} or T^{2n}):
// sections are finite sums of monomials hbar^k c(x) y^alpha dx^tau graded by
// deg(y) = 1, deg(hbar) = 2, with the fiberwise Moyal-type product, the
// operators delta / delta* / delta^{-1}, a symplectic connection given by a
// Christoffel table, and its curvature.
//
// Everything is exact; the only loss is the explicit Fedosov-degree
// truncation carried by each section.

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "starfield/funcspace.hpp"
#include "starfield/parallel.hpp"

namespace starfield {

struct WeylKey {
  int hbar = 0;
  std::vector<int> y;   // exponents, size 2n
  uint32_t form = 0;    // bitmask of dx indices

  friend bool operator<(const WeylKey& a, const WeylKey& b) {
    if (a.hbar != b.hbar) return a.hbar < b.hbar;
    if (a.y != b.y) return a.y < b.y;
    return a.form < b.form;
  }
  friend bool operator==(const WeylKey& a, const WeylKey& b) {
    return a.hbar == b.hbar && a.y == b.y && a.form == b.form;
  }
};

inline int yDegree(const WeylKey& k) {
  int s = 0;
  for (int e : k.y) s += e;
  return s;
}
inline int fedosovDegree(const WeylKey& k) { return 2 * k.hbar + yDegree(k); }
inline int formDegree(const WeylKey& k) { return __builtin_popcount(k.form); }

// Sign of dx^i ^ dx^tau (left wedge); 0 if i already occurs.
inline int leftWedgeSign(int i, uint32_t form) {
  if (form & (1u << i)) return 0;
  int below = __builtin_popcount(form & ((1u << i) - 1));
  return (below % 2) ? -1 : 1;
}
// Sign of dx^tau ^ dx^ups as a merge; 0 on overlap.
inline int wedgeMergeSign(uint32_t tau, uint32_t ups) {
  if (tau & ups) return 0;
  int inversions = 0;
  for (uint32_t rest = ups; rest;) {
    int i = __builtin_ctz(rest);
    rest &= rest - 1;
    inversions += __builtin_popcount(tau & ~((1u << (i + 1)) - 1));
  }
  return (inversions % 2) ? -1 : 1;
}
// Sign of the interior product i(d/dx_k) on dx^tau; 0 if k absent.
inline int interiorSign(int k, uint32_t form) {
  if (!(form & (1u << k))) return 0;
  int before = __builtin_popcount(form & ((1u << k) - 1));
  return (before % 2) ? -1 : 1;
}

// ---------------------------------------------------------------------------
// Symplectic data: constant omega in Darboux coordinates plus an optional
// invariant Christoffel table Gamma_{ijk} (totally symmetric, lowered).

template <class B>
struct SymplecticData {
  int dim = 0;  // 2n
  std::vector<std::vector<Rational>> omega;
  std::vector<std::vector<Rational>> omegaInv;
  std::map<std::tuple<int, int, int>, B> gamma;  // sorted (i<=j<=k) representative

  bool flat() const { return gamma.empty(); }

  const B* gammaAt(int i, int j, int k) const {
    int a[3] = {i, j, k};
    std::sort(a, a + 3);
    auto it = gamma.find({a[0], a[1], a[2]});
    return it == gamma.end() ? nullptr : &it->second;
  }
};

template <class B>
void validateSymplectic(const SymplecticData<B>& s) {
  int d = s.dim;
  if (d <= 0 || d % 2) throw SchemaError("symplectic dim must be even and positive");
  if ((int)s.omega.size() != d || (int)s.omegaInv.size() != d)
    throw SchemaError("omega size mismatch");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (s.omega[i][j] != -s.omega[j][i]) throw SchemaError("omega not antisymmetric");
      Rational acc = 0;
      for (int k = 0; k < d; ++k) acc += s.omega[i][k] * s.omegaInv[k][j];
      if (acc != (i == j ? ratOf(1) : ratOf(0))) throw SchemaError("omegaInv is not inverse");
    }
}

// Rational matrix inverse by Gauss-Jordan elimination.
inline std::vector<std::vector<Rational>> invertRational(
    const std::vector<std::vector<Rational>>& m) {
  int n = (int)m.size();
  std::vector<std::vector<Rational>> a = m, inv(n, std::vector<Rational>(n, 0));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (sgn(a[r][col]) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw SchemaError("singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Rational p = a[col][col];
    for (int c = 0; c < n; ++c) {
      a[col][c] /= p;
      inv[col][c] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || sgn(a[r][col]) == 0) continue;
      Rational f = a[r][col];
      for (int c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// WeylSection.

template <class B>
struct WeylSection {
  int dim = 0;    // 2n
  int trunc = 0;  // Fedosov degree cap
  std::map<WeylKey, B> m;

  WeylSection() = default;
  WeylSection(int d, int N) : dim(d), trunc(N) {}

  void addTerm(const WeylKey& k, const B& v) {
    if (isZero(v) || fedosovDegree(k) > trunc) return;
    auto [it, fresh] = m.try_emplace(k, v);
    if (!fresh) {
      it->second += v;
      if (isZero(it->second)) m.erase(it);
    }
  }

  friend bool operator==(const WeylSection& a, const WeylSection& b) { return a.m == b.m; }
  friend bool operator!=(const WeylSection& a, const WeylSection& b) { return !(a == b); }
};

template <class B>
bool isZero(const WeylSection<B>& a) {
  return a.m.empty();
}

template <class B>
WeylSection<B> operator+(const WeylSection<B>& a, const WeylSection<B>& b) {
  WeylSection<B> r(a.dim ? a.dim : b.dim, std::min(a.trunc, b.trunc));
  if (a.m.empty()) r.trunc = b.trunc;
  if (b.m.empty()) r.trunc = a.trunc;
  for (const auto& [k, v] : a.m) r.addTerm(k, v);
  for (const auto& [k, v] : b.m) r.addTerm(k, v);
  return r;
}
template <class B>
WeylSection<B> operator-(const WeylSection<B>& a, const WeylSection<B>& b) {
  WeylSection<B> r(a.dim ? a.dim : b.dim, std::min(a.trunc, b.trunc));
  if (a.m.empty()) r.trunc = b.trunc;
  if (b.m.empty()) r.trunc = a.trunc;
  for (const auto& [k, v] : a.m) r.addTerm(k, v);
  for (const auto& [k, v] : b.m) r.addTerm(k, -v);
  return r;
}
template <class B>
WeylSection<B> operator-(const WeylSection<B>& a) {
  WeylSection<B> r(a.dim, a.trunc);
  for (const auto& [k, v] : a.m) r.m.emplace(k, -v);
  return r;
}

template <class B>
WeylSection<B> scaleSection(const WeylSection<B>& a, const GaussRational& c) {
  WeylSection<B> r(a.dim, a.trunc);
  if (isZero(c)) return r;
  for (const auto& [k, v] : a.m) r.m.emplace(k, scaleCoeff(v, c));
  return r;
}

template <class B>
WeylSection<B> retruncate(const WeylSection<B>& a, int N) {
  WeylSection<B> r(a.dim, N);
  for (const auto& [k, v] : a.m) r.addTerm(k, v);
  return r;
}

// ---------------------------------------------------------------------------
// The fiberwise product. Expanding the exponential contraction kernel
//   a o b = sum_m (-i hbar / 2)^m / m! om^{i1 j1}...om^{im jm}
//           d^m a / dy^{i...} * d^m b / dy^{j...}
// on a pair of monomials; forms compose by wedge with the transposition sign.
// koszul = true multiplies each pair term by (-1)^{|tau_a||tau_b|}, which is
// what the graded commutator needs for its reversed product.

namespace detail {

template <class B>
void circPair(const WeylKey& ka, const B& ca, const WeylKey& kb, const B& cb,
              const SymplecticData<B>& s, int trunc, bool koszul, WeylSection<B>& out) {
  int wsign = wedgeMergeSign(ka.form, kb.form);
  if (wsign == 0) return;
  if (koszul && (formDegree(ka) * formDegree(kb)) % 2) wsign = -wsign;
  B cab = ca * cb;
  if (isZero(cab)) return;
  uint32_t formMerged = ka.form | kb.form;

  // contraction states: (remaining y-exponents of a and b) -> rational weight
  std::map<std::pair<std::vector<int>, std::vector<int>>, Rational> cur;
  cur[{ka.y, kb.y}] = wsign;
  GaussRational mfact(1);  // (-i/2)^m / m!
  for (int mstep = 0; !cur.empty(); ++mstep) {
    if (mstep > 0)
      mfact *= GaussRational(ratOf(0), ratOf(-1, 2)) * GaussRational(ratOf(1, mstep));
    int hb = ka.hbar + kb.hbar + mstep;
    for (const auto& [st, w] : cur) {
      WeylKey k;
      k.hbar = hb;
      k.y = st.first;
      for (size_t i = 0; i < k.y.size(); ++i) k.y[i] += st.second[i];
      k.form = formMerged;
      if (fedosovDegree(k) > trunc) continue;
      out.addTerm(k, scaleCoeff(cab, mfact * GaussRational(w)));
    }
    // one more omega contraction
    std::map<std::pair<std::vector<int>, std::vector<int>>, Rational> next;
    for (const auto& [st, w] : cur) {
      const auto& [ya, yb] = st;
      for (int i = 0; i < s.dim; ++i) {
        if (ya[i] == 0) continue;
        for (int j = 0; j < s.dim; ++j) {
          if (yb[j] == 0 || sgn(s.omegaInv[i][j]) == 0) continue;
          auto st2 = st;
          st2.first[i] -= 1;
          st2.second[j] -= 1;
          Rational add = w * s.omegaInv[i][j] * ratOf(ya[i]) * ratOf(yb[j]);
          auto [it, fresh] = next.try_emplace(st2, add);
          if (!fresh) {
            it->second += add;
            if (sgn(it->second) == 0) next.erase(it);
          }
        }
      }
    }
    cur = std::move(next);
  }
}

}  // namespace detail

template <class B>
WeylSection<B> circSerial(const WeylSection<B>& a, const WeylSection<B>& b,
                          const SymplecticData<B>& s, bool koszul = false) {
  if (a.dim != b.dim && !a.m.empty() && !b.m.empty()) throw MathError("circ: dimension mismatch");
  WeylSection<B> r(s.dim, std::min(a.trunc, b.trunc));
  for (const auto& [ka, ca] : a.m)
    for (const auto& [kb, cb] : b.m) detail::circPair(ka, ca, kb, cb, s, r.trunc, koszul, r);
  return r;
}

// OpenMP kernel: monomial pairs are independent; per-thread partial sections
// are merged in thread order. Exact arithmetic makes the merge orderfree.
template <class B>
WeylSection<B> circ(const WeylSection<B>& a, const WeylSection<B>& b, const SymplecticData<B>& s,
                    bool koszul = false) {
  size_t napairs = a.m.size() * b.m.size();
  if (napairs < 64) return circSerial(a, b, s, koszul);
  if (a.dim != b.dim && !a.m.empty() && !b.m.empty()) throw MathError("circ: dimension mismatch");
  int N = std::min(a.trunc, b.trunc);
  std::vector<const std::pair<const WeylKey, B>*> pa, pb;
  pa.reserve(a.m.size());
  pb.reserve(b.m.size());
  for (const auto& kv : a.m) pa.push_back(&kv);
  for (const auto& kv : b.m) pb.push_back(&kv);

  std::vector<WeylSection<B>> parts(maxThreads(), WeylSection<B>(s.dim, N));
  PARALLEL_FOR
  for (long idx = 0; idx < (long)napairs; ++idx) {
    WeylSection<B>& acc = parts[threadId()];
    const auto& A = *pa[idx / pb.size()];
    const auto& Bq = *pb[idx % pb.size()];
    detail::circPair(A.first, A.second, Bq.first, Bq.second, s, N, koszul, acc);
  }
  WeylSection<B> r(s.dim, N);
  for (auto& p : parts)
    for (const auto& [k, v] : p.m) r.addTerm(k, v);
  return r;
}

// Graded commutator [a,b] = a o b - (-1)^{deg a deg b} b o a (form degrees).
template <class B>
WeylSection<B> gradedBracket(const WeylSection<B>& a, const WeylSection<B>& b,
                             const SymplecticData<B>& s) {
  return circ(a, b, s, false) - circ(b, a, s, true);
}

// ---------------------------------------------------------------------------
// delta, delta*, delta^{-1}, base differential.

template <class B>
WeylSection<B> weylDelta(const WeylSection<B>& a) {
  WeylSection<B> r(a.dim, a.trunc);
  for (const auto& [k, v] : a.m)
    for (int i = 0; i < a.dim; ++i) {
      if (k.y[i] == 0) continue;
      int sign = leftWedgeSign(i, k.form);
      if (sign == 0) continue;
      WeylKey k2 = k;
      k2.y[i] -= 1;
      k2.form |= 1u << i;
      r.addTerm(k2, scaleCoeff(v, GaussRational(ratOf(sign * (long)k.y[i]))));
    }
  return r;
}

// delta* raises the Fedosov degree by one, so the output carries one more
// degree of exactness than the input.
template <class B>
WeylSection<B> weylDeltaStar(const WeylSection<B>& a) {
  WeylSection<B> r(a.dim, a.trunc + 1);
  for (const auto& [k, v] : a.m)
    for (int i = 0; i < a.dim; ++i) {
      int sign = interiorSign(i, k.form);
      if (sign == 0) continue;
      WeylKey k2 = k;
      k2.y[i] += 1;
      k2.form &= ~(1u << i);
      r.addTerm(k2, scaleCoeff(v, GaussRational(ratOf(sign))));
    }
  return r;
}

// delta^{-1} a_{pq} = delta* a_{pq} / (p+q), and 0 on the p = q = 0 part.
template <class B>
WeylSection<B> weylDeltaInv(const WeylSection<B>& a) {
  WeylSection<B> r(a.dim, a.trunc + 1);
  for (const auto& [k, v] : a.m) {
    int pq = yDegree(k) + formDegree(k);
    if (pq == 0) continue;
    for (int i = 0; i < a.dim; ++i) {
      int sign = interiorSign(i, k.form);
      if (sign == 0) continue;
      WeylKey k2 = k;
      k2.y[i] += 1;
      k2.form &= ~(1u << i);
      r.addTerm(k2, scaleCoeff(v, GaussRational(ratOf(sign) / ratOf(pq))));
    }
  }
  return r;
}

// Exterior differential in the base variables: dx^i ^ (d coeff / dx^i).
template <class B>
WeylSection<B> baseDiff(const WeylSection<B>& a) {
  WeylSection<B> r(a.dim, a.trunc);
  for (const auto& [k, v] : a.m)
    for (int i = 0; i < a.dim; ++i) {
      B dv = derive(v, i);
      if (isZero(dv)) continue;
      int sign = leftWedgeSign(i, k.form);
      if (sign == 0) continue;
      WeylKey k2 = k;
      k2.form |= 1u << i;
      if (sign < 0) dv = -dv;
      r.addTerm(k2, dv);
    }
  return r;
}

// The scalar (y = 0, form = 0) part of a, i.e. sigma(a) = a(x, 0, hbar).
template <class B>
HbarSeries<B> centerProject(const WeylSection<B>& a, int K) {
  HbarSeries<B> r(K);
  for (const auto& [k, v] : a.m) {
    if (k.form != 0 || yDegree(k) != 0) continue;
    if (k.hbar <= K) r.c[k.hbar] += v;
  }
  return r;
}

template <class B>
WeylSection<B> liftSeries(const HbarSeries<B>& f, int dim, int N) {
  WeylSection<B> r(dim, N);
  for (int k = 0; k <= f.K; ++k) {
    if (isZero(f.c[k]) || 2 * k > N) continue;
    WeylKey key;
    key.hbar = k;
    key.y.assign(dim, 0);
    r.addTerm(key, f.c[k]);
  }
  return r;
}

// a00: the y-degree-0, form-degree-0 component (as a section).
template <class B>
WeylSection<B> scalarPart(const WeylSection<B>& a) {
  WeylSection<B> r(a.dim, a.trunc);
  for (const auto& [k, v] : a.m)
    if (k.form == 0 && yDegree(k) == 0) r.m.emplace(k, v);
  return r;
}

// Division by hbar (exact coefficient shift); a nonzero hbar^0 part means the
// argument was not a commutator-type section and is a hard error.
template <class B>
WeylSection<B> hbarDiv(const WeylSection<B>& a) {
  WeylSection<B> r(a.dim, a.trunc);
  for (const auto& [k, v] : a.m) {
    if (k.hbar == 0) throw MathError("hbarDiv: nonzero hbar^0 remainder");
    WeylKey k2 = k;
    k2.hbar -= 1;
    r.addTerm(k2, v);
  }
  return r;
}

// (i/hbar)[x, a]. The bracket is formed with two degrees of headroom: the
// division by hbar lowers Fedosov degree by two, so terms of final degree
// <= N come from bracket terms of degree <= N+2.
template <class B>
WeylSection<B> adOverHbar(const WeylSection<B>& x, const WeylSection<B>& a,
                          const SymplecticData<B>& s) {
  int N = std::min(x.trunc, a.trunc);
  WeylSection<B> br =
      gradedBracket(retruncate(x, N + 2), retruncate(a, N + 2), s);
  return retruncate(scaleSection(hbarDiv(br), GaussRational::iunit()), N);
}

// ---------------------------------------------------------------------------
// Connection machinery: Gamma-form, curvature, covariant differential.

// GammaTilde = (1/2) Gamma_{ijk} y^i y^j dx^k, summed over all ordered (i,j).
template <class B>
WeylSection<B> gammaForm(const SymplecticData<B>& s, int N) {
  WeylSection<B> r(s.dim, N);
  for (int i = 0; i < s.dim; ++i)
    for (int j = 0; j < s.dim; ++j)
      for (int k = 0; k < s.dim; ++k) {
        const B* g = s.gammaAt(i, j, k);
        if (!g || isZero(*g)) continue;
        WeylKey key;
        key.y.assign(s.dim, 0);
        key.y[i] += 1;
        key.y[j] += 1;
        key.form = 1u << k;
        r.addTerm(key, scaleCoeff(*g, GaussRational(ratOf(1, 2))));
      }
  return r;
}

// R = d GammaTilde + (i/hbar) GammaTilde o GammaTilde.
template <class B>
WeylSection<B> curvatureForm(const SymplecticData<B>& s, int N) {
  if (s.flat()) return WeylSection<B>(s.dim, N);
  WeylSection<B> g = gammaForm(s, N + 2);
  WeylSection<B> gg = circ(g, g, s);
  WeylSection<B> r = baseDiff(gammaForm(s, N));
  if (!isZero(gg))
    r = r + retruncate(scaleSection(hbarDiv(gg), GaussRational::iunit()), N);
  return r;
}

// Covariant differential: da + (i/hbar)[GammaTilde, a]. The precomputed
// GammaTilde is passed in so the Fedosov loops do not rebuild it.
template <class B>
WeylSection<B> connApply(const WeylSection<B>& gamma, const WeylSection<B>& a,
                         const SymplecticData<B>& s) {
  WeylSection<B> r = baseDiff(a);
  if (!isZero(gamma)) r = r + adOverHbar(gamma, a, s);
  return r;
}

}  // namespace starfield
