#pragma once

// Concrete pseudo etale groupoid models and their convolution algebras:
//   - finite groupoids with explicit left-invariant Haar weights,
//   - transformation groupoids T^n x| G for a finite G acting by affine
//     integer torus maps (quarter-period translations keep mode phases in
//     Q(i)),
//   - the pair groupoid T^k x T^k with the normalized fiber average.
//
// Arrow conventions. Transformation arrows (x, g) run x -> phi_g(x) with a
// right action, so phi_{gh} = phi_h o phi_g and (phi_g(x), h).(x, g) =
// (x, gh). Pair arrows (x, z) run z -> x.

#include <map>
#include <vector>

#include "starfield/funcspace.hpp"

namespace starfield {

// ---------------------------------------------------------------------------
// Finite groupoid.

struct FiniteGroupoid {
  int numObjects = 0;
  std::vector<int> src, tgt;                 // per arrow
  std::vector<int> unitArrow;                // per object
  std::vector<int> inv;                      // per arrow
  std::map<std::pair<int, int>, int> comp;   // (b, g) -> b.g when src b = tgt g
  std::vector<Rational> haar;                // weight of arrow a in lambda^{tgt a}
  std::vector<std::vector<int>> tFiber;      // object -> arrows with that target

  int numArrows() const { return (int)src.size(); }
  int compose(int b, int g) const {
    auto it = comp.find({b, g});
    if (it == comp.end()) throw MathError("non-composable arrows");
    return it->second;
  }

  void finalize() {
    tFiber.assign(numObjects, {});
    for (int a = 0; a < numArrows(); ++a) tFiber[tgt[a]].push_back(a);
  }
  void validate() const;
};

struct FiniteFn {
  std::map<int, HbarSeries<GaussRational>> v;  // arrow -> coefficient series

  void add(int arrow, const HbarSeries<GaussRational>& s) {
    auto [it, fresh] = v.try_emplace(arrow, s);
    if (!fresh) {
      it->second += s;
      if (isZero(it->second)) v.erase(it);
    } else if (isZero(s)) {
      v.erase(it);
    }
  }
  friend FiniteFn operator+(const FiniteFn& a, const FiniteFn& b) {
    FiniteFn r = a;
    for (const auto& [k, s] : b.v) r.add(k, s);
    return r;
  }
  friend FiniteFn operator-(const FiniteFn& a, const FiniteFn& b) {
    FiniteFn r = a;
    for (const auto& [k, s] : b.v) r.add(k, -s);
    return r;
  }
  friend bool operator==(const FiniteFn& a, const FiniteFn& b) { return a.v == b.v; }
};
inline bool isZero(const FiniteFn& f) { return f.v.empty(); }

inline void FiniteGroupoid::validate() const {
  int nA = numArrows();
  if ((int)tgt.size() != nA || (int)inv.size() != nA || (int)haar.size() != nA)
    throw SchemaError("finite groupoid: ragged arrow tables");
  for (int u = 0; u < numObjects; ++u) {
    int e = unitArrow[u];
    if (src[e] != u || tgt[e] != u) throw SchemaError("unit arrow endpoints");
  }
  for (int a = 0; a < nA; ++a) {
    if (sgn(haar[a]) <= 0) throw SchemaError("haar weights must be positive");
    if (src[inv[a]] != tgt[a] || tgt[inv[a]] != src[a]) throw SchemaError("inverse endpoints");
    if (compose(a, unitArrow[src[a]]) != a || compose(unitArrow[tgt[a]], a) != a)
      throw SchemaError("unit law");
    if (compose(a, inv[a]) != unitArrow[tgt[a]] || compose(inv[a], a) != unitArrow[src[a]])
      throw SchemaError("inverse law");
  }
  for (const auto& [bg, a] : comp) {
    if (src[bg.first] != tgt[bg.second]) throw SchemaError("composable constraint");
    if (src[a] != src[bg.second] || tgt[a] != tgt[bg.first]) throw SchemaError("compose endpoints");
  }
  for (int a = 0; a < nA; ++a)
    for (int b = 0; b < nA; ++b) {
      if (src[a] != tgt[b]) continue;
      for (int c = 0; c < nA; ++c) {
        if (src[b] != tgt[c]) continue;
        if (compose(compose(a, b), c) != compose(a, compose(b, c)))
          throw SchemaError("associativity");
      }
    }
  // left invariance: lambda^{s(x)}(z) = lambda^{t(x)}(xz)
  for (int x = 0; x < nA; ++x)
    for (int z : tFiber[src[x]])
      if (haar[z] != haar[compose(x, z)]) throw SchemaError("haar system not left invariant");
}

// f<>g(alpha) = sum_{z in G^{s(alpha)}} lambda(z) f(alpha z) g(z^{-1}),
// equivalently the pair sum below with gamma = z^{-1}.
inline FiniteFn convolve(const FiniteGroupoid& G, const FiniteFn& f, const FiniteFn& g) {
  FiniteFn out;
  for (const auto& [beta, fb] : f.v)
    for (const auto& [gamma, gc] : g.v) {
      if (G.src[beta] != G.tgt[gamma]) continue;
      out.add(G.compose(beta, gamma), scale(fb * gc, GaussRational(G.haar[G.inv[gamma]])));
    }
  return out;
}

inline FiniteFn unitFunction(const FiniteGroupoid& G, int K) {
  FiniteFn u;
  for (int ob = 0; ob < G.numObjects; ++ob) {
    int e = G.unitArrow[ob];
    u.add(e, HbarSeries<GaussRational>(K, GaussRational(ratOf(1) / G.haar[e])));
  }
  return u;
}

inline FiniteFn pullbackByArrowInverse(const FiniteGroupoid& G, const FiniteFn& f) {
  FiniteFn r;
  for (const auto& [a, s] : f.v) r.add(G.inv[a], s);
  return r;
}

// Discrete leaves: the leaf differential is 0 by convention.
inline FiniteFn leafDifferential(const FiniteGroupoid&, const FiniteFn&, int) { return {}; }

inline FiniteFn restrictToUnits(const FiniteGroupoid& G, const FiniteFn& f) {
  FiniteFn r;
  for (int ob = 0; ob < G.numObjects; ++ob) {
    auto it = f.v.find(G.unitArrow[ob]);
    if (it != f.v.end()) r.add(it->first, it->second);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Transformation groupoid T^n x| G.

struct TransformationGroupoid {
  int n = 0;
  int e = 0;
  std::vector<std::vector<int>> mult;  // mult[g][h] = gh
  std::vector<int> inv;
  std::vector<AffineTorusMap> act;     // phi_g; right action

  int order() const { return (int)mult.size(); }

  void validate() const {
    int m = order();
    if ((int)inv.size() != m || (int)act.size() != m) throw SchemaError("group tables ragged");
    for (int g = 0; g < m; ++g) {
      if (mult[g][e] != g || mult[e][g] != g) throw SchemaError("group unit law");
      if (mult[g][inv[g]] != e || mult[inv[g]][g] != e) throw SchemaError("group inverse law");
      for (int h = 0; h < m; ++h) {
        for (int k = 0; k < m; ++k)
          if (mult[mult[g][h]][k] != mult[g][mult[h][k]]) throw SchemaError("group associativity");
        if (!(composeMaps(act[h], act[g]) == act[mult[g][h]]))
          throw SchemaError("action is not a right-action homomorphism");
      }
      long d = detInt(act[g].A);
      if (d != 1 && d != -1) throw SchemaError("action matrix not in GL(n,Z)");
    }
    if (!(act[e] == AffineTorusMap::identity(n))) throw SchemaError("unit must act trivially");
  }
};

struct TransFn {
  std::map<int, TrigSeries> v;  // group element -> coefficient function series

  void add(int g, const TrigSeries& s) {
    auto [it, fresh] = v.try_emplace(g, s);
    if (!fresh) {
      it->second += s;
      if (isZero(it->second)) v.erase(it);
    } else if (isZero(s)) {
      v.erase(it);
    }
  }
  friend TransFn operator+(const TransFn& a, const TransFn& b) {
    TransFn r = a;
    for (const auto& [k, s] : b.v) r.add(k, s);
    return r;
  }
  friend TransFn operator-(const TransFn& a, const TransFn& b) {
    TransFn r = a;
    for (const auto& [k, s] : b.v) r.add(k, -s);
    return r;
  }
  friend bool operator==(const TransFn& a, const TransFn& b) { return a.v == b.v; }
};
inline bool isZero(const TransFn& f) { return f.v.empty(); }

inline TransFn singleMode(const TransformationGroupoid& M, int g, const std::vector<int>& mode,
                          int K, const GaussRational& c = GaussRational(1)) {
  TransFn f;
  f.add(g, TrigSeries(K, TrigFn::mode(M.n, mode, c)));
  return f;
}

// (f<>g)(x, gh) accumulates f_h(phi_g(x)) g_g(x); counting Haar on the fiber.
inline TransFn convolve(const TransformationGroupoid& M, const TransFn& f, const TransFn& g) {
  TransFn out;
  for (const auto& [h, fh] : f.v)
    for (const auto& [g_, gg] : g.v)
      out.add(M.mult[g_][h], substAffine(fh, M.act[g_]) * gg);
  return out;
}

inline TransFn unitFunction(const TransformationGroupoid& M, int K) {
  TransFn u;
  u.add(M.e, TrigSeries(K, TrigFn::constant(M.n, GaussRational(1))));
  return u;
}

inline TransFn pullbackByArrowInverse(const TransformationGroupoid& M, const TransFn& f) {
  TransFn r;
  for (const auto& [g, s] : f.v) r.add(M.inv[g], substAffine(s, M.act[g]));
  return r;
}

enum class LeafChart { Source, Target };

// Derivative along the etalification in unit-space coordinates. The source
// chart reads off d/dx_j directly; the target chart transports the direction
// through the arrow, picking up the inverse action Jacobian.
inline TransFn leafDifferential(const TransformationGroupoid& M, const TransFn& f, int axis,
                                LeafChart chart = LeafChart::Source) {
  TransFn r;
  for (const auto& [g, s] : f.v) {
    if (chart == LeafChart::Source) {
      TrigSeries d(s.K);
      for (int k = 0; k <= s.K; ++k) d.c[k] = derive(s.c[k], axis);
      r.add(g, d);
    } else {
      auto Ainv = invertUnimodular(M.act[g].A);
      TrigSeries d(s.K);
      for (int k = 0; k <= s.K; ++k) {
        TrigFn acc(M.n);
        for (int j = 0; j < M.n; ++j) {
          if (Ainv[j][axis] == 0) continue;
          acc += scaleCoeff(derive(s.c[k], j), GaussRational(ratOf(Ainv[j][axis])));
        }
        d.c[k] = acc;
      }
      r.add(g, d);
    }
  }
  return r;
}

inline TrigSeries restrictToUnits(const TransformationGroupoid& M, const TransFn& f) {
  auto it = f.v.find(M.e);
  return it == f.v.end() ? TrigSeries() : it->second;
}

// ---------------------------------------------------------------------------
// Pair groupoid T^k x T^k. Functions are trig polynomials in 2k variables;
// the first k are the target-side coordinates, the last k the source side.

struct TorusPairGroupoid {
  int k = 0;
  int arrowDim() const { return 2 * k; }
};

struct PairFn {
  TrigSeries v;  // on 2k variables

  friend PairFn operator+(const PairFn& a, const PairFn& b) { return {a.v + b.v}; }
  friend PairFn operator-(const PairFn& a, const PairFn& b) { return {a.v - b.v}; }
  friend bool operator==(const PairFn& a, const PairFn& b) { return a.v == b.v; }
};
inline bool isZero(const PairFn& f) { return isZero(f.v); }

namespace detail {
// Fiber contraction: (A <> B)(x,z) = avg_y A(x,y) B(y,z) in Fourier modes.
inline TrigFn pairContract(int k, const TrigFn& A, const TrigFn& B) {
  TrigFn out(2 * k);
  for (const auto& [ma, ca] : A.t)
    for (const auto& [mb, cb] : B.t) {
      bool match = true;
      for (int i = 0; i < k; ++i)
        if (ma[k + i] + mb[i] != 0) {
          match = false;
          break;
        }
      if (!match) continue;
      std::vector<int> mo(2 * k);
      for (int i = 0; i < k; ++i) {
        mo[i] = ma[i];
        mo[k + i] = mb[k + i];
      }
      mapAdd(out.t, mo, ca * cb);
    }
  return out;
}
}  // namespace detail

inline PairFn convolve(const TorusPairGroupoid& M, const PairFn& f, const PairFn& g) {
  int K = std::min(f.v.K, g.v.K);
  PairFn out{TrigSeries(K)};
  for (int i = 0; i <= K; ++i)
    for (int j = 0; i + j <= K; ++j)
      out.v.c[i + j] += detail::pairContract(M.k, f.v.c[i], g.v.c[j]);
  return out;
}

// Pair-groupoid inverse is the factor flip.
inline PairFn pullbackByArrowInverse(const TorusPairGroupoid& M, const PairFn& f) {
  PairFn r{TrigSeries(f.v.K)};
  for (int o = 0; o <= f.v.K; ++o) {
    TrigFn t(2 * M.k);
    for (const auto& [m, c] : f.v.c[o]. t) {
      std::vector<int> sw(2 * M.k);
      for (int i = 0; i < M.k; ++i) {
        sw[i] = m[M.k + i];
        sw[M.k + i] = m[i];
      }
      detail::mapAdd(t.t, sw, c);
    }
    r.v.c[o] = t;
  }
  return r;
}

// Diagonal-direction derivative; source and target charts agree here.
inline PairFn leafDifferential(const TorusPairGroupoid& M, const PairFn& f, int axis,
                               LeafChart = LeafChart::Source) {
  PairFn r{TrigSeries(f.v.K)};
  for (int o = 0; o <= f.v.K; ++o) {
    TrigFn t(2 * M.k);
    for (const auto& [m, c] : f.v.c[o].t) {
      long comb = m[axis] + m[M.k + axis];
      if (comb == 0) continue;
      detail::mapAdd(t.t, m, c * GaussRational(ratOf(0), ratOf(comb)));
    }
    r.v.c[o] = t;
  }
  return r;
}

// Restriction to the diagonal z = x: a trig function on T^k.
inline TrigSeries restrictToUnits(const TorusPairGroupoid& M, const PairFn& f) {
  TrigSeries r(f.v.K);
  for (int o = 0; o <= f.v.K; ++o) {
    TrigFn t(M.k);
    for (const auto& [m, c] : f.v.c[o].t) {
      std::vector<int> d(M.k);
      for (int i = 0; i < M.k; ++i) d[i] = m[i] + m[M.k + i];
      detail::mapAdd(t.t, d, c);
    }
    r.c[o] = t;
  }
  return r;
}

inline PairFn pairMode(const TorusPairGroupoid& M, const std::vector<int>& mode, int K,
                       const GaussRational& c = GaussRational(1)) {
  return {TrigSeries(K, TrigFn::mode(2 * M.k, mode, c))};
}

}  // namespace starfield
