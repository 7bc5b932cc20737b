#pragma once

// Strict and formal deformation of torus algebras: the bicharacter product
// e_p * e_q = c(p,q) e_{p+q} with c(p,q) = exp(-(i hbar/2)<p, J q>), stored
// as an exact unitary phase for rational hbar or as a truncated exponential
// series in formal mode; plus the crossed product with a Z^k translation
// action coming from a constant Dirac structure's rational transversal.

#include "starfield/funcspace.hpp"

namespace starfield {

struct RieffelAlgebra {
  int n = 0;
  std::vector<std::vector<Rational>> J;  // antisymmetric
  bool strict = true;
  Rational hbar = 0;  // strict mode only
  int K = 0;          // formal mode truncation order

  void validate() const {
    if ((int)J.size() != n) throw SchemaError("J: wrong size");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (J[i][j] != -J[j][i]) throw SchemaError("J must be antisymmetric");
  }
  Rational pairing(const std::vector<int>& p, const std::vector<int>& q) const {
    Rational s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += ratOf(p[i]) * J[i][j] * ratOf(q[j]);
    return s;
  }
};

template <class C>
struct TorusElement {
  std::map<std::vector<int>, C> v;  // mode -> coefficient

  void add(const std::vector<int>& mode, const C& c) {
    auto [it, fresh] = v.try_emplace(mode, c);
    if (!fresh) {
      it->second += c;
      if (isZero(it->second)) v.erase(it);
    } else if (isZero(c)) {
      v.erase(it);
    }
  }
  friend TorusElement operator+(const TorusElement& a, const TorusElement& b) {
    TorusElement r = a;
    for (const auto& [m, c] : b.v) r.add(m, c);
    return r;
  }
  friend TorusElement operator-(const TorusElement& a, const TorusElement& b) {
    TorusElement r = a;
    for (const auto& [m, c] : b.v) r.add(m, -c);
    return r;
  }
  friend bool operator==(const TorusElement& a, const TorusElement& b) { return a.v == b.v; }
};
template <class C>
bool isZero(const TorusElement<C>& e) {
  return e.v.empty();
}

using StrictElement = TorusElement<PhaseScalar>;
using FormalElement = TorusElement<HbarSeries<GaussRational>>;

inline PhaseScalar bicharStrict(const RieffelAlgebra& A, const std::vector<int>& p,
                                const std::vector<int>& q) {
  return PhaseScalar::unitExp(-A.hbar / 2 * A.pairing(p, q));
}
inline HbarSeries<GaussRational> bicharFormal(const RieffelAlgebra& A, const std::vector<int>& p,
                                              const std::vector<int>& q) {
  return expSeries(GaussRational(ratOf(0), -A.pairing(p, q) / 2), A.K);
}

namespace detail {
template <class C, class Bichar>
TorusElement<C> rieffelStarImpl(const TorusElement<C>& f, const TorusElement<C>& g, Bichar&& bc) {
  TorusElement<C> out;
  for (const auto& [p, cp] : f.v)
    for (const auto& [q, cq] : g.v) {
      std::vector<int> pq(p.size());
      for (size_t i = 0; i < p.size(); ++i) pq[i] = p[i] + q[i];
      out.add(pq, cp * cq * bc(p, q));
    }
  return out;
}
}  // namespace detail

inline StrictElement rieffelStar(const RieffelAlgebra& A, const StrictElement& f,
                                 const StrictElement& g) {
  return detail::rieffelStarImpl(f, g, [&](const auto& p, const auto& q) {
    return bicharStrict(A, p, q);
  });
}
inline FormalElement rieffelStar(const RieffelAlgebra& A, const FormalElement& f,
                                 const FormalElement& g) {
  return detail::rieffelStarImpl(f, g, [&](const auto& p, const auto& q) {
    return bicharFormal(A, p, q);
  });
}

// (sum c_p e_p)^* = sum conj(c_p) e_{-p}
template <class C>
TorusElement<C> rieffelInvolution(const TorusElement<C>& f) {
  TorusElement<C> r;
  for (const auto& [p, c] : f.v) {
    std::vector<int> mp(p.size());
    for (size_t i = 0; i < p.size(); ++i) mp[i] = -p[i];
    r.add(mp, conj(c));
  }
  return r;
}

// The hbar^1 exponent coefficient of c(p,q) as a rational slope, together
// with consistency assertions against the bracket {f,g} = J_{jk} d_j f d_k g.
struct SlopeReport {
  Rational slope;       // -<p, J q>/2
  bool exponentOk = false;
  bool bracketOk = false;
};

inline SlopeReport semiclassicalSlope(const RieffelAlgebra& A, const std::vector<int>& p,
                                      const std::vector<int>& q) {
  SlopeReport rep;
  rep.slope = -A.pairing(p, q) / 2;
  // exponent linearity in hbar: c(p,q) = exp(i * slope * hbar)
  auto c = bicharFormal(A, p, q);
  auto expect = expSeries(GaussRational(ratOf(0), rep.slope), A.K);
  rep.exponentOk = (c == expect);
  // hbar^1 of e_p * e_q - e_p e_q versus (i/2) times the bracket coefficient
  // {e_p, e_q} = J_{jk} (i p_j)(i q_k) e_{p+q} = -<p,Jq> e_{p+q}
  if (A.K >= 1) {
    GaussRational lhs = c.c[1];
    GaussRational bracketCoeff = GaussRational(-A.pairing(p, q));
    rep.bracketOk = (lhs == GaussRational(ratOf(0), ratOf(1, 2)) * bracketCoeff);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Crossed product with Z^k acting by quarter-period translations on the base
// torus (the reduced foliation groupoid algebra of a constant Dirac
// structure with a rational transversal).

struct CrossedDiracAlgebra {
  RieffelAlgebra base;                            // on T^{baseDim}
  int k = 0;                                      // rank of the Z^k part
  std::vector<std::vector<long>> quarterTrans;    // k generators x baseDim

  void validate() const {
    base.validate();
    if ((int)quarterTrans.size() != k) throw SchemaError("crossed action: wrong rank");
    for (const auto& row : quarterTrans)
      if ((int)row.size() != base.n) throw SchemaError("crossed action: wrong base dim");
  }
  // phase transport of a base mode by the translation indexed by m in Z^k
  template <class C>
  TorusElement<C> transport(const std::vector<int>& m, const TorusElement<C>& f) const {
    TorusElement<C> out;
    for (const auto& [p, c] : f.v) {
      long qd = 0;
      for (int g = 0; g < k; ++g)
        for (int i = 0; i < base.n; ++i) qd += (long)m[g] * quarterTrans[g][i] * p[i];
      out.add(p, mulPhase(c, GaussRational::ipow(qd)));
    }
    return out;
  }
  static PhaseScalar mulPhase(const PhaseScalar& c, const GaussRational& ph) {
    return c * PhaseScalar(ph);
  }
  static HbarSeries<GaussRational> mulPhase(const HbarSeries<GaussRational>& c,
                                            const GaussRational& ph) {
    return scale(c, ph);
  }
};

template <class C>
struct CrossedElement {
  std::map<std::vector<int>, TorusElement<C>> v;  // Z^k index -> base element

  void add(const std::vector<int>& m, const TorusElement<C>& e) {
    if (isZero(e)) return;
    auto [it, fresh] = v.try_emplace(m, e);
    if (!fresh) {
      it->second = it->second + e;
      if (isZero(it->second)) v.erase(it);
    }
  }
  friend CrossedElement operator+(const CrossedElement& a, const CrossedElement& b) {
    CrossedElement r = a;
    for (const auto& [m, e] : b.v) r.add(m, e);
    return r;
  }
  friend CrossedElement operator-(const CrossedElement& a, const CrossedElement& b) {
    CrossedElement r = a;
    for (const auto& [m, e] : b.v) {
      TorusElement<C> neg;
      for (const auto& [p, c] : e.v) neg.add(p, -c);
      r.add(m, neg);
    }
    return r;
  }
  friend bool operator==(const CrossedElement& a, const CrossedElement& b) { return a.v == b.v; }
};

// (f*g)(g1+g2) accumulates transport_{g1}(f_{g2}) *_{hbar J} g_{g1}, the
// crossed-product multiplication over the base Rieffel product.
template <class C>
CrossedElement<C> crossedDiracStar(const CrossedDiracAlgebra& A, const CrossedElement<C>& f,
                                   const CrossedElement<C>& g) {
  CrossedElement<C> out;
  for (const auto& [h, fh] : f.v)
    for (const auto& [g_, gg] : g.v) {
      std::vector<int> sum(h.size());
      for (size_t i = 0; i < h.size(); ++i) sum[i] = h[i] + g_[i];
      out.add(sum, rieffelStar(A.base, A.transport(g_, fh), gg));
    }
  return out;
}

}  // namespace starfield
