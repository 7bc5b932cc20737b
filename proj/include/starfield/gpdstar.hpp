#pragma once

// The deformed groupoid algebra: for each output arrow, transported flat
// sections are multiplied fiberwise and center-projected, Haar-summed over
// the composition fiber. The transformation model also carries the
// crossed-product fast path used as an independent oracle, and the trace
// functional with its closedness check.

#include "starfield/fedosov.hpp"
#include "starfield/ncpoisson.hpp"

namespace starfield {

// ---------------------------------------------------------------------------
// Transformation model.

struct QuantizedTransformation {
  TransformationGroupoid model;
  AbelianConnection<TrigFn> conn;
};

inline QuantizedTransformation makeQuantizedTransformation(const TransformationGroupoid& M,
                                                           const SymplecticData<TrigFn>& sym,
                                                           int N) {
  M.validate();
  if (sym.dim != M.n) throw SchemaError("symplectic dim must match the unit torus");
  // gate: omega invariant under every action matrix
  for (const auto& phi : M.act)
    for (int a = 0; a < sym.dim; ++a)
      for (int b = 0; b < sym.dim; ++b) {
        Rational acc = 0;
        for (int i = 0; i < sym.dim; ++i)
          for (int j = 0; j < sym.dim; ++j)
            acc += ratOf(phi.A[i][a]) * sym.omega[i][j] * ratOf(phi.A[j][b]);
        if (acc != sym.omega[a][b]) throw MathError("omega is not invariant under the action");
      }
  if (!sym.flat()) {
    // invariance of a supplied Gamma is the caller's responsibility; the flat
    // table is invariant for every affine action.
    for (const auto& [idx, coeff] : sym.gamma)
      for (const auto& phi : M.act)
        if (!(substAffine(coeff, phi) == coeff))
          throw MathError("Gamma coefficients are not invariant under the action");
  }
  return {M, buildAbelianConnection(sym, N)};
}

// Transport of a Weyl section along phi_g: base modes substitute and fiber
// coordinates transform linearly, y -> A_g y.
inline WeylSection<TrigFn> transportSection(const WeylSection<TrigFn>& W,
                                            const AffineTorusMap& phi) {
  int dim = W.dim;
  WeylSection<TrigFn> out(dim, W.trunc);
  for (const auto& [key, coeff] : W.m) {
    TrigFn moved = substAffine(coeff, phi);
    if (isZero(moved)) continue;
    // expand prod_i ( sum_j A[i][j] y_j )^{alpha_i}
    std::map<std::vector<int>, long> expansion{{std::vector<int>(dim, 0), 1}};
    for (int i = 0; i < dim; ++i)
      for (int rep = 0; rep < key.y[i]; ++rep) {
        std::map<std::vector<int>, long> next;
        for (const auto& [e, w] : expansion)
          for (int j = 0; j < dim; ++j) {
            if (phi.A[i][j] == 0) continue;
            auto e2 = e;
            e2[j] += 1;
            next[e2] += w * phi.A[i][j];
          }
        expansion = std::move(next);
      }
    for (const auto& [e, w] : expansion) {
      if (w == 0) continue;
      WeylKey k2 = key;
      k2.y = e;
      out.addTerm(k2, scaleCoeff(moved, GaussRational(ratOf(w))));
    }
  }
  return out;
}

// f*g(x, gh) = sum sigma( transport_g(Q(f_h)) o Q(g_g) ).
inline TransFn gpdStar(const QuantizedTransformation& A, const TransFn& f, const TransFn& g) {
  TransFn out;
  int K = A.conn.symbolOrder();
  for (const auto& [h, fh] : f.v) {
    WeylSection<TrigFn> Qf = quantize(A.conn, fh.truncated(K));
    for (const auto& [g_, gg] : g.v) {
      WeylSection<TrigFn> Qg = quantize(A.conn, gg.truncated(K));
      WeylSection<TrigFn> moved = transportSection(Qf, A.model.act[g_]);
      out.add(A.model.mult[g_][h], centerCirc(moved, Qg, A.conn.sym, K));
    }
  }
  return out;
}

// Crossed-product fast path: base functions are transported first and the
// unit-space star product is applied afterwards.
inline TransFn crossedStar(const QuantizedTransformation& A, const TransFn& f, const TransFn& g) {
  TransFn out;
  int K = A.conn.symbolOrder();
  for (const auto& [h, fh] : f.v)
    for (const auto& [g_, gg] : g.v)
      out.add(A.model.mult[g_][h],
              baseStar(A.conn, substAffine(fh, A.model.act[g_]).truncated(K), gg.truncated(K)));
  return out;
}

// ---------------------------------------------------------------------------
// Pair groupoid: Eq-of-motion through the diagonal leaf chart; the fiber
// integral in Fourier modes pins the middle mode, and what remains is the
// unit-space star product of the transported leaf modes.

struct QuantizedTorusPair {
  TorusPairGroupoid model;
  AbelianConnection<TrigFn> conn;  // on the unit torus T^k
  mutable std::map<std::pair<std::vector<int>, std::vector<int>>, HbarSeries<GaussRational>>
      cache;
};

inline QuantizedTorusPair makeQuantizedTorusPair(const TorusPairGroupoid& M,
                                                 const SymplecticData<TrigFn>& sym, int N) {
  if (sym.dim != M.k) throw SchemaError("symplectic dim must match the unit torus");
  return {M, buildAbelianConnection(sym, N), {}};
}

inline HbarSeries<GaussRational> leafStarCoeff(const QuantizedTorusPair& A,
                                               const std::vector<int>& mf,
                                               const std::vector<int>& mg) {
  auto it = A.cache.find({mf, mg});
  if (it != A.cache.end()) return it->second;
  int K = A.conn.symbolOrder();
  TrigSeries sf(K, TrigFn::mode(A.model.k, mf)), sg(K, TrigFn::mode(A.model.k, mg));
  TrigSeries prod = baseStar(A.conn, sf, sg);
  std::vector<int> total(A.model.k);
  for (int i = 0; i < A.model.k; ++i) total[i] = mf[i] + mg[i];
  HbarSeries<GaussRational> coeff(K);
  for (int o = 0; o <= K; ++o) coeff.c[o] = atMode(prod.c[o], total);
  A.cache.emplace(std::make_pair(mf, mg), coeff);
  return coeff;
}

inline PairFn gpdStar(const QuantizedTorusPair& A, const PairFn& f, const PairFn& g) {
  int k = A.model.k;
  int K = std::min({f.v.K, g.v.K, A.conn.symbolOrder()});
  PairFn out{TrigSeries(K)};
  for (int i = 0; i <= K; ++i)
    for (int j = 0; i + j <= K; ++j)
      for (const auto& [ma, ca] : f.v.c[i].t)
        for (const auto& [mb, cb] : g.v.c[j].t) {
          bool match = true;
          for (int t = 0; t < k; ++t)
            if (ma[k + t] + mb[t] != 0) {
              match = false;
              break;
            }
          if (!match) continue;
          // leaf modes seen through the target/source charts
          std::vector<int> mf(k), mg(k), mo(2 * k);
          for (int t = 0; t < k; ++t) {
            mf[t] = ma[t] + ma[k + t];
            mg[t] = mb[t] + mb[k + t];
            mo[t] = ma[t];
            mo[k + t] = mb[k + t];
          }
          HbarSeries<GaussRational> phase = leafStarCoeff(A, mf, mg);
          GaussRational cc = ca * cb;
          for (int o = 0; i + j + o <= K; ++o) {
            if (isZero(phase.c[o])) continue;
            detail::mapAdd(out.v.c[i + j + o].t, mo, cc * phase.c[o]);
          }
        }
  return out;
}

// ---------------------------------------------------------------------------
// Traces: normalized invariant volume on the unit space composed with the
// unit restriction, order by order.

inline HbarSeries<GaussRational> trace(const TransformationGroupoid& M, const TransFn& f) {
  TrigSeries u = restrictToUnits(M, f);
  HbarSeries<GaussRational> r(u.K);
  for (int o = 0; o <= u.K; ++o) r.c[o] = average(u.c[o]);
  return r;
}

inline HbarSeries<GaussRational> trace(const TorusPairGroupoid& M, const PairFn& f) {
  TrigSeries u = restrictToUnits(M, f);
  HbarSeries<GaussRational> r(u.K);
  for (int o = 0; o <= u.K; ++o) r.c[o] = average(u.c[o]);
  return r;
}

// Finite model: Omega weights proportional to the unit-arrow Haar weights,
// normalized to total mass 1.
inline HbarSeries<GaussRational> trace(const FiniteGroupoid& G, const FiniteFn& f, int K) {
  HbarSeries<GaussRational> r(K);
  Rational total = 0;
  for (int ob = 0; ob < G.numObjects; ++ob) total += G.haar[G.unitArrow[ob]];
  for (int ob = 0; ob < G.numObjects; ++ob) {
    auto it = f.v.find(G.unitArrow[ob]);
    if (it == f.v.end()) continue;
    r += scale(it->second.truncated(K), GaussRational(G.haar[G.unitArrow[ob]] / total));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Semiclassical contract on order-0 symbols:
//   hbar^0 of f*g equals the convolution, and
//   hbar^1 of (f*g - g*f) equals i (Pi(f,g) - Pi(g,f)).

struct SemiclassicalReport {
  bool pass = true;
  std::string witness;
};

namespace detail {
inline TransFn orderZeroPart(const TransFn& f, int K) {
  TransFn r;
  for (const auto& [g, s] : f.v) r.add(g, TrigSeries(K, s.c[0]));
  return r;
}
inline PairFn orderZeroPart(const PairFn& f, int K) {
  return {TrigSeries(K, f.v.c[0])};
}
inline TrigFn componentAt(const TransFn& f, int g, int order) {
  auto it = f.v.find(g);
  if (it == f.v.end() || order > it->second.K) return {};
  return it->second.c[order];
}
}  // namespace detail

inline SemiclassicalReport semiclassicalCheck(const QuantizedTransformation& A,
                                              const PoissonTensor& p, const TransFn& fIn,
                                              const TransFn& gIn) {
  int K = std::max(1, A.conn.symbolOrder());
  TransFn f = detail::orderZeroPart(fIn, K), g = detail::orderZeroPart(gIn, K);
  SemiclassicalReport rep;
  TransFn prod = gpdStar(A, f, g);
  TransFn conv = convolve(A.model, f, g);
  TransFn comm = prod - gpdStar(A, g, f);
  TransFn piDiff = ncPoisson(A.model, p, f, g) - ncPoisson(A.model, p, g, f);
  for (int g_ = 0; g_ < A.model.order(); ++g_) {
    if (!(detail::componentAt(prod, g_, 0) == detail::componentAt(conv, g_, 0))) {
      rep.pass = false;
      rep.witness = "order-0 mismatch at group element " + std::to_string(g_);
      return rep;
    }
    TrigFn lhs = detail::componentAt(comm, g_, 1);
    TrigFn rhs = scaleCoeff(detail::componentAt(piDiff, g_, 0), GaussRational::iunit());
    if (!(lhs == rhs)) {
      rep.pass = false;
      rep.witness = "order-1 commutator mismatch at group element " + std::to_string(g_);
      return rep;
    }
  }
  return rep;
}

inline SemiclassicalReport semiclassicalCheck(const QuantizedTorusPair& A, const PoissonTensor& p,
                                              const PairFn& fIn, const PairFn& gIn) {
  int K = std::max(1, A.conn.symbolOrder());
  PairFn f = detail::orderZeroPart(fIn, K), g = detail::orderZeroPart(gIn, K);
  SemiclassicalReport rep;
  PairFn prod = gpdStar(A, f, g);
  PairFn conv = convolve(A.model, f, g);
  if (!(prod.v.c[0] == conv.v.c[0])) {
    rep.pass = false;
    rep.witness = "order-0 mismatch";
    return rep;
  }
  PairFn comm = prod - gpdStar(A, g, f);
  PairFn piDiff = ncPoisson(A.model, p, f, g) - ncPoisson(A.model, p, g, f);
  if (!(comm.v.c[1] == scaleCoeff(piDiff.v.c[0], GaussRational::iunit()))) {
    rep.pass = false;
    rep.witness = "order-1 commutator mismatch";
    return rep;
  }
  return rep;
}

}  // namespace starfield
