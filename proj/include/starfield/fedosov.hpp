#pragma once

// Fedosov recursion: the abelian connection D = -delta + conn + (i/hbar)[r, .],
// the quantization map (flat sections from symbols), and the induced star
// product on base functions.

#include "starfield/weyl.hpp"

namespace starfield {

template <class B>
struct AbelianConnection {
  SymplecticData<B> sym;
  int order = 0;          // Fedosov degree N; symbols retain hbar-orders <= N/2
  WeylSection<B> gamma;   // GammaTilde (empty when flat)
  WeylSection<B> curv;    // R
  WeylSection<B> r;       // recursion output, degrees >= 3, built to order+2

  int symbolOrder() const { return order / 2; }
};

// r is the fixed point of r <- deltaInv(R + conn r + (i/hbar) r o r), iterated
// degree by degree. Terms live in degrees >= 3 with deltaInv r = 0. An
// optional start (any deltaInv-normalized section of degree >= 3) reconverges
// to the same fixed point, which is the uniqueness statement made testable.
template <class B>
AbelianConnection<B> buildAbelianConnection(const SymplecticData<B>& sym, int N,
                                            const WeylSection<B>* start = nullptr) {
  if (N < 2) throw SchemaError("fedosov order must be >= 2");
  validateSymplectic(sym);
  AbelianConnection<B> conn;
  conn.sym = sym;
  conn.order = N;
  int Nw = N + 2;  // internal margin so the window <= N is exactly abelian
  conn.gamma = gammaForm(sym, Nw);
  conn.curv = curvatureForm(sym, Nw);
  WeylSection<B> r = start ? retruncate(*start, Nw) : WeylSection<B>(sym.dim, Nw);
  for (int it = 0; it < Nw; ++it) {
    WeylSection<B> rhs = conn.curv + connApply(conn.gamma, r, sym);
    WeylSection<B> rr = circ(retruncate(r, Nw + 2), retruncate(r, Nw + 2), sym);
    if (!isZero(rr))
      rhs = rhs + retruncate(scaleSection(hbarDiv(rr), GaussRational::iunit()), Nw);
    r = retruncate(weylDeltaInv(rhs), Nw);
  }
  conn.r = r;
  return conn;
}

// D a = -delta a + conn a + (i/hbar)[r, a].
template <class B>
WeylSection<B> applyD(const AbelianConnection<B>& c, const WeylSection<B>& a) {
  WeylSection<B> r = connApply(c.gamma, a, c.sym) - weylDelta(a);
  if (!isZero(c.r)) r = r + adOverHbar(c.r, a, c.sym);
  return r;
}

// The unique flat section with symbol f: fixed point of
// a <- f + deltaInv(conn a + (i/hbar)[r, a]).
template <class B>
WeylSection<B> quantize(const AbelianConnection<B>& c, const HbarSeries<B>& f) {
  int N = c.order;
  WeylSection<B> lifted = liftSeries(f, c.sym.dim, N);
  WeylSection<B> a = lifted;
  WeylSection<B> rT = retruncate(c.r, N);
  for (int it = 0; it <= N; ++it) {
    WeylSection<B> rhs = connApply(c.gamma, a, c.sym);
    if (!isZero(rT)) rhs = rhs + adOverHbar(rT, a, c.sym);
    a = lifted + retruncate(weylDeltaInv(rhs), N);
  }
  return a;
}

// sigma(a o b) without materializing the full product: only pairs of
// monomials with no dx and fully contractable y parts reach the center.
// centerCircSerial is the reference; the OpenMP version must agree with it.
template <class B>
HbarSeries<B> centerCircSerial(const WeylSection<B>& a, const WeylSection<B>& b,
                               const SymplecticData<B>& s, int K) {
  HbarSeries<B> out(K);
  for (const auto& [ka, ca] : a.m) {
    if (ka.form != 0) continue;
    int da = yDegree(ka);
    for (const auto& [kb, cb] : b.m) {
      if (kb.form != 0 || yDegree(kb) != da) continue;
      int horder = ka.hbar + kb.hbar + da;
      if (horder > K) continue;
      // full contraction coefficient of y^{alpha_a} against y^{alpha_b}
      std::map<std::pair<std::vector<int>, std::vector<int>>, Rational> cur;
      cur[{ka.y, kb.y}] = 1;
      for (int m = 0; m < da; ++m) {
        std::map<std::pair<std::vector<int>, std::vector<int>>, Rational> next;
        for (const auto& [st, w] : cur)
          for (int i = 0; i < s.dim; ++i) {
            if (st.first[i] == 0) continue;
            for (int j = 0; j < s.dim; ++j) {
              if (st.second[j] == 0 || sgn(s.omegaInv[i][j]) == 0) continue;
              auto st2 = st;
              st2.first[i] -= 1;
              st2.second[j] -= 1;
              Rational add = w * s.omegaInv[i][j] * ratOf(st.first[i]) * ratOf(st.second[j]);
              auto [it, fresh] = next.try_emplace(st2, add);
              if (!fresh) it->second += add;
            }
          }
        cur = std::move(next);
      }
      std::vector<int> zero(s.dim, 0);
      auto it = cur.find({zero, zero});
      if (it == cur.end() || sgn(it->second) == 0) continue;
      GaussRational factor = GaussRational(it->second / factorial(da));
      GaussRational half(1);
      for (int m = 0; m < da; ++m) half *= GaussRational(ratOf(0), ratOf(-1, 2));
      out.c[horder] += scaleCoeff(ca * cb, factor * half);
    }
  }
  return out;
}

template <class B>
HbarSeries<B> centerCirc(const WeylSection<B>& a, const WeylSection<B>& b,
                         const SymplecticData<B>& s, int K) {
  size_t npairs = a.m.size() * b.m.size();
  if (npairs < 256) return centerCircSerial(a, b, s, K);
  std::vector<const std::pair<const WeylKey, B>*> pa;
  for (const auto& kv : a.m)
    if (kv.first.form == 0) pa.push_back(&kv);
  std::vector<HbarSeries<B>> parts(maxThreads(), HbarSeries<B>(K));
  PARALLEL_FOR
  for (long i = 0; i < (long)pa.size(); ++i) {
    WeylSection<B> single(s.dim, a.trunc);
    single.m.emplace(pa[i]->first, pa[i]->second);
    parts[threadId()] += centerCircSerial(single, b, s, K);
  }
  HbarSeries<B> out(K);
  for (const auto& p : parts) out += p;
  return out;
}

// The base star product sigma(Q(f) o Q(g)), exact through hbar^{N/2}.
template <class B>
HbarSeries<B> baseStar(const AbelianConnection<B>& c, const HbarSeries<B>& f,
                       const HbarSeries<B>& g) {
  return centerCirc(quantize(c, f), quantize(c, g), c.sym, c.symbolOrder());
}

}  // namespace starfield
