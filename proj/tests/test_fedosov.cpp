#include <doctest.h>

#include "starfield/fedosov.hpp"
#include "starfield/rng.hpp"

using namespace starfield;

namespace {

template <class B>
SymplecticData<B> flatSym(int dim) {
  SymplecticData<B> s;
  s.dim = dim;
  s.omega.assign(dim, std::vector<Rational>(dim, 0));
  for (int m = 0; m + 1 < dim; m += 2) {
    s.omega[m][m + 1] = 1;
    s.omega[m + 1][m] = -1;
  }
  s.omegaInv = invertRational(s.omega);
  return s;
}

SymplecticData<PolyFn> curvedR2() {
  auto s = flatSym<PolyFn>(2);
  s.gamma[{0, 0, 0}] = PolyFn::coordinate(2, 1);
  return s;
}

// Independent oracle: the printed exponential kernel applied directly to base
// functions, i.e. the closed-form Moyal product
//   f * g = sum_m (-i/2)^m hbar^m / m! om^{i1 j1}..om^{im jm} d^m f d^m g.
template <class B>
HbarSeries<B> moyalOracle(const B& f, const B& g, const SymplecticData<B>& s, int K) {
  HbarSeries<B> out(K);
  struct State {
    B fd, gd;
    Rational w;
  };
  std::vector<State> cur{{f, g, ratOf(1)}};
  for (int m = 0; m <= K; ++m) {
    GaussRational factor(1);
    for (int t = 0; t < m; ++t) factor *= GaussRational(ratOf(0), ratOf(-1, 2));
    factor *= GaussRational(ratOf(1) / factorial(m));
    for (const auto& st : cur) out.c[m] += scaleCoeff(st.fd * st.gd, factor * GaussRational(st.w));
    if (m == K) break;
    std::vector<State> next;
    for (const auto& st : cur)
      for (int i = 0; i < s.dim; ++i)
        for (int j = 0; j < s.dim; ++j) {
          if (sgn(s.omegaInv[i][j]) == 0) continue;
          B fd = derive(st.fd, i);
          if (isZero(fd)) continue;
          B gd = derive(st.gd, j);
          if (isZero(gd)) continue;
          next.push_back({fd, gd, st.w * s.omegaInv[i][j]});
        }
    cur = std::move(next);
  }
  return out;
}

// Direct Taylor expansion oracle for the flat quantization.
WeylSection<PolyFn> taylorLift(const PolySeries& f, int dim, int N) {
  WeylSection<PolyFn> out(dim, N);
  for (int k = 0; k <= f.K; ++k) {
    if (isZero(f.c[k]) || 2 * k > N) continue;
    // enumerate all alpha with |alpha| <= N - 2k
    std::vector<std::vector<int>> alphas{std::vector<int>(dim, 0)};
    for (int d = 0; d < N - 2 * k; ++d) {
      std::vector<std::vector<int>> grown;
      for (const auto& a : alphas)
        for (int i = 0; i < dim; ++i) {
          auto b = a;
          b[i] += 1;
          grown.push_back(b);
        }
      alphas.insert(alphas.end(), grown.begin(), grown.end());
    }
    std::sort(alphas.begin(), alphas.end());
    alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
    for (const auto& a : alphas) {
      PolyFn der = f.c[k];
      Rational fact = 1;
      for (int i = 0; i < dim; ++i) {
        for (int r = 0; r < a[i]; ++r) der = derive(der, i);
        fact *= factorial(a[i]);
      }
      if (isZero(der)) continue;
      WeylKey key;
      key.hbar = k;
      key.y = a;
      out.addTerm(key, scaleCoeff(der, GaussRational(ratOf(1) / fact)));
    }
  }
  return out;
}

PolySeries polyConst(int dim, GaussRational c, int K) {
  return PolySeries(K, PolyFn::constant(dim, c));
}

}  // namespace

TEST_CASE("flat fixtures have r = 0") {
  auto cR = buildAbelianConnection(flatSym<PolyFn>(2), 6);
  CHECK(isZero(cR.r));
  auto cT = buildAbelianConnection(flatSym<TrigFn>(2), 6);
  CHECK(isZero(cT.r));
  auto c4 = buildAbelianConnection(flatSym<PolyFn>(4), 4);
  CHECK(isZero(c4.r));
}

TEST_CASE("curved connection: leading r term is deltaInv R and D^2 = 0") {
  auto s = curvedR2();
  int N = 6;
  auto conn = buildAbelianConnection(s, N);
  CHECK(!isZero(conn.r));

  // lowest-degree part of r equals deltaInv(R)
  WeylSection<PolyFn> deg3(2, conn.r.trunc);
  for (const auto& [k, v] : conn.r.m) {
    CHECK(fedosovDegree(k) >= 3);
    if (fedosovDegree(k) == 3) deg3.addTerm(k, v);
  }
  auto r3 = weylDeltaInv(curvatureForm(s, conn.r.trunc));
  CHECK(deg3 == r3);

  // normalization deltaInv r = 0
  CHECK(isZero(weylDeltaInv(conn.r)));

  // D^2 = 0 within the degree-N window on random monomials
  Rng rng(31);
  for (int t = 0; t < 25; ++t) {
    WeylKey k;
    k.hbar = (int)rng.intIn(0, 3);
    k.y = {(int)rng.intIn(0, 3), (int)rng.intIn(0, 3)};
    k.form = (uint32_t)rng.intIn(0, 3);
    if (fedosovDegree(k) > N) continue;
    WeylSection<PolyFn> a(2, conn.r.trunc);
    a.addTerm(k, PolyFn::constant(2, GaussRational(1)));
    auto dda = applyD(conn, applyD(conn, a));
    for (const auto& [kk, vv] : dda.m) CHECK(fedosovDegree(kk) > N);
  }
}

TEST_CASE("abelian connection is unique: perturbed starts reconverge") {
  auto s = curvedR2();
  auto base = buildAbelianConnection(s, 6);
  Rng rng(32);
  for (int t = 0; t < 3; ++t) {
    // deltaInv of a 2-form section: a 1-form-valued, deltaInv-normalized start
    WeylSection<PolyFn> seed2(2, 8);
    for (int j = 0; j < 3; ++j) {
      WeylKey k;
      k.hbar = (int)rng.intIn(0, 1);
      k.y = {(int)rng.intIn(0, 2), (int)rng.intIn(0, 2)};
      k.form = 3;  // dx1 ^ dx2
      if (fedosovDegree(k) + 1 < 3) continue;  // deltaInv raises degree by 1
      seed2.addTerm(k, rng.poly(2, 1, 1));
    }
    auto start = weylDeltaInv(seed2);
    auto again = buildAbelianConnection(s, 6, &start);
    CHECK(again.r == base.r);
  }
}

TEST_CASE("D is a graded derivation of circ") {
  auto s = curvedR2();
  auto conn = buildAbelianConnection(s, 6);
  Rng rng(33);
  for (int t = 0; t < 15; ++t) {
    WeylSection<PolyFn> a(2, conn.r.trunc), b(2, conn.r.trunc);
    for (int j = 0; j < 2; ++j) {
      WeylKey k;
      k.hbar = (int)rng.intIn(0, 1);
      k.y = {(int)rng.intIn(0, 2), (int)rng.intIn(0, 1)};
      k.form = (uint32_t)rng.intIn(0, 3);
      a.addTerm(k, rng.poly(2, 1, 1));
      WeylKey k2;
      k2.hbar = (int)rng.intIn(0, 1);
      k2.y = {(int)rng.intIn(0, 1), (int)rng.intIn(0, 2)};
      k2.form = (uint32_t)rng.intIn(0, 3);
      b.addTerm(k2, rng.poly(2, 1, 1));
    }
    auto lhs = applyD(conn, circ(a, b, s));
    auto rhs = circ(applyD(conn, a), b, s);
    for (const auto& [k, v] : a.m) {
      WeylSection<PolyFn> part(2, a.trunc);
      part.addTerm(k, v);
      auto term = circ(part, applyD(conn, b), s);
      rhs = (formDegree(k) % 2) ? rhs - term : rhs + term;
    }
    // compare away from the truncation boundary
    int window = 4;
    WeylSection<PolyFn> dl(2, window), dr(2, window);
    for (const auto& [k, v] : lhs.m) dl.addTerm(k, v);
    for (const auto& [k, v] : rhs.m) dr.addTerm(k, v);
    CHECK(dl == dr);
  }
}

TEST_CASE("quantize: constants, coordinates, and the flat Taylor oracle") {
  auto s = flatSym<PolyFn>(2);
  int N = 6;
  auto conn = buildAbelianConnection(s, N);

  auto one = quantize(conn, polyConst(2, GaussRational(1), 3));
  CHECK(one == liftSeries(polyConst(2, GaussRational(1), 3), 2, N));

  PolySeries x1(3, PolyFn::coordinate(2, 0));
  auto qx1 = quantize(conn, x1);
  WeylSection<PolyFn> expect(2, N);
  WeylKey k0;
  k0.y = {0, 0};
  expect.addTerm(k0, PolyFn::coordinate(2, 0));
  WeylKey k1;
  k1.y = {1, 0};
  expect.addTerm(k1, PolyFn::constant(2, GaussRational(1)));
  CHECK(qx1 == expect);

  Rng rng(34);
  for (int t = 0; t < 20; ++t) {
    PolySeries f(2);
    f.c[0] = rng.poly(2, 3, 3);
    f.c[1] = rng.poly(2, 2, 2);
    f.c[2] = rng.poly(2, 2, 2);
    CHECK(quantize(conn, f) == taylorLift(f, 2, N));
  }
}

TEST_CASE("flat sections are D-closed") {
  auto s = curvedR2();
  auto conn = buildAbelianConnection(s, 6);
  Rng rng(35);
  for (int t = 0; t < 10; ++t) {
    PolySeries f(3);
    f.c[0] = rng.poly(2, 2, 2);
    f.c[1] = rng.poly(2, 1, 1);
    auto q = quantize(conn, f);
    CHECK(centerProject(q, 3) == f);
    auto dq = applyD(conn, q);
    for (const auto& [k, v] : dq.m) CHECK(fedosovDegree(k) >= conn.order);
  }
}

TEST_CASE("baseStar: unit law and the coordinate commutator") {
  auto s = flatSym<PolyFn>(2);
  auto conn = buildAbelianConnection(s, 6);
  Rng rng(36);
  PolySeries f(3);
  f.c[0] = rng.poly(2, 2, 3);
  f.c[1] = rng.poly(2, 1, 2);
  auto fs = baseStar(conn, f, polyConst(2, GaussRational(1), 3));
  CHECK(fs == f);

  PolySeries x1(3, PolyFn::coordinate(2, 0)), x2(3, PolyFn::coordinate(2, 1));
  auto comm = baseStar(conn, x1, x2) - baseStar(conn, x2, x1);
  // -i hbar omega^{12} with standard omega: omega^{12} = -1, so +i hbar
  PolySeries expect(3);
  expect.c[1] = PolyFn::constant(2, GaussRational::iunit());
  CHECK(comm == expect);
}

TEST_CASE("flat baseStar equals the Moyal oracle (poly and trig)") {
  auto sp = flatSym<PolyFn>(2);
  auto cp = buildAbelianConnection(sp, 6);
  Rng rng(37);
  for (int t = 0; t < 10; ++t) {
    PolySeries f(3, rng.poly(2, 3, 3)), g(3, rng.poly(2, 3, 3));
    CHECK(baseStar(cp, f, g) == moyalOracle(f.c[0], g.c[0], sp, 3));
  }
  auto st = flatSym<TrigFn>(2);
  auto ct = buildAbelianConnection(st, 6);
  for (int t = 0; t < 10; ++t) {
    TrigSeries f(3, rng.trig(2, 2, 3)), g(3, rng.trig(2, 2, 3));
    CHECK(baseStar(ct, f, g) == moyalOracle(f.c[0], g.c[0], st, 3));
  }
  // closed-form phase on single modes: e_p * e_q = exp((i hbar/2) <p, Winv q>) e_{p+q}
  for (int t = 0; t < 20; ++t) {
    auto p = rng.modeIn(2, 3), q = rng.modeIn(2, 3);
    TrigSeries f(3, TrigFn::mode(2, p)), g(3, TrigFn::mode(2, q));
    Rational bil = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) bil += st.omegaInv[i][j] * ratOf(p[i]) * ratOf(q[j]);
    auto phase = expSeries(GaussRational(ratOf(0), bil / 2), 3);
    std::vector<int> pq = {p[0] + q[0], p[1] + q[1]};
    TrigSeries expect(3);
    for (int k = 0; k <= 3; ++k) expect.c[k] = TrigFn::mode(2, pq, phase.c[k]);
    CHECK(baseStar(ct, f, g) == expect);
  }
}

TEST_CASE("semiclassical contract: hbar^0 product and hbar^1 bracket") {
  // recorded convention: pi = -(1/2) omega^{-1}; then
  // f*g = fg + i hbar pi(f,g) + o(hbar) holds verbatim on flat fixtures.
  auto st = flatSym<TrigFn>(2);
  auto ct = buildAbelianConnection(st, 6);
  Rng rng(38);
  for (int t = 0; t < 15; ++t) {
    TrigFn f = rng.trig(2, 2, 3), g = rng.trig(2, 2, 3);
    auto prod = baseStar(ct, TrigSeries(3, f), TrigSeries(3, g));
    CHECK(prod.c[0] == f * g);
    TrigFn bracket(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Rational pij = -st.omegaInv[i][j] / 2;
        if (sgn(pij) == 0) continue;
        bracket += scaleCoeff(derive(f, i) * derive(g, j), GaussRational(pij));
      }
    CHECK(prod.c[1] == scaleCoeff(bracket, GaussRational::iunit()));
  }
}

TEST_CASE("baseStar associativity mod hbar^{N/2+1}") {
  auto s = curvedR2();
  auto conn = buildAbelianConnection(s, 6);
  Rng rng(39);
  for (int t = 0; t < 10; ++t) {
    PolySeries f(3, rng.poly(2, 2, 2)), g(3, rng.poly(2, 2, 2)), h(3, rng.poly(2, 2, 2));
    auto lhs = baseStar(conn, baseStar(conn, f, g), h);
    auto rhs = baseStar(conn, f, baseStar(conn, g, h));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("centerCirc agrees with the full product followed by projection") {
  auto s = flatSym<PolyFn>(2);
  Rng rng(40);
  for (int t = 0; t < 15; ++t) {
    WeylSection<PolyFn> a(2, 6), b(2, 6);
    for (int j = 0; j < 4; ++j) {
      WeylKey k;
      k.hbar = (int)rng.intIn(0, 2);
      k.y = {(int)rng.intIn(0, 2), (int)rng.intIn(0, 2)};
      k.form = (uint32_t)rng.intIn(0, 3);
      a.addTerm(k, rng.poly(2, 2, 2));
      k.form = (uint32_t)rng.intIn(0, 3);
      b.addTerm(k, rng.poly(2, 2, 2));
    }
    CHECK(centerCircSerial(a, b, s, 3) == centerProject(circ(a, b, s), 3));
    CHECK(centerCirc(a, b, s, 3) == centerCircSerial(a, b, s, 3));
  }
}
