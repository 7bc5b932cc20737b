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

WeylSection<PolyFn> yMono(int dim, int N, std::vector<int> yexp, uint32_t form = 0, int hbar = 0,
                          GaussRational c = GaussRational(1)) {
  WeylSection<PolyFn> a(dim, N);
  WeylKey k;
  k.hbar = hbar;
  k.y = std::move(yexp);
  k.form = form;
  a.addTerm(k, PolyFn::constant(dim, c));
  return a;
}

WeylSection<PolyFn> randomSection(Rng& rng, int dim, int N, int terms, int maxCoeffDeg = 2) {
  WeylSection<PolyFn> a(dim, N);
  for (int t = 0; t < terms; ++t) {
    WeylKey k;
    k.hbar = (int)rng.intIn(0, 2);
    k.y.resize(dim);
    for (int i = 0; i < dim; ++i) k.y[i] = (int)rng.intIn(0, 2);
    k.form = (uint32_t)rng.intIn(0, (1 << dim) - 1);
    if (fedosovDegree(k) > N) continue;
    a.addTerm(k, rng.poly(dim, maxCoeffDeg, 2));
  }
  return a;
}

}  // namespace

TEST_CASE("circ: unit, diagonal vanishing, first-order commutator") {
  auto s = flatSym<PolyFn>(2);
  int N = 6;
  auto one = yMono(2, N, {0, 0});
  Rng rng(21);
  auto a = randomSection(rng, 2, N, 4);
  CHECK(circ(one, a, s) == a);
  CHECK(circ(a, one, s) == a);

  auto y1 = yMono(2, N, {1, 0});
  auto y2 = yMono(2, N, {0, 1});
  CHECK(circ(y1, y1, s) == yMono(2, N, {2, 0}));  // omega^{11} = 0

  // y1 o y2 - y2 o y1 = -i hbar omega^{12}; standard omega has omega^{12} = -1
  auto comm = circ(y1, y2, s) - circ(y2, y1, s);
  auto expect = yMono(2, N, {0, 0}, 0, 1,
                      GaussRational(ratOf(0), ratOf(-1)) * GaussRational(s.omegaInv[0][1]));
  CHECK(comm == expect);
  CHECK(comm == yMono(2, N, {0, 0}, 0, 1, GaussRational::iunit()));

  CHECK(gradedBracket(y1, y2, s) == expect);
  CHECK(isZero(gradedBracket(one, a, s)));
}

TEST_CASE("circ is associative on randomized sections (2n = 2 and 4)") {
  Rng rng(22);
  for (int dim : {2, 4}) {
    auto s = flatSym<PolyFn>(dim);
    for (int t = 0; t < 25; ++t) {
      auto a = randomSection(rng, dim, 6, 3);
      auto b = randomSection(rng, dim, 6, 3);
      auto c = randomSection(rng, dim, 6, 3);
      CHECK(circ(circ(a, b, s), c, s) == circ(a, circ(b, c, s), s));
    }
  }
}

TEST_CASE("delta examples and delta^2 = 0") {
  int N = 6;
  auto y1 = yMono(2, N, {1, 0});
  auto dx1 = yMono(2, N, {0, 0}, 1u << 0);
  CHECK(weylDelta(y1) == dx1);

  WeylSection<PolyFn> f(2, N);
  WeylKey k;
  k.y = {0, 0};
  f.addTerm(k, PolyFn::coordinate(2, 0) * PolyFn::coordinate(2, 1));
  CHECK(isZero(weylDelta(f)));

  auto y1y2 = yMono(2, N, {1, 1});
  auto expect = yMono(2, N, {0, 1}, 1u << 0) + yMono(2, N, {1, 0}, 1u << 1);
  CHECK(weylDelta(y1y2) == expect);

  Rng rng(23);
  for (int t = 0; t < 40; ++t) {
    auto a = randomSection(rng, 2, N, 4);
    CHECK(isZero(weylDelta(weylDelta(a))));
    CHECK(isZero(weylDeltaInv(weylDeltaInv(a))));
  }
}

TEST_CASE("delta inverse examples and Hodge identity") {
  int N = 6;
  auto dx1 = yMono(2, N, {0, 0}, 1u << 0);
  CHECK(weylDeltaInv(dx1) == yMono(2, N, {1, 0}));
  CHECK(isZero(weylDeltaInv(yMono(2, N, {0, 0}))));

  auto a = yMono(2, N, {1, 1}, 1u << 0);
  CHECK(weylDelta(weylDeltaInv(a)) + weylDeltaInv(weylDelta(a)) == a);

  Rng rng(24);
  for (int dim : {2, 4}) {
    for (int t = 0; t < 40; ++t) {
      auto x = randomSection(rng, dim, 6, 4);
      auto hodge = weylDelta(weylDeltaInv(x)) + weylDeltaInv(weylDelta(x)) + scalarPart(x);
      CHECK(hodge == x);
    }
  }
}

TEST_CASE("flat connection examples") {
  auto s = flatSym<PolyFn>(2);
  int N = 6;
  WeylSection<PolyFn> empty(2, N);

  // flat: conn f(x) = sum_i (df/dx_i) dx^i
  WeylSection<PolyFn> f(2, N);
  WeylKey k;
  k.y = {0, 0};
  f.addTerm(k, PolyFn::coordinate(2, 0) * PolyFn::coordinate(2, 0));
  auto df = connApply(empty, f, s);
  WeylSection<PolyFn> expect(2, N);
  WeylKey kd;
  kd.y = {0, 0};
  kd.form = 1;
  expect.addTerm(kd, scaleCoeff(PolyFn::coordinate(2, 0), GaussRational(2)));
  CHECK(df == expect);

  // flat: conn y^1 = 0
  CHECK(isZero(connApply(empty, yMono(2, N, {1, 0}), s)));
}

TEST_CASE("curved connection: conn^2 a = (i/hbar)[R, a] and conn delta + delta conn = 0") {
  auto s = curvedR2();
  int N = 8;
  auto gamma = gammaForm(s, N);
  auto R = curvatureForm(s, N);
  CHECK(!isZero(R));

  Rng rng(25);
  for (int t = 0; t < 30; ++t) {
    auto a = randomSection(rng, 2, N, 3);
    auto dda = connApply(gamma, connApply(gamma, a, s), s);
    CHECK(dda == adOverHbar(R, a, s));
    CHECK(isZero(connApply(gamma, weylDelta(a), s) + weylDelta(connApply(gamma, a, s))));
  }
}

TEST_CASE("connection is a graded derivation of circ") {
  auto s = curvedR2();
  int N = 8;
  auto gamma = gammaForm(s, N);
  Rng rng(26);
  for (int t = 0; t < 25; ++t) {
    auto a = randomSection(rng, 2, N, 3);
    auto b = randomSection(rng, 2, N, 3);
    // split a into form-homogeneous parts to apply the sign
    WeylSection<PolyFn> lhs = connApply(gamma, circ(a, b, s), s);
    WeylSection<PolyFn> rhs = circ(connApply(gamma, a, s), b, s);
    for (const auto& [k, v] : a.m) {
      WeylSection<PolyFn> part(2, N);
      part.addTerm(k, v);
      auto term = circ(part, connApply(gamma, b, s), s);
      rhs = (formDegree(k) % 2) ? rhs - term : rhs + term;
    }
    CHECK(lhs == rhs);
  }
}

TEST_CASE("central elements commute with everything") {
  auto s = flatSym<PolyFn>(2);
  Rng rng(27);
  for (int t = 0; t < 20; ++t) {
    WeylSection<PolyFn> z(2, 6);
    WeylKey k;
    k.y = {0, 0};
    k.hbar = (int)rng.intIn(0, 1);
    z.addTerm(k, rng.poly(2, 2, 2));
    auto a = randomSection(rng, 2, 6, 4);
    CHECK(circ(z, a, s) == circ(a, z, s));
    CHECK(isZero(gradedBracket(z, a, s)));
  }
}

TEST_CASE("hbar division guards the nonzero remainder") {
  auto a = yMono(2, 6, {1, 0}, 0, 0);
  CHECK_THROWS_AS(hbarDiv(a), MathError);
  auto b = yMono(2, 6, {1, 0}, 0, 1);
  CHECK(hbarDiv(b) == yMono(2, 6, {1, 0}, 0, 0));
}

TEST_CASE("circ truncates at the minimum Fedosov order") {
  auto s = flatSym<PolyFn>(2);
  auto a = yMono(2, 2, {1, 0});
  auto b = yMono(2, 6, {1, 0});
  auto p = circ(a, b, s);
  CHECK(p.trunc == 2);
  CHECK(p == yMono(2, 2, {2, 0}));
}
