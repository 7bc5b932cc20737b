#include "starfield/fixtures.hpp"

#include "starfield/json_io.hpp"

namespace starfield {

namespace {

// group algebra of a finite group given by its multiplication table, with
// counting Haar over a single object
FiniteGroupoid groupAlgebra(const std::vector<std::vector<int>>& mult) {
  int m = (int)mult.size();
  FiniteGroupoid g;
  g.numObjects = 1;
  g.src.assign(m, 0);
  g.tgt.assign(m, 0);
  int e = -1;
  for (int a = 0; a < m; ++a) {
    bool id = true;
    for (int b = 0; b < m; ++b)
      if (mult[a][b] != b || mult[b][a] != b) id = false;
    if (id) e = a;
  }
  g.unitArrow = {e};
  g.inv.assign(m, -1);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (mult[a][b] == e && mult[b][a] == e) g.inv[a] = b;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) g.comp[{a, b}] = mult[a][b];
  g.haar.assign(m, ratOf(1));
  g.finalize();
  g.validate();
  return g;
}

std::vector<std::vector<int>> cyclicTable(int m) {
  std::vector<std::vector<int>> t(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) t[a][b] = (a + b) % m;
  return t;
}

}  // namespace

FiniteGroupoid fixtureZ2Group() { return groupAlgebra(cyclicTable(2)); }
FiniteGroupoid fixtureZ4Group() { return groupAlgebra(cyclicTable(4)); }

// Pair groupoid on three objects with a non-uniform left-invariant Haar
// system: lambda^u((u,v)) = w_v.
FiniteGroupoid fixturePair3Weighted() {
  const int n = 3;
  std::vector<Rational> w = {ratOf(1), ratOf(1, 2), ratOf(1, 3)};
  FiniteGroupoid g;
  g.numObjects = n;
  auto id = [](int t, int s) { return t * 3 + s; };  // arrow (t, s): s -> t
  g.src.resize(n * n);
  g.tgt.resize(n * n);
  g.haar.resize(n * n);
  g.inv.resize(n * n);
  g.unitArrow.resize(n);
  for (int t = 0; t < n; ++t)
    for (int s = 0; s < n; ++s) {
      g.src[id(t, s)] = s;
      g.tgt[id(t, s)] = t;
      g.haar[id(t, s)] = w[s];
      g.inv[id(t, s)] = id(s, t);
    }
  for (int u = 0; u < n; ++u) g.unitArrow[u] = id(u, u);
  for (int t = 0; t < n; ++t)
    for (int m = 0; m < n; ++m)
      for (int s = 0; s < n; ++s) g.comp[{id(t, m), id(m, s)}] = id(t, s);
  g.finalize();
  g.validate();
  return g;
}

TransformationGroupoid fixtureTrivialT2() {
  TransformationGroupoid m;
  m.n = 2;
  m.e = 0;
  m.mult = {{0}};
  m.inv = {0};
  m.act = {AffineTorusMap::identity(2)};
  m.validate();
  return m;
}

TransformationGroupoid fixtureZ2FlipT2() {
  TransformationGroupoid m;
  m.n = 2;
  m.e = 0;
  m.mult = {{0, 1}, {1, 0}};
  m.inv = {0, 1};
  AffineTorusMap flip = AffineTorusMap::identity(2);
  flip.A = {{-1, 0}, {0, -1}};
  m.act = {AffineTorusMap::identity(2), flip};
  m.validate();
  return m;
}

TransformationGroupoid fixtureZ4RotT2() {
  TransformationGroupoid m;
  m.n = 2;
  m.e = 0;
  m.mult = cyclicTable(4);
  m.inv = {0, 3, 2, 1};
  AffineTorusMap rot = AffineTorusMap::identity(2);
  rot.A = {{0, -1}, {1, 0}};  // symplectic integer rotation
  AffineTorusMap cur = AffineTorusMap::identity(2);
  m.act.clear();
  for (int g = 0; g < 4; ++g) {
    m.act.push_back(cur);
    cur = composeMaps(rot, cur);
  }
  m.validate();
  return m;
}

TorusPairGroupoid fixturePairT2() { return TorusPairGroupoid{2}; }

RieffelAlgebra fixtureRieffelT2Strict() {
  RieffelAlgebra a;
  a.n = 2;
  a.J = {{ratOf(0), ratOf(1)}, {ratOf(-1), ratOf(0)}};
  a.strict = true;
  a.hbar = ratOf(1, 3);
  a.validate();
  return a;
}

RieffelAlgebra fixtureRieffelT2Formal(int K) {
  RieffelAlgebra a = fixtureRieffelT2Strict();
  a.strict = false;
  a.hbar = 0;
  a.K = K;
  return a;
}

CrossedDiracAlgebra fixtureCrossedDiracK1() {
  CrossedDiracAlgebra a;
  a.base.n = 1;
  a.base.J = {{ratOf(0)}};
  a.base.strict = true;
  a.base.hbar = ratOf(1, 3);
  a.k = 1;
  a.quarterTrans = {{1}};  // rotation by a quarter period
  a.validate();
  return a;
}

CrossedDiracAlgebra fixtureCrossedDiracK1J(int K) {
  CrossedDiracAlgebra a;
  a.base = fixtureRieffelT2Formal(K);
  a.k = 1;
  a.quarterTrans = {{1, 0}};
  a.validate();
  return a;
}

// ---------------------------------------------------------------------------
// JSON registry

std::string fixtureJson(const std::string& name) {
  Json j;
  if (name == "flat-T2") {
    j = toJson(makeFlatSymplectic<TrigFn>(2));
  } else if (name == "flat-T4") {
    j = toJson(makeFlatSymplectic<TrigFn>(4));
  } else if (name == "flat-R2") {
    j = toJson(makeFlatSymplectic<PolyFn>(2));
  } else if (name == "flat-R4") {
    j = toJson(makeFlatSymplectic<PolyFn>(4));
  } else if (name == "curved-R2") {
    j = toJson(makeCurvedR2());
  } else if (name == "trivial-T2") {
    j = toJson(fixtureTrivialT2());
  } else if (name == "z2-flip-T2") {
    j = toJson(fixtureZ2FlipT2());
  } else if (name == "z4-rot-T2") {
    j = toJson(fixtureZ4RotT2());
  } else if (name == "pair-T2") {
    j = toJson(fixturePairT2());
  } else if (name == "z2-group") {
    j = toJson(fixtureZ2Group());
  } else if (name == "z4-group") {
    j = toJson(fixtureZ4Group());
  } else if (name == "pair3-weighted") {
    j = toJson(fixturePair3Weighted());
  } else if (name == "pi-T2") {
    j = toJson(makePoissonTensor(2, piFromOmega(invertRational(standardOmega(2)))));
  } else if (name == "rieffel-T2") {
    auto a = fixtureRieffelT2Strict();
    j = Json{{"n", a.n},
             {"J", Json::array({Json::array({"0", "1"}), Json::array({"-1", "0"})})},
             {"hbar", "1/3"}};
  } else {
    throw SchemaError("unknown fixture: " + name);
  }
  return j.dump(2);
}

std::vector<std::string> fixtureNames() {
  return {"flat-T2",    "flat-T4",    "flat-R2",   "flat-R4", "curved-R2",
          "trivial-T2", "z2-flip-T2", "z4-rot-T2", "pair-T2", "z2-group",
          "z4-group",   "pair3-weighted", "pi-T2", "rieffel-T2"};
}

}  // namespace starfield
