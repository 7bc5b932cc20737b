#include "starfield/json_io.hpp"

#include <fstream>
#include <sstream>

namespace starfield {

namespace {

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

int needInt(const Json& j, const char* key) {
  const Json& v = need(j, key);
  if (!v.is_number_integer()) throw SchemaError(std::string("field '") + key + "' must be integer");
  return v.get<int>();
}

std::vector<int> intVector(const Json& j) {
  if (!j.is_array()) throw SchemaError("expected an integer array");
  std::vector<int> r;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw SchemaError("expected an integer array");
    r.push_back(x.get<int>());
  }
  return r;
}

std::vector<std::vector<Rational>> ratMatrix(const Json& j) {
  if (!j.is_array()) throw SchemaError("expected a matrix of rationals");
  std::vector<std::vector<Rational>> m;
  for (const auto& row : j) {
    if (!row.is_array()) throw SchemaError("expected a matrix of rationals");
    std::vector<Rational> r;
    for (const auto& x : row) r.push_back(ratFromJson(x));
    m.push_back(r);
  }
  return m;
}

Json ratMatrixJson(const std::vector<std::vector<Rational>>& m) {
  Json j = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(toJson(x));
    j.push_back(r);
  }
  return j;
}

}  // namespace

Json parseJsonText(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw SchemaError("malformed JSON");
  return j;
}

Json parseJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parseJsonText(ss.str());
}

void writeTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write: " + path);
  out << text;
}

// ---------------------------------------------------------------------------
// scalars

Json toJson(const Rational& q) { return ratStr(q); }
Rational ratFromJson(const Json& j) {
  if (!j.is_string()) throw SchemaError("rationals must be strings");
  return ratParse(j.get<std::string>());
}

Json toJson(const GaussRational& c) { return Json{{"re", ratStr(c.re)}, {"im", ratStr(c.im)}}; }
GaussRational gaussFromJson(const Json& j) {
  return {ratFromJson(need(j, "re")), ratFromJson(need(j, "im"))};
}

Json toJson(const PhaseScalar& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms)
    terms.push_back(Json{{"exponent", ratStr(e)}, {"coeff", toJson(c)}});
  return Json{{"kind", "phase"}, {"terms", terms}};
}
PhaseScalar phaseFromJson(const Json& j) {
  PhaseScalar p;
  for (const auto& t : need(j, "terms"))
    p.addTerm(ratFromJson(need(t, "exponent")), gaussFromJson(need(t, "coeff")));
  return p;
}

Json toJson(const HbarSeries<GaussRational>& s) {
  Json coeffs = Json::array();
  for (const auto& c : s.c) coeffs.push_back(toJson(c));
  return Json{{"kind", "series"}, {"order", s.K}, {"coeffs", coeffs}};
}
HbarSeries<GaussRational> seriesFromJson(const Json& j) {
  int K = needInt(j, "order");
  if (K < 0) throw SchemaError("series order must be >= 0");
  HbarSeries<GaussRational> s(K);
  const Json& coeffs = need(j, "coeffs");
  if ((int)coeffs.size() != K + 1) throw SchemaError("series coeff count mismatch");
  for (int k = 0; k <= K; ++k) s.c[k] = gaussFromJson(coeffs.at(k));
  return s;
}

// ---------------------------------------------------------------------------
// function spaces

Json toJson(const TrigFn& f) {
  Json terms = Json::array();
  for (const auto& [k, c] : f.t) terms.push_back(Json{{"mode", k}, {"coeff", toJson(c)}});
  return Json{{"kind", "trig"}, {"n", f.n}, {"terms", terms}};
}
TrigFn trigFromJson(const Json& j) {
  TrigFn f(needInt(j, "n"));
  for (const auto& t : need(j, "terms")) {
    auto mode = intVector(need(t, "mode"));
    if ((int)mode.size() != f.n) throw SchemaError("mode length mismatch");
    detail::mapAdd(f.t, mode, gaussFromJson(need(t, "coeff")));
  }
  return f;
}

Json toJson(const PolyFn& f) {
  Json terms = Json::array();
  for (const auto& [e, c] : f.t) terms.push_back(Json{{"exponent", e}, {"coeff", toJson(c)}});
  return Json{{"kind", "poly"}, {"n", f.n}, {"terms", terms}};
}
PolyFn polyFromJson(const Json& j) {
  PolyFn f(needInt(j, "n"));
  for (const auto& t : need(j, "terms")) {
    auto e = intVector(need(t, "exponent"));
    if ((int)e.size() != f.n) throw SchemaError("exponent length mismatch");
    for (int x : e)
      if (x < 0) throw SchemaError("poly exponents must be nonnegative");
    detail::mapAdd(f.t, e, gaussFromJson(need(t, "coeff")));
  }
  return f;
}

namespace {
template <class B, class FnFromJson>
HbarSeries<B> fnSeriesFromJson(const Json& j, const char* kind, FnFromJson&& fromJson) {
  if (need(j, "base").get<std::string>() != kind) throw SchemaError("wrong base function space");
  int K = needInt(j, "order");
  if (K < 0) throw SchemaError("series order must be >= 0");
  HbarSeries<B> s(K);
  const Json& coeffs = need(j, "coeffs");
  if ((int)coeffs.size() != K + 1) throw SchemaError("series coeff count mismatch");
  for (int k = 0; k <= K; ++k) s.c[k] = fromJson(coeffs.at(k));
  return s;
}
template <class B>
Json fnSeriesToJson(const HbarSeries<B>& s, const char* kind) {
  Json coeffs = Json::array();
  for (const auto& c : s.c) coeffs.push_back(toJson(c));
  return Json{{"base", kind}, {"order", s.K}, {"coeffs", coeffs}};
}
}  // namespace

Json toJson(const TrigSeries& f) { return fnSeriesToJson(f, "trig"); }
Json toJson(const PolySeries& f) { return fnSeriesToJson(f, "poly"); }
TrigSeries trigSeriesFromJson(const Json& j) {
  return fnSeriesFromJson<TrigFn>(j, "trig", trigFromJson);
}
PolySeries polySeriesFromJson(const Json& j) {
  return fnSeriesFromJson<PolyFn>(j, "poly", polyFromJson);
}

// ---------------------------------------------------------------------------
// weyl / symplectic

namespace {
template <class B>
Json weylToJson(const WeylSection<B>& w) {
  Json terms = Json::array();
  for (const auto& [k, v] : w.m) {
    std::vector<int> dx;
    for (int i = 0; i < w.dim; ++i)
      if (k.form & (1u << i)) dx.push_back(i + 1);  // 1-based in files
    terms.push_back(Json{{"hbar", k.hbar}, {"y", k.y}, {"dx", dx}, {"coeff", toJson(v)}});
  }
  return terms;
}
template <class B, class FnFromJson>
WeylSection<B> weylFromJson(const Json& j, int dim, int trunc, FnFromJson&& fromJson) {
  WeylSection<B> w(dim, trunc);
  if (!j.is_array()) throw SchemaError("weyl section must be an array of monomials");
  for (const auto& t : j) {
    WeylKey k;
    k.hbar = needInt(t, "hbar");
    k.y = intVector(need(t, "y"));
    if ((int)k.y.size() != dim) throw SchemaError("y exponent length mismatch");
    for (int idx : intVector(need(t, "dx"))) {
      if (idx < 1 || idx > dim) throw SchemaError("dx index out of range");
      k.form |= 1u << (idx - 1);
    }
    w.addTerm(k, fromJson(need(t, "coeff")));
  }
  return w;
}
template <class B, class FnFromJson>
SymplecticData<B> symFromJsonT(const Json& j, FnFromJson&& fromJson) {
  SymplecticData<B> s;
  s.dim = needInt(j, "dim");
  s.omega = ratMatrix(need(j, "omega"));
  if ((int)s.omega.size() != s.dim) throw SchemaError("omega size mismatch");
  for (const auto& row : s.omega)
    if ((int)row.size() != s.dim) throw SchemaError("omega size mismatch");
  s.omegaInv = invertRational(s.omega);
  if (j.contains("christoffel")) {
    for (const auto& t : j.at("christoffel")) {
      int a[3] = {needInt(t, "i") - 1, needInt(t, "j") - 1, needInt(t, "k") - 1};
      std::sort(a, a + 3);
      if (a[0] < 0 || a[2] >= s.dim) throw SchemaError("christoffel index out of range");
      s.gamma[{a[0], a[1], a[2]}] = fromJson(need(t, "coeff"));
    }
  }
  validateSymplectic(s);
  return s;
}
template <class B>
Json symToJsonT(const SymplecticData<B>& s, const char* base) {
  Json j;
  j["dim"] = s.dim;
  j["base"] = base;
  j["omega"] = ratMatrixJson(s.omega);
  if (!s.flat()) {
    Json ch = Json::array();
    for (const auto& [idx, coeff] : s.gamma)
      ch.push_back(Json{{"i", std::get<0>(idx) + 1},
                        {"j", std::get<1>(idx) + 1},
                        {"k", std::get<2>(idx) + 1},
                        {"coeff", toJson(coeff)}});
    j["christoffel"] = ch;
  }
  return j;
}
}  // namespace

Json toJson(const WeylSection<TrigFn>& w) { return weylToJson(w); }
Json toJson(const WeylSection<PolyFn>& w) { return weylToJson(w); }
WeylSection<TrigFn> weylTrigFromJson(const Json& j, int dim, int trunc) {
  return weylFromJson<TrigFn>(j, dim, trunc, trigFromJson);
}
WeylSection<PolyFn> weylPolyFromJson(const Json& j, int dim, int trunc) {
  return weylFromJson<PolyFn>(j, dim, trunc, polyFromJson);
}
Json toJson(const SymplecticData<TrigFn>& s) { return symToJsonT(s, "trig"); }
Json toJson(const SymplecticData<PolyFn>& s) { return symToJsonT(s, "poly"); }

std::variant<SymplecticData<TrigFn>, SymplecticData<PolyFn>> symplecticFromJson(const Json& j) {
  std::string base = need(j, "base").get<std::string>();
  if (base == "trig") return symFromJsonT<TrigFn>(j, trigFromJson);
  if (base == "poly") return symFromJsonT<PolyFn>(j, polyFromJson);
  throw SchemaError("base must be 'trig' or 'poly'");
}

std::variant<AbelianConnection<TrigFn>, AbelianConnection<PolyFn>> connectionFromJson(
    const Json& j) {
  auto sym = symplecticFromJson(need(j, "symplectic"));
  int N = needInt(j, "order");
  if (N < 2) throw SchemaError("order must be >= 2");
  if (std::holds_alternative<SymplecticData<TrigFn>>(sym)) {
    auto s = std::get<SymplecticData<TrigFn>>(sym);
    AbelianConnection<TrigFn> c;
    c.sym = s;
    c.order = N;
    c.gamma = gammaForm(s, N + 2);
    c.curv = curvatureForm(s, N + 2);
    c.r = weylTrigFromJson(need(j, "r"), s.dim, N + 2);
    return c;
  }
  auto s = std::get<SymplecticData<PolyFn>>(sym);
  AbelianConnection<PolyFn> c;
  c.sym = s;
  c.order = N;
  c.gamma = gammaForm(s, N + 2);
  c.curv = curvatureForm(s, N + 2);
  c.r = weylPolyFromJson(need(j, "r"), s.dim, N + 2);
  return c;
}

// ---------------------------------------------------------------------------
// groupoid models

Json toJson(const FiniteGroupoid& g) {
  Json arrows = Json::array();
  for (int a = 0; a < g.numArrows(); ++a)
    arrows.push_back(Json{{"id", a}, {"s", g.src[a]}, {"t", g.tgt[a]}});
  Json comp = Json::array();
  for (const auto& [bg, a] : g.comp) comp.push_back(Json::array({bg.first, bg.second, a}));
  Json haar = Json::array();
  for (int a = 0; a < g.numArrows(); ++a)
    haar.push_back(Json{{"arrow", a}, {"weight", ratStr(g.haar[a])}});
  return Json{{"kind", "finite"},
              {"objects", g.numObjects},
              {"arrows", arrows},
              {"compose", comp},
              {"haar", haar}};
}

namespace {
FiniteGroupoid finiteFromJson(const Json& j) {
  FiniteGroupoid g;
  g.numObjects = needInt(j, "objects");
  const Json& arrows = need(j, "arrows");
  g.src.resize(arrows.size());
  g.tgt.resize(arrows.size());
  for (const auto& a : arrows) {
    int id = needInt(a, "id");
    if (id < 0 || id >= (int)arrows.size()) throw SchemaError("arrow id out of range");
    g.src[id] = needInt(a, "s");
    g.tgt[id] = needInt(a, "t");
    if (g.src[id] < 0 || g.src[id] >= g.numObjects || g.tgt[id] < 0 || g.tgt[id] >= g.numObjects)
      throw SchemaError("arrow endpoint out of range");
  }
  for (const auto& c : need(j, "compose")) {
    auto v = intVector(c);
    if (v.size() != 3) throw SchemaError("compose entries are triples");
    for (int x : v)
      if (x < 0 || x >= (int)arrows.size()) throw SchemaError("compose arrow out of range");
    g.comp[{v[0], v[1]}] = v[2];
  }
  g.haar.assign(arrows.size(), ratOf(1));
  for (const auto& h : need(j, "haar")) {
    int a = needInt(h, "arrow");
    if (a < 0 || a >= (int)arrows.size()) throw SchemaError("haar arrow out of range");
    g.haar[a] = ratFromJson(need(h, "weight"));
  }
  // derive units and inverses from the composition table
  g.unitArrow.assign(g.numObjects, -1);
  for (int e = 0; e < g.numArrows(); ++e) {
    if (g.src[e] != g.tgt[e]) continue;
    bool unit = true;
    for (int a = 0; a < g.numArrows() && unit; ++a) {
      if (g.tgt[a] == g.src[e]) {
        auto it = g.comp.find({e, a});
        if (it == g.comp.end() || it->second != a) unit = false;
      }
    }
    if (unit) g.unitArrow[g.src[e]] = e;
  }
  for (int u = 0; u < g.numObjects; ++u)
    if (g.unitArrow[u] < 0) throw SchemaError("missing unit arrow for an object");
  g.inv.assign(g.numArrows(), -1);
  for (const auto& [bg, a] : g.comp) {
    if (a != g.unitArrow[g.tgt[bg.first]]) continue;
    auto it = g.comp.find({bg.second, bg.first});
    if (it != g.comp.end() && it->second == g.unitArrow[g.src[bg.second]]) {
      g.inv[bg.first] = bg.second;
      g.inv[bg.second] = bg.first;
    }
  }
  for (int a = 0; a < g.numArrows(); ++a)
    if (g.inv[a] < 0) throw SchemaError("missing inverse for an arrow");
  g.finalize();
  g.validate();
  return g;
}

TransformationGroupoid transformationFromJson(const Json& j) {
  TransformationGroupoid m;
  m.n = needInt(j, "n");
  if (m.n <= 0) throw SchemaError("torus dimension must be positive");
  const Json& table = need(j, "group");
  for (const auto& row : table) m.mult.push_back(intVector(row));
  int ord = (int)m.mult.size();
  if (ord == 0) throw SchemaError("empty group table");
  for (const auto& row : m.mult)
    if ((int)row.size() != ord) throw SchemaError("group table not square");
  m.e = -1;
  for (int g = 0; g < ord; ++g) {
    bool id = true;
    for (int h = 0; h < ord; ++h)
      if (m.mult[g][h] != h || m.mult[h][g] != h) id = false;
    if (id) m.e = g;
  }
  if (m.e < 0) throw SchemaError("group table has no identity");
  m.inv.assign(ord, -1);
  for (int g = 0; g < ord; ++g)
    for (int h = 0; h < ord; ++h)
      if (m.mult[g][h] == m.e && m.mult[h][g] == m.e) m.inv[g] = h;
  for (int g = 0; g < ord; ++g)
    if (m.inv[g] < 0) throw SchemaError("group table has a non-invertible element");
  m.act.assign(ord, AffineTorusMap::identity(m.n));
  for (const auto& a : need(j, "action")) {
    int g = needInt(a, "g");
    if (g < 0 || g >= ord) throw SchemaError("action index out of range");
    AffineTorusMap phi;
    for (const auto& row : need(a, "A")) {
      std::vector<long> r;
      for (const auto& x : row) {
        if (!x.is_number_integer()) throw SchemaError("action matrix must be integral");
        r.push_back(x.get<long>());
      }
      phi.A.push_back(r);
    }
    if ((int)phi.A.size() != m.n) throw SchemaError("action matrix size mismatch");
    for (const auto& row : phi.A)
      if ((int)row.size() != m.n) throw SchemaError("action matrix size mismatch");
    phi.quarter.assign(m.n, 0);
    if (a.contains("quarter")) {
      auto q = intVector(a.at("quarter"));
      if ((int)q.size() != m.n) throw SchemaError("quarter vector size mismatch");
      for (int i = 0; i < m.n; ++i) phi.quarter[i] = q[i];
    }
    m.act[g] = phi;
  }
  m.validate();
  return m;
}
}  // namespace

Json toJson(const TransformationGroupoid& g) {
  Json action = Json::array();
  for (int i = 0; i < g.order(); ++i) {
    Json A = Json::array();
    for (const auto& row : g.act[i].A) A.push_back(row);
    action.push_back(Json{{"g", i}, {"A", A}, {"quarter", g.act[i].quarter}});
  }
  return Json{{"kind", "transformation"}, {"n", g.n}, {"group", g.mult}, {"action", action}};
}

Json toJson(const TorusPairGroupoid& g) { return Json{{"kind", "toruspair"}, {"k", g.k}}; }

GroupoidModel modelFromJson(const Json& j) {
  std::string kind = need(j, "kind").get<std::string>();
  if (kind == "finite") return finiteFromJson(j);
  if (kind == "transformation") return transformationFromJson(j);
  if (kind == "toruspair") {
    TorusPairGroupoid g{needInt(j, "k")};
    if (g.k <= 0) throw SchemaError("toruspair k must be positive");
    return g;
  }
  throw SchemaError("unknown model kind: " + kind);
}

// ---------------------------------------------------------------------------
// groupoid functions

Json toJson(const FiniteFn& f) {
  Json vals = Json::array();
  for (const auto& [a, s] : f.v) vals.push_back(Json{{"arrow", a}, {"coeff", toJson(s)}});
  return Json{{"kind", "finite-fn"}, {"values", vals}};
}
FiniteFn finiteFnFromJson(const Json& j) {
  if (need(j, "kind").get<std::string>() != "finite-fn") throw SchemaError("expected finite-fn");
  FiniteFn f;
  for (const auto& v : need(j, "values"))
    f.add(needInt(v, "arrow"), seriesFromJson(need(v, "coeff")));
  return f;
}

Json toJson(const TransFn& f) {
  Json comps = Json::array();
  for (const auto& [g, s] : f.v) comps.push_back(Json{{"g", g}, {"fn", toJson(s)}});
  return Json{{"kind", "trans-fn"}, {"components", comps}};
}
TransFn transFnFromJson(const Json& j) {
  if (need(j, "kind").get<std::string>() != "trans-fn") throw SchemaError("expected trans-fn");
  TransFn f;
  for (const auto& c : need(j, "components"))
    f.add(needInt(c, "g"), trigSeriesFromJson(need(c, "fn")));
  return f;
}

Json toJson(const PairFn& f) { return Json{{"kind", "pair-fn"}, {"fn", toJson(f.v)}}; }
PairFn pairFnFromJson(const Json& j) {
  if (need(j, "kind").get<std::string>() != "pair-fn") throw SchemaError("expected pair-fn");
  return {trigSeriesFromJson(need(j, "fn"))};
}

// ---------------------------------------------------------------------------
// poisson / rieffel

Json toJson(const PoissonTensor& p) { return Json{{"n", p.n}, {"pi", ratMatrixJson(p.pi)}}; }
PoissonTensor poissonFromJson(const Json& j) {
  return makePoissonTensor(needInt(j, "n"), ratMatrix(need(j, "pi")));
}

namespace {
template <class C, class CoeffToJson>
Json elementToJson(const TorusElement<C>& e, CoeffToJson&& cj) {
  Json terms = Json::array();
  for (const auto& [m, c] : e.v) terms.push_back(Json{{"mode", m}, {"coeff", cj(c)}});
  return Json{{"elements", terms}};
}
}  // namespace

Json toJson(const StrictElement& e) {
  return elementToJson(e, [](const PhaseScalar& p) { return toJson(p); });
}
Json toJson(const FormalElement& e) {
  return elementToJson(e, [](const HbarSeries<GaussRational>& s) { return toJson(s); });
}
StrictElement strictElementFromJson(const Json& j) {
  StrictElement e;
  for (const auto& t : need(j, "elements"))
    e.add(intVector(need(t, "mode")), phaseFromJson(need(t, "coeff")));
  return e;
}
FormalElement formalElementFromJson(const Json& j) {
  FormalElement e;
  for (const auto& t : need(j, "elements"))
    e.add(intVector(need(t, "mode")), seriesFromJson(need(t, "coeff")));
  return e;
}

}  // namespace starfield
