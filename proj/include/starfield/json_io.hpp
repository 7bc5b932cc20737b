#pragma once

// JSON (de)serialization for every public object. Rationals travel as
// strings so no consumer can lose precision; key order comes from
// nlohmann's sorted maps, which keeps emitted bytes deterministic.

#include <json.hpp>

#include <string>
#include <variant>

#include "starfield/fedosov.hpp"
#include "starfield/gpdstar.hpp"
#include "starfield/rieffel.hpp"

namespace starfield {

using Json = nlohmann::json;

// scalars
Json toJson(const Rational& q);
Json toJson(const GaussRational& c);
Json toJson(const PhaseScalar& p);
Json toJson(const HbarSeries<GaussRational>& s);
Rational ratFromJson(const Json& j);
GaussRational gaussFromJson(const Json& j);
PhaseScalar phaseFromJson(const Json& j);
HbarSeries<GaussRational> seriesFromJson(const Json& j);

// function spaces
Json toJson(const TrigFn& f);
Json toJson(const PolyFn& f);
Json toJson(const TrigSeries& f);
Json toJson(const PolySeries& f);
TrigFn trigFromJson(const Json& j);
PolyFn polyFromJson(const Json& j);
TrigSeries trigSeriesFromJson(const Json& j);
PolySeries polySeriesFromJson(const Json& j);

// weyl / fedosov
Json toJson(const WeylSection<TrigFn>& w);
Json toJson(const WeylSection<PolyFn>& w);
Json toJson(const SymplecticData<TrigFn>& s);
Json toJson(const SymplecticData<PolyFn>& s);
template <class B>
Json connectionToJson(const AbelianConnection<B>& c);
WeylSection<TrigFn> weylTrigFromJson(const Json& j, int dim, int trunc);
WeylSection<PolyFn> weylPolyFromJson(const Json& j, int dim, int trunc);
// Symplectic data is tagged with its base function space.
std::variant<SymplecticData<TrigFn>, SymplecticData<PolyFn>> symplecticFromJson(const Json& j);
std::variant<AbelianConnection<TrigFn>, AbelianConnection<PolyFn>> connectionFromJson(
    const Json& j);

// groupoid models and functions
Json toJson(const FiniteGroupoid& g);
Json toJson(const TransformationGroupoid& g);
Json toJson(const TorusPairGroupoid& g);
using GroupoidModel = std::variant<FiniteGroupoid, TransformationGroupoid, TorusPairGroupoid>;
GroupoidModel modelFromJson(const Json& j);
Json toJson(const FiniteFn& f);
Json toJson(const TransFn& f);
Json toJson(const PairFn& f);
FiniteFn finiteFnFromJson(const Json& j);
TransFn transFnFromJson(const Json& j);
PairFn pairFnFromJson(const Json& j);

// poisson / rieffel
Json toJson(const PoissonTensor& p);
PoissonTensor poissonFromJson(const Json& j);
Json toJson(const StrictElement& e);
Json toJson(const FormalElement& e);
StrictElement strictElementFromJson(const Json& j);
FormalElement formalElementFromJson(const Json& j);

Json parseJsonFile(const std::string& path);
Json parseJsonText(const std::string& text);
void writeTextFile(const std::string& path, const std::string& text);

template <class B>
Json connectionToJson(const AbelianConnection<B>& c) {
  Json j;
  j["symplectic"] = toJson(c.sym);
  j["order"] = c.order;
  j["r"] = toJson(c.r);
  return j;
}

}  // namespace starfield
