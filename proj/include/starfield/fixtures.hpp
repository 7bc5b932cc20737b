#pragma once

// Named fixtures shipped with the tool. The registry exposes both typed
// builders (used by tests and the verification suites) and JSON documents
// (used by the CLI --model/--symplectic loaders).

#include <string>
#include <vector>

#include "starfield/gpdstar.hpp"
#include "starfield/rieffel.hpp"

namespace starfield {

// Block-diagonal standard omega: omega_{2m,2m+1} = 1.
inline std::vector<std::vector<Rational>> standardOmega(int dim) {
  std::vector<std::vector<Rational>> w(dim, std::vector<Rational>(dim, 0));
  for (int m = 0; m + 1 < dim; m += 2) {
    w[m][m + 1] = 1;
    w[m + 1][m] = -1;
  }
  return w;
}

template <class B>
SymplecticData<B> makeFlatSymplectic(int dim) {
  SymplecticData<B> s;
  s.dim = dim;
  s.omega = standardOmega(dim);
  s.omegaInv = invertRational(s.omega);
  return s;
}

// Curved test connection on R^2: Gamma_{111} = x_2, all else 0. Linear in x,
// totally symmetric, R != 0, and every hbar division in the recursion is
// exact.
inline SymplecticData<PolyFn> makeCurvedR2() {
  SymplecticData<PolyFn> s = makeFlatSymplectic<PolyFn>(2);
  s.gamma[{0, 0, 0}] = PolyFn::coordinate(2, 1);
  return s;
}

// The recorded Poisson convention: pi = -(1/2) omega^{-1}, the constant
// tensor whose bracket matches the hbar^1 term of every star product here.
inline std::vector<std::vector<Rational>> piFromOmega(
    const std::vector<std::vector<Rational>>& omegaInv) {
  auto pi = omegaInv;
  for (auto& row : pi)
    for (auto& x : row) x *= ratOf(-1, 2);
  return pi;
}

// --- groupoid fixtures ---

FiniteGroupoid fixtureZ2Group();
FiniteGroupoid fixtureZ4Group();
FiniteGroupoid fixturePair3Weighted();

TransformationGroupoid fixtureTrivialT2();
TransformationGroupoid fixtureZ2FlipT2();
TransformationGroupoid fixtureZ4RotT2();  // integer rotation, nontrivial Jacobian
TorusPairGroupoid fixturePairT2();

RieffelAlgebra fixtureRieffelT2Strict();   // J12 = 1, hbar = 1/3
RieffelAlgebra fixtureRieffelT2Formal(int K);
CrossedDiracAlgebra fixtureCrossedDiracK1();     // base T^1, quarter rotation
CrossedDiracAlgebra fixtureCrossedDiracK1J(int K);  // base T^2 with J12 = 1

// JSON documents for the same fixtures, addressable from the CLI.
std::string fixtureJson(const std::string& name);
std::vector<std::string> fixtureNames();

}  // namespace starfield
