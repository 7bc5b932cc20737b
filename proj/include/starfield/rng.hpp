#pragma once

// Deterministic sampling. All draws go through mt19937_64 with hand-rolled
// range reduction so that a seed fixes every report byte across platforms
// (std::uniform_int_distribution is implementation-defined).

#include <random>
#include <vector>

#include "starfield/funcspace.hpp"

namespace starfield {

struct Rng {
  std::mt19937_64 g;
  explicit Rng(uint64_t seed) : g(seed) {}

  uint64_t u64() { return g(); }
  // inclusive bounds
  long intIn(long lo, long hi) { return lo + (long)(u64() % (uint64_t)(hi - lo + 1)); }
  Rational rat(long maxNum = 4, long maxDen = 3) {
    return ratOf(intIn(-maxNum, maxNum), intIn(1, maxDen));
  }
  GaussRational gauss(long maxNum = 4, long maxDen = 3) {
    return {rat(maxNum, maxDen), rat(maxNum, maxDen)};
  }
  std::vector<int> modeIn(int n, int window) {
    std::vector<int> k(n);
    for (int i = 0; i < n; ++i) k[i] = (int)intIn(-window, window);
    return k;
  }
  TrigFn trig(int n, int window, int terms) {
    TrigFn f(n);
    for (int t = 0; t < terms; ++t) detail::mapAdd(f.t, modeIn(n, window), gauss());
    return f;
  }
  PolyFn poly(int n, int maxDeg, int terms) {
    PolyFn f(n);
    for (int t = 0; t < terms; ++t) {
      std::vector<int> e(n);
      int budget = (int)intIn(0, maxDeg);
      for (int i = 0; i < n && budget > 0; ++i) {
        e[i] = (int)intIn(0, budget);
        budget -= e[i];
      }
      detail::mapAdd(f.t, e, gauss());
    }
    return f;
  }
  HbarSeries<GaussRational> series(int K) {
    HbarSeries<GaussRational> s(K);
    for (int k = 0; k <= K; ++k) s.c[k] = gauss();
    return s;
  }
};

}  // namespace starfield
