#pragma once

// The noncommutative Poisson bilinear map Pi on groupoid functions, the
// Hochschild cochain calculus over the convolution product, the second-order
// correction P2hat, and the machine verification that Pi is a 2-cocycle with
// delta P2hat = eps [Pi, Pi] for a single global sign eps.

#include <functional>
#include <string>

#include "starfield/groupoid.hpp"

namespace starfield {

struct PoissonTensor {
  int n = 0;
  std::vector<std::vector<Rational>> pi;  // constant antisymmetric bivector
};

inline PoissonTensor makePoissonTensor(int n, std::vector<std::vector<Rational>> entries) {
  PoissonTensor p{n, std::move(entries)};
  if ((int)p.pi.size() != n) throw SchemaError("pi: wrong size");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (p.pi[i][j] != -p.pi[j][i]) throw SchemaError("pi must be antisymmetric");
  return p;
}

// Invariance gate: A_g^T pi A_g = pi for every group element.
inline void checkInvariance(const PoissonTensor& p, const TransformationGroupoid& M) {
  for (const auto& phi : M.act)
    for (int a = 0; a < p.n; ++a)
      for (int b = 0; b < p.n; ++b) {
        Rational acc = 0;
        for (int i = 0; i < p.n; ++i)
          for (int j = 0; j < p.n; ++j)
            acc += ratOf(phi.A[i][a]) * p.pi[i][j] * ratOf(phi.A[j][b]);
        if (acc != p.pi[a][b]) throw MathError("pi is not invariant under the action");
      }
}

namespace detail {

template <class Kernel>
TrigSeries seriesBilinear(const TrigSeries& f, const TrigSeries& g, Kernel&& ker) {
  TrigSeries out(std::min(f.K, g.K));
  for (int i = 0; i <= out.K; ++i)
    for (int j = 0; i + j <= out.K; ++j) {
      if (isZero(f.c[i]) || isZero(g.c[j])) continue;
      out.c[i + j] += ker(f.c[i], g.c[j]);
    }
  return out;
}

inline TrigFn bracketKernel(const PoissonTensor& p, const TrigFn& A, const TrigFn& B) {
  TrigFn out(A.n ? A.n : B.n);
  for (int j = 0; j < p.n; ++j)
    for (int k = 0; k < p.n; ++k) {
      if (sgn(p.pi[j][k]) == 0) continue;
      out += scaleCoeff(derive(A, j) * derive(B, k), GaussRational(p.pi[j][k]));
    }
  return out;
}

inline TrigFn hessKernel(const PoissonTensor& p, const TrigFn& A, const TrigFn& B) {
  TrigFn out(A.n ? A.n : B.n);
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j) {
      if (sgn(p.pi[i][j]) == 0) continue;
      for (int k = 0; k < p.n; ++k)
        for (int l = 0; l < p.n; ++l) {
          if (sgn(p.pi[k][l]) == 0) continue;
          TrigFn dA = derive(derive(A, i), k);
          if (isZero(dA)) continue;
          TrigFn dB = derive(derive(B, j), l);
          if (isZero(dB)) continue;
          out += scaleCoeff(dA * dB, GaussRational(p.pi[i][j] * p.pi[k][l]));
        }
    }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pi on the three models.

// Transformation model: Pi(f,g)(x, gh) = sum pi^{jk} d_j(f_h o phi_g) d_k(g_g).
inline TransFn ncPoisson(const TransformationGroupoid& M, const PoissonTensor& p,
                         const TransFn& f, const TransFn& g) {
  TransFn out;
  for (const auto& [h, fh] : f.v)
    for (const auto& [g_, gg] : g.v) {
      TrigSeries ft = substAffine(fh, M.act[g_]);
      out.add(M.mult[g_][h], detail::seriesBilinear(ft, gg, [&](const TrigFn& A, const TrigFn& B) {
                return detail::bracketKernel(p, A, B);
              }));
    }
  return out;
}

// Pair groupoid: diagonal-direction differentials contracted through pi and
// the fiber average (Fourier contraction).
inline PairFn ncPoisson(const TorusPairGroupoid& M, const PoissonTensor& p, const PairFn& f,
                        const PairFn& g) {
  int K = std::min(f.v.K, g.v.K);
  PairFn out{TrigSeries(K)};
  for (int i = 0; i <= K; ++i)
    for (int j = 0; i + j <= K; ++j)
      for (const auto& [ma, ca] : f.v.c[i].t)
        for (const auto& [mb, cb] : g.v.c[j].t) {
          bool match = true;
          for (int t = 0; t < M.k; ++t)
            if (ma[M.k + t] + mb[t] != 0) {
              match = false;
              break;
            }
          if (!match) continue;
          Rational bil = 0;
          for (int a = 0; a < M.k; ++a)
            for (int b = 0; b < M.k; ++b)
              bil += p.pi[a][b] * ratOf(ma[a] + ma[M.k + a]) * ratOf(mb[b] + mb[M.k + b]);
          if (sgn(bil) == 0) continue;
          std::vector<int> mo(2 * M.k);
          for (int t = 0; t < M.k; ++t) {
            mo[t] = ma[t];
            mo[M.k + t] = mb[M.k + t];
          }
          // (i a)(i b) = -ab for the two first-order mode factors
          detail::mapAdd(out.v.c[i + j].t, mo, ca * cb * GaussRational(-bil));
        }
  return out;
}

inline FiniteFn ncPoisson(const FiniteGroupoid&, const PoissonTensor&, const FiniteFn&,
                          const FiniteFn&) {
  return {};  // zero-dimensional leaves
}

// ---------------------------------------------------------------------------
// P2hat, the flat-connection second-order lift.

inline TransFn p2Hat(const TransformationGroupoid& M, const PoissonTensor& p, const TransFn& f,
                     const TransFn& g) {
  TransFn out;
  for (const auto& [h, fh] : f.v)
    for (const auto& [g_, gg] : g.v) {
      TrigSeries ft = substAffine(fh, M.act[g_]);
      out.add(M.mult[g_][h], detail::seriesBilinear(ft, gg, [&](const TrigFn& A, const TrigFn& B) {
                return detail::hessKernel(p, A, B);
              }));
    }
  return out;
}

inline PairFn p2Hat(const TorusPairGroupoid& M, const PoissonTensor& p, const PairFn& f,
                    const PairFn& g) {
  int K = std::min(f.v.K, g.v.K);
  PairFn out{TrigSeries(K)};
  for (int i = 0; i <= K; ++i)
    for (int j = 0; i + j <= K; ++j)
      for (const auto& [ma, ca] : f.v.c[i].t)
        for (const auto& [mb, cb] : g.v.c[j].t) {
          bool match = true;
          for (int t = 0; t < M.k; ++t)
            if (ma[M.k + t] + mb[t] != 0) {
              match = false;
              break;
            }
          if (!match) continue;
          Rational bil = 0;
          for (int a = 0; a < M.k; ++a)
            for (int b = 0; b < M.k; ++b) {
              if (sgn(p.pi[a][b]) == 0) continue;
              for (int c = 0; c < M.k; ++c)
                for (int d = 0; d < M.k; ++d) {
                  if (sgn(p.pi[c][d]) == 0) continue;
                  // (-MF_a MF_c)(-MG_b MG_d) from the two mode Hessians
                  bil += p.pi[a][b] * p.pi[c][d] * ratOf(ma[a] + ma[M.k + a]) *
                         ratOf(ma[c] + ma[M.k + c]) * ratOf(mb[b] + mb[M.k + b]) *
                         ratOf(mb[d] + mb[M.k + d]);
                }
            }
          if (sgn(bil) == 0) continue;
          std::vector<int> mo(2 * M.k);
          for (int t = 0; t < M.k; ++t) {
            mo[t] = ma[t];
            mo[M.k + t] = mb[M.k + t];
          }
          detail::mapAdd(out.v.c[i + j].t, mo, ca * cb * GaussRational(bil));
        }
  return out;
}

inline FiniteFn p2Hat(const FiniteGroupoid&, const PoissonTensor&, const FiniteFn&,
                      const FiniteFn&) {
  return {};
}

// ---------------------------------------------------------------------------
// Cochain calculus. A k-cochain is a k-linear map on the function space; the
// coboundary uses the convolution of the ambient model.

template <class Fn>
struct Cochain {
  int arity = 0;
  std::function<Fn(const std::vector<Fn>&)> eval;
};

template <class Fn, class Mul>
Cochain<Fn> hochschildCoboundary(const Cochain<Fn>& C, Mul mul) {
  if (C.arity < 1 || C.arity > 2) throw MathError("coboundary implemented for arity 1 and 2 only");
  int k = C.arity;
  auto ev = C.eval;
  return {k + 1, [ev, mul, k](const std::vector<Fn>& fs) -> Fn {
            Fn acc = mul(fs[0], ev(std::vector<Fn>(fs.begin() + 1, fs.end())));
            int sign = -1;
            for (int i = 0; i < k; ++i) {
              std::vector<Fn> args;
              for (int t = 0; t < i; ++t) args.push_back(fs[t]);
              args.push_back(mul(fs[i], fs[i + 1]));
              for (int t = i + 2; t <= k; ++t) args.push_back(fs[t]);
              Fn term = ev(args);
              acc = (sign > 0) ? acc + term : acc - term;
              sign = -sign;
            }
            Fn last = mul(ev(std::vector<Fn>(fs.begin(), fs.end() - 1)), fs.back());
            return (sign > 0) ? acc + last : acc - last;
          }};
}

// [P,P](f,g,h) = 2 (P(P(f,g),h) - P(f,P(g,h))), the circle-product square of
// a 2-cochain.
template <class Fn>
Cochain<Fn> gerstenhaberSquare(const Cochain<Fn>& P) {
  if (P.arity != 2) throw MathError("gerstenhaber square expects a 2-cochain");
  auto ev = P.eval;
  return {3, [ev](const std::vector<Fn>& fs) -> Fn {
            Fn left = ev({ev({fs[0], fs[1]}), fs[2]});
            Fn right = ev({fs[0], ev({fs[1], fs[2]})});
            Fn diff = left - right;
            return diff + diff;
          }};
}

}  // namespace starfield
