// Copyright 2026 The eventum authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Independent reference computations shared by the unit and acceptance tests.
// Nothing here calls into the code it is used to check beyond constructors.

#pragma once

#include <cmath>
#include <vector>

#include "eventum/chain.hpp"
#include "eventum/ito.hpp"
#include "eventum/random.hpp"

namespace oracle {

using eventum::cmat;
using eventum::cplx;
using eventum::cvec;

// dt, dA, dA^dag, dN at n = 1 with system coefficient I_d.
inline std::vector<eventum::ItoElement> hp_basis(int d, int /*n*/ = 1) {
  using eventum::ItoElement;
  return {ItoElement::basis_dt(1, d), ItoElement::basis_annihilation(0, 1, d),
          ItoElement::basis_creation(0, 1, d), ItoElement::basis_counting(0, 0, 1, d)};
}

// The Hudson-Parthasarathy table, written out by hand:
// dA dA^dag = dt, dN dN = dN, dA dN = dA, dN dA^dag = dA^dag, all else 0.
inline eventum::ItoElement hp_product(int a, int b, int d) {
  const auto basis = hp_basis(d);
  enum { kDt, kA, kAdag, kN };
  if (a == kA && b == kAdag) return basis[kDt];
  if (a == kN && b == kN) return basis[kN];
  if (a == kA && b == kN) return basis[kA];
  if (a == kN && b == kAdag) return basis[kAdag];
  return eventum::ItoElement(1, d);
}

// eta X^dag eta with eta written as an explicit dense matrix.
inline cmat naive_pseudo_adjoint(const cmat& x, int n, int d) {
  const int f = n + 2;
  cmat eta = cmat::Zero(f * d, f * d);
  for (int s = 0; s < d; ++s) {
    eta(s, (f - 1) * d + s) = 1.0;
    eta((f - 1) * d + s, s) = 1.0;
    for (int i = 1; i < f - 1; ++i) eta(i * d + s, i * d + s) = 1.0;
  }
  return eta * x.adjoint() * eta;
}

inline eventum::ItoElement random_ito(int n, int d, eventum::Rng& rng) {
  eventum::ItoElement x(n, d);
  for (int l = 0; l <= n; ++l)
    for (int u = 0; u <= n; ++u) x.coef(l, u) = eventum::random_matrix(d, d, rng);
  return x;
}

inline long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

inline eventum::ChainVector random_chain_vector(const eventum::Grid& grid, int nmax, int fiber, int d,
                                                eventum::Rng& rng, bool minkowski = false) {
  eventum::ChainVector v(grid, nmax, fiber, d, minkowski);
  for (const auto& c : eventum::enumerate_chains(0, grid.n_points, nmax))
    v.set(c, eventum::random_vector(static_cast<int>(d * ipow(fiber, static_cast<int>(c.size()))), rng));
  return v;
}

inline eventum::PointFamily random_family(const eventum::Grid& grid, int nmax, int fiber, int d,
                                          eventum::Rng& rng) {
  eventum::PointFamily z;
  z.grid = grid;
  z.nmax = nmax;
  z.fiber = fiber;
  z.system_dim = d;
  for (const auto& c : eventum::enumerate_chains(0, grid.n_points, nmax))
    for (int x = 0; x < grid.n_points; ++x) {
      bool inside = false;
      for (int p : c) inside |= p == x;
      if (inside) continue;
      z.values[{x, c}] =
          eventum::random_vector(static_cast<int>(d * ipow(fiber, static_cast<int>(c.size()) + 1)), rng);
    }
  return z;
}

// Elementary symmetric sums e_0..e_kmax of the values.
inline std::vector<double> elementary_symmetric(const std::vector<double>& values, int kmax) {
  std::vector<double> e(static_cast<size_t>(kmax + 1), 0.0);
  e[0] = 1.0;
  for (double v : values)
    for (int k = kmax; k >= 1; --k) e[static_cast<size_t>(k)] += v * e[static_cast<size_t>(k - 1)];
  return e;
}

// Amplitude damping at unit rate from |1>: rho_11(t) = e^{-t}.
inline double amplitude_damping_excited(double t) { return std::exp(-t); }

}  // namespace oracle
