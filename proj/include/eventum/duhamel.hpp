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


#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "eventum/chain.hpp"

namespace eventum {

// Exponent at chain position `pos`, a D x D matrix on the fiber of the whole
// chain (D = d f^|chain|). Dependence on the other points is allowed.
using ChainExponent = std::function<cmat(int pos, const Chain& chain)>;
using ChainValue = std::function<cmat(const Chain& chain)>;

struct DuhamelProblem {
  Grid grid;
  int fiber = 1;
  int system_dim = 1;
  ChainExponent k;   // homogeneous exponent of Y
  ChainExponent l;   // perturbation
  ChainValue t0;     // initial value; identity when empty
};

cmat direct_solve(const DuhamelProblem& p, double t, const Chain& chain);
// Single sum: Y acts strictly after the jump point, T strictly before it.
cmat duhamel_solve(const DuhamelProblem& p, double t, const Chain& chain);
cmat multiple_sum_kernel(const DuhamelProblem& p, double t, const Chain& chain,
                         int max_points = 12);

// Random chain-dependent instance on the Minkowski fiber n+2: the exponent at
// a point is a local matrix seeded by the point and the rest of the chain.
DuhamelProblem random_duhamel_problem(const Grid& grid, int noise_dim, int system_dim,
                                      std::uint64_t seed, double scale = 0.4);

// Per-point exponent lifted to a chain exponent through its own fiber slot.
ChainExponent pointwise_exponent(const std::vector<BlockOperator>& per_point, int system_dim);

// Projected solution on the truncated noise space: Y exponent K, perturbation
// L (so J = F L F*), both per point. T0 defaults to the identity.
cmat projected_duhamel(const std::vector<BlockOperator>& k, const std::vector<BlockOperator>& l,
                       const NoiseBasis& basis, double t, const cmat& t0 = cmat());

}  // namespace eventum
