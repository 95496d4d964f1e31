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
#include <random>
#include <vector>

#include "eventum/minkowski.hpp"

namespace eventum {

using Rng = std::mt19937_64;

// Uniform in [0, 1) from the top 53 bits; independent of the library's
// distribution implementations so streams are portable.
double uniform01(Rng& rng);
double standard_normal(Rng& rng);

cmat random_matrix(int rows, int cols, Rng& rng);
cvec random_vector(int dim, Rng& rng);
cvec random_state(int dim, Rng& rng);
cmat random_hermitian(int dim, Rng& rng);
cmat random_unitary(int dim, Rng& rng);
cmat random_density(int dim, Rng& rng);

// E_1..E_n with sum E_i^dag E_i <= shrink * I.
std::vector<cmat> random_contractions(int count, int dim, Rng& rng, double shrink = 0.9);
// Complete family: sum E_i^dag E_i = I.
std::vector<cmat> random_complete_kraus(int count, int dim, Rng& rng);

// Upper-triangular block operator with identity (-,-) and (+,+) corners.
BlockOperator random_adapted_factor(int noise_dim, int system_dim, Rng& rng, double scale = 0.5);

}  // namespace eventum
