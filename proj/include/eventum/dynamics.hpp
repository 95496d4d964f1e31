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

#include <vector>

#include "eventum/chain.hpp"
#include "eventum/minkowski.hpp"

namespace eventum {

// Generators are BlockOperators with identity corners. For the Lindblad form
// the blocks are G^-_o = -L^* G_oo, G^o_+ = L, G^-_+ = K = -iH - L^*L/2.
BlockOperator schrodinger_generator(const cmat& hamiltonian);
BlockOperator lindblad_generator(const cmat& hamiltonian, const std::vector<cmat>& jumps,
                                 const cmat& scattering = cmat());

// Jump operators stacked as the column (L_1; ...; L_n), nd x d.
cmat jump_column(const BlockOperator& g);

// First block row xi* G, a d x (n+2)d matrix.
cmat isometry_row(const BlockOperator& g);

// Ordered product over chain points in [lo, hi), later points to the left.
cmat chronological_product(const Grid& grid, const std::vector<BlockOperator>& per_point,
                           const Chain& chain, int lo = 0, int hi = -1);
std::vector<BlockOperator> constant_family(const BlockOperator& g, int n_points);

ChainVector propagate_counting(const std::vector<BlockOperator>& per_point, const ChainVector& psi0,
                               double t);

enum class ProjectionPath { kEnumeration, kStepMap };

// Vacuum block of F G^(.) F*, a d x d matrix.
cmat project_unitary(const BlockOperator& g, const Grid& grid, double t, int nmax,
                     ProjectionPath path = ProjectionPath::kStepMap);
cmat project_unitary(const std::vector<BlockOperator>& per_point, const Grid& grid, double t,
                     int nmax, ProjectionPath path = ProjectionPath::kStepMap);

// V* (rho (x) I) V for the row V* = (V_-, V_1..V_n, V_+).
cmat master_derivative(const cmat& rho, const cmat& row);

BlockOperator tilde_involution(const BlockOperator& g);

enum class TraceoutRow {
  kTilde,     // first row of the tilde generator
  kReplaced,  // first row of G with G^-_o swapped for the jump row
};

struct TraceoutResult {
  std::vector<double> times;
  std::vector<cmat> states;
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;  // monitored, never clipped
};

// Step map rho <- rho + h V*rho V on every cell; with nmax < n_points the chain
// expansion is truncated at nmax interaction points.
TraceoutResult traceout_lindblad(const cmat& hamiltonian, const std::vector<cmat>& jumps,
                                 const cvec& psi, const Grid& grid, int nmax = -1,
                                 TraceoutRow row = TraceoutRow::kTilde);
// Piecewise-constant generators, one per cell.
TraceoutResult traceout_lindblad(const std::vector<BlockOperator>& per_point, const cvec& psi,
                                 const Grid& grid, int nmax = -1,
                                 TraceoutRow row = TraceoutRow::kTilde);

// Classical fourth-order integration of the Lindblad equation.
cmat lindblad_reference(const cmat& hamiltonian, const std::vector<cmat>& jumps, const cmat& rho0,
                        double t, int steps);
std::vector<cmat> lindblad_reference_series(const cmat& hamiltonian, const std::vector<cmat>& jumps,
                                            const cmat& rho0, const std::vector<double>& times,
                                            int steps_per_unit);

struct BoostReport {
  double increment_residual = 0.0;  // boosted dt minus nu dt, max abs entry
  cplx expectation;                 // Poisson expectation of G^(.) at intensity 2 nu
  cmat expectation_matrix;
  double expectation_error = 0.0;   // against exp(-i H nu t)
  double expectation_bound = 0.0;   // tail + grid
  double derivative_residual = 0.0;  // V*_nu rho V_nu - nu V* rho V
  double row_residual = 0.0;         // boosted tilde row against (I, sqrt(nu) L, nu K)
  bool ok = false;
};

BoostReport boosted_dynamics_check(const cmat& hamiltonian, const std::vector<cmat>& jumps,
                                   double nu, double t, int grid_points = 4096, int nmax = 12,
                                   const cmat& rho = cmat());

}  // namespace eventum
