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
#include <vector>

#include "eventum/chain.hpp"

namespace eventum {

inline constexpr double kImpossibleOutcome = 1e-12;

struct KrausFamily {
  std::vector<cmat> ops;

  int system_dim() const;
  double completeness_residual() const;  // || sum E^dag E - I ||_F
  void validate(bool require_complete, double tol = 1e-10) const;
};

cmat decoherence_map(const cmat& rho, const KrausFamily& family);

// Unitary on C^(n+1) (x) h (apparatus index most significant, slot 0 is the
// initial apparatus state) built from E_1..E_n.
cmat apparatus_unitary(const KrausFamily& family);
// Partial trace over the apparatus of a ((n+1)d)^2 matrix.
cmat trace_apparatus(const cmat& big, int system_dim);
// G^k_0, the d x d block mapping the initial apparatus state to outcome k.
cmat outcome_block(const cmat& unitary, int system_dim, int k);
// Kraus family {G^0_0, ..., G^n_0}.
KrausFamily outcome_family(const cmat& unitary, int system_dim);

cvec posterior(const cvec& psi, int k, const KrausFamily& family, double eps = kImpossibleOutcome);

bool is_orthoprojector(const cmat& p, double tol = 1e-10);
cmat inf_projector(const cmat& p, const cmat& m, double tol = 1e-10);

struct CausalityReport {
  cmat inf;
  double probability = 0.0;      // Pr[P]
  double weighted_sum = 0.0;     // Pr[P|M]Pr[M] + Pr[P|I-M]Pr[I-M]
  double defect = 0.0;
  double commutator_norm = 0.0;
};
CausalityReport causality_check(const cmat& p, const cmat& m, const cmat& rho, double tol = 1e-10);

struct OutputIntensities {
  Eigen::VectorXd rates;        // nu_k
  Eigen::VectorXd metric;       // diagonal of the output metric
  double sum_residual = 0.0;    // |sum nu_k - nu|
  bool rescaled = false;        // every nu_k is positive, so G(psi) exists
  double rescaled_residual = 0.0;  // || nu^-1 G(psi)^dag nu_hat G(psi) - I ||
};
OutputIntensities output_intensities(const cvec& psi, const cmat& unitary, double nu);

struct Jump {
  double time = 0.0;
  int outcome = 0;
  double probability = 0.0;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  double nu = 0.0;
  double horizon = 0.0;
  std::vector<Jump> jumps;
  cvec final_state;
};

// exp(-i H t) through a cached eigendecomposition.
class FreeEvolution {
 public:
  explicit FreeEvolution(const cmat& hamiltonian);
  cvec apply(const cvec& psi, double t) const;
  cmat matrix(double t) const;

 private:
  cmat vectors_;
  Eigen::VectorXd values_;
};

struct TrajectoryModel {
  cmat hamiltonian;
  cmat unitary;  // apparatus unitary
  double nu = 0.0;
  double horizon = 1.0;
  cvec psi0;

  int system_dim() const { return static_cast<int>(hamiltonian.rows()); }
  void validate() const;
};

TrajectoryRecord sample_trajectory(const TrajectoryModel& model, std::uint64_t seed);
// Reconstructs the conditioned state at time t from the recorded jumps.
cvec trajectory_state(const TrajectoryModel& model, const FreeEvolution& free,
                      const TrajectoryRecord& record, double t);
std::vector<TrajectoryRecord> sample_ensemble(const TrajectoryModel& model, std::uint64_t seed,
                                              int count, int workers = 1);
std::vector<cmat> ensemble_average(const TrajectoryModel& model,
                                   const std::vector<TrajectoryRecord>& records,
                                   const std::vector<double>& times, int workers = 1);
// Master equation whose unraveling the trajectories sample.
std::vector<cmat> ensemble_reference(const TrajectoryModel& model, const std::vector<double>& times,
                                     int steps_per_unit = 10000);
double trace_distance(const cmat& a, const cmat& b);

// Counting-measurement state on the apparatus fiber: on each chain, the free
// evolution interleaved with G at the points before t, acting on psi (x) |0>...
ChainVector measurement_state(const cmat& hamiltonian, const cmat& unitary, const cvec& psi,
                              const Grid& grid, int nmax, double t);
// The same state through the dilated generator and the projections F, F*.
ChainVector measurement_state_dilated(const cmat& hamiltonian, const cmat& unitary, const cvec& psi,
                                      const Grid& grid, int nmax, double t);
BlockOperator measurement_generator(const cmat& hamiltonian, const cmat& unitary);

// Keeps the chains whose points before t carry exactly the observed outcomes.
ChainVector filtered_counting_state(const ChainVector& psi_t, const std::vector<int>& outcomes, double t);
// N^t_k: number of points before t with apparatus label k.
ChainVector counting_number(const ChainVector& chi, int k, double t);
// Largest Schmidt rank across any single fiber slot.
int max_schmidt_rank(const ChainVector& chi, double tol = 1e-10);
// System factor of a chain value with every fiber contracted against (1,...,1).
cvec contract_fibers(const cvec& value, int system_dim, int fiber, int points);

// Z_g* G Z_g for the counting generator, and its closed form.
BlockOperator poisson_weyl_generator(const cmat& hamiltonian, const cmat& unitary, const cvec& g);
BlockOperator poisson_weyl_closed_form(const cmat& hamiltonian, const cmat& unitary, const cvec& g);

}  // namespace eventum
