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

#include <cstddef>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "eventum/ito.hpp"
#include "eventum/minkowski.hpp"

namespace eventum {

inline constexpr std::size_t kChainBudget = 1000000;

// Uniform grid on [0, T) with midpoint-tagged cells t_j = (j + 1/2) h.
struct Grid {
  double t_final = 1.0;
  int n_points = 1;

  Grid() = default;
  Grid(double t_final, int n_points);

  double h() const { return t_final / n_points; }
  double point(int j) const { return (j + 0.5) * h(); }
  // Number of grid points strictly below t (points are the cell midpoints).
  int count_below(double t) const;
};

// Sorted list of distinct grid indices.
using Chain = std::vector<int>;

bool is_valid_chain(const Chain& chain, int n_points);
// Number of chains with at most nmax points drawn from `points` grid points.
double chain_count(int points, int nmax);
// All chains with indices in [lo, hi) and at most nmax points, in
// lexicographic order. Throws BudgetError beyond `budget` chains.
std::vector<Chain> enumerate_chains(int lo, int hi, int nmax, std::size_t budget = kChainBudget);

// Sum_{m > nmax} x^m / m!, summed term by term.
double exponential_tail(double x, int nmax);

// Truncated map from chains to vectors in C^d (x) C^f (x) ... (x) C^f. The
// system index is the most significant, then one fiber slot per chain point
// in time order. With `minkowski` set the fiber carries the metric eta of
// noise dimension f - 2.
class ChainVector {
 public:
  ChainVector() = default;
  ChainVector(Grid grid, int nmax, int fiber, int system_dim, bool minkowski = false);

  const Grid& grid() const { return grid_; }
  int nmax() const { return nmax_; }
  int fiber() const { return fiber_; }
  int system_dim() const { return system_dim_; }
  bool minkowski() const { return minkowski_; }

  long value_dim(int points) const;
  // Zero vector of the right size when the chain is absent.
  cvec value(const Chain& chain) const;
  bool has(const Chain& chain) const { return values_.count(chain) > 0; }
  void set(const Chain& chain, cvec v);
  void add(const Chain& chain, const cvec& v);

  const std::map<Chain, cvec>& values() const { return values_; }

  ChainVector operator+(const ChainVector& rhs) const;
  ChainVector operator-(const ChainVector& rhs) const;
  ChainVector operator*(cplx s) const;

  bool same_space(const ChainVector& rhs) const;

 private:
  Grid grid_;
  int nmax_ = 0;
  int fiber_ = 1;
  int system_dim_ = 1;
  bool minkowski_ = false;
  std::map<Chain, cvec> values_;
};

// psi on the empty chain, zero elsewhere.
ChainVector vacuum(const Grid& grid, int nmax, int fiber, const cvec& system_state,
                   bool minkowski = false);

// Weighted inner product sum_chains h^|chain| <a, b>, with eta per point on
// the Minkowski fiber.
cplx chain_inner(const ChainVector& a, const ChainVector& b);
// Real part of chain_inner(a, a); negative values are possible on the
// Minkowski fiber.
double chain_norm_squared(const ChainVector& a);
// Hilbert norm of a - b (metric ignored), used for equality tests.
double chain_distance(const ChainVector& a, const ChainVector& b);

// value(chain) = system_state (x) k(t_1) (x) ... (x) k(t_m) on all chains with
// at most nmax points.
ChainVector exponential_vector(const Grid& grid, int nmax, const std::vector<cvec>& per_point,
                               const cvec& system_state, bool minkowski = false);

// Family of vectors indexed by a promoted point t and a chain not containing
// it. The promoted fiber slot sits right after the system index.
struct PointFamily {
  Grid grid;
  int nmax = 0;  // largest chain size of the family's chain argument
  int fiber = 1;
  int system_dim = 1;
  std::map<std::pair<int, Chain>, cvec> values;
};

// [nabla chi](t, chain) = chi(t u chain).
PointFamily point_derivative(const ChainVector& chi);
// [nabla* zeta](chain) = sum_{t in chain} zeta(t, chain \ t).
ChainVector skorokhod_adjoint(const PointFamily& zeta);
// sum_t h sum_chain h^|chain| <zeta(t, chain), eta(t, chain)>.
cplx family_inner(const PointFamily& a, const PointFamily& b);
// Checks t not in chain for every entry.
void validate_family(const PointFamily& zeta);

// Tensor helpers for the slot layout described above.
// Apply op, an (f d) x (f d) matrix in external-major order (slot * d + s),
// to system and fiber slot `slot` of every column of v.
cmat apply_slot(const cmat& v, int system_dim, int fiber, int points, int slot, const cmat& op);
// Permute the fiber slot at position `slot` to the front (right after system).
cvec move_slot_to_front(const cvec& v, int system_dim, int fiber, int points, int slot);
cvec move_front_to_slot(const cvec& v, int system_dim, int fiber, int points, int slot);

// Apply the one-point differential D(z) at every grid point z below t: counting,
// creation, annihilation and time parts with weight h for the last two.
using ItoField = std::function<ItoElement(int grid_index)>;
ChainVector qs_single_integral(const ItoField& field, double t, const ChainVector& psi);

// F*: psi -> psi (x) xi^(x), from noise fiber n to the Minkowski fiber n+2. All
// chains of the grid with at most nmax points are populated.
ChainVector embed(const ChainVector& psi, std::size_t budget = kChainBudget);
// F: contraction of every point with xi* and integration over the "-" points.
ChainVector project(const ChainVector& big);

// Operator acting chain by chain: [X psi](chain) = X(chain) psi(chain).
class BlockDiagOperator {
 public:
  using ChainFn = std::function<cmat(const Chain&)>;

  BlockDiagOperator() = default;
  BlockDiagOperator(Grid grid, int fiber, int system_dim, bool minkowski, ChainFn fn);

  // Chronological product of per-point factors (one (f d)x(f d) matrix per grid
  // point), later points acting on the left. Points outside [lo, hi) get the
  // identity.
  static BlockDiagOperator product(const Grid& grid, int fiber, int system_dim, bool minkowski,
                                   std::vector<cmat> factors, int lo = 0, int hi = -1);
  static BlockDiagOperator product(const Grid& grid, const std::vector<BlockOperator>& factors,
                                   int lo = 0, int hi = -1);
  static BlockDiagOperator identity(const Grid& grid, int fiber, int system_dim, bool minkowski);

  const Grid& grid() const { return grid_; }
  int fiber() const { return fiber_; }
  int system_dim() const { return system_dim_; }
  bool minkowski() const { return minkowski_; }

  bool is_product() const { return !factors_.empty(); }
  const std::vector<cmat>& factors() const { return factors_; }
  int window_lo() const { return lo_; }
  int window_hi() const { return hi_; }

  cmat on_chain(const Chain& chain) const;
  ChainVector apply(const ChainVector& psi) const;

 private:
  Grid grid_;
  int fiber_ = 1;
  int system_dim_ = 1;
  bool minkowski_ = false;
  ChainFn fn_;
  std::vector<cmat> factors_;
  int lo_ = 0;
  int hi_ = 0;
};

BlockDiagOperator compose(const BlockDiagOperator& x, const BlockDiagOperator& y);
// Chainwise pseudo-adjoint (Hilbert adjoint when the fiber is not Minkowski).
BlockDiagOperator star(const BlockDiagOperator& x);

// Z_g for a noise vector g: [[1, -g^*, -g^*g/2], [0, I, g], [0, 0, 1]] tensored
// with the system identity.
BlockOperator weyl_factor(const cvec& g, int system_dim);
BlockDiagOperator weyl_product(const Grid& grid, const std::vector<cvec>& g, int system_dim);

// Basis of the truncated noise-fiber space: all chains with at most nmax
// points, each contributing d * n^|chain| coordinates.
class NoiseBasis {
 public:
  NoiseBasis(Grid grid, int nmax, int noise_dim, int system_dim,
             std::size_t budget = kChainBudget);

  const Grid& grid() const { return grid_; }
  int nmax() const { return nmax_; }
  int noise_dim() const { return noise_dim_; }
  int system_dim() const { return system_dim_; }
  int dim() const { return dim_; }
  const std::vector<Chain>& chains() const { return chains_; }
  int offset(const Chain& chain) const;

  cvec flatten(const ChainVector& psi) const;
  ChainVector unflatten(const cvec& v) const;
  // Diagonal of the weights h^|chain| per coordinate.
  Eigen::VectorXd weights() const;
  // Adjoint of a matrix with respect to the weighted inner product.
  cmat adjoint(const cmat& m) const;

 private:
  Grid grid_;
  int nmax_;
  int noise_dim_;
  int system_dim_;
  int dim_ = 0;
  std::vector<Chain> chains_;
  std::map<Chain, int> offsets_;
};

// F X F* as a matrix on the truncated noise-fiber basis. X must act on the
// Minkowski fiber n+2 and, when it is a product, have upper-triangular factors.
cmat epsilon_morphism(const BlockDiagOperator& x, const NoiseBasis& basis);

struct PoissonExpectation {
  cmat value;
  double tail_bound = 0.0;  // truncation at nmax points
  double grid_bound = 0.0;  // one-jump-per-cell discretization (product operators)
  double bound() const { return tail_bound + grid_bound; }
};

// sum_chains (nu h)^|chain| exp(-nu t) phi*(chain) X(chain) phi(chain) over
// chains below t with at most nmax points. phi* is the pseudo-adjoint row on
// a Minkowski fiber and the Hilbert adjoint otherwise. Product operators are
// summed by a recursion over the grid without enumerating chains.
PoissonExpectation poisson_expectation(const BlockDiagOperator& x, double nu, double t,
                                       const std::vector<cvec>& phi, int nmax);

}  // namespace eventum
