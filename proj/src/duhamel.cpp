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


#include "eventum/duhamel.hpp"

#include <cmath>

#include "eventum/random.hpp"

namespace eventum {

namespace {

long chain_dim(const DuhamelProblem& p, const Chain& chain) {
  long dim = p.system_dim;
  for (size_t i = 0; i < chain.size(); ++i) dim *= p.fiber;
  return dim;
}

void check_problem(const DuhamelProblem& p, const Chain& chain) {
  if (!p.k || !p.l) throw DimensionError("Duhamel problem needs both exponents");
  if (!is_valid_chain(chain, p.grid.n_points)) throw DomainError("chain is not inside the grid");
}

cmat initial(const DuhamelProblem& p, const Chain& chain) {
  const long dim = chain_dim(p, chain);
  if (!p.t0) return cmat::Identity(dim, dim);
  cmat v = p.t0(chain);
  if (v.rows() != dim || v.cols() != dim) throw DimensionError("initial value has the wrong size");
  return v;
}

// Chain positions strictly below t.
int active_points(const DuhamelProblem& p, double t, const Chain& chain) {
  const int below = p.grid.count_below(t);
  int m = 0;
  while (m < static_cast<int>(chain.size()) && chain[static_cast<size_t>(m)] < below) ++m;
  return m;
}

// Exponents evaluated once per chain.
struct Evaluated {
  std::vector<cmat> k;
  std::vector<cmat> l;
};

Evaluated evaluate(const DuhamelProblem& p, const Chain& chain, int m) {
  Evaluated e;
  for (int q = 0; q < m; ++q) {
    e.k.push_back(p.k(q, chain));
    e.l.push_back(p.l(q, chain));
  }
  return e;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // splitmix64 finalizer over the running hash
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  return h ^ (h >> 31);
}

ChainExponent random_exponent(std::uint64_t seed, int fiber, int system_dim, double scale) {
  return [=](int pos, const Chain& chain) {
    std::uint64_t h = mix(seed, static_cast<std::uint64_t>(chain.at(static_cast<size_t>(pos))));
    for (size_t q = 0; q < chain.size(); ++q)
      if (static_cast<int>(q) != pos) h = mix(h, static_cast<std::uint64_t>(chain[q]) + 1);
    Rng rng(h);
    const cmat local = scale * random_matrix(fiber * system_dim, fiber * system_dim, rng);
    const int m = static_cast<int>(chain.size());
    long dim = system_dim;
    for (int i = 0; i < m; ++i) dim *= fiber;
    return apply_slot(cmat::Identity(dim, dim), system_dim, fiber, m, pos, local);
  };
}

}  // namespace

DuhamelProblem random_duhamel_problem(const Grid& grid, int noise_dim, int system_dim,
                                      std::uint64_t seed, double scale) {
  DuhamelProblem p;
  p.grid = grid;
  p.fiber = noise_dim + 2;
  p.system_dim = system_dim;
  p.k = random_exponent(mix(seed, 11), p.fiber, system_dim, scale);
  p.l = random_exponent(mix(seed, 23), p.fiber, system_dim, scale);
  const std::uint64_t t0_seed = mix(seed, 37);
  const int f = p.fiber;
  p.t0 = [t0_seed, f, system_dim](const Chain& chain) {
    std::uint64_t h = t0_seed;
    for (int x : chain) h = mix(h, static_cast<std::uint64_t>(x) + 1);
    Rng rng(h);
    long dim = system_dim;
    for (size_t i = 0; i < chain.size(); ++i) dim *= f;
    return cmat(cmat::Identity(dim, dim) + 0.3 * random_matrix(static_cast<int>(dim), static_cast<int>(dim), rng));
  };
  return p;
}

cmat direct_solve(const DuhamelProblem& p, double t, const Chain& chain) {
  check_problem(p, chain);
  const long dim = chain_dim(p, chain);
  cmat x = initial(p, chain);
  const int m = active_points(p, t, chain);
  const Evaluated e = evaluate(p, chain, m);
  for (int q = 0; q < m; ++q) x = (cmat::Identity(dim, dim) + e.k[q] + e.l[q]) * x;
  return x;
}

cmat duhamel_solve(const DuhamelProblem& p, double t, const Chain& chain) {
  check_problem(p, chain);
  const int m = active_points(p, t, chain);
  const long dim = chain_dim(p, chain);
  const cmat id = cmat::Identity(dim, dim);
  const Evaluated e = evaluate(p, chain, m);
  // before[q] is T at the time of position q, built from positions < q.
  std::vector<cmat> before;
  before.reserve(static_cast<size_t>(m + 1));
  before.push_back(initial(p, chain));
  for (int q = 1; q <= m; ++q) {
    // y runs through Y over positions (z, q), z descending.
    cmat y = id;
    cmat x = cmat::Zero(dim, dim);
    for (int z = q - 1; z >= 0; --z) {
      x += y * e.l[static_cast<size_t>(z)] * before[static_cast<size_t>(z)];
      y = y * (id + e.k[static_cast<size_t>(z)]);
    }
    x += y * before.front();
    before.push_back(std::move(x));
  }
  return before.back();
}

cmat multiple_sum_kernel(const DuhamelProblem& p, double t, const Chain& chain, int max_points) {
  check_problem(p, chain);
  const int m = active_points(p, t, chain);
  if (m > max_points) throw BudgetError("multiple_sum_kernel: too many chain points for subset enumeration");
  const long dim = chain_dim(p, chain);
  const cmat t0 = initial(p, chain);
  const Evaluated e = evaluate(p, chain, m);
  cmat total = cmat::Zero(dim, dim);
  // Depth-first over subsets: each leaf is one ordered term, prefixes are shared.
  std::function<void(int, const cmat&)> expand = [&](int q, const cmat& term) {
    if (q == m) {
      total += term;
      return;
    }
    expand(q + 1, e.l[static_cast<size_t>(q)] * term);
    expand(q + 1, (cmat::Identity(dim, dim) + e.k[static_cast<size_t>(q)]) * term);
  };
  expand(0, t0);
  return total;
}

ChainExponent pointwise_exponent(const std::vector<BlockOperator>& per_point, int system_dim) {
  return [per_point, system_dim](int pos, const Chain& chain) {
    const BlockOperator& x = per_point.at(static_cast<size_t>(chain.at(static_cast<size_t>(pos))));
    const int f = x.external_dim();
    const int m = static_cast<int>(chain.size());
    long dim = system_dim;
    for (int i = 0; i < m; ++i) dim *= f;
    return apply_slot(cmat::Identity(dim, dim), system_dim, f, m, pos, x.matrix());
  };
}

cmat projected_duhamel(const std::vector<BlockOperator>& k, const std::vector<BlockOperator>& l,
                       const NoiseBasis& basis, double t, const cmat& t0_in) {
  const Grid& grid = basis.grid();
  if (static_cast<int>(k.size()) != grid.n_points || static_cast<int>(l.size()) != grid.n_points)
    throw DimensionError("projected_duhamel: one exponent per grid point is required");
  const int n = basis.noise_dim();
  const int d = basis.system_dim();
  for (size_t j = 0; j < k.size(); ++j) {
    if (k[j].noise_dim() != n || l[j].noise_dim() != n || k[j].system_dim() != d || l[j].system_dim() != d)
      throw DimensionError("projected_duhamel: exponent has the wrong shape");
    if (!k[j].is_upper_triangular() || !l[j].is_upper_triangular())
      throw DomainError("projected_duhamel: exponents must be adapted (upper triangular)");
  }
  const int dim = basis.dim();
  const cmat t0 = t0_in.size() == 0 ? identity(dim) : t0_in;
  if (t0.rows() != dim || t0.cols() != dim) throw DimensionError("projected_duhamel: initial value size");

  std::vector<BlockOperator> y_factors;
  y_factors.reserve(k.size());
  for (const auto& kj : k) y_factors.push_back(BlockOperator::identity(n, d) + kj);
  auto projected_cocycle = [&](int lo, int hi) {
    return epsilon_morphism(BlockDiagOperator::product(grid, y_factors, lo, hi), basis);
  };

  const int below = grid.count_below(t);
  std::vector<cmat> before;
  before.reserve(static_cast<size_t>(below + 1));
  before.push_back(t0);
  std::vector<cmat> jumps;
  jumps.reserve(static_cast<size_t>(below));
  for (int z = 0; z < below; ++z) {
    std::vector<BlockOperator> single(static_cast<size_t>(grid.n_points), BlockOperator::identity(n, d));
    single[static_cast<size_t>(z)] = single[static_cast<size_t>(z)] + l[static_cast<size_t>(z)];
    // Single-point integral of J at z.
    jumps.push_back(epsilon_morphism(BlockDiagOperator::product(grid, single), basis) - identity(dim));
  }
  for (int q = 1; q <= below; ++q) {
    cmat x = projected_cocycle(0, q) * t0;
    for (int z = 0; z < q; ++z)
      x += projected_cocycle(z + 1, q) * jumps[static_cast<size_t>(z)] * before[static_cast<size_t>(z)];
    before.push_back(std::move(x));
  }
  return before.back();
}

}  // namespace eventum
