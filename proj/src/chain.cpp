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

#include "eventum/chain.hpp"

#include <algorithm>
#include <cmath>

namespace eventum {

namespace {

long ipow(long base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

cvec kron(const cvec& a, const cvec& b) {
  cvec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

int position_in(const Chain& chain, int point) {
  auto it = std::lower_bound(chain.begin(), chain.end(), point);
  if (it == chain.end() || *it != point) return -1;
  return static_cast<int>(it - chain.begin());
}

Chain insert_point(const Chain& chain, int point) {
  Chain out = chain;
  out.insert(std::lower_bound(out.begin(), out.end(), point), point);
  return out;
}

Chain remove_at(const Chain& chain, int pos) {
  Chain out = chain;
  out.erase(out.begin() + pos);
  return out;
}

void combinations(const std::vector<int>& pool, int max_size, size_t start, Chain& current,
                  std::vector<Chain>& out, size_t budget) {
  out.push_back(current);
  if (out.size() > budget) throw BudgetError("chain enumeration exceeds the state budget");
  if (static_cast<int>(current.size()) == max_size) return;
  for (size_t i = start; i < pool.size(); ++i) {
    current.push_back(pool[i]);
    combinations(pool, max_size, i + 1, current, out, budget);
    current.pop_back();
  }
}

// Subchains of `pool` with at most max_size points.
std::vector<Chain> subchains(const std::vector<int>& pool, int max_size, size_t budget) {
  if (chain_count(static_cast<int>(pool.size()), max_size) > static_cast<double>(budget))
    throw BudgetError("chain enumeration exceeds the state budget");
  std::vector<Chain> out;
  Chain current;
  combinations(pool, max_size, 0, current, out, budget);
  std::sort(out.begin(), out.end());
  return out;
}

Chain merge(const Chain& a, const Chain& b) {
  Chain out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Digits of a fiber multi-index, most significant first.
void to_digits(long idx, int fiber, int points, std::vector<int>& digits) {
  digits.assign(static_cast<size_t>(points), 0);
  for (int i = points - 1; i >= 0; --i) {
    digits[static_cast<size_t>(i)] = static_cast<int>(idx % fiber);
    idx /= fiber;
  }
}

long from_digits(const std::vector<int>& digits, int fiber) {
  long idx = 0;
  for (int dgt : digits) idx = idx * fiber + dgt;
  return idx;
}

// op acting on the system index only.
cvec apply_system(const cvec& v, int system_dim, const cmat& op) {
  const long inner = v.size() / system_dim;
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> view(
      v.data(), system_dim, inner);
  Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> mixed = op * view;
  return Eigen::Map<const cvec>(mixed.data(), v.size());
}

}  // namespace

Grid::Grid(double t_final_, int n_points_) : t_final(t_final_), n_points(n_points_) {
  if (!(t_final_ > 0.0)) throw DomainError("Grid: final time must be positive");
  if (n_points_ < 1) throw DomainError("Grid: need at least one point");
}

int Grid::count_below(double t) const {
  int count = 0;
  while (count < n_points && point(count) < t) ++count;
  return count;
}

bool is_valid_chain(const Chain& chain, int n_points) {
  for (size_t i = 0; i < chain.size(); ++i) {
    if (chain[i] < 0 || chain[i] >= n_points) return false;
    if (i > 0 && chain[i] <= chain[i - 1]) return false;
  }
  return true;
}

double chain_count(int points, int nmax) {
  double total = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= std::min(points, nmax); ++k) {
    total += binom;
    binom = binom * (points - k) / (k + 1);
  }
  return total;
}

std::vector<Chain> enumerate_chains(int lo, int hi, int nmax, std::size_t budget) {
  std::vector<int> pool;
  for (int i = lo; i < hi; ++i) pool.push_back(i);
  return subchains(pool, nmax, budget);
}

double exponential_tail(double x, int nmax) {
  if (x < 0) throw DomainError("exponential_tail: negative argument");
  double term = 1.0;
  for (int m = 1; m <= nmax + 1; ++m) term *= x / m;
  double sum = 0.0;
  for (int m = nmax + 1; m < nmax + 2000; ++m) {
    sum += term;
    term *= x / (m + 1);
    if (term < 1e-30 * sum || term == 0.0) break;
  }
  return sum;
}

ChainVector::ChainVector(Grid grid, int nmax, int fiber, int system_dim, bool minkowski)
    : grid_(grid), nmax_(nmax), fiber_(fiber), system_dim_(system_dim), minkowski_(minkowski) {
  if (nmax < 0 || fiber < 0 || system_dim < 1) throw DimensionError("ChainVector: invalid dimensions");
  if (minkowski && fiber < 2) throw DimensionError("ChainVector: Minkowski fiber needs at least 2 slots");
}

long ChainVector::value_dim(int points) const { return system_dim_ * ipow(fiber_, points); }

cvec ChainVector::value(const Chain& chain) const {
  auto it = values_.find(chain);
  if (it == values_.end()) return cvec::Zero(value_dim(static_cast<int>(chain.size())));
  return it->second;
}

void ChainVector::set(const Chain& chain, cvec v) {
  if (!is_valid_chain(chain, grid_.n_points)) throw DimensionError("ChainVector: invalid chain");
  if (static_cast<int>(chain.size()) > nmax_) throw DimensionError("ChainVector: chain longer than nmax");
  if (v.size() != value_dim(static_cast<int>(chain.size())))
    throw DimensionError("ChainVector: value has the wrong dimension");
  values_[chain] = std::move(v);
}

void ChainVector::add(const Chain& chain, const cvec& v) {
  auto it = values_.find(chain);
  if (it == values_.end()) {
    set(chain, v);
  } else {
    if (v.size() != it->second.size()) throw DimensionError("ChainVector: value has the wrong dimension");
    it->second += v;
  }
}

bool ChainVector::same_space(const ChainVector& rhs) const {
  return fiber_ == rhs.fiber_ && system_dim_ == rhs.system_dim_ && minkowski_ == rhs.minkowski_ &&
         grid_.n_points == rhs.grid_.n_points && grid_.t_final == rhs.grid_.t_final;
}

ChainVector ChainVector::operator+(const ChainVector& rhs) const {
  if (!same_space(rhs)) throw DimensionError("ChainVector: different spaces");
  ChainVector out = *this;
  out.nmax_ = std::max(nmax_, rhs.nmax_);
  for (const auto& [c, v] : rhs.values_) out.add(c, v);
  return out;
}

ChainVector ChainVector::operator-(const ChainVector& rhs) const { return *this + rhs * cplx(-1.0); }

ChainVector ChainVector::operator*(cplx s) const {
  ChainVector out = *this;
  for (auto& [c, v] : out.values_) v *= s;
  return out;
}

ChainVector vacuum(const Grid& grid, int nmax, int fiber, const cvec& system_state, bool minkowski) {
  ChainVector out(grid, nmax, fiber, static_cast<int>(system_state.size()), minkowski);
  out.set({}, system_state);
  return out;
}

namespace {

// Apply eta to every fiber digit: swaps digit 0 and digit f-1.
cvec apply_metric(const cvec& v, int system_dim, int fiber, int points) {
  const long inner = ipow(fiber, points);
  cvec out(v.size());
  std::vector<int> digits;
  for (long idx = 0; idx < inner; ++idx) {
    to_digits(idx, fiber, points, digits);
    for (int& dgt : digits) {
      if (dgt == 0) dgt = fiber - 1;
      else if (dgt == fiber - 1) dgt = 0;
    }
    const long target = from_digits(digits, fiber);
    for (int s = 0; s < system_dim; ++s) out(s * inner + target) = v(s * inner + idx);
  }
  return out;
}

}  // namespace

cplx chain_inner(const ChainVector& a, const ChainVector& b) {
  if (!a.same_space(b)) throw DimensionError("chain_inner: different spaces");
  const double h = a.grid().h();
  cplx acc = 0.0;
  for (const auto& [chain, va] : a.values()) {
    auto it = b.values().find(chain);
    if (it == b.values().end()) continue;
    const int m = static_cast<int>(chain.size());
    cvec vb = a.minkowski() ? apply_metric(it->second, a.system_dim(), a.fiber(), m) : it->second;
    acc += std::pow(h, m) * va.dot(vb);
  }
  return acc;
}

double chain_norm_squared(const ChainVector& a) { return chain_inner(a, a).real(); }

double chain_distance(const ChainVector& a, const ChainVector& b) {
  if (!a.same_space(b)) throw DimensionError("chain_distance: different spaces");
  const double h = a.grid().h();
  double acc = 0.0;
  for (const auto& [chain, va] : a.values())
    acc += std::pow(h, static_cast<double>(chain.size())) * (va - b.value(chain)).squaredNorm();
  for (const auto& [chain, vb] : b.values())
    if (!a.has(chain)) acc += std::pow(h, static_cast<double>(chain.size())) * vb.squaredNorm();
  return std::sqrt(acc);
}

ChainVector exponential_vector(const Grid& grid, int nmax, const std::vector<cvec>& per_point,
                               const cvec& system_state, bool minkowski) {
  if (static_cast<int>(per_point.size()) != grid.n_points)
    throw DimensionError("exponential_vector: one fiber vector per grid point is required");
  const int fiber = static_cast<int>(per_point.front().size());
  for (const auto& k : per_point)
    if (k.size() != fiber) throw DimensionError("exponential_vector: fiber vectors differ in size");
  ChainVector out(grid, nmax, fiber, static_cast<int>(system_state.size()), minkowski);
  for (const Chain& chain : enumerate_chains(0, grid.n_points, nmax)) {
    cvec v = system_state;
    for (int p : chain) v = kron(v, per_point[static_cast<size_t>(p)]);
    out.set(chain, v);
  }
  return out;
}

cmat apply_slot(const cmat& v, int system_dim, int fiber, int points, int slot, const cmat& op) {
  const int d = system_dim;
  const int f = fiber;
  if (op.rows() != f * d || op.cols() != f * d) throw DimensionError("apply_slot: operator size");
  const long inner = ipow(f, points);
  if (v.rows() != d * inner) throw DimensionError("apply_slot: vector size");
  if (slot < 0 || slot >= points) throw DimensionError("apply_slot: slot out of range");
  const long stride = ipow(f, points - 1 - slot);
  const long outer = ipow(f, slot);
  cmat out(v.rows(), v.cols());
  cmat gathered(f * d, v.cols());
  for (long hi = 0; hi < outer; ++hi) {
    for (long lo = 0; lo < stride; ++lo) {
      for (int a = 0; a < f; ++a)
        for (int s = 0; s < d; ++s)
          gathered.row(a * d + s) = v.row(s * inner + hi * stride * f + a * stride + lo);
      cmat mixed = op * gathered;
      for (int a = 0; a < f; ++a)
        for (int s = 0; s < d; ++s)
          out.row(s * inner + hi * stride * f + a * stride + lo) = mixed.row(a * d + s);
    }
  }
  return out;
}

cvec move_slot_to_front(const cvec& v, int system_dim, int fiber, int points, int slot) {
  const long inner = ipow(fiber, points);
  cvec out(v.size());
  std::vector<int> digits;
  std::vector<int> moved(static_cast<size_t>(points));
  for (long idx = 0; idx < inner; ++idx) {
    to_digits(idx, fiber, points, digits);
    moved[0] = digits[static_cast<size_t>(slot)];
    int w = 1;
    for (int i = 0; i < points; ++i)
      if (i != slot) moved[static_cast<size_t>(w++)] = digits[static_cast<size_t>(i)];
    const long target = from_digits(moved, fiber);
    for (int s = 0; s < system_dim; ++s) out(s * inner + target) = v(s * inner + idx);
  }
  return out;
}

cvec move_front_to_slot(const cvec& v, int system_dim, int fiber, int points, int slot) {
  const long inner = ipow(fiber, points);
  cvec out(v.size());
  std::vector<int> digits;
  std::vector<int> moved(static_cast<size_t>(points));
  for (long idx = 0; idx < inner; ++idx) {
    to_digits(idx, fiber, points, digits);
    moved[0] = digits[static_cast<size_t>(slot)];
    int w = 1;
    for (int i = 0; i < points; ++i)
      if (i != slot) moved[static_cast<size_t>(w++)] = digits[static_cast<size_t>(i)];
    const long source = from_digits(moved, fiber);
    for (int s = 0; s < system_dim; ++s) out(s * inner + idx) = v(s * inner + source);
  }
  return out;
}

PointFamily point_derivative(const ChainVector& chi) {
  PointFamily out;
  out.grid = chi.grid();
  out.nmax = std::max(0, chi.nmax() - 1);
  out.fiber = chi.fiber();
  out.system_dim = chi.system_dim();
  for (const auto& [chain, v] : chi.values()) {
    const int m = static_cast<int>(chain.size());
    for (int p = 0; p < m; ++p)
      out.values[{chain[static_cast<size_t>(p)], remove_at(chain, p)}] =
          move_slot_to_front(v, chi.system_dim(), chi.fiber(), m, p);
  }
  return out;
}

void validate_family(const PointFamily& zeta) {
  for (const auto& [key, v] : zeta.values) {
    if (position_in(key.second, key.first) >= 0)
      throw DimensionError("point family: promoted point belongs to the chain");
    if (!is_valid_chain(key.second, zeta.grid.n_points) || key.first < 0 ||
        key.first >= zeta.grid.n_points)
      throw DimensionError("point family: invalid chain");
  }
}

ChainVector skorokhod_adjoint(const PointFamily& zeta) {
  validate_family(zeta);
  ChainVector out(zeta.grid, zeta.nmax + 1, zeta.fiber, zeta.system_dim);
  for (const auto& [key, v] : zeta.values) {
    Chain full = insert_point(key.second, key.first);
    const int m = static_cast<int>(full.size());
    out.add(full, move_front_to_slot(v, zeta.system_dim, zeta.fiber, m, position_in(full, key.first)));
  }
  return out;
}

cplx family_inner(const PointFamily& a, const PointFamily& b) {
  const double h = a.grid.h();
  cplx acc = 0.0;
  for (const auto& [key, va] : a.values) {
    auto it = b.values.find(key);
    if (it == b.values.end()) continue;
    acc += std::pow(h, static_cast<double>(key.second.size()) + 1.0) * va.dot(it->second);
  }
  return acc;
}

ChainVector qs_single_integral(const ItoField& field, double t, const ChainVector& psi) {
  if (psi.minkowski()) throw DimensionError("qs_single_integral: expects a noise-fiber vector");
  const Grid& grid = psi.grid();
  if (t < 0 || t > grid.t_final + 1e-12) throw DomainError("qs_single_integral: time outside the grid");
  const int n = psi.fiber();
  const int d = psi.system_dim();
  const double h = grid.h();
  const int below = grid.count_below(t);
  ChainVector out(grid, psi.nmax(), n, d);

  for (int z = 0; z < below; ++z) {
    ItoElement D = field(z);
    if (D.noise_dim() != n || D.system_dim() != d)
      throw DimensionError("qs_single_integral: differential shape does not match the vector");
    cmat counting(n * d, n * d);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) counting.block(i * d, k * d, d, d) = D.coef(i + 1, k);

    for (const auto& [chain, v] : psi.values()) {
      const int m = static_cast<int>(chain.size());
      const int p = position_in(chain, z);
      if (p >= 0) {
        // Counting keeps the point; annihilation removes it with weight h.
        if (n > 0) out.add(chain, apply_slot(v, d, n, m, p, counting).col(0));
        cvec front = move_slot_to_front(v, d, n, m, p);
        const long rest = ipow(n, m - 1);
        cvec reduced = cvec::Zero(d * rest);
        for (int k = 0; k < n; ++k) {
          cmat piece(d, rest);
          for (int s = 0; s < d; ++s) piece.row(s) = front.segment((s * n + k) * rest, rest).transpose();
          cmat mapped = D.coef(0, k) * piece;
          for (int s = 0; s < d; ++s) reduced.segment(s * rest, rest) += h * mapped.row(s).transpose();
        }
        out.add(remove_at(chain, p), reduced);
      } else {
        // Time part on chains avoiding z, creation inserts z.
        out.add(chain, h * apply_system(v, d, D.dt()));
        if (m + 1 <= psi.nmax() && n > 0) {
          const long rest = ipow(n, m);
          cvec front(d * n * rest);
          for (int i = 0; i < n; ++i) {
            cmat piece(d, rest);
            for (int s = 0; s < d; ++s) piece.row(s) = v.segment(s * rest, rest).transpose();
            cmat mapped = D.coef(i + 1, n) * piece;
            for (int s = 0; s < d; ++s) front.segment((s * n + i) * rest, rest) = mapped.row(s).transpose();
          }
          Chain grown = insert_point(chain, z);
          out.add(grown, move_front_to_slot(front, d, n, m + 1, position_in(grown, z)));
        }
      }
    }
  }
  return out;
}

ChainVector embed(const ChainVector& psi, std::size_t budget) {
  if (psi.minkowski()) throw DimensionError("embed: input must be a noise-fiber vector");
  const Grid& grid = psi.grid();
  const int n = psi.fiber();
  const int d = psi.system_dim();
  const int big = n + 2;
  const int nmax = psi.nmax();
  ChainVector out(grid, nmax, big, d, true);
  std::vector<int> digits;
  std::vector<int> labels;
  for (const auto& [sigma, v] : psi.values()) {
    const int k = static_cast<int>(sigma.size());
    std::vector<int> pool;
    for (int j = 0; j < grid.n_points; ++j)
      if (position_in(sigma, j) < 0) pool.push_back(j);
    const long small_inner = ipow(n, k);
    for (const Chain& extra : subchains(pool, nmax - k, budget)) {
      Chain full = merge(sigma, extra);
      const int m = static_cast<int>(full.size());
      const long big_inner = ipow(big, m);
      cvec w = cvec::Zero(d * big_inner);
      labels.assign(static_cast<size_t>(m), big - 1);
      for (long idx = 0; idx < small_inner; ++idx) {
        to_digits(idx, n, k, digits);
        for (int q = 0; q < k; ++q)
          labels[static_cast<size_t>(position_in(full, sigma[static_cast<size_t>(q)]))] =
              1 + digits[static_cast<size_t>(q)];
        const long target = from_digits(labels, big);
        for (int s = 0; s < d; ++s) w(s * big_inner + target) = v(s * small_inner + idx);
      }
      out.add(full, w);
    }
  }
  return out;
}

ChainVector project(const ChainVector& bigv) {
  if (!bigv.minkowski()) throw DimensionError("project: input must live on the Minkowski fiber");
  const Grid& grid = bigv.grid();
  const int big = bigv.fiber();
  const int n = big - 2;
  const int d = bigv.system_dim();
  const double h = grid.h();
  ChainVector out(grid, bigv.nmax(), n, d);
  std::vector<int> digits;
  std::vector<int> labels;
  for (const auto& [chain, v] : bigv.values()) {
    const int m = static_cast<int>(chain.size());
    const long big_inner = ipow(big, m);
    for (long mask = 0; mask < (1L << m); ++mask) {
      // Bits set in mask mark the "-" points that are integrated out.
      Chain sigma;
      int removed = 0;
      for (int q = 0; q < m; ++q) {
        if (mask & (1L << q)) ++removed;
        else sigma.push_back(chain[static_cast<size_t>(q)]);
      }
      const int k = m - removed;
      if (n == 0 && k > 0) continue;
      const long small_inner = ipow(n, k);
      cvec w(d * small_inner);
      labels.assign(static_cast<size_t>(m), 0);
      for (long idx = 0; idx < small_inner; ++idx) {
        to_digits(idx, n, k, digits);
        int q_small = 0;
        for (int q = 0; q < m; ++q)
          labels[static_cast<size_t>(q)] =
              (mask & (1L << q)) ? 0 : 1 + digits[static_cast<size_t>(q_small++)];
        const long source = from_digits(labels, big);
        for (int s = 0; s < d; ++s) w(s * small_inner + idx) = v(s * big_inner + source);
      }
      out.add(sigma, std::pow(h, removed) * w);
    }
  }
  return out;
}

BlockDiagOperator::BlockDiagOperator(Grid grid, int fiber, int system_dim, bool minkowski, ChainFn fn)
    : grid_(grid), fiber_(fiber), system_dim_(system_dim), minkowski_(minkowski), fn_(std::move(fn)),
      lo_(0), hi_(grid.n_points) {}

BlockDiagOperator BlockDiagOperator::product(const Grid& grid, int fiber, int system_dim,
                                             bool minkowski, std::vector<cmat> factors, int lo,
                                             int hi) {
  if (static_cast<int>(factors.size()) != grid.n_points)
    throw DimensionError("BlockDiagOperator::product: one factor per grid point is required");
  for (const auto& f : factors)
    if (f.rows() != fiber * system_dim || f.cols() != fiber * system_dim)
      throw DimensionError("BlockDiagOperator::product: factor has the wrong size");
  if (hi < 0) hi = grid.n_points;
  if (lo < 0 || lo > hi || hi > grid.n_points) throw DomainError("BlockDiagOperator::product: unordered window");
  BlockDiagOperator out;
  out.grid_ = grid;
  out.fiber_ = fiber;
  out.system_dim_ = system_dim;
  out.minkowski_ = minkowski;
  out.factors_ = std::move(factors);
  out.lo_ = lo;
  out.hi_ = hi;
  return out;
}

BlockDiagOperator BlockDiagOperator::product(const Grid& grid, const std::vector<BlockOperator>& factors,
                                             int lo, int hi) {
  if (factors.empty()) throw DimensionError("BlockDiagOperator::product: no factors");
  std::vector<cmat> mats;
  mats.reserve(factors.size());
  for (const auto& f : factors) {
    require_same_shape(f, factors.front());
    mats.push_back(f.matrix());
  }
  return product(grid, factors.front().external_dim(), factors.front().system_dim(), true,
                 std::move(mats), lo, hi);
}

BlockDiagOperator BlockDiagOperator::identity(const Grid& grid, int fiber, int system_dim, bool minkowski) {
  return product(grid, fiber, system_dim, minkowski,
                 std::vector<cmat>(static_cast<size_t>(grid.n_points),
                                   cmat::Identity(fiber * system_dim, fiber * system_dim)));
}

cmat BlockDiagOperator::on_chain(const Chain& chain) const {
  const int m = static_cast<int>(chain.size());
  if (!is_product()) {
    cmat x = fn_(chain);
    const long dim = system_dim_ * ipow(fiber_, m);
    if (x.rows() != dim || x.cols() != dim) throw DimensionError("BlockDiagOperator: chain block has the wrong size");
    return x;
  }
  const long dim = system_dim_ * ipow(fiber_, m);
  cmat x = cmat::Identity(dim, dim);
  for (int p = 0; p < m; ++p) {
    const int point = chain[static_cast<size_t>(p)];
    if (point < lo_ || point >= hi_) continue;
    x = apply_slot(x, system_dim_, fiber_, m, p, factors_[static_cast<size_t>(point)]);
  }
  return x;
}

ChainVector BlockDiagOperator::apply(const ChainVector& psi) const {
  if (psi.fiber() != fiber_ || psi.system_dim() != system_dim_ || psi.minkowski() != minkowski_)
    throw DimensionError("BlockDiagOperator::apply: vector lives on a different fiber");
  ChainVector out(psi.grid(), psi.nmax(), fiber_, system_dim_, minkowski_);
  for (const auto& [chain, v] : psi.values()) {
    const int m = static_cast<int>(chain.size());
    if (!is_product()) {
      out.set(chain, on_chain(chain) * v);
      continue;
    }
    cmat w = v;
    for (int p = 0; p < m; ++p) {
      const int point = chain[static_cast<size_t>(p)];
      if (point < lo_ || point >= hi_) continue;
      w = apply_slot(w, system_dim_, fiber_, m, p, factors_[static_cast<size_t>(point)]);
    }
    out.set(chain, w.col(0));
  }
  return out;
}

BlockDiagOperator compose(const BlockDiagOperator& x, const BlockDiagOperator& y) {
  if (x.fiber() != y.fiber() || x.system_dim() != y.system_dim() || x.minkowski() != y.minkowski())
    throw DimensionError("compose: operators act on different fibers");
  return BlockDiagOperator(x.grid(), x.fiber(), x.system_dim(), x.minkowski(),
                           [x, y](const Chain& c) { return cmat(x.on_chain(c) * y.on_chain(c)); });
}

BlockDiagOperator star(const BlockDiagOperator& x) {
  const int d = x.system_dim();
  const int f = x.fiber();
  const bool mink = x.minkowski();
  return BlockDiagOperator(x.grid(), f, d, mink, [x, d, f, mink](const Chain& c) {
    cmat adj = x.on_chain(c).adjoint();
    if (!mink) return adj;
    const int m = static_cast<int>(c.size());
    const long inner = ipow(f, m);
    std::vector<long> perm(static_cast<size_t>(d * inner));
    std::vector<int> digits;
    for (long idx = 0; idx < inner; ++idx) {
      to_digits(idx, f, m, digits);
      for (int& dgt : digits) {
        if (dgt == 0) dgt = f - 1;
        else if (dgt == f - 1) dgt = 0;
      }
      const long mirrored = from_digits(digits, f);
      for (int s = 0; s < d; ++s) perm[static_cast<size_t>(s * inner + idx)] = s * inner + mirrored;
    }
    cmat out(adj.rows(), adj.cols());
    for (long i = 0; i < adj.rows(); ++i)
      for (long j = 0; j < adj.cols(); ++j)
        out(i, j) = adj(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
    return out;
  });
}

BlockOperator weyl_factor(const cvec& g, int system_dim) {
  const int n = static_cast<int>(g.size());
  const int d = system_dim;
  BlockOperator z = BlockOperator::identity(n, d);
  const cmat id = cmat::Identity(d, d);
  for (int k = 0; k < n; ++k) {
    z.set_block(0, 1 + k, -std::conj(g(k)) * id);
    z.set_block(1 + k, n + 1, g(k) * id);
  }
  z.set_block(0, n + 1, -0.5 * g.squaredNorm() * id);
  return z;
}

BlockDiagOperator weyl_product(const Grid& grid, const std::vector<cvec>& g, int system_dim) {
  if (static_cast<int>(g.size()) != grid.n_points)
    throw DimensionError("weyl_product: one vector per grid point is required");
  std::vector<BlockOperator> factors;
  factors.reserve(g.size());
  for (const auto& gj : g) factors.push_back(weyl_factor(gj, system_dim));
  return BlockDiagOperator::product(grid, factors);
}

NoiseBasis::NoiseBasis(Grid grid, int nmax, int noise_dim, int system_dim, std::size_t budget)
    : grid_(grid), nmax_(nmax), noise_dim_(noise_dim), system_dim_(system_dim) {
  if (noise_dim < 0 || system_dim < 1 || nmax < 0) throw DimensionError("NoiseBasis: invalid dimensions");
  chains_ = noise_dim == 0 ? std::vector<Chain>{Chain{}} : enumerate_chains(0, grid.n_points, nmax, budget);
  for (const Chain& c : chains_) {
    offsets_[c] = dim_;
    dim_ += static_cast<int>(system_dim * ipow(noise_dim, static_cast<int>(c.size())));
  }
}

int NoiseBasis::offset(const Chain& chain) const {
  auto it = offsets_.find(chain);
  if (it == offsets_.end()) throw DimensionError("NoiseBasis: chain outside the truncated basis");
  return it->second;
}

cvec NoiseBasis::flatten(const ChainVector& psi) const {
  if (psi.fiber() != noise_dim_ || psi.system_dim() != system_dim_ || psi.minkowski())
    throw DimensionError("NoiseBasis::flatten: vector lives on a different fiber");
  cvec out = cvec::Zero(dim_);
  for (const auto& [chain, v] : psi.values()) {
    if (static_cast<int>(chain.size()) > nmax_) continue;
    out.segment(offset(chain), v.size()) = v;
  }
  return out;
}

ChainVector NoiseBasis::unflatten(const cvec& v) const {
  if (v.size() != dim_) throw DimensionError("NoiseBasis::unflatten: wrong size");
  ChainVector out(grid_, nmax_, noise_dim_, system_dim_);
  for (const Chain& c : chains_) {
    const long len = system_dim_ * ipow(noise_dim_, static_cast<int>(c.size()));
    out.set(c, v.segment(offset(c), len));
  }
  return out;
}

Eigen::VectorXd NoiseBasis::weights() const {
  Eigen::VectorXd w(dim_);
  for (const Chain& c : chains_) {
    const long len = system_dim_ * ipow(noise_dim_, static_cast<int>(c.size()));
    w.segment(offset(c), len).setConstant(std::pow(grid_.h(), static_cast<double>(c.size())));
  }
  return w;
}

cmat NoiseBasis::adjoint(const cmat& m) const {
  Eigen::VectorXd w = weights();
  cmat out = m.adjoint();
  for (int i = 0; i < dim_; ++i) out.row(i) /= w(i);
  for (int j = 0; j < dim_; ++j) out.col(j) *= w(j);
  return out;
}

cmat epsilon_morphism(const BlockDiagOperator& x, const NoiseBasis& basis) {
  const int n = basis.noise_dim();
  const int d = basis.system_dim();
  if (!x.minkowski() || x.fiber() != n + 2 || x.system_dim() != d)
    throw DimensionError("epsilon_morphism: operator must act on the Minkowski fiber n+2");
  if (x.is_product()) {
    for (const cmat& f : x.factors())
      if (!BlockOperator(n, d, f).is_upper_triangular())
        throw DomainError("epsilon_morphism: factor is not upper triangular");
  }
  cmat out = cmat::Zero(basis.dim(), basis.dim());
  for (const Chain& c : basis.chains()) {
    const long len = d * ipow(n, static_cast<int>(c.size()));
    for (long i = 0; i < len; ++i) {
      ChainVector e(basis.grid(), basis.nmax(), n, d);
      cvec unit = cvec::Zero(len);
      unit(i) = 1.0;
      e.set(c, unit);
      out.col(basis.offset(c) + i) = basis.flatten(project(x.apply(embed(e))));
    }
  }
  return out;
}

PoissonExpectation poisson_expectation(const BlockDiagOperator& x, double nu, double t,
                                       const std::vector<cvec>& phi, int nmax) {
  if (!(nu > 0.0)) throw DomainError("poisson_expectation: intensity must be positive");
  const Grid& grid = x.grid();
  if (static_cast<int>(phi.size()) != grid.n_points)
    throw DimensionError("poisson_expectation: one fiber vector per grid point is required");
  const int f = x.fiber();
  const int d = x.system_dim();
  const double h = grid.h();
  const int below = grid.count_below(t);
  const double span = below * h;

  std::vector<cvec> phi_star(phi.size());
  for (size_t j = 0; j < phi.size(); ++j) {
    if (phi[j].size() != f) throw DimensionError("poisson_expectation: fiber vector size");
    cvec row = phi[j].conjugate();
    if (x.minkowski()) std::swap(row(0), row(f - 1));
    phi_star[j] = row;
  }
  // phi (x) I_d in external-major layout and its row counterpart.
  auto column_lift = [d, f](const cvec& v) {
    cmat lift = cmat::Zero(f * d, d);
    for (int a = 0; a < f; ++a) lift.block(a * d, 0, d, d) = v(a) * cmat::Identity(d, d);
    return lift;
  };
  auto row_lift = [d, f](const cvec& v) {
    cmat lift = cmat::Zero(d, f * d);
    for (int a = 0; a < f; ++a) lift.block(0, a * d, d, d) = v(a) * cmat::Identity(d, d);
    return lift;
  };

  PoissonExpectation res;
  const double damping = std::exp(-nu * t);
  if (x.is_product()) {
    std::vector<cmat> level(static_cast<size_t>(nmax + 1), cmat::Zero(d, d));
    level[0] = cmat::Identity(d, d);
    double c_max = 0.0;
    for (int j = 0; j < below; ++j) {
      const cmat factor = (j >= x.window_lo() && j < x.window_hi())
                              ? x.factors()[static_cast<size_t>(j)]
                              : cmat::Identity(f * d, f * d);
      cmat c = row_lift(phi_star[static_cast<size_t>(j)]) * factor * column_lift(phi[static_cast<size_t>(j)]);
      c_max = std::max(c_max, operator_norm(c));
      for (int k = std::min(j + 1, nmax); k >= 1; --k)
        level[static_cast<size_t>(k)] += nu * h * c * level[static_cast<size_t>(k - 1)];
    }
    res.value = cmat::Zero(d, d);
    for (const cmat& l : level) res.value += l;
    res.value *= damping;
    const double rate = nu * c_max;
    res.tail_bound = damping * exponential_tail(span * rate, nmax);
    res.grid_bound = damping * 0.5 * h * span * rate * rate * std::exp((span + h) * rate);
    return res;
  }

  res.value = cmat::Zero(d, d);
  double growth = 0.0;
  for (const Chain& chain : enumerate_chains(0, below, nmax)) {
    const int m = static_cast<int>(chain.size());
    cvec col = cvec::Ones(1);
    cvec row = cvec::Ones(1);
    for (int p : chain) {
      col = kron(col, phi[static_cast<size_t>(p)]);
      row = kron(row, phi_star[static_cast<size_t>(p)]);
    }
    const long inner = col.size();
    cmat lift_col = cmat::Zero(d * inner, d);
    cmat lift_row = cmat::Zero(d, d * inner);
    for (int s = 0; s < d; ++s) {
      lift_col.block(s * inner, s, inner, 1) = col;
      lift_row.block(s, s * inner, 1, inner) = row.transpose();
    }
    cmat term = lift_row * x.on_chain(chain) * lift_col;
    if (m > 0) growth = std::max(growth, std::pow(operator_norm(term), 1.0 / m));
    res.value += std::pow(nu * h, m) * term;
  }
  res.value *= damping;
  res.tail_bound = damping * exponential_tail(span * nu * std::max(growth, 1.0), nmax);
  return res;
}

}  // namespace eventum
