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


#include "eventum/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "eventum/dynamics.hpp"
#include "eventum/random.hpp"

namespace eventum {

namespace {

long ipow(long base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

double min_eigenvalue(const cmat& m) {
  Eigen::SelfAdjointEigenSolver<cmat> eig(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

int apparatus_dim(const cmat& unitary, int system_dim) {
  if (unitary.rows() != unitary.cols() || unitary.rows() % system_dim != 0 || unitary.rows() < system_dim)
    throw DimensionError("apparatus unitary has the wrong size");
  return static_cast<int>(unitary.rows() / system_dim);
}

// op on the system index of a chain value (system index most significant).
cvec apply_system(const cvec& v, int system_dim, const cmat& op) {
  const long inner = v.size() / system_dim;
  cvec out(v.size());
  for (long r = 0; r < inner; ++r) {
    cvec col(system_dim);
    for (int s = 0; s < system_dim; ++s) col(s) = v(s * inner + r);
    col = op * col;
    for (int s = 0; s < system_dim; ++s) out(s * inner + r) = col(s);
  }
  return out;
}

cmat fiber_projector(int fiber, int system_dim, int k) {
  cmat p = cmat::Zero(fiber * system_dim, fiber * system_dim);
  p.block(k * system_dim, k * system_dim, system_dim, system_dim).setIdentity();
  return p;
}

// Number of chain points strictly below the grid index `below`.
int points_before(const Chain& chain, int below) {
  return static_cast<int>(std::lower_bound(chain.begin(), chain.end(), below) - chain.begin());
}

template <typename Fn>
void parallel_for(int count, int workers, Fn fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([=, &fn] {
      for (int i = w; i < count; i += workers) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

int KrausFamily::system_dim() const {
  if (ops.empty()) throw DimensionError("Kraus family is empty");
  return static_cast<int>(ops.front().rows());
}

double KrausFamily::completeness_residual() const {
  const int d = system_dim();
  cmat total = cmat::Zero(d, d);
  for (const cmat& e : ops) total += e.adjoint() * e;
  return frobenius(total - identity(d));
}

void KrausFamily::validate(bool require_complete, double tol) const {
  const int d = system_dim();
  for (const cmat& e : ops) {
    if (e.rows() != d || e.cols() != d) throw DimensionError("Kraus operators must share one square size");
    if (operator_norm(e) > 1.0 + tol) throw DomainError("Kraus operator is not a contraction");
  }
  if (require_complete && completeness_residual() > tol) throw DomainError("Kraus family is not complete");
}

cmat decoherence_map(const cmat& rho, const KrausFamily& family) {
  family.validate(true);
  if (rho.rows() != family.system_dim() || rho.cols() != rho.rows())
    throw DimensionError("decoherence_map: state has the wrong size");
  cmat out = cmat::Zero(rho.rows(), rho.cols());
  for (const cmat& e : family.ops) out += e * rho * e.adjoint();
  return out;
}

cmat apparatus_unitary(const KrausFamily& family) {
  family.validate(false);
  const int d = family.system_dim();
  const int n = static_cast<int>(family.ops.size());
  cmat f(n * d, d);
  for (int i = 0; i < n; ++i) f.block(i * d, 0, d, d) = family.ops[static_cast<size_t>(i)];
  const cmat a = identity(d) - f.adjoint() * f;
  const cmat b = identity(n * d) - f * f.adjoint();
  if (min_eigenvalue(a) < -1e-10 || min_eigenvalue(b) < -1e-10)
    throw DomainError("apparatus_unitary: family is not a joint contraction");
  cmat g((n + 1) * d, (n + 1) * d);
  g.topLeftCorner(d, d) = hermitian_sqrt(a);
  g.topRightCorner(d, n * d) = f.adjoint();
  g.bottomLeftCorner(n * d, d) = f;
  g.bottomRightCorner(n * d, n * d) = -hermitian_sqrt(b);
  return g;
}

cmat trace_apparatus(const cmat& big, int system_dim) {
  const int a = apparatus_dim(big, system_dim);
  cmat out = cmat::Zero(system_dim, system_dim);
  for (int k = 0; k < a; ++k) out += big.block(k * system_dim, k * system_dim, system_dim, system_dim);
  return out;
}

cmat outcome_block(const cmat& unitary, int system_dim, int k) {
  const int a = apparatus_dim(unitary, system_dim);
  if (k < 0 || k >= a) throw DomainError("outcome index out of range");
  return unitary.block(k * system_dim, 0, system_dim, system_dim);
}

KrausFamily outcome_family(const cmat& unitary, int system_dim) {
  KrausFamily fam;
  const int a = apparatus_dim(unitary, system_dim);
  for (int k = 0; k < a; ++k) fam.ops.push_back(outcome_block(unitary, system_dim, k));
  return fam;
}

cvec posterior(const cvec& psi, int k, const KrausFamily& family, double eps) {
  if (k < 0 || k >= static_cast<int>(family.ops.size())) throw DomainError("posterior: outcome out of range");
  const cmat& e = family.ops[static_cast<size_t>(k)];
  if (e.cols() != psi.size()) throw DimensionError("posterior: state has the wrong size");
  cvec out = e * psi;
  const double norm = out.norm();
  if (norm <= eps) throw DomainError("posterior: conditioning on an impossible outcome");
  return out / norm;
}

bool is_orthoprojector(const cmat& p, double tol) {
  if (p.rows() != p.cols()) return false;
  return frobenius(p * p - p) <= tol && frobenius(p - p.adjoint()) <= tol;
}

cmat inf_projector(const cmat& p, const cmat& m, double tol) {
  if (p.rows() != m.rows() || p.cols() != m.cols()) throw DimensionError("inf_projector: size mismatch");
  if (!is_orthoprojector(p, tol) || !is_orthoprojector(m, tol))
    throw DomainError("inf_projector: inputs must be orthoprojectors");
  const long dim = p.rows();
  const cmat sum = 2.0 * cmat::Identity(dim, dim) - p - m;
  Eigen::SelfAdjointEigenSolver<cmat> eig(0.5 * (sum + sum.adjoint()));
  cmat out = cmat::Zero(dim, dim);
  for (long i = 0; i < dim; ++i)
    if (eig.eigenvalues()(i) <= 1e-8) out += eig.eigenvectors().col(i) * eig.eigenvectors().col(i).adjoint();
  return out;
}

CausalityReport causality_check(const cmat& p, const cmat& m, const cmat& rho, double tol) {
  const long dim = p.rows();
  if (rho.rows() != dim || rho.cols() != dim) throw DimensionError("causality_check: state size");
  CausalityReport rep;
  const cmat other = cmat::Identity(dim, dim) - m;
  rep.inf = inf_projector(p, m, tol);
  const cmat inf_other = inf_projector(p, other, tol);
  auto pr = [&](const cmat& x) { return (rho * x).trace().real(); };
  rep.probability = pr(p);
  // Pr[P|X] Pr[X] = Pr[inf(P, X)] by Bayes; an event of probability zero
  // contributes nothing.
  const double pm = pr(m);
  const double po = pr(other);
  if (pm > kImpossibleOutcome) rep.weighted_sum += pr(rep.inf) / pm * pm;
  if (po > kImpossibleOutcome) rep.weighted_sum += pr(inf_other) / po * po;
  rep.defect = std::abs(rep.probability - rep.weighted_sum);
  rep.commutator_norm = frobenius(p * m - m * p);
  return rep;
}

OutputIntensities output_intensities(const cvec& psi, const cmat& unitary, double nu) {
  if (!(nu > 0.0)) throw DomainError("output_intensities: intensity must be positive");
  const int d = static_cast<int>(psi.size());
  const int a = apparatus_dim(unitary, d);
  OutputIntensities out;
  out.rates.resize(a);
  for (int k = 0; k < a; ++k) out.rates(k) = nu * (outcome_block(unitary, d, k) * psi).squaredNorm();
  out.metric = out.rates;
  out.sum_residual = std::abs(out.rates.sum() - nu);
  out.rescaled = (out.rates.array() > 0.0).all();
  if (out.rescaled) {
    cmat scaled = unitary * std::sqrt(nu);
    cmat weight = cmat::Zero(a * d, a * d);
    for (int k = 0; k < a; ++k) {
      scaled.middleRows(k * d, d) /= std::sqrt(out.rates(k));
      weight.block(k * d, k * d, d, d) = out.rates(k) * identity(d);
    }
    out.rescaled_residual = frobenius(scaled.adjoint() * weight * scaled / nu - identity(a * d));
  }
  return out;
}

FreeEvolution::FreeEvolution(const cmat& hamiltonian) {
  if (!is_hermitian(hamiltonian, 1e-12)) throw DomainError("FreeEvolution: Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<cmat> eig(hamiltonian);
  vectors_ = eig.eigenvectors();
  values_ = eig.eigenvalues();
}

cmat FreeEvolution::matrix(double t) const {
  cvec phases(values_.size());
  for (Eigen::Index i = 0; i < values_.size(); ++i) phases(i) = std::exp(cplx(0.0, -values_(i) * t));
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

cvec FreeEvolution::apply(const cvec& psi, double t) const {
  cvec coeffs = vectors_.adjoint() * psi;
  for (Eigen::Index i = 0; i < values_.size(); ++i) coeffs(i) *= std::exp(cplx(0.0, -values_(i) * t));
  return vectors_ * coeffs;
}

void TrajectoryModel::validate() const {
  const int d = system_dim();
  if (!is_hermitian(hamiltonian, 1e-12)) throw DomainError("trajectory model: Hamiltonian is not Hermitian");
  const int a = apparatus_dim(unitary, d);
  if (frobenius(unitary.adjoint() * unitary - identity(a * d)) > 1e-10)
    throw DomainError("trajectory model: interaction is not unitary");
  if (nu < 0.0) throw DomainError("trajectory model: intensity must be non-negative");
  if (!(horizon > 0.0)) throw DomainError("trajectory model: horizon must be positive");
  if (psi0.size() != d) throw DimensionError("trajectory model: state has the wrong size");
  if (std::abs(psi0.norm() - 1.0) > 1e-12) throw DomainError("trajectory model: state is not normalized");
}

TrajectoryRecord sample_trajectory(const TrajectoryModel& model, std::uint64_t seed) {
  model.validate();
  const FreeEvolution free(model.hamiltonian);
  const int d = model.system_dim();
  const int a = static_cast<int>(model.unitary.rows() / d);
  Rng rng(seed);
  TrajectoryRecord rec;
  rec.seed = seed;
  rec.nu = model.nu;
  rec.horizon = model.horizon;
  cvec psi = model.psi0;
  double now = 0.0;
  std::vector<cvec> branches(static_cast<size_t>(a));
  std::vector<double> probs(static_cast<size_t>(a));
  while (model.nu > 0.0) {
    const double wait = -std::log(1.0 - uniform01(rng)) / model.nu;
    if (now + wait >= model.horizon) break;
    psi = free.apply(psi, wait);
    now += wait;
    int last_possible = -1;
    for (int k = 0; k < a; ++k) {
      branches[static_cast<size_t>(k)] = outcome_block(model.unitary, d, k) * psi;
      probs[static_cast<size_t>(k)] = branches[static_cast<size_t>(k)].squaredNorm();
      if (probs[static_cast<size_t>(k)] > kImpossibleOutcome) last_possible = k;
    }
    if (last_possible < 0) throw DomainError("sample_trajectory: every outcome is impossible");
    const double r = uniform01(rng);
    int chosen = last_possible;  // remainder bucket absorbs rounding
    double acc = 0.0;
    for (int k = 0; k < last_possible; ++k) {
      acc += probs[static_cast<size_t>(k)];
      if (r < acc && probs[static_cast<size_t>(k)] > kImpossibleOutcome) {
        chosen = k;
        break;
      }
    }
    psi = branches[static_cast<size_t>(chosen)] / std::sqrt(probs[static_cast<size_t>(chosen)]);
    rec.jumps.push_back({now, chosen, probs[static_cast<size_t>(chosen)]});
  }
  psi = free.apply(psi, model.horizon - now);
  rec.final_state = psi / psi.norm();
  return rec;
}

cvec trajectory_state(const TrajectoryModel& model, const FreeEvolution& free,
                      const TrajectoryRecord& record, double t) {
  const int d = model.system_dim();
  cvec psi = model.psi0;
  double now = 0.0;
  for (const Jump& j : record.jumps) {
    if (j.time > t) break;
    psi = outcome_block(model.unitary, d, j.outcome) * free.apply(psi, j.time - now);
    psi /= psi.norm();
    now = j.time;
  }
  psi = free.apply(psi, t - now);
  return psi / psi.norm();
}

std::vector<TrajectoryRecord> sample_ensemble(const TrajectoryModel& model, std::uint64_t seed,
                                              int count, int workers) {
  model.validate();
  std::vector<TrajectoryRecord> out(static_cast<size_t>(count));
  parallel_for(count, workers, [&](int i) {
    out[static_cast<size_t>(i)] = sample_trajectory(model, seed ^ static_cast<std::uint64_t>(i));
  });
  return out;
}

std::vector<cmat> ensemble_average(const TrajectoryModel& model,
                                   const std::vector<TrajectoryRecord>& records,
                                   const std::vector<double>& times, int workers) {
  if (records.empty()) throw DomainError("ensemble_average: no records");
  for (const auto& r : records)
    if (r.nu != model.nu || r.horizon != model.horizon)
      throw DomainError("ensemble_average: records come from different models");
  if (!std::is_sorted(times.begin(), times.end())) throw DomainError("ensemble_average: times must be sorted");
  const FreeEvolution free(model.hamiltonian);
  const int d = model.system_dim();
  const int count = static_cast<int>(records.size());
  // Per-record states first, then a reduction in index order.
  std::vector<std::vector<cvec>> states(static_cast<size_t>(count));
  parallel_for(count, workers, [&](int i) {
    auto& row = states[static_cast<size_t>(i)];
    row.reserve(times.size());
    for (double t : times) row.push_back(trajectory_state(model, free, records[static_cast<size_t>(i)], t));
  });
  std::vector<cmat> out(times.size(), cmat::Zero(d, d));
  for (int i = 0; i < count; ++i)
    for (size_t q = 0; q < times.size(); ++q) {
      const cvec& v = states[static_cast<size_t>(i)][q];
      out[q] += v * v.adjoint();
    }
  for (cmat& m : out) m /= static_cast<double>(count);
  return out;
}

std::vector<cmat> ensemble_reference(const TrajectoryModel& model, const std::vector<double>& times,
                                     int steps_per_unit) {
  model.validate();
  const int d = model.system_dim();
  const int a = static_cast<int>(model.unitary.rows() / d);
  std::vector<cmat> jumps;
  for (int k = 0; k < a; ++k) jumps.push_back(std::sqrt(model.nu) * outcome_block(model.unitary, d, k));
  return lindblad_reference_series(model.hamiltonian, jumps, model.psi0 * model.psi0.adjoint(), times,
                                   steps_per_unit);
}

double trace_distance(const cmat& a, const cmat& b) {
  const cmat diff = a - b;
  Eigen::SelfAdjointEigenSolver<cmat> eig(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

ChainVector measurement_state(const cmat& hamiltonian, const cmat& unitary, const cvec& psi,
                              const Grid& grid, int nmax, double t) {
  const int d = static_cast<int>(psi.size());
  const int f = apparatus_dim(unitary, d);
  const FreeEvolution free(hamiltonian);
  const int below = grid.count_below(t);
  ChainVector out(grid, nmax, f, d);
  for (const Chain& chain : enumerate_chains(0, grid.n_points, nmax)) {
    const int m = static_cast<int>(chain.size());
    const long inner = ipow(f, m);
    cvec v = cvec::Zero(d * inner);
    for (int s = 0; s < d; ++s) v(s * inner) = psi(s);
    double now = 0.0;
    for (int p = 0; p < points_before(chain, below); ++p) {
      const double x = grid.point(chain[static_cast<size_t>(p)]);
      v = apply_system(v, d, free.matrix(x - now));
      v = apply_slot(v, d, f, m, p, unitary).col(0);
      now = x;
    }
    out.set(chain, apply_system(v, d, free.matrix(t - now)));
  }
  return out;
}

BlockOperator measurement_generator(const cmat& hamiltonian, const cmat& unitary) {
  const int d = static_cast<int>(hamiltonian.rows());
  const int f = apparatus_dim(unitary, d);
  BlockOperator g = BlockOperator::identity(f, d);
  for (int a = 0; a < f; ++a)
    for (int b = 0; b < f; ++b) g.set_block(1 + a, 1 + b, unitary.block(a * d, b * d, d, d));
  g.set_block(0, f + 1, cplx(0.0, -1.0) * hamiltonian);
  return g;
}

ChainVector measurement_state_dilated(const cmat& hamiltonian, const cmat& unitary, const cvec& psi,
                                      const Grid& grid, int nmax, double t) {
  const int d = static_cast<int>(psi.size());
  const int f = apparatus_dim(unitary, d);
  ChainVector initial(grid, nmax, f, d);
  for (const Chain& chain : enumerate_chains(0, grid.n_points, nmax)) {
    const long inner = ipow(f, static_cast<int>(chain.size()));
    cvec v = cvec::Zero(d * inner);
    for (int s = 0; s < d; ++s) v(s * inner) = psi(s);
    initial.set(chain, v);
  }
  const BlockOperator g = measurement_generator(hamiltonian, unitary);
  const auto op = BlockDiagOperator::product(
      grid, std::vector<BlockOperator>(static_cast<size_t>(grid.n_points), g), 0, grid.count_below(t));
  return project(op.apply(embed(initial)));
}

ChainVector filtered_counting_state(const ChainVector& psi_t, const std::vector<int>& outcomes, double t) {
  if (psi_t.minkowski()) throw DimensionError("filtered_counting_state: expects the apparatus fiber");
  const int f = psi_t.fiber();
  const int d = psi_t.system_dim();
  for (int k : outcomes)
    if (k < 0 || k >= f) throw DomainError("filtered_counting_state: outcome out of range");
  const int below = psi_t.grid().count_below(t);
  const int len = static_cast<int>(outcomes.size());
  if (len > std::min(below, psi_t.nmax()))
    throw DomainError("filtered_counting_state: more outcomes than chain points before t");
  ChainVector out(psi_t.grid(), psi_t.nmax(), f, d);
  for (const auto& [chain, v] : psi_t.values()) {
    if (points_before(chain, below) != len) continue;
    const int m = static_cast<int>(chain.size());
    cmat w = v;
    for (int p = 0; p < len; ++p)
      w = apply_slot(w, d, f, m, p, fiber_projector(f, d, outcomes[static_cast<size_t>(p)]));
    out.set(chain, w.col(0));
  }
  return out;
}

ChainVector counting_number(const ChainVector& chi, int k, double t) {
  const int f = chi.fiber();
  const int d = chi.system_dim();
  if (k < 0 || k >= f) throw DomainError("counting_number: label out of range");
  const int below = chi.grid().count_below(t);
  ChainVector out(chi.grid(), chi.nmax(), f, d, chi.minkowski());
  for (const auto& [chain, v] : chi.values()) {
    const int m = static_cast<int>(chain.size());
    cvec w = cvec::Zero(v.size());
    for (int p = 0; p < points_before(chain, below); ++p)
      w += apply_slot(v, d, f, m, p, fiber_projector(f, d, k)).col(0);
    out.set(chain, w);
  }
  return out;
}

int max_schmidt_rank(const ChainVector& chi, double tol) {
  const int f = chi.fiber();
  const int d = chi.system_dim();
  int rank = 0;
  for (const auto& [chain, v] : chi.values()) {
    const int m = static_cast<int>(chain.size());
    const long inner = ipow(f, m);
    for (int p = 0; p < m; ++p) {
      const cvec moved = move_slot_to_front(v, d, f, m, p);
      const long rest = inner / f;
      cmat split(f, d * rest);
      for (int s = 0; s < d; ++s)
        for (int a = 0; a < f; ++a)
          for (long r = 0; r < rest; ++r) split(a, s * rest + r) = moved(s * inner + a * rest + r);
      Eigen::JacobiSVD<cmat> svd(split);
      const auto& sv = svd.singularValues();
      if (sv.size() == 0 || sv(0) <= tol) continue;
      int here = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * std::max(1.0, sv(0))) ++here;
      rank = std::max(rank, here);
    }
  }
  return rank;
}

cvec contract_fibers(const cvec& value, int system_dim, int fiber, int points) {
  const long inner = ipow(fiber, points);
  if (value.size() != system_dim * inner) throw DimensionError("contract_fibers: value size");
  cvec out(system_dim);
  for (int s = 0; s < system_dim; ++s) out(s) = value.segment(s * inner, inner).sum();
  return out;
}

BlockOperator poisson_weyl_generator(const cmat& hamiltonian, const cmat& unitary, const cvec& g) {
  const int d = static_cast<int>(hamiltonian.rows());
  const BlockOperator z = weyl_factor(g, d);
  return pseudo_adjoint(z) * measurement_generator(hamiltonian, unitary) * z;
}

BlockOperator poisson_weyl_closed_form(const cmat& hamiltonian, const cmat& unitary, const cvec& g) {
  const int d = static_cast<int>(hamiltonian.rows());
  const int f = apparatus_dim(unitary, d);
  if (g.size() != f) throw DimensionError("poisson_weyl: shift vector has the wrong size");
  const cmat j = unitary - identity(f * d);
  cmat lift = cmat::Zero(f * d, d);
  for (int a = 0; a < f; ++a) lift.block(a * d, 0, d, d) = g(a) * identity(d);
  const cmat row = lift.adjoint() * j;  // g* J
  const cmat col = j * lift;            // J g
  BlockOperator out = measurement_generator(hamiltonian, unitary);
  for (int a = 0; a < f; ++a) {
    out.set_block(0, 1 + a, row.block(0, a * d, d, d));
    out.set_block(1 + a, f + 1, col.block(a * d, 0, d, d));
  }
  out.set_block(0, f + 1, lift.adjoint() * col - cplx(0.0, 1.0) * hamiltonian);
  return out;
}

}  // namespace eventum
