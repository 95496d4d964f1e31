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


#include "eventum/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace eventum {

namespace {

int window_end(const Grid& grid, double t) {
  if (t < 0.0) throw DomainError("time must be non-negative");
  return grid.count_below(t);
}

void require_hermitian(const cmat& h) {
  if (h.rows() != h.cols()) throw DimensionError("Hamiltonian must be square");
  if (!is_hermitian(h, 1e-12)) throw DomainError("Hamiltonian is not Hermitian");
}

cmat lindblad_rhs(const cmat& h, const std::vector<cmat>& jumps, const cmat& rho) {
  const cplx i(0.0, 1.0);
  cmat out = -i * (h * rho - rho * h);
  for (const cmat& l : jumps) {
    const cmat ll = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ll * rho + rho * ll);
  }
  return out;
}

cmat replaced_row(const BlockOperator& g) {
  const int n = g.noise_dim();
  const int d = g.system_dim();
  cmat row = isometry_row(g);
  for (int i = 0; i < n; ++i) row.block(0, (1 + i) * d, d, d) = g.block(1 + i, n + 1);
  return row;
}

}  // namespace

BlockOperator schrodinger_generator(const cmat& hamiltonian) {
  require_hermitian(hamiltonian);
  const int d = static_cast<int>(hamiltonian.rows());
  BlockOperator g = BlockOperator::identity(0, d);
  g.set_block(0, 1, cplx(0.0, -1.0) * hamiltonian);
  return g;
}

BlockOperator lindblad_generator(const cmat& hamiltonian, const std::vector<cmat>& jumps,
                                 const cmat& scattering) {
  require_hermitian(hamiltonian);
  const int d = static_cast<int>(hamiltonian.rows());
  const int n = static_cast<int>(jumps.size());
  for (const cmat& l : jumps)
    if (l.rows() != d || l.cols() != d) throw DimensionError("jump operator has the wrong size");
  cmat s = scattering.size() == 0 ? identity(n * d) : scattering;
  if (s.rows() != n * d || s.cols() != n * d) throw DimensionError("scattering block has the wrong size");
  if (n > 0 && frobenius(s.adjoint() * s - identity(n * d)) > 1e-10)
    throw DomainError("scattering block is not unitary");

  BlockOperator g = BlockOperator::identity(n, d);
  cmat damping = cmat::Zero(d, d);
  for (int k = 0; k < n; ++k) {
    g.set_block(1 + k, n + 1, jumps[static_cast<size_t>(k)]);
    damping += jumps[static_cast<size_t>(k)].adjoint() * jumps[static_cast<size_t>(k)];
    for (int i = 0; i < n; ++i) g.set_block(1 + k, 1 + i, s.block(k * d, i * d, d, d));
  }
  for (int i = 0; i < n; ++i) {
    cmat entry = cmat::Zero(d, d);
    for (int k = 0; k < n; ++k)
      entry -= jumps[static_cast<size_t>(k)].adjoint() * s.block(k * d, i * d, d, d);
    g.set_block(0, 1 + i, entry);
  }
  g.set_block(0, n + 1, cplx(0.0, -1.0) * hamiltonian - 0.5 * damping);
  return g;
}

cmat jump_column(const BlockOperator& g) {
  const int n = g.noise_dim();
  const int d = g.system_dim();
  cmat col(n * d, d);
  for (int k = 0; k < n; ++k) col.block(k * d, 0, d, d) = g.block(1 + k, n + 1);
  return col;
}

cmat isometry_row(const BlockOperator& g) {
  return g.matrix().topRows(g.system_dim());
}

cmat chronological_product(const Grid& grid, const std::vector<BlockOperator>& per_point,
                           const Chain& chain, int lo, int hi) {
  if (!is_valid_chain(chain, grid.n_points)) throw DomainError("chronological_product: invalid chain");
  return BlockDiagOperator::product(grid, per_point, lo, hi).on_chain(chain);
}

std::vector<BlockOperator> constant_family(const BlockOperator& g, int n_points) {
  return std::vector<BlockOperator>(static_cast<size_t>(n_points), g);
}

ChainVector propagate_counting(const std::vector<BlockOperator>& per_point, const ChainVector& psi0,
                               double t) {
  if (per_point.empty()) throw DimensionError("propagate_counting: no generators");
  if (!psi0.minkowski() || psi0.fiber() != per_point.front().external_dim() ||
      psi0.system_dim() != per_point.front().system_dim())
    throw DimensionError("propagate_counting: state lives on a different fiber");
  const int hi = window_end(psi0.grid(), t);
  return BlockDiagOperator::product(psi0.grid(), per_point, 0, hi).apply(psi0);
}

cmat project_unitary(const BlockOperator& g, const Grid& grid, double t, int nmax, ProjectionPath path) {
  return project_unitary(constant_family(g, grid.n_points), grid, t, nmax, path);
}

cmat project_unitary(const std::vector<BlockOperator>& per_point, const Grid& grid, double t,
                     int nmax, ProjectionPath path) {
  if (static_cast<int>(per_point.size()) != grid.n_points)
    throw DimensionError("project_unitary: one generator per grid point is required");
  const int n = per_point.front().noise_dim();
  const int d = per_point.front().system_dim();
  const int hi = window_end(grid, t);
  if (path == ProjectionPath::kStepMap) {
    cmat u = identity(d);
    for (int j = 0; j < hi; ++j)
      u = (identity(d) + grid.h() * per_point[static_cast<size_t>(j)].block(0, n + 1)) * u;
    return u;
  }
  const BlockDiagOperator op = BlockDiagOperator::product(grid, per_point, 0, hi);
  cmat u(d, d);
  for (int s = 0; s < d; ++s) {
    cvec e = cvec::Zero(d);
    e(s) = 1.0;
    ChainVector out = project(op.apply(embed(vacuum(grid, nmax, n, e))));
    u.col(s) = out.value(Chain{});
  }
  return u;
}

cmat master_derivative(const cmat& rho, const cmat& row) {
  const long d = rho.rows();
  if (rho.cols() != d || row.rows() != d || row.cols() % d != 0 || row.cols() / d < 2)
    throw DimensionError("master_derivative: row has the wrong size");
  const long f = row.cols() / d;
  cmat out = cmat::Zero(d, d);
  for (long a = 0; a < f; ++a) {
    long mirror = a == 0 ? f - 1 : (a == f - 1 ? 0 : a);
    out += row.block(0, a * d, d, d) * rho * row.block(0, mirror * d, d, d).adjoint();
  }
  return out;
}

BlockOperator tilde_involution(const BlockOperator& g) {
  return blockwise_dagger(pseudo_adjoint(g));
}

TraceoutResult traceout_lindblad(const cmat& hamiltonian, const std::vector<cmat>& jumps,
                                 const cvec& psi, const Grid& grid, int nmax, TraceoutRow row) {
  return traceout_lindblad(constant_family(lindblad_generator(hamiltonian, jumps), grid.n_points),
                           psi, grid, nmax, row);
}

TraceoutResult traceout_lindblad(const std::vector<BlockOperator>& per_point, const cvec& psi,
                                 const Grid& grid, int nmax, TraceoutRow row) {
  if (static_cast<int>(per_point.size()) != grid.n_points)
    throw DimensionError("traceout_lindblad: one generator per grid point is required");
  const int d = per_point.front().system_dim();
  if (psi.size() != d) throw DimensionError("traceout_lindblad: state has the wrong size");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw DomainError("traceout_lindblad: state is not normalized");
  if (nmax < 0 || nmax > grid.n_points) nmax = grid.n_points;
  const double h = grid.h();

  // levels[k] collects the chains with k interaction points.
  std::vector<cmat> levels(static_cast<size_t>(nmax + 1), cmat::Zero(d, d));
  levels[0] = psi * psi.adjoint();
  const bool truncated = nmax < grid.n_points;
  if (!truncated) levels.resize(1);

  TraceoutResult res;
  auto record = [&](double time) {
    cmat rho = cmat::Zero(d, d);
    for (const cmat& l : levels) rho += l;
    res.max_trace_error = std::max(res.max_trace_error, std::abs(rho.trace() - cplx(1.0)));
    res.max_hermiticity_error = std::max(res.max_hermiticity_error, frobenius(rho - rho.adjoint()));
    Eigen::SelfAdjointEigenSolver<cmat> eig(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    const double floor = eig.eigenvalues().minCoeff();
    res.min_eigenvalue = res.times.empty() ? floor : std::min(res.min_eigenvalue, floor);
    res.times.push_back(time);
    res.states.push_back(std::move(rho));
  };
  record(0.0);
  for (int j = 0; j < grid.n_points; ++j) {
    const BlockOperator& g = per_point[static_cast<size_t>(j)];
    const cmat v = row == TraceoutRow::kTilde ? isometry_row(tilde_involution(g)) : replaced_row(g);
    if (truncated) {
      for (int k = std::min(j + 1, nmax); k >= 1; --k)
        levels[static_cast<size_t>(k)] += h * master_derivative(levels[static_cast<size_t>(k - 1)], v);
    } else {
      levels[0] += h * master_derivative(levels[0], v);
    }
    record((j + 1) * h);
  }
  return res;
}

cmat lindblad_reference(const cmat& hamiltonian, const std::vector<cmat>& jumps, const cmat& rho0,
                        double t, int steps) {
  if (steps < 2) throw DomainError("lindblad_reference: need at least two steps");
  if (rho0.rows() != hamiltonian.rows() || rho0.cols() != hamiltonian.cols())
    throw DimensionError("lindblad_reference: state has the wrong size");
  const double dt = t / steps;
  cmat rho = rho0;
  for (int s = 0; s < steps; ++s) {
    const cmat k1 = lindblad_rhs(hamiltonian, jumps, rho);
    const cmat k2 = lindblad_rhs(hamiltonian, jumps, rho + 0.5 * dt * k1);
    const cmat k3 = lindblad_rhs(hamiltonian, jumps, rho + 0.5 * dt * k2);
    const cmat k4 = lindblad_rhs(hamiltonian, jumps, rho + dt * k3);
    rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

std::vector<cmat> lindblad_reference_series(const cmat& hamiltonian, const std::vector<cmat>& jumps,
                                            const cmat& rho0, const std::vector<double>& times,
                                            int steps_per_unit) {
  std::vector<cmat> out;
  out.reserve(times.size());
  cmat rho = rho0;
  double now = 0.0;
  for (double t : times) {
    if (t < now) throw DomainError("lindblad_reference_series: times must be sorted");
    if (t > now) {
      const int steps = std::max(2, static_cast<int>(std::ceil((t - now) * steps_per_unit)));
      rho = lindblad_reference(hamiltonian, jumps, rho, t - now, steps);
      now = t;
    }
    out.push_back(rho);
  }
  return out;
}

BoostReport boosted_dynamics_check(const cmat& hamiltonian, const std::vector<cmat>& jumps, double nu,
                                   double t, int grid_points, int nmax, const cmat& rho_in) {
  if (!(nu > 0.0)) throw DomainError("boosted_dynamics_check: intensity must be positive");
  const int d = static_cast<int>(hamiltonian.rows());
  const int n = static_cast<int>(jumps.size());
  BoostReport rep;

  const BlockOperator dt = time_increment(n, d);
  rep.increment_residual = (conjugate(LorentzBoost(nu, n), dt) - dt * cplx(nu)).matrix().cwiseAbs().maxCoeff();

  const Grid grid(t, grid_points);
  const BlockOperator g0 = schrodinger_generator(hamiltonian);
  const auto product = BlockDiagOperator::product(grid, constant_family(g0, grid.n_points));
  cvec phi(2);
  phi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const PoissonExpectation pe = poisson_expectation(
      product, 2.0 * nu, t, std::vector<cvec>(static_cast<size_t>(grid.n_points), phi), nmax);
  rep.expectation_matrix = pe.value;
  rep.expectation = pe.value(0, 0);
  rep.expectation_error = operator_norm(pe.value - unitary_evolution(hamiltonian, nu * t));
  rep.expectation_bound = pe.bound();

  cmat rho = rho_in;
  if (rho.size() == 0) {
    cvec v(d);
    for (int s = 0; s < d; ++s) v(s) = cplx(1.0 + s, 0.5 * s - 0.25);
    v.normalize();
    rho = v * v.adjoint();
  }
  const BlockOperator tilde = tilde_involution(lindblad_generator(hamiltonian, jumps));
  const cmat row = isometry_row(tilde);
  const cmat boosted = isometry_row(conjugate(LorentzBoost(nu, n), tilde));
  cmat expected = row;
  for (int i = 0; i < n; ++i) expected.block(0, (1 + i) * d, d, d) *= std::sqrt(nu);
  expected.block(0, (n + 1) * d, d, d) *= nu;
  rep.row_residual = frobenius(boosted - expected);
  const cmat lhs = master_derivative(rho, boosted);
  const cmat rhs = nu * master_derivative(rho, row);
  rep.derivative_residual = frobenius(lhs - rhs);

  const double scale = std::max(1.0, frobenius(rhs));
  rep.ok = rep.increment_residual == 0.0 && rep.expectation_error <= rep.expectation_bound &&
           rep.derivative_residual <= 1e-13 * scale && rep.row_residual <= 1e-13 * scale;
  return rep;
}

}  // namespace eventum
