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


// eventum command-line driver.
//
// Exit codes: 0 when every check passes, 1 when a numerical check fails,
// 2 for usage and configuration errors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eventum/chain.hpp"
#include "eventum/duhamel.hpp"
#include "eventum/dynamics.hpp"
#include "eventum/io.hpp"
#include "eventum/ito.hpp"
#include "eventum/measurement.hpp"
#include "eventum/minkowski.hpp"
#include "eventum/random.hpp"

namespace {

using namespace eventum;
using json = nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// EVENTUM_LOG: quiet, info (default) or debug.
int log_level() {
  static const int level = [] {
    const char* env = std::getenv("EVENTUM_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "quiet" || v == "0") return 0;
    if (v == "debug" || v == "2") return 2;
    return 1;
  }();
  return level;
}

void log(int level, const std::string& msg) {
  if (level <= log_level()) std::cerr << "[eventum] " << msg << '\n';
}

struct Overrides {
  std::string config;
  std::string out = "eventum_out";
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::optional<double> tol;
  std::optional<double> nu;
  std::optional<int> grid_n;
  std::optional<int> nmax;
  std::optional<int> mc_samples;
};

struct Config {
  cmat hamiltonian;
  std::vector<cmat> jumps;
  std::vector<cmat> kraus;
  cvec psi0;
  std::optional<BlockOperator> generator;
  double t_final = 1.0;
  int n_points = 64;
  int nmax = 12;
  double nu = 5.0;
  int samples = 10000;
  std::uint64_t seed = 1;
  std::optional<double> tolerance;
  int duhamel_instances = 200;
  int duhamel_max_chain = 4;
  int duhamel_grid = 8;
  int workers = 1;
  std::string out;
};

json default_config() {
  return {
      {"system",
       {{"hamiltonian", io::to_json(pauli_x())},
        {"jumps", json::array({io::to_json(sigma_minus())})},
        {"kraus", json::array({io::to_json(cmat(0.5 * sigma_minus()))})},
        {"psi0", json::array({json::array({1.0, 0.0}), json::array({0.0, 0.0})})}}},
      {"grid", {{"t_final", 1.0}, {"n_points", 64}, {"nmax", 12}}},
      {"nu", 5.0},
      {"monte_carlo", {{"samples", 10000}, {"seed", 1}}},
      {"duhamel", {{"instances", 200}, {"max_chain", 4}, {"grid_points", 8}}},
  };
}

Config load_config(const Overrides& ov) {
  json j = default_config();
  if (!ov.config.empty()) {
    std::ifstream in(ov.config);
    if (!in) throw ConfigError("cannot open config file " + ov.config);
    json user;
    try {
      user = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config parse failure: ") + e.what());
    }
    if (!user.is_object()) throw ConfigError("config must be a JSON object");
    j.merge_patch(user);
  }
  Config c;
  try {
    const json& sys = j.at("system");
    c.hamiltonian = io::matrix_from_json(sys.at("hamiltonian"));
    for (const auto& m : sys.value("jumps", json::array())) c.jumps.push_back(io::matrix_from_json(m));
    for (const auto& m : sys.value("kraus", json::array())) c.kraus.push_back(io::matrix_from_json(m));
    c.psi0 = io::vector_from_json(sys.at("psi0"));
    if (j.contains("generator")) c.generator = io::block_operator_from_json(j.at("generator"));
    c.t_final = j.at("grid").value("t_final", 1.0);
    c.n_points = j.at("grid").value("n_points", 64);
    c.nmax = j.at("grid").value("nmax", 12);
    c.nu = j.value("nu", 5.0);
    c.samples = j.at("monte_carlo").value("samples", 10000);
    c.seed = j.at("monte_carlo").value("seed", std::uint64_t{1});
    if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
    c.duhamel_instances = j.at("duhamel").value("instances", 200);
    c.duhamel_max_chain = j.at("duhamel").value("max_chain", 4);
    c.duhamel_grid = j.at("duhamel").value("grid_points", 8);
    c.out = j.value("output", ov.out);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  } catch (const DimensionError& e) {
    throw ConfigError(std::string("config value error: ") + e.what());
  }
  if (ov.seed) c.seed = *ov.seed;
  if (ov.tol) c.tolerance = *ov.tol;
  if (ov.nu) c.nu = *ov.nu;
  if (ov.grid_n) c.n_points = *ov.grid_n;
  if (ov.nmax) c.nmax = *ov.nmax;
  if (ov.mc_samples) c.samples = *ov.mc_samples;
  if (!ov.out.empty() && ov.out != "eventum_out") c.out = ov.out;
  c.workers = std::max(1, ov.workers);

  const long d = c.hamiltonian.rows();
  if (c.hamiltonian.cols() != d) throw ConfigError("hamiltonian must be square");
  if (!is_hermitian(c.hamiltonian, 1e-12)) throw ConfigError("hamiltonian is not Hermitian");
  for (const auto& m : c.jumps)
    if (m.rows() != d || m.cols() != d) throw ConfigError("jump operators must match the hamiltonian size");
  for (const auto& m : c.kraus)
    if (m.rows() != d || m.cols() != d) throw ConfigError("Kraus operators must match the hamiltonian size");
  if (c.psi0.size() != d) throw ConfigError("psi0 must match the hamiltonian size");
  if (std::abs(c.psi0.norm() - 1.0) > 1e-10) throw ConfigError("psi0 must be normalized");
  if (c.generator && c.generator->system_dim() != d) throw ConfigError("generator system_dim mismatch");
  if (!(c.t_final > 0.0) || c.n_points < 1 || c.nmax < 0) throw ConfigError("grid values out of range");
  if (c.nu < 0.0) throw ConfigError("nu must be non-negative");
  if (c.samples < 1) throw ConfigError("monte_carlo samples must be positive");
  if (c.duhamel_instances < 1 || c.duhamel_max_chain < 0 || c.duhamel_grid < c.duhamel_max_chain)
    throw ConfigError("duhamel values out of range");
  return c;
}

std::filesystem::path output_dir(const Config& c) {
  std::filesystem::path dir(c.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + c.out);
  return dir;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

int emit_report(const Config& c, const std::string& name, const json& report, bool ok) {
  const std::string text = report.dump(2);
  std::cout << text << '\n';
  open_output(output_dir(c) / (name + ".json")) << text << '\n';
  return ok ? kExitPass : kExitNumeric;
}

// verify-algebra ------------------------------------------------------------

// dt, dA, dA^dag, dN at n = 1 and the written-out product table.
int hp_expected(int a, int b) {
  enum { kDt, kA, kAdag, kN, kZero };
  if (a == kA && b == kAdag) return kDt;
  if (a == kN && b == kN) return kN;
  if (a == kA && b == kN) return kA;
  if (a == kN && b == kAdag) return kAdag;
  return kZero;
}

int cmd_verify_algebra(const Config& c) {
  const double tol = c.tolerance.value_or(1e-12);
  const int d = static_cast<int>(c.hamiltonian.rows());
  const std::vector<ItoElement> basis = {ItoElement::basis_dt(1, d), ItoElement::basis_annihilation(0, 1, d),
                                         ItoElement::basis_creation(0, 1, d),
                                         ItoElement::basis_counting(0, 0, 1, d)};
  int passed = 0;
  double hp_worst = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const ItoElement ab = ito_product(basis[a], basis[b]);
      const int e = hp_expected(a, b);
      const ItoElement expected = e < 4 ? basis[e] : ItoElement(1, d);
      const double r = std::max(ab.distance(expected),
                                frobenius(represent(basis[a]).matrix() * represent(basis[b]).matrix() -
                                          represent(ab).matrix()));
      hp_worst = std::max(hp_worst, r);
      if (r <= tol) ++passed;
    }

  Rng rng(c.seed);
  double hom = 0.0;
  double star_worst = 0.0;
  double involution = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    ItoElement x(2, 2);
    ItoElement y(2, 2);
    for (int l = 0; l <= 2; ++l)
      for (int u = 0; u <= 2; ++u) {
        x.coef(l, u) = random_matrix(2, 2, rng);
        y.coef(l, u) = random_matrix(2, 2, rng);
      }
    const BlockOperator px = represent(x);
    const BlockOperator py = represent(y);
    hom = std::max(hom, frobenius((px * py - represent(ito_product(x, y))).matrix()));
    star_worst = std::max(star_worst, frobenius((represent(star(x)) - pseudo_adjoint(px)).matrix()));
    involution = std::max(involution, frobenius((pseudo_adjoint(pseudo_adjoint(px)) - px).matrix()));
    involution = std::max(involution,
                          frobenius((pseudo_adjoint(px * py) - pseudo_adjoint(py) * pseudo_adjoint(px)).matrix()));
  }

  json unitarity = json::array();
  bool unitary_ok = true;
  auto check = [&](const std::string& name, const BlockOperator& g) {
    const PseudoUnitarityReport r = is_pseudo_unitary(g, tol);
    unitary_ok = unitary_ok && r.residual <= tol;
    unitarity.push_back({{"name", name},
                         {"residual", r.residual},
                         {"noise_block_residual", r.noise_block_residual},
                         {"row_residual", r.row_residual},
                         {"corner_residual", r.corner_residual},
                         {"pass", r.residual <= tol}});
  };
  check("lindblad_generator", lindblad_generator(c.hamiltonian, c.jumps));
  check("schrodinger_generator", schrodinger_generator(c.hamiltonian));
  if (c.generator) check("config_generator", *c.generator);

  const bool ok = passed == 16 && hom <= tol && star_worst <= tol && involution <= tol && unitary_ok;
  const json report = {
      {"hp_products", {{"passed", passed}, {"total", 16}, {"max_residual", hp_worst}}},
      {"homomorphism", {{"trials", 100}, {"max_residual", hom}}},
      {"star", {{"max_residual", star_worst}}},
      {"pseudo_adjoint", {{"max_residual", involution}}},
      {"pseudo_unitarity", unitarity},
      {"tolerance", tol},
      {"ok", ok}};
  return emit_report(c, "verify_algebra", report, ok);
}

// dilate --------------------------------------------------------------------

int cmd_dilate(const Config& c) {
  const double tol = c.tolerance.value_or(1e-2);
  const int d = static_cast<int>(c.hamiltonian.rows());
  const double t = c.t_final;
  const cmat exact = unitary_evolution(c.hamiltonian, t);
  const BlockOperator g0 = schrodinger_generator(c.hamiltonian);
  const std::vector<int> grids = {c.n_points, 2 * c.n_points, 4 * c.n_points};
  const auto dir = output_dir(c);
  auto table_out = open_output(dir / "dilate_convergence.csv");
  io::CsvWriter table(table_out, {"quantity", "path", "n_points", "h", "error", "order"});

  auto emit_rows = [&](const std::string& quantity, const std::string& path, const std::vector<double>& errs) {
    for (size_t i = 0; i < errs.size(); ++i) {
      const double order = i == 0 ? std::nan("") : std::log2(errs[i - 1] / errs[i]);
      table.cell(quantity).cell(path).cell(static_cast<long>(grids[i])).cell(t / grids[i]).cell(errs[i]);
      table.cell(i == 0 ? std::string("") : io::format_double(order)).end_row();
    }
  };

  std::vector<double> step_errs;
  std::vector<double> exp_errs;
  json enumeration = json::array();
  for (int n : grids) {
    const Grid grid(t, n);
    step_errs.push_back(operator_norm(project_unitary(g0, grid, t, n, ProjectionPath::kStepMap) - exact));
    // Analytic exponential on the same cells.
    cmat u = identity(d);
    const FreeEvolution free(c.hamiltonian);
    for (int j = 0; j < n; ++j) u = free.matrix(grid.h()) * u;
    exp_errs.push_back(operator_norm(u - exact));
    try {
      const cmat ue = project_unitary(g0, grid, t, c.nmax, ProjectionPath::kEnumeration);
      enumeration.push_back({{"n_points", n}, {"error", operator_norm(ue - exact)}});
    } catch (const BudgetError& e) {
      log(1, "enumeration path at n_points=" + std::to_string(n) + ": " + e.what() + "; step map used");
      enumeration.push_back({{"n_points", n}, {"skipped", "chain budget exceeded"}});
    }
  }
  emit_rows("schrodinger", "step_map", step_errs);
  emit_rows("schrodinger", "exponential", exp_errs);

  std::vector<double> lind_errs;
  TraceoutResult finest;
  TraceoutResult coarser;
  std::vector<cmat> reference;
  for (size_t i = 0; i < grids.size(); ++i) {
    const Grid grid(t, grids[i]);
    TraceoutResult res = traceout_lindblad(c.hamiltonian, c.jumps, c.psi0, grid);
    if (reference.empty() || i + 1 == grids.size())
      reference = lindblad_reference_series(c.hamiltonian, c.jumps, c.psi0 * c.psi0.adjoint(), res.times, 10000);
    lind_errs.push_back(trace_distance(res.states.back(), reference.back()));
    if (i + 1 == grids.size()) finest = std::move(res);
    else if (i + 2 == grids.size()) coarser = std::move(res);
  }
  emit_rows("lindblad", "step_map", lind_errs);

  auto series_out = open_output(dir / "dilate_series.csv");
  io::CsvWriter series(series_out, {"time", "observable", "re", "im", "error_bound"});
  for (size_t q = 0; q < finest.times.size(); q += 2) {
    // First-order estimate |rho_h - rho_2h| at the shared grid times.
    const cmat& rho = finest.states[q];
    const cmat& coarse = coarser.states[q / 2];
    const double bound = frobenius(rho - coarse);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        series.cell(finest.times[q]).cell("rho_" + std::to_string(i) + std::to_string(k)).cell(rho(i, k).real())
            .cell(rho(i, k).imag()).cell(bound).end_row();
  }

  if (finest.min_eigenvalue < 0.0)
    log(1, "step map left a negative eigenvalue " + io::format_double(finest.min_eigenvalue) +
               " (first-order positivity loss, not clipped)");
  // With H = 0 the step map is exact and there is no order to measure.
  const bool exact_path = step_errs.back() <= 1e-13;
  const double order = std::log2(step_errs[1] / step_errs[2]);
  const bool ok = lind_errs.back() <= tol && (exact_path || std::abs(order - 1.0) <= 0.2) &&
                  finest.max_trace_error <= 1e-10;
  const json report = {{"schrodinger_step_map_errors", step_errs},
                       {"schrodinger_order", exact_path ? json(nullptr) : json(order)},
                       {"exponential_errors", exp_errs},
                       {"enumeration", enumeration},
                       {"lindblad_errors", lind_errs},
                       {"lindblad_order", std::log2(lind_errs[1] / lind_errs[2])},
                       {"trace_drift", finest.max_trace_error},
                       {"min_eigenvalue", finest.min_eigenvalue},
                       {"tolerance", tol},
                       {"ok", ok}};
  return emit_report(c, "dilate", report, ok);
}

// trajectories --------------------------------------------------------------

int cmd_trajectories(const Config& c) {
  const double tol = c.tolerance.value_or(0.05);
  if (c.kraus.empty()) throw ConfigError("trajectories need at least one Kraus operator");
  TrajectoryModel model;
  model.hamiltonian = c.hamiltonian;
  model.unitary = apparatus_unitary(KrausFamily{c.kraus});
  model.nu = c.nu;
  model.horizon = c.t_final;
  model.psi0 = c.psi0;
  const auto records = sample_ensemble(model, c.seed, c.samples, c.workers);
  log(2, "sampled " + std::to_string(records.size()) + " trajectories");
  const auto dir = output_dir(c);
  {
    auto out = open_output(dir / "trajectories.jsonl");
    for (const auto& r : records) out << io::to_json(r).dump() << '\n';
  }
  std::vector<double> times;
  for (int q = 0; q <= 20; ++q) times.push_back(c.t_final * q / 20.0);
  const auto avg = ensemble_average(model, records, times, c.workers);
  const auto ref = ensemble_reference(model, times);
  const int d = model.system_dim();
  const double error_bar = 1.0 / std::sqrt(static_cast<double>(c.samples));

  std::vector<std::string> header = {"time"};
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      header.push_back("rho_" + std::to_string(i) + std::to_string(k) + "_re");
      header.push_back("rho_" + std::to_string(i) + std::to_string(k) + "_im");
    }
  header.push_back("trace_distance");
  header.push_back("error_bar");
  auto out = open_output(dir / "trajectories_summary.csv");
  io::CsvWriter csv(out, header);
  double worst = 0.0;
  for (size_t q = 0; q < times.size(); ++q) {
    csv.cell(times[q]);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) csv.cell(avg[q](i, k).real()).cell(avg[q](i, k).imag());
    const double dist = trace_distance(avg[q], ref[q]);
    worst = std::max(worst, dist);
    csv.cell(dist).cell(error_bar).end_row();
  }
  double mean_jumps = 0.0;
  for (const auto& r : records) mean_jumps += static_cast<double>(r.jumps.size());
  mean_jumps /= static_cast<double>(records.size());
  const double expected = c.nu * c.t_final;
  const double sigma = std::sqrt(expected / static_cast<double>(records.size()));
  const bool ok = worst <= tol && std::abs(mean_jumps - expected) <= 3.0 * sigma + 1e-15;
  const json report = {{"samples", c.samples},
                       {"seed", c.seed},
                       {"max_trace_distance", worst},
                       {"error_bar", error_bar},
                       {"mean_jumps", mean_jumps},
                       {"expected_jumps", expected},
                       {"jump_sigma", sigma},
                       {"tolerance", tol},
                       {"ok", ok}};
  return emit_report(c, "trajectories", report, ok);
}

// duhamel -------------------------------------------------------------------

int cmd_duhamel(const Config& c) {
  const double tol = c.tolerance.value_or(1e-12);
  Rng rng(c.seed);
  const Grid grid(c.t_final, c.duhamel_grid);
  double single = 0.0;
  double multi = 0.0;
  for (int trial = 0; trial < c.duhamel_instances; ++trial) {
    const int n = trial % 2;
    const int d = 1 + (trial / 2) % 2;
    const DuhamelProblem p = random_duhamel_problem(grid, n, d, rng());
    Chain pool;
    for (int j = 0; j < grid.n_points; ++j) pool.push_back(j);
    for (int j = grid.n_points - 1; j > 0; --j) std::swap(pool[j], pool[rng() % (j + 1)]);
    pool.resize(rng() % (c.duhamel_max_chain + 1));
    std::sort(pool.begin(), pool.end());
    const cmat direct = direct_solve(p, c.t_final, pool);
    const double scale = std::max(1.0, frobenius(direct));
    single = std::max(single, frobenius(duhamel_solve(p, c.t_final, pool) - direct) / scale);
    multi = std::max(multi, frobenius(multiple_sum_kernel(p, c.t_final, pool) - direct) / scale);
  }

  // Measurement-perturbed Schrodinger dynamics on a small grid, untruncated.
  json projected = nullptr;
  bool projected_ok = true;
  if (!c.jumps.empty()) {
    const int d = static_cast<int>(c.hamiltonian.rows());
    const int n = static_cast<int>(c.jumps.size());
    const Grid small(c.t_final, 4);
    const double nu = c.nu > 0.0 ? c.nu : 1.0;
    BlockOperator k0 = BlockOperator::zero(n, d);
    k0.set_block(0, n + 1, cplx(0.0, 1.0) * c.hamiltonian);
    const BlockOperator interaction = conjugate(LorentzBoost(nu, n), lindblad_generator(cmat::Zero(d, d), c.jumps) -
                                                                          BlockOperator::identity(n, d));
    const std::vector<BlockOperator> ks(4, k0 * cplx(-1.0));
    const std::vector<BlockOperator> ls(4, interaction);
    const NoiseBasis basis(small, 4, n, d);
    const cmat sum_form = projected_duhamel(ks, ls, basis, c.t_final);
    std::vector<BlockOperator> combined(4, BlockOperator::identity(n, d) - k0 + interaction);
    const cmat direct = epsilon_morphism(BlockDiagOperator::product(small, combined), basis);
    double worst = 0.0;
    for (int s = 0; s < d; ++s) {
      cvec e = cvec::Zero(d);
      e(s) = 1.0;
      const cvec start = basis.flatten(vacuum(small, 4, n, e));
      worst = std::max(worst, (sum_form * start - direct * start).norm());
    }
    projected_ok = worst <= 1e-10;
    projected = {{"residual", worst}, {"grid_points", 4}, {"nu", nu}, {"pass", projected_ok}};
  }
  const bool ok = single <= tol && multi <= tol && projected_ok;
  const json report = {{"instances", c.duhamel_instances},
                       {"max_duhamel_minus_direct", single},
                       {"max_multiple_sum_minus_direct", multi},
                       {"projected", projected},
                       {"tolerance", tol},
                       {"ok", ok}};
  return emit_report(c, "duhamel", report, ok);
}

// boost ---------------------------------------------------------------------

int cmd_boost(const Config& c) {
  if (!(c.nu > 0.0)) throw ConfigError("boost needs a positive nu");
  const double tol = c.tolerance.value_or(5e-2);
  int points = c.n_points < 1024 ? 4096 : c.n_points;
  // The Poisson count has mean 2 nu t, so a fixed nmax can leave a useless
  // bound; grow it until the truncation tail is negligible.
  const double growth = 1.0 + 0.5 * operator_norm(c.hamiltonian);
  const double rate = 2.0 * c.nu * c.t_final;
  int nmax = c.nmax;
  while (nmax < 400 && std::exp(-rate) * exponential_tail(rate * growth, nmax) > 1e-9) ++nmax;
  if (nmax != c.nmax) log(1, "boost: nmax raised from " + std::to_string(c.nmax) + " to " + std::to_string(nmax));
  BoostReport r = boosted_dynamics_check(c.hamiltonian, c.jumps, c.nu, c.t_final, points, nmax);
  // The grid part of the bound is first order in h; refine until it leaves room.
  while (r.expectation_bound > 0.5 * tol && points < (1 << 18)) {
    points *= 2;
    r = boosted_dynamics_check(c.hamiltonian, c.jumps, c.nu, c.t_final, points, nmax);
  }
  const bool ok = r.ok && r.expectation_bound <= tol;
  const json report = {{"increment_residual", r.increment_residual},
                       {"expectation", io::to_json(r.expectation_matrix)},
                       {"expectation_error", r.expectation_error},
                       {"expectation_bound", r.expectation_bound},
                       {"derivative_residual", r.derivative_residual},
                       {"row_residual", r.row_residual},
                       {"grid_points", points},
                       {"nmax", nmax},
                       {"tolerance", tol},
                       {"ok", ok}};
  return emit_report(c, "boost", report, ok);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eventum: dilated quantum dynamics toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides ov;
  std::uint64_t seed = 0;
  double tol = 0.0;
  double nu = 0.0;
  int grid_n = 0;
  int nmax = 0;
  int samples = 0;
  app.add_option("--config", ov.config, "JSON experiment configuration");
  app.add_option("--out", ov.out, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  app.add_option("--workers", ov.workers, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  auto* tol_opt = app.add_option("--tol", tol, "pass/fail tolerance")->check(CLI::NonNegativeNumber);
  auto* nu_opt = app.add_option("--nu", nu, "Poisson intensity")->check(CLI::NonNegativeNumber);
  auto* grid_opt = app.add_option("--grid-n", grid_n, "grid points")->check(CLI::PositiveNumber);
  auto* nmax_opt = app.add_option("--nmax", nmax, "largest chain size")->check(CLI::NonNegativeNumber);
  auto* mc_opt = app.add_option("--mc-samples", samples, "Monte-Carlo trajectories")->check(CLI::PositiveNumber);

  using Command = int (*)(const Config&);
  Command chosen = nullptr;
  auto add = [&](const char* name, const char* help, Command cmd) {
    app.add_subcommand(name, help)->callback([&chosen, cmd] { chosen = cmd; });
  };
  add("verify-algebra", "Ito table, homomorphism and pseudo-unitarity suites", cmd_verify_algebra);
  add("dilate", "convergence of the projected dilation", cmd_dilate);
  add("trajectories", "Monte-Carlo counting trajectories against the master equation", cmd_trajectories);
  add("duhamel", "Duhamel solver equivalence on random instances", cmd_duhamel);
  add("boost", "Lorentz boost identities", cmd_boost);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (*seed_opt) ov.seed = seed;
  if (*tol_opt) ov.tol = tol;
  if (*nu_opt) ov.nu = nu;
  if (*grid_opt) ov.grid_n = grid_n;
  if (*nmax_opt) ov.nmax = nmax;
  if (*mc_opt) ov.mc_samples = samples;

  try {
    const Config config = load_config(ov);
    return chosen(config);
  } catch (const ConfigError& e) {
    std::cerr << "eventum: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    std::cerr << "eventum: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "eventum: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BudgetError& e) {
    std::cerr << "eventum: " << e.what() << '\n';
    return kExitNumeric;
  }
}
