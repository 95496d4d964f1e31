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


#include "eventum/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace eventum::io {

namespace {

cplx complex_from_json(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2) throw DimensionError("complex entries must be [re, im] pairs");
  return cplx(j[0].get<double>(), j[1].get<double>());
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json to_json(const cmat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const cvec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

cmat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw DimensionError("matrix must be a list of rows");
  const size_t rows = j.size();
  const size_t cols = j[0].size();
  cmat m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw DimensionError("matrix rows differ in length");
    for (size_t k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i][k]);
  }
  return m;
}

cvec vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw DimensionError("vector must be a non-empty list");
  cvec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(i) = complex_from_json(j[i]);
  return v;
}

json to_json(const BlockOperator& g) {
  json blocks = json::array();
  for (int r = 0; r < g.external_dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < g.external_dim(); ++c) row.push_back(to_json(g.block(r, c)));
    blocks.push_back(std::move(row));
  }
  return {{"noise_dim", g.noise_dim()}, {"system_dim", g.system_dim()}, {"blocks", blocks}};
}

BlockOperator block_operator_from_json(const json& j) {
  const int n = j.at("noise_dim").get<int>();
  const int d = j.at("system_dim").get<int>();
  if (n < 0 || d < 1) throw DimensionError("block operator dimensions out of range");
  const json& blocks = j.at("blocks");
  if (!blocks.is_array() || static_cast<int>(blocks.size()) != n + 2)
    throw DimensionError("block operator needs n+2 block rows");
  BlockOperator g(n, d);
  for (int r = 0; r < n + 2; ++r) {
    if (static_cast<int>(blocks[r].size()) != n + 2) throw DimensionError("block operator needs n+2 block columns");
    for (int c = 0; c < n + 2; ++c) {
      const cmat b = matrix_from_json(blocks[r][c]);
      if (b.rows() != d || b.cols() != d) throw DimensionError("block has the wrong size");
      g.set_block(r, c, b);
    }
  }
  return g;
}

std::string lower_label(int lower, int noise_dim) {
  if (lower < 0 || lower > noise_dim) throw DimensionError("lower index out of range");
  return lower == 0 ? "-" : std::to_string(lower);
}

std::string upper_label(int upper, int noise_dim) {
  if (upper < 0 || upper > noise_dim) throw DimensionError("upper index out of range");
  return upper == noise_dim ? "+" : std::to_string(upper + 1);
}

json to_json(const ItoElement& a) {
  json coef = json::object();
  const int n = a.noise_dim();
  for (int l = 0; l <= n; ++l)
    for (int u = 0; u <= n; ++u) coef[lower_label(l, n) + "," + upper_label(u, n)] = to_json(a.coef(l, u));
  return {{"noise_dim", n}, {"system_dim", a.system_dim()}, {"coefficients", coef}};
}

ItoElement ito_from_json(const json& j) {
  const int n = j.at("noise_dim").get<int>();
  const int d = j.at("system_dim").get<int>();
  ItoElement a(n, d);
  const json& coef = j.at("coefficients");
  for (int l = 0; l <= n; ++l)
    for (int u = 0; u <= n; ++u) {
      const std::string key = lower_label(l, n) + "," + upper_label(u, n);
      if (!coef.contains(key)) continue;  // absent coefficients are zero
      const cmat m = matrix_from_json(coef[key]);
      if (m.rows() != d || m.cols() != d) throw DimensionError("Ito coefficient has the wrong size");
      a.coef(l, u) = m;
    }
  return a;
}

void write_jsonl(std::ostream& out, const ChainVector& v) {
  const json header = {{"grid", {{"t_final", v.grid().t_final}, {"n_points", v.grid().n_points}}},
                       {"nmax", v.nmax()},
                       {"fiber", v.fiber()},
                       {"system_dim", v.system_dim()},
                       {"minkowski", v.minkowski()}};
  out << header.dump() << '\n';
  for (const auto& [chain, value] : v.values()) out << json{{"chain", chain}, {"value", to_json(value)}}.dump() << '\n';
}

ChainVector read_jsonl(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DimensionError("chain vector stream is empty");
  const json header = json::parse(line);
  const Grid grid(header.at("grid").at("t_final").get<double>(), header.at("grid").at("n_points").get<int>());
  ChainVector v(grid, header.at("nmax").get<int>(), header.at("fiber").get<int>(),
                header.at("system_dim").get<int>(), header.at("minkowski").get<bool>());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json rec = json::parse(line);
    v.set(rec.at("chain").get<Chain>(), vector_from_json(rec.at("value")));
  }
  return v;
}

nlohmann::ordered_json to_json(const TrajectoryRecord& r) {
  using ojson = nlohmann::ordered_json;
  ojson jumps = ojson::array();
  for (const Jump& j : r.jumps) {
    ojson rec = ojson::object();
    rec["t"] = j.time;
    rec["k"] = j.outcome;
    rec["p"] = j.probability;
    jumps.push_back(std::move(rec));
  }
  ojson state = ojson::array();
  for (Eigen::Index i = 0; i < r.final_state.size(); ++i)
    state.push_back(ojson::array({r.final_state(i).real(), r.final_state(i).imag()}));
  ojson out = ojson::object();
  out["seed"] = r.seed;
  out["jumps"] = std::move(jumps);
  out["final_state"] = std::move(state);
  return out;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

CsvWriter& CsvWriter::cell(double x) { return cell(format_double(x)); }

CsvWriter& CsvWriter::cell(long x) { return cell(std::to_string(x)); }

CsvWriter& CsvWriter::cell(const std::string& s) {
  if (filled_ == columns_) throw std::logic_error("csv row has too many cells");
  out_ << (filled_ ? "," : "") << s;
  ++filled_;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("csv row has too few cells");
  out_ << '\n';
  filled_ = 0;
}

}  // namespace eventum::io
