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

#include <doctest.h>

#include <sstream>
#include <string>

#include "eventum/io.hpp"
#include "eventum/random.hpp"
#include "oracle.hpp"

using namespace eventum;

TEST_CASE("matrices and vectors round-trip exactly") {
  Rng rng(97);
  const cmat m = random_matrix(3, 2, rng);
  const auto text = io::to_json(m).dump();
  CHECK(frobenius(io::matrix_from_json(io::json::parse(text)) - m) == 0.0);
  const cvec v = random_vector(4, rng);
  CHECK((io::vector_from_json(io::json::parse(io::to_json(v).dump())) - v).norm() == 0.0);

  // Bare real numbers are accepted.
  const cmat real = io::matrix_from_json(io::json::parse("[[1, 2], [3, 4.5]]"));
  CHECK(real(1, 1) == cplx(4.5, 0.0));
  CHECK_THROWS_AS(io::matrix_from_json(io::json::parse("[[1, 2], [3]]")), DimensionError);
  CHECK_THROWS_AS(io::matrix_from_json(io::json::parse("[[[1, 2, 3]]]")), DimensionError);
}

TEST_CASE("block operators and Ito elements") {
  Rng rng(101);
  const BlockOperator g(2, 2, random_matrix(8, 8, rng));
  const BlockOperator back = io::block_operator_from_json(io::json::parse(io::to_json(g).dump()));
  CHECK(back.noise_dim() == 2);
  CHECK(frobenius((back - g).matrix()) == 0.0);

  CHECK(io::lower_label(0, 2) == "-");
  CHECK(io::lower_label(2, 2) == "2");
  CHECK(io::upper_label(0, 2) == "1");
  CHECK(io::upper_label(2, 2) == "+");

  const ItoElement dt = ItoElement::basis_dt(1, 1);
  const io::json j = io::to_json(dt);
  CHECK(j.at("coefficients").contains("-,+"));
  CHECK(j.at("coefficients").at("-,+")[0][0][0] == 1.0);

  const ItoElement a = oracle::random_ito(2, 2, rng);
  CHECK(io::ito_from_json(io::json::parse(io::to_json(a).dump())).distance(a) == 0.0);

  io::json bad = io::to_json(g);
  bad["blocks"].erase(0);
  CHECK_THROWS_AS(io::block_operator_from_json(bad), DimensionError);
}

TEST_CASE("chain vectors as JSON lines") {
  Rng rng(103);
  const ChainVector v = oracle::random_chain_vector(Grid(0.5, 4), 2, 3, 2, rng, true);
  std::stringstream buffer;
  io::write_jsonl(buffer, v);
  const ChainVector w = io::read_jsonl(buffer);
  CHECK(w.grid().n_points == 4);
  CHECK(w.grid().t_final == 0.5);
  CHECK(w.minkowski());
  CHECK(w.values().size() == v.values().size());
  CHECK(chain_distance(v, w) == 0.0);

  std::stringstream empty;
  CHECK_THROWS_AS(io::read_jsonl(empty), DimensionError);
}

TEST_CASE("trajectory records keep their field order") {
  TrajectoryRecord r;
  r.seed = 42;
  r.jumps = {{0.25, 1, 0.5}};
  r.final_state = cvec::Zero(2);
  r.final_state(1) = 1.0;
  CHECK(io::to_json(r).dump() ==
        R"({"seed":42,"jumps":[{"t":0.25,"k":1,"p":0.5}],"final_state":[[0.0,0.0],[1.0,0.0]]})");
}

TEST_CASE("csv output") {
  std::ostringstream out;
  io::CsvWriter csv(out, {"name", "count", "value"});
  csv.cell("a").cell(3L).cell(0.1).end_row();
  CHECK(out.str() == "name,count,value\na,3,0.10000000000000001\n");
  CHECK_THROWS(csv.cell("x").end_row());
  for (double x : {1e-300, -2.5, 1.0 / 3.0, 6.02214076e23}) CHECK(std::stod(io::format_double(x)) == x);
}
