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

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eventum/chain.hpp"
#include "eventum/ito.hpp"
#include "eventum/measurement.hpp"
#include "eventum/minkowski.hpp"

namespace eventum::io {

using json = nlohmann::json;

// Complex numbers are [re, im] pairs; matrices are row-major lists of rows.
json to_json(const cmat& m);
json to_json(const cvec& v);
cmat matrix_from_json(const json& j);
cvec vector_from_json(const json& j);

// {"noise_dim", "system_dim", "blocks": [[matrix, ...], ...]}
json to_json(const BlockOperator& g);
BlockOperator block_operator_from_json(const json& j);

// Labels "-", "1".."n" for the lower index and "1".."n", "+" for the upper.
std::string lower_label(int lower, int noise_dim);
std::string upper_label(int upper, int noise_dim);
json to_json(const ItoElement& a);
ItoElement ito_from_json(const json& j);

// JSONL: a header line describing the space, then one {"chain", "value"} line
// per stored chain.
void write_jsonl(std::ostream& out, const ChainVector& v);
ChainVector read_jsonl(std::istream& in);

// Keys in the order seed, jumps (t, k, p), final_state.
nlohmann::ordered_json to_json(const TrajectoryRecord& r);

// CSV with a header row and locale-independent number formatting.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  CsvWriter& cell(double x);
  CsvWriter& cell(long x);
  CsvWriter& cell(const std::string& s);
  void end_row();

 private:
  std::ostream& out_;
  size_t columns_;
  size_t filled_ = 0;
};

std::string format_double(double x);

}  // namespace eventum::io
