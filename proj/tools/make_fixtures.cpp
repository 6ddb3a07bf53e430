// Copyright 2026 The squash Authors
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

// Regenerates the even-n BB84 regression fixtures under tests/data:
//   squash_fixtures <dir>

#include <filesystem>
#include <iostream>

#include "json.hpp"
#include "squash/povm_io.hpp"
#include "squash/squasher.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: squash_fixtures <dir>\n";
    return 64;
  }
  const std::filesystem::path dir = argv[1];
  const squash::Protocol p = squash::Protocol::bb84();
  for (int n : {2, 4, 6, 8}) {
    const squash::BlockResult b = squash::check_block(p, n);
    if (b.verdict.status != squash::Status::kExists) {
      std::cerr << "n=" << n << ": " << squash::status_name(b.verdict.status) << "\n";
      return 1;
    }
    const squash::ComplexOperator& tau = *b.verdict.choi;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < tau.dim(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t j = 0; j < tau.dim(); ++j) row.push_back({tau(i, j).real(), tau(i, j).imag()});
      rows.push_back(std::move(row));
    }
    const nlohmann::json doc = {{"format_version", squash::kFormatVersion},
                                {"protocol", "bb84"},
                                {"n", n},
                                {"kind", squash::block_kind_name(b.kind)},
                                {"dims", {tau.factor_dims()->first, tau.factor_dims()->second}},
                                {"choi", rows}};
    const auto path = dir / ("bb84_even_n" + std::to_string(n) + ".json");
    squash::write_text_file(path, doc.dump(1) + "\n");
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}
