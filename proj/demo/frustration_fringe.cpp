// Copyright 2026 The icnl Authors
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

// Prints the pair coefficient of the two-crystal circuit as the phase
// between the crystals goes round once. At PHI = pi no pair is emitted.

#include <cstdio>
#include <numbers>

#include "icnl/icnl.hpp"

int main() {
  const icnl::Circuit c = icnl::build_frustrated();
  std::vector<double> grid;
  for (int k = 0; k <= 16; ++k) grid.push_back(2.0 * std::numbers::pi * k / 16.0);
  const auto table = icnl::sweep(c, "PHI", grid);
  for (const auto& row : table.rows) {
    const int bar = static_cast<int>(row.pair_coefficient * 10.0 + 0.5);
    std::printf("PHI = %6.3f  coefficient = %.6f  %s\n", row.value, row.pair_coefficient,
                std::string(static_cast<std::size_t>(bar), '#').c_str());
  }
}
