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

// Synthesizes 2|HH> + |VV> from a chain of crystals and polarization
// unitaries and prints the resulting circuit and its pair sector.

#include <iostream>

#include "icnl/icnl.hpp"

int main() {
  icnl::SuperpositionSpec spec;
  Eigen::VectorXcd hh = Eigen::VectorXcd::Zero(4), vv = Eigen::VectorXcd::Zero(4);
  hh(0) = 1.0;
  vv(3) = 1.0;
  spec.targets = {hh, vv};
  spec.weights = {2, 1};
  const icnl::Circuit c = icnl::build_superposition(spec);
  std::cout << icnl::format(c) << '\n';
  std::cout << icnl::render(icnl::run_circuit(c), icnl::OutputFormat::Text);
}
