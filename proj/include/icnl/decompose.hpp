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

#pragma once

// Decompositions of crystal gates into g-CNOT / G primitives.

#include <stdexcept>
#include <string>
#include <vector>

#include "icnl/circuit.hpp"

namespace icnl {

/// g-CNOT(s->i), G_alpha(s), g-CNOT(s->i). Equal to the coherent crystal gate
/// on span{|00>, |HH>}; on the other seven two-qutrit states it differs from
/// the identity only at first order.
inline Circuit nl_decomposition(const std::string& s, const std::string& i) {
  if (s == i) throw std::invalid_argument("nl_decomposition requires distinct paths");
  Circuit c;
  c.paths = {s, i};
  c.add(op::gcnot(s, i)).add(op::galpha(s)).add(op::gcnot(s, i));
  return c;
}

/// Two-level synthesis by the Gray-code method: a circuit mapping
/// |source> -> |source> - i k |image> and |image> -> |image> - i kb |source>,
/// identity on every other basis state.
///
/// The two kets may differ only in 0/H symbols and at least one differing
/// position must hold 0 in `source`. The image is walked toward the source
/// one symbol at a time with fully controlled NOTs, a controlled G couples
/// the two neighbours, and the walk is undone.
inline Circuit gray_code_two_level(const std::vector<std::string>& paths, const Ket& source, const Ket& image) {
  if (source.size() != paths.size() || image.size() != paths.size())
    throw std::invalid_argument("ket length does not match the path list");
  std::vector<std::size_t> diff;
  for (std::size_t j = 0; j < paths.size(); ++j) {
    if (source[j] == image[j]) continue;
    if (source[j] == 'V' || image[j] == 'V')
      throw std::invalid_argument("two-level kets may differ only between 0 and H");
    diff.push_back(j);
  }
  if (diff.empty()) throw std::invalid_argument("two-level kets must differ");
  std::size_t pivot = paths.size();
  for (auto j : diff)
    if (source[j] == '0') pivot = j;
  if (pivot == paths.size()) throw std::invalid_argument("no position where the source holds vacuum");

  auto controls_for = [&](const Ket& cur, std::size_t skip) {
    std::vector<Control> ctl;
    for (std::size_t j = 0; j < paths.size(); ++j)
      if (j != skip) ctl.push_back({paths[j], static_cast<Qutrit>(cur[j])});
    return ctl;
  };

  Circuit c;
  c.paths = paths;
  std::vector<GateApplication> walk;
  Ket cur = image;
  for (auto j : diff) {
    if (j == pivot) continue;
    walk.push_back(op::cnot(paths[j], controls_for(cur, j)));
    cur[j] = source[j];
  }
  for (const auto& g : walk) c.add(g);
  c.add(op::cg(paths[pivot], controls_for(cur, pivot)));
  for (auto it = walk.rbegin(); it != walk.rend(); ++it) c.add(*it);
  return c;
}

/// Single-photon-pump crystal on (p, s, i) as Gray-code controlled gates.
inline Circuit gray_code_decomposition(const std::string& p, const std::string& s, const std::string& i) {
  return gray_code_two_level({p, s, i}, "H00", "0HH");
}

}  // namespace icnl
