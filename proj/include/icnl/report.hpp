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

// JSON, CSV and plain-text renderings of run and sweep results.

#include <iomanip>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "icnl/analysis.hpp"
#include "icnl/fock_oracle.hpp"

namespace icnl {

enum class OutputFormat { Json, Csv, Text };

inline nlohmann::json to_json(const ConditionalDensity& rho) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < rho.matrix.rows(); ++r) {
    nlohmann::json rr = nlohmann::json::array(), ir = nlohmann::json::array();
    for (Eigen::Index c = 0; c < rho.matrix.cols(); ++c) {
      rr.push_back(rho.matrix(r, c).real());
      ir.push_back(rho.matrix(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return {{"paths", rho.paths}, {"basis", rho.basis}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline nlohmann::json to_json(const OracleReport& o) {
  return {{"g_alpha", {o.kappa.real(), o.kappa.imag()}},
          {"max_deviation", o.max_deviation},
          {"deviation_over_g_alpha_sq", o.constant},
          {"passes", o.passes},
          {"dimension", o.dimension},
          {"pump_levels", o.pump_levels},
          {"max_norm_drift", o.max_norm_drift}};
}

inline nlohmann::json to_json(const RunResult& r, const std::optional<OracleReport>& oracle = std::nullopt) {
  nlohmann::json j;
  j["paths"] = r.state.paths();
  nlohmann::json ks = nlohmann::json::array();
  for (const auto& [ket, a] : kappa_sector(r.state)) ks.push_back({{"ket", ket}, {"re", a.real()}, {"im", a.imag()}});
  j["kappa_sector"] = std::move(ks);
  j["pair_coefficient"] = r.pair_coefficient;
  if (r.density) j["density"] = to_json(*r.density);
  if (r.detectors) {
    nlohmann::json d = nlohmann::json::array();
    for (const auto& [p, v] : *r.detectors) d.push_back({{"path", p}, {"probability", v}});
    j["detectors"] = std::move(d);
  }
  if (oracle) j["oracle"] = to_json(*oracle);
  return j;
}

namespace detail {

inline std::string num(double v) { return format_double(v); }

}  // namespace detail

/// Rows of `section,key,re,im`.
inline std::string to_csv(const RunResult& r, const std::optional<OracleReport>& oracle = std::nullopt) {
  std::ostringstream os;
  os << "section,key,re,im\n";
  for (const auto& [ket, a] : kappa_sector(r.state))
    os << "kappa_sector," << ket << ',' << detail::num(a.real()) << ',' << detail::num(a.imag()) << '\n';
  os << "pair_coefficient,," << detail::num(r.pair_coefficient) << ",0\n";
  if (r.density) {
    const auto& rho = *r.density;
    for (std::size_t a = 0; a < rho.basis.size(); ++a)
      for (std::size_t b = 0; b < rho.basis.size(); ++b) {
        const complex_t v = rho.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        os << "density," << rho.basis[a] << ';' << rho.basis[b] << ',' << detail::num(v.real()) << ','
           << detail::num(v.imag()) << '\n';
      }
  }
  if (r.detectors)
    for (const auto& [p, v] : *r.detectors) os << "detector," << p << ',' << detail::num(v) << ",0\n";
  if (oracle) {
    os << "oracle,max_deviation," << detail::num(oracle->max_deviation) << ",0\n";
    os << "oracle,deviation_over_g_alpha_sq," << detail::num(oracle->constant) << ",0\n";
    os << "oracle,passes," << (oracle->passes ? 1 : 0) << ",0\n";
  }
  return os.str();
}

inline std::string to_text(const RunResult& r, const std::optional<OracleReport>& oracle = std::nullopt) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "paths:";
  for (const auto& p : r.state.paths()) os << ' ' << p;
  os << "\nkappa sector (coefficient of g alpha):\n";
  for (const auto& [ket, a] : kappa_sector(r.state)) os << "  |" << ket << ">  " << a << '\n';
  os << "pair coefficient: " << r.pair_coefficient << '\n';
  if (r.density) {
    os << "conditional density on";
    for (const auto& p : r.density->paths) os << ' ' << p;
    os << " (basis";
    for (const auto& b : r.density->basis) os << " |" << b << '>';
    os << "):\n" << r.density->matrix << '\n';
  }
  if (r.detectors) {
    os << "detector probabilities:\n";
    for (const auto& [p, v] : *r.detectors) os << "  " << p << "  " << v << '\n';
  }
  if (oracle)
    os << "oracle: g alpha " << oracle->kappa << ", max deviation " << oracle->max_deviation
       << ", deviation / |g alpha|^2 " << oracle->constant << ", " << (oracle->passes ? "agrees" : "DISAGREES") << '\n';
  return os.str();
}

inline std::string render(const RunResult& r, OutputFormat f, const std::optional<OracleReport>& oracle = std::nullopt) {
  switch (f) {
    case OutputFormat::Json: return to_json(r, oracle).dump(2) + "\n";
    case OutputFormat::Csv: return to_csv(r, oracle);
    case OutputFormat::Text: return to_text(r, oracle);
  }
  return "";
}

inline nlohmann::json to_json(const SweepTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json j{{"value", row.value}, {"pair_coefficient", row.pair_coefficient}};
    if (!row.detectors.empty()) {
      nlohmann::json d = nlohmann::json::object();
      for (const auto& [p, v] : row.detectors) d[p] = v;
      j["detectors"] = std::move(d);
    }
    rows.push_back(std::move(j));
  }
  return {{"param", t.param}, {"rows", std::move(rows)}};
}

/// One line per grid value: the parameter, the pair coefficient, then one
/// column per measured path.
inline std::string to_csv(const SweepTable& t) {
  std::ostringstream os;
  os << t.param << ",pair_coefficient";
  if (!t.rows.empty())
    for (const auto& [p, v] : t.rows.front().detectors) os << ",p_" << p;
  os << '\n';
  for (const auto& row : t.rows) {
    os << detail::num(row.value) << ',' << detail::num(row.pair_coefficient);
    for (const auto& [p, v] : row.detectors) os << ',' << detail::num(v);
    os << '\n';
  }
  return os.str();
}

inline std::string to_text(const SweepTable& t) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << std::setw(14) << t.param << std::setw(20) << "pair coefficient";
  if (!t.rows.empty())
    for (const auto& [p, v] : t.rows.front().detectors) os << std::setw(14) << ("p(" + p + ")");
  os << '\n';
  for (const auto& row : t.rows) {
    os << std::setw(14) << row.value << std::setw(20) << row.pair_coefficient;
    for (const auto& [p, v] : row.detectors) os << std::setw(14) << v;
    os << '\n';
  }
  return os.str();
}

inline std::string render(const SweepTable& t, OutputFormat f) {
  switch (f) {
    case OutputFormat::Json: return to_json(t).dump(2) + "\n";
    case OutputFormat::Csv: return to_csv(t);
    case OutputFormat::Text: return to_text(t);
  }
  return "";
}

}  // namespace icnl
