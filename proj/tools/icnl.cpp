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

// icnl: run, sweep, check and export .icl circuit files.
//
// Exit status: 0 success, 1 diagnostics (parse errors, bad options),
// 2 runtime errors while evaluating a valid circuit.

#include <unistd.h>

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "icnl/icnl.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDiagnostics = 1;
constexpr int kRuntime = 2;

struct DiagnosticsFailed {};

bool use_color() {
  const char* env = std::getenv("ICNL_COLOR");
  const std::string mode = env ? env : "auto";
  if (mode == "always") return true;
  if (mode == "never") return false;
  const char* term = std::getenv("TERM");
  return isatty(fileno(stderr)) && !(term && std::string(term) == "dumb");
}

void report(const std::vector<icnl::Diagnostic>& diags, const std::string& file) {
  const bool color = use_color();
  for (const auto& d : diags) std::cerr << icnl::render(d, file, color) << '\n';
}

std::string read_input(const std::string& file) {
  if (file == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    std::cerr << file << ": cannot open file\n";
    throw DiagnosticsFailed{};
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

icnl::Circuit load(const std::string& file) {
  auto res = icnl::parse(read_input(file));
  if (!res.ok()) {
    report(res.diagnostics, file);
    throw DiagnosticsFailed{};
  }
  return std::move(*res.doc);
}

std::vector<icnl::Param> overrides_from(const icnl::Circuit& c, const std::vector<std::string>& sets) {
  std::vector<std::string> known;
  for (const auto& p : c.params) known.push_back(p.name);
  std::vector<icnl::Param> out;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::cerr << "--set " << s << ": expected NAME=EXPR\n";
      throw DiagnosticsFailed{};
    }
    const std::string name = s.substr(0, eq);
    if (!c.has_param(name)) {
      std::cerr << "--set " << s << ": unknown parameter '" << name << "'\n";
      throw DiagnosticsFailed{};
    }
    std::vector<icnl::Diagnostic> diags;
    auto e = icnl::parse_expression(s.substr(eq + 1), known, diags);
    if (!e) {
      report(diags, "--set " + name);
      throw DiagnosticsFailed{};
    }
    out.push_back({name, *e});
  }
  return out;
}

std::vector<std::string> split_paths(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

icnl::OutputFormat format_from(const std::string& f) {
  if (f == "csv") return icnl::OutputFormat::Csv;
  if (f == "text") return icnl::OutputFormat::Text;
  return icnl::OutputFormat::Json;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate first-order SPDC crystal circuits written in the .icl language."};
  app.require_subcommand(1);

  std::string file, format = "json", density, param, from, to, values, out_dir = ".";
  std::vector<std::string> sets;
  bool oracle = false, print = false;
  double g = 0.01, alpha = 1.0;
  std::size_t max_dim = std::size_t{1} << 17;
  int count = 0;
  const std::vector<std::string> formats = {"json", "csv", "text"};

  auto* run = app.add_subcommand("run", "Evaluate a circuit and print its pair sector");
  run->add_option("file", file, "Circuit file, or - for stdin")->required();
  run->add_option("--set", sets, "Override a parameter, NAME=EXPR (repeatable)");
  run->add_option("--format", format, "Output format")->check(CLI::IsMember(formats));
  run->add_option("--density", density, "Conditional density of the final state on P1,P2,...");
  run->add_flag("--oracle", oracle, "Cross-check against the Fock-space oracle");
  run->add_option("--g", g, "Down-conversion factor for --oracle");
  run->add_option("--alpha", alpha, "Coherent pump amplitude for --oracle");
  run->add_option("--max-dim", max_dim, "Oracle Hilbert-space dimension limit");

  auto* sw = app.add_subcommand("sweep", "Tabulate the pair coefficient over a parameter grid");
  sw->add_option("file", file, "Circuit file, or - for stdin")->required();
  sw->add_option("--param", param, "Parameter to sweep (default: the file's sweep directive)");
  sw->add_option("--from", from, "Grid start expression");
  sw->add_option("--to", to, "Grid end expression");
  sw->add_option("--count", count, "Number of grid points")->check(CLI::PositiveNumber);
  sw->add_option("--values", values, "Explicit grid, comma separated expressions");
  sw->add_option("--set", sets, "Override a parameter, NAME=EXPR (repeatable)");
  sw->add_option("--format", format, "Output format")->check(CLI::IsMember(formats));

  auto* check = app.add_subcommand("check", "Parse a circuit and report diagnostics");
  check->add_option("file", file, "Circuit file, or - for stdin")->required();
  check->add_flag("--print", print, "Print the canonical formatting");

  auto* ex = app.add_subcommand("examples", "Write the four reference circuits");
  ex->add_option("dir", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kDiagnostics;
  }

  try {
    if (*check) {
      const icnl::Circuit c = load(file);
      if (print) std::cout << icnl::format(c);
      return kOk;
    }
    if (*ex) {
      std::filesystem::create_directories(out_dir);
      for (const auto& [name, c] : icnl::golden_examples()) {
        const auto path = std::filesystem::path(out_dir) / name;
        std::ofstream os(path, std::ios::binary);
        os << icnl::format(c);
        if (!os) {
          std::cerr << path.string() << ": write failed\n";
          return kRuntime;
        }
        std::cout << path.string() << '\n';
      }
      return kOk;
    }

    icnl::Circuit c = load(file);
    const auto ov = overrides_from(c, sets);

    if (*run) {
      std::vector<std::string> keep;
      if (!density.empty()) {
        keep = split_paths(density);
        for (const auto& p : keep)
          if (std::find(c.paths.begin(), c.paths.end(), p) == c.paths.end()) {
            std::cerr << "--density: undeclared path '" << p << "'\n";
            return kDiagnostics;
          }
      }
      try {
        icnl::RunResult r = icnl::run_circuit(c, ov);
        if (!keep.empty()) r.density = icnl::conditional_density(r.state, keep);
        std::optional<icnl::OracleReport> rep;
        if (oracle) {
          icnl::OracleConfig cfg;
          cfg.max_dimension = max_dim;
          rep = icnl::compare_first_order(c, g, alpha, {}, cfg, ov);
        }
        std::cout << icnl::render(r, format_from(format), rep);
      } catch (const std::exception& e) {
        std::cerr << file << ": runtime error: " << e.what() << '\n';
        return kRuntime;
      }
      return kOk;
    }

    // sweep
    std::vector<std::string> known;
    for (const auto& p : c.params) known.push_back(p.name);
    auto expr_of = [&](const std::string& text, const std::string& flag) {
      std::vector<icnl::Diagnostic> diags;
      auto e = icnl::parse_expression(text, known, diags);
      if (!e) {
        report(diags, flag);
        throw DiagnosticsFailed{};
      }
      return *e;
    };
    icnl::SweepSpec spec;
    if (!param.empty()) {
      if (!c.has_param(param)) {
        std::cerr << "--param: unknown parameter '" << param << "'\n";
        return kDiagnostics;
      }
      spec.param = param;
      if (!values.empty()) {
        for (const auto& v : split_paths(values)) spec.values.push_back(expr_of(v, "--values"));
      } else if (!from.empty() && !to.empty() && count > 0) {
        spec.lo = expr_of(from, "--from");
        spec.hi = expr_of(to, "--to");
        spec.count = count;
      } else {
        std::cerr << "sweep: give --values or --from, --to and --count\n";
        return kDiagnostics;
      }
    } else if (c.sweep) {
      spec = *c.sweep;
    } else {
      std::cerr << file << ": no sweep directive; use --param\n";
      return kDiagnostics;
    }
    try {
      const auto grid = spec.grid(icnl::resolve_params(c, ov));
      std::cout << icnl::render(icnl::sweep(c, spec.param, grid, ov), format_from(format));
    } catch (const std::exception& e) {
      std::cerr << file << ": runtime error: " << e.what() << '\n';
      return kRuntime;
    }
    return kOk;
  } catch (const DiagnosticsFailed&) {
    return kDiagnostics;
  }
}
