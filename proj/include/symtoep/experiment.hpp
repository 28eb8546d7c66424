// Copyright 2026 The symtoep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symtoep/distribution.hpp"
#include "symtoep/errors.hpp"
#include "symtoep/symbol.hpp"
#include "symtoep/toeplitz.hpp"

namespace symtoep {

// ---------------------------------------------------------------------------
// Built-in symbols.
// ---------------------------------------------------------------------------

/// The bivariate degree-(2,2) polynomial of the first experiment, entered as
/// its (offset -> coefficient) list.
inline SymbolSpec example1_symbol() {
  FourierStencil s{MultiIndex{2, 2}};
  const struct {
    index_t j1, j2;
    double c;
  } terms[] = {
      {0, 0, 5},   {1, 0, 1},    {2, 0, 1},   {-1, 0, -3}, {-2, 0, 2},
      {0, 1, 2},   {0, 2, 1},    {0, -1, -2}, {0, -2, 1},  {1, 1, 1},
      {1, -1, 3},  {-1, 1, 3},   {-1, -1, 2}, {-2, 2, 1},  {1, 2, 1},
      {-2, 1, 2},  {2, 1, 3},    {-2, -1, 1}, {2, -1, 1},  {-2, -2, 1},
      {-1, -2, 1}, {1, -2, 1},   {2, -2, 1},
  };
  for (const auto& term : terms) {
    s.at(MultiIndex{term.j1, term.j2}) = term.c;
  }
  return SymbolSpec::stencil(std::move(s));
}

/// The separable polynomial of the second experiment:
/// (10 - 3 e^{i t} + e^{-i t}) times (4 - 3 e^{i t}).
inline SymbolSpec example2_symbol() {
  FourierStencil f1{MultiIndex{1}};
  f1.at(MultiIndex{-1}) = 1.0;
  f1.at(MultiIndex{0}) = 10.0;
  f1.at(MultiIndex{1}) = -3.0;
  FourierStencil f2{MultiIndex{1}};
  f2.at(MultiIndex{0}) = 4.0;
  f2.at(MultiIndex{1}) = -3.0;
  return SymbolSpec::separable(
      {SymbolSpec::stencil(std::move(f1)), SymbolSpec::stencil(std::move(f2))});
}

/// The separable non-polynomial symbol of the third experiment:
/// theta_1^2 theta_2^2, with closed-form factor coefficients.
inline SymbolSpec example3_symbol() {
  return SymbolSpec::separable(
      {SymbolSpec::theta_squared(), SymbolSpec::theta_squared()});
}

inline SymbolSpec builtin_symbol(std::string_view name) {
  if (name == "example1") return example1_symbol();
  if (name == "example2") return example2_symbol();
  if (name == "example3") return example3_symbol();
  if (name == "theta_squared") return SymbolSpec::theta_squared();
  throw InvalidArgumentError("unknown built-in symbol '" + std::string(name) +
                             "'");
}

// ---------------------------------------------------------------------------
// Experiment configuration.
// ---------------------------------------------------------------------------

enum class ExperimentMode { kPsi, kPhi, kH, kSigma };
enum class ExperimentGrid { kXi, kTheta };

struct ExperimentConfig {
  std::string builtin;                     // one of the named symbols, or
  std::string stencil_file;                // a stencil text file, or
  std::vector<std::string> factor_files;   // unilevel factor stencil files
  MultiIndex n;
  ExperimentMode mode = ExperimentMode::kPsi;
  ExperimentGrid grid = ExperimentGrid::kXi;
  std::string output;   // CSV path; empty disables file output
  std::string summary;  // defaults to <output stem>_summary.csv
  index_t fine_samples = 256;
  double outlier_threshold = kAutoOutlierThreshold;
  index_t dense_limit = kDefaultDenseLimit;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

inline std::string parse_quoted(const std::string& value, const char* key) {
  if (value.size() < 2 || value.front() != '"' || value.back() != '"') {
    throw IoError(std::string("config: ") + key + " expects a quoted string");
  }
  return value.substr(1, value.size() - 2);
}

inline std::vector<std::string> parse_array_items(const std::string& value,
                                                  const char* key) {
  if (value.size() < 2 || value.front() != '[' || value.back() != ']') {
    throw IoError(std::string("config: ") + key + " expects an array");
  }
  std::vector<std::string> items;
  std::string body = value.substr(1, value.size() - 2);
  std::size_t start = 0;
  while (start <= body.size()) {
    const std::size_t comma = body.find(',', start);
    const std::string item =
        trim(body.substr(start, comma == std::string::npos ? std::string::npos
                                                           : comma - start));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

inline index_t parse_integer(const std::string& value, const char* key) {
  std::size_t pos = 0;
  index_t out = 0;
  try {
    out = std::stoll(value, &pos);
  } catch (const std::exception&) {
    throw IoError(std::string("config: ") + key + " expects an integer");
  }
  if (pos != value.size()) {
    throw IoError(std::string("config: ") + key + " expects an integer");
  }
  return out;
}

}  // namespace detail

inline ExperimentMode parse_mode(std::string_view s) {
  if (s == "psi") return ExperimentMode::kPsi;
  if (s == "phi") return ExperimentMode::kPhi;
  if (s == "h") return ExperimentMode::kH;
  if (s == "sigma") return ExperimentMode::kSigma;
  throw IoError("config: mode must be one of psi|phi|h|sigma");
}

inline ExperimentGrid parse_grid(std::string_view s) {
  if (s == "xi") return ExperimentGrid::kXi;
  if (s == "theta") return ExperimentGrid::kTheta;
  throw IoError("config: grid must be xi or theta");
}

/// Plain-text key = value configuration (flat TOML). Unknown keys are
/// rejected so that typos cannot silently change a run.
inline ExperimentConfig parse_experiment_config(std::istream& is) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string stripped = detail::trim(detail::strip_comment(line));
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw IoError("config line " + std::to_string(lineno) +
                    ": expected key = value");
    }
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (key == "symbol") {
      cfg.builtin = detail::parse_quoted(value, "symbol");
    } else if (key == "stencil_file") {
      cfg.stencil_file = detail::parse_quoted(value, "stencil_file");
    } else if (key == "factor_files") {
      for (const std::string& item :
           detail::parse_array_items(value, "factor_files")) {
        cfg.factor_files.push_back(detail::parse_quoted(item, "factor_files"));
      }
    } else if (key == "n") {
      std::vector<index_t> dims;
      for (const std::string& item : detail::parse_array_items(value, "n")) {
        dims.push_back(detail::parse_integer(item, "n"));
      }
      cfg.n = MultiIndex(std::move(dims));
    } else if (key == "mode") {
      cfg.mode = parse_mode(detail::parse_quoted(value, "mode"));
    } else if (key == "grid") {
      cfg.grid = parse_grid(detail::parse_quoted(value, "grid"));
    } else if (key == "output") {
      cfg.output = detail::parse_quoted(value, "output");
    } else if (key == "summary") {
      cfg.summary = detail::parse_quoted(value, "summary");
    } else if (key == "fine_samples") {
      cfg.fine_samples = detail::parse_integer(value, "fine_samples");
    } else if (key == "outlier_threshold") {
      if (value == "\"auto\"") {
        cfg.outlier_threshold = kAutoOutlierThreshold;
      } else {
        try {
          cfg.outlier_threshold = std::stod(value);
        } catch (const std::exception&) {
          throw IoError("config: outlier_threshold expects a number or "
                        "\"auto\"");
        }
      }
    } else if (key == "dense_limit") {
      cfg.dense_limit = detail::parse_integer(value, "dense_limit");
    } else {
      throw IoError("config line " + std::to_string(lineno) +
                    ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_experiment_config(in);
}

// ---------------------------------------------------------------------------
// Running an experiment.
// ---------------------------------------------------------------------------

struct ExperimentResult {
  SpectrumReport report;
  double functional_discrepancy = 0.0;
};

namespace detail {

inline SymbolSpec resolve_symbol(const ExperimentConfig& cfg) {
  const int sources = (!cfg.builtin.empty() ? 1 : 0) +
                      (!cfg.stencil_file.empty() ? 1 : 0) +
                      (!cfg.factor_files.empty() ? 1 : 0);
  if (sources != 1) {
    throw InvalidArgumentError(
        "experiment: exactly one of symbol, stencil_file, factor_files must "
        "be given");
  }
  if (!cfg.builtin.empty()) return builtin_symbol(cfg.builtin);
  if (!cfg.stencil_file.empty()) {
    std::ifstream in(cfg.stencil_file);
    if (!in) throw IoError("cannot open stencil file '" + cfg.stencil_file + "'");
    return SymbolSpec::stencil(read_stencil(in));
  }
  std::vector<SymbolSpec> factors;
  for (const std::string& path : cfg.factor_files) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open factor file '" + path + "'");
    FourierStencil s = read_stencil(in);
    if (s.levels() != 1) {
      throw InvalidArgumentError("experiment: factor stencils must be unilevel");
    }
    factors.push_back(SymbolSpec::stencil(std::move(s)));
  }
  return SymbolSpec::separable(std::move(factors));
}

/// Truncation degree used to materialize the matrix: explicit stencils keep
/// their own degree, quadrature-backed symbols are expanded to full bandwidth
/// n_t - 1 (the matrix entries beyond that band cannot influence T_n).
inline MultiIndex matrix_degree(const SymbolSpec& symbol, const MultiIndex& n) {
  std::vector<index_t> degree(n.levels());
  switch (symbol.kind()) {
    case SymbolSpec::Kind::kStencil:
      return symbol.stencil_data().degree();
    case SymbolSpec::Kind::kSeparable: {
      std::size_t t = 0;
      for (const SymbolSpec& f : symbol.factors()) {
        degree[t] = f.kind() == SymbolSpec::Kind::kStencil
                        ? f.stencil_data().degree()[0]
                        : n[t] - 1;
        ++t;
      }
      return MultiIndex(std::move(degree));
    }
    case SymbolSpec::Kind::kQuadrature:
      for (std::size_t t = 0; t < n.levels(); ++t) degree[t] = n[t] - 1;
      return MultiIndex(std::move(degree));
  }
  throw InvalidArgumentError("experiment: unknown symbol variant");
}

inline std::string default_summary_path(const std::string& output) {
  const std::size_t slash = output.find_last_of('/');
  const std::size_t dot = output.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return output + "_summary";
  }
  return output.substr(0, dot) + "_summary" + output.substr(dot);
}

}  // namespace detail

/// CSV schema: header `index,eigenvalue,symbol_sample,abs_err`, one row per
/// matched pair, 17-significant-digit decimals, LF line endings.
inline void write_report_csv(std::ostream& os, const SpectrumReport& report) {
  os << "index,eigenvalue,symbol_sample,abs_err\n";
  for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
    os << (i + 1) << ',' << detail::to_decimal17(report.eigenvalues[i]) << ','
       << detail::to_decimal17(report.samples[i]) << ','
       << detail::to_decimal17(report.per_index_abs_err[i]) << '\n';
  }
}

inline void write_summary_csv(std::ostream& os, const ExperimentResult& result) {
  os << "mean_abs_err,max_abs_err,wasserstein1,outlier_count,"
        "functional_discrepancy\n";
  os << detail::to_decimal17(result.report.mean_abs_err) << ','
     << detail::to_decimal17(result.report.max_abs_err) << ','
     << detail::to_decimal17(result.report.wasserstein1) << ','
     << result.report.outlier_count << ','
     << detail::to_decimal17(result.functional_discrepancy) << '\n';
}

/// Builds the symmetrized matrix, measures its spectrum, samples the chosen
/// symbol construction on the chosen grid, matches both sorted, and computes
/// the distribution-functional discrepancy. Writes the CSV report and the
/// summary when an output path is configured.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const SymbolSpec symbol = detail::resolve_symbol(cfg);
  if (cfg.n.levels() != symbol.levels()) {
    throw InvalidArgumentError("experiment: n and symbol level counts differ");
  }
  if (cfg.n.levels() != 2) {
    throw InvalidArgumentError(
        "experiment: sampling grids are defined for two-level symbols");
  }
  const bool needs_separable =
      cfg.mode == ExperimentMode::kH ||
      (cfg.mode == ExperimentMode::kSigma && cfg.grid == ExperimentGrid::kTheta);
  if (needs_separable && symbol.kind() != SymbolSpec::Kind::kSeparable) {
    throw InvalidArgumentError(
        "experiment: this mode/grid needs a separable symbol");
  }
  if (cfg.mode == ExperimentMode::kH && cfg.grid != ExperimentGrid::kTheta) {
    throw InvalidArgumentError("experiment: mode h requires grid theta");
  }
  if ((cfg.mode == ExperimentMode::kPsi || cfg.mode == ExperimentMode::kPhi) &&
      cfg.grid != ExperimentGrid::kXi) {
    throw InvalidArgumentError("experiment: modes psi/phi require grid xi");
  }
  if (cfg.fine_samples < 2) {
    throw InvalidArgumentError("experiment: fine_samples must be >= 2");
  }

  const FourierStencil stencil =
      stencil_of(symbol, detail::matrix_degree(symbol, cfg.n));
  const DenseMatrix symmetrized = symmetrize(stencil, cfg.n, cfg.dense_limit);
  const Spectrum spectrum = cfg.mode == ExperimentMode::kSigma
                                ? singular_values(symmetrized)
                                : eig_sym(symmetrized);

  const GridSpec grid = cfg.grid == ExperimentGrid::kXi ? xi_grid(cfg.n)
                                                        : theta_grid(cfg.n);
  std::vector<double> samples(static_cast<std::size_t>(grid.num_points()));
  for (index_t i = 0; i < grid.num_points(); ++i) {
    const auto point = grid.point(i);
    double v = 0.0;
    switch (cfg.mode) {
      case ExperimentMode::kPsi:
        v = psi_sample(symbol, point);
        break;
      case ExperimentMode::kPhi:
        v = phi_sample(symbol, point);
        break;
      case ExperimentMode::kH:
        v = h_sample(symbol, point);
        break;
      case ExperimentMode::kSigma:
        v = cfg.grid == ExperimentGrid::kXi ? std::abs(psi_sample(symbol, point))
                                            : std::abs(h_sample(symbol, point));
        break;
    }
    samples[static_cast<std::size_t>(i)] = v;
  }

  ExperimentResult result;
  result.report =
      match_sorted(spectrum, std::move(samples), cfg.outlier_threshold);

  const auto [lo, hi] = std::minmax_element(result.report.samples.begin(),
                                            result.report.samples.end());
  const std::vector<HatFunction> tests = hat_family(*lo, *hi, 20);
  DistributionTarget target = DistributionTarget::kPsi;
  switch (cfg.mode) {
    case ExperimentMode::kPsi:
      target = DistributionTarget::kPsi;
      break;
    case ExperimentMode::kPhi:
      target = DistributionTarget::kPhi;
      break;
    case ExperimentMode::kH:
      target = DistributionTarget::kH;
      break;
    case ExperimentMode::kSigma:
      target = cfg.grid == ExperimentGrid::kXi ? DistributionTarget::kAbsPsi
                                               : DistributionTarget::kAbsH;
      break;
  }
  result.functional_discrepancy = functional_discrepancy(
      spectrum, symbol, target, tests, cfg.fine_samples);

  if (!cfg.output.empty()) {
    std::ofstream out(cfg.output);
    if (!out) throw IoError("cannot write output file '" + cfg.output + "'");
    write_report_csv(out, result.report);
    const std::string summary_path = cfg.summary.empty()
                                         ? detail::default_summary_path(cfg.output)
                                         : cfg.summary;
    std::ofstream sum(summary_path);
    if (!sum) throw IoError("cannot write summary file '" + summary_path + "'");
    write_summary_csv(sum, result);
  }
  return result;
}

/// Maps library errors onto the CLI exit code contract:
/// 1 for configuration/input problems, 2 for size-cap violations,
/// 3 for numeric failures.
inline int exit_code_for_exception(const std::exception& e) {
  if (dynamic_cast<const SizeError*>(&e) != nullptr) return 2;
  if (dynamic_cast<const NumericError*>(&e) != nullptr) return 3;
  return 1;
}

}  // namespace symtoep
