// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file config.hpp
 * @brief Run configuration: one JSON document plus command-line overrides.
 *
 * Every physical quantity is in units of t. A config file looks like
 *
 *   {
 *     "model": {"n_sites": 8, "t": 1, "u": 8, "boundary": "periodic",
 *               "mu": 0, "filling": 0.5},
 *     "u_values": [0, 4, 8, 16],
 *     "temperatures": [0.5, 1, 2],
 *     "ensemble": "grand_canonical",
 *     "k_grid": {"count": 64},
 *     "k_values": [1.5707963267948966],
 *     "bin_width": 0.1,
 *     "eta": 0.5,
 *     "binned": true,
 *     "patterns": ["4,2,2", "6,2"],
 *     "symmetry": "den",
 *     "optimizer": {"restarts": 64, "max_iters": 2000, "grad_tol": 1e-9,
 *                   "seed": 20240917, "real_only": false},
 *     "margin": 0,
 *     "output": {"dir": "out", "formats": ["csv", "json"]}
 *   }
 *
 * Unknown keys are rejected.
 */

#pragma once

#include "greenqfi/bounds.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace greenqfi::cli {

/// Bad input; maps to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Optimizer did not converge; exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File system failure; exit code 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

struct RunConfig {
  ModelParams model;
  bool n_sites_set = false;
  double filling = 0.5;
  /// qfi-ground loops over these; empty means {model.u}.
  std::vector<double> u_values;
  std::vector<double> temperatures;
  Ensemble ensemble = Ensemble::grand_canonical;
  int k_count = 64;
  /// Explicit wavevectors; replaces the grid where a command accepts them.
  std::vector<double> k_values;
  double bin_width = 0.1;
  std::optional<double> eta;
  /// qfi-thermal also evaluates the binned path.
  bool binned = false;
  std::vector<std::string> patterns;
  SymmetryClass symmetry = SymmetryClass::den;
  OptimizerConfig optimizer;
  double margin = 0.0;
  bool allow_unconverged = false;
  std::string out_dir = ".";
  std::vector<OutputFormat> formats{OutputFormat::csv, OutputFormat::json};
  int threads = 0;  // 0: hardware concurrency

  bool wants(OutputFormat f) const;
  /// Electrons at the configured filling; throws if not an integer.
  int n_electrons() const;
  /// k = 2 pi i / k_count.
  std::vector<double> k_grid() const;
  /// Model validation plus the ranges of every numeric field.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Parses a config document. Errors carry "<source>:<line>: " prefixes.
RunConfig parse_config(const std::string& text, const std::string& source = "config");
RunConfig load_config(const std::string& path);

std::string to_string(Ensemble e);
Ensemble parse_ensemble(const std::string& s);
std::string to_string(OutputFormat f);
OutputFormat parse_format(const std::string& s);

}  // namespace greenqfi::cli
