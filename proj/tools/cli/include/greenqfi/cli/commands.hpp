// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file commands.hpp
 * @brief The batch commands. Each returns the files it would write; the
 *        caller commits them atomically.
 *
 * CSV schemas (header row first):
 *   spectrum    <tag>_poles.csv       q_index,omega,weight
 *               <tag>_binned.csv      q_index,omega_bin_center,value
 *               <tag>_broadened.csv   q_index,omega,value
 *   qfi-ground  qfi_ground_U<u>.csv   k,F_Q,f_Q
 *   qfi-thermal qfi_thermal.csv       T,k,path,F_Q,f_Q
 *   bounds      bound_<a-b-..>.csv    k,F_max,f_max,converged
 *   ingest      qfi_ingest.csv        T,k,path,F_Q,f_Q
 * with f = F / (4N). Every data file has a JSON sidecar of the same stem.
 */

#pragma once

#include "greenqfi/cli/config.hpp"
#include "greenqfi/cli/io.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace greenqfi::cli {

inline constexpr int kFormatVersion = 1;

/// F must exceed bound + margin by more than this to count as a violation.
inline constexpr double kExclusionTolerance = 1e-9;

struct CommandResult {
  OutputSet outputs;
  std::vector<std::string> warnings;
  std::string summary;
};

/// Runs fn(0..count-1) on up to `threads` workers (0: hardware concurrency).
/// The first exception is rethrown after all workers stop.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

/// k = pi/2, 3pi/4, pi when all three are on the N-site momentum grid,
/// otherwise every grid momentum 2 pi n / N.
std::vector<double> default_thermal_ks(int n_sites);

/// Grand-canonical or canonical weights at T > 0; the pure ground state of
/// the configured sector at T = 0.
ThermalWeights run_weights(const EigenSystem& eigs, const RunConfig& cfg, double temperature);

/// File-name tag of a number: 0.5 -> "0.5", -1 -> "m1".
std::string number_tag(double x);

struct PatternVerdict {
  std::string pattern;
  bool excluded = false;
  std::vector<double> witnessing_k;
  double max_margin = 0.0;
};

struct ExclusionReport {
  double margin = 0.0;
  std::vector<PatternVerdict> verdicts;
  nlohmann::json provenance;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

struct NamedCurve {
  std::string name;
  std::vector<double> k;
  std::vector<double> values;
};

/// Patterns whose bound is exceeded, F(k) > bound(k) + margin, at some k.
/// Grids must agree to 1e-12; there is no interpolation.
ExclusionReport exclusion_report(const NamedCurve& qfi, const std::vector<NamedCurve>& bounds, double margin);

CommandResult cmd_spectrum(const RunConfig& cfg);
CommandResult cmd_qfi_ground(const RunConfig& cfg);
CommandResult cmd_qfi_thermal(const RunConfig& cfg);
/// Reads `cache_path` when it exists and writes the merged cache back as
/// bounds_cache.json.
CommandResult cmd_bounds(const RunConfig& cfg, const std::optional<std::string>& cache_path);

struct ExcludeInputs {
  std::string curve;
  std::vector<std::string> bounds;
  /// Row filters for curve files with T / path columns.
  std::optional<double> temperature;
  std::string path = "poles";
};

CommandResult cmd_exclude(const ExcludeInputs& in, double margin);
CommandResult cmd_ingest(const std::string& spectra_csv, const std::string& metadata_json, const RunConfig& cfg);

}  // namespace greenqfi::cli
