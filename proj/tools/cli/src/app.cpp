// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "greenqfi/cli/app.hpp"

#include "greenqfi/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace greenqfi::cli {

namespace {

struct Overrides {
  std::string config;
  std::optional<int> sites, kpoints, restarts, threads;
  std::optional<double> t, mu, filling, bin_width, eta, margin;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> boundary, symmetry, out, ensemble;
  std::vector<double> u, temp, k;
  std::vector<std::string> patterns, formats;
  bool allow_unconverged = false;
  bool binned = false;
  bool real_only = false;
};

RunConfig resolve(const Overrides& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.sites) {
    cfg.model.n_sites = *o.sites;
    cfg.n_sites_set = true;
  }
  if (o.t) cfg.model.t = *o.t;
  if (o.u.size() == 1) cfg.model.u = o.u.front();
  if (o.u.size() > 1) cfg.u_values = o.u;
  if (o.mu) cfg.model.mu = *o.mu;
  if (o.boundary) cfg.model.boundary = parse_boundary(*o.boundary);
  if (o.filling) cfg.filling = *o.filling;
  if (!o.temp.empty()) cfg.temperatures = o.temp;
  if (o.ensemble) cfg.ensemble = parse_ensemble(*o.ensemble);
  if (o.kpoints) cfg.k_count = *o.kpoints;
  if (!o.k.empty()) cfg.k_values = o.k;
  if (o.bin_width) cfg.bin_width = *o.bin_width;
  if (o.eta) cfg.eta = *o.eta;
  if (o.binned) cfg.binned = true;
  if (!o.patterns.empty()) cfg.patterns = o.patterns;
  if (o.symmetry) cfg.symmetry = parse_symmetry(*o.symmetry);
  if (o.restarts) cfg.optimizer.restarts = *o.restarts;
  if (o.seed) cfg.optimizer.seed = *o.seed;
  if (o.real_only) cfg.optimizer.real_only = true;
  if (o.margin) cfg.margin = *o.margin;
  if (o.allow_unconverged) cfg.allow_unconverged = true;
  if (o.out) cfg.out_dir = *o.out;
  if (o.threads) cfg.threads = *o.threads;
  if (!o.formats.empty()) {
    cfg.formats.clear();
    for (const auto& f : o.formats) cfg.formats.push_back(parse_format(f));
  }
  return cfg;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"greenqfi: entanglement witnesses from single-particle spectra of t-U chains"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--sites", o.sites, "number of sites N");
  app.add_option("--t", o.t, "hopping t");
  app.add_option("--u", o.u, "interaction U (repeat for a list)");
  app.add_option("--mu", o.mu, "chemical potential");
  app.add_option("--boundary", o.boundary, "periodic|open");
  app.add_option("--filling", o.filling, "electrons per site");
  app.add_option("--temp", o.temp, "temperature (repeatable)");
  app.add_option("--ensemble", o.ensemble, "grand_canonical|canonical");
  app.add_option("--kpoints", o.kpoints, "k grid size on [0, 2pi)");
  app.add_option("--k", o.k, "explicit wavevector (repeatable)");
  app.add_option("--bin-width", o.bin_width, "histogram bin width");
  app.add_option("--eta", o.eta, "Lorentzian broadening");
  app.add_flag("--binned", o.binned, "also evaluate the binned thermal path");
  app.add_option("--pattern", o.patterns, "entanglement pattern, e.g. 4,2,2 (repeatable)");
  app.add_option("--symmetry", o.symmetry, "den|ien|parity-even|parity-odd");
  app.add_option("--restarts", o.restarts, "optimizer restarts per block");
  app.add_option("--seed", o.seed, "optimizer seed");
  app.add_flag("--real-only", o.real_only, "restrict block states to real amplitudes");
  app.add_option("--margin", o.margin, "exclusion margin");
  app.add_flag("--allow-unconverged", o.allow_unconverged, "keep bounds from unconverged optimizations");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--format", o.formats, "csv|json (repeatable)");
  app.add_option("--threads", o.threads, "worker threads (0: all cores)");

  auto* spectrum = app.add_subcommand("spectrum", "momentum spectral functions: poles, histogram, broadened");
  auto* ground = app.add_subcommand("qfi-ground", "ground-state QFI curves per U");
  auto* thermal = app.add_subcommand("qfi-thermal", "thermal QFI from spectral functions");
  auto* bounds = app.add_subcommand("bounds", "maximal QFI curves of entanglement patterns");
  std::optional<std::string> cache;
  bounds->add_option("--cache", cache, "bound cache JSON (default <out>/bounds_cache.json)");

  auto* exclude = app.add_subcommand("exclude", "compare a QFI curve with pattern bounds");
  ExcludeInputs ex;
  std::optional<double> select_temp;
  exclude->add_option("--curve", ex.curve, "QFI curve CSV")->required()->check(CLI::ExistingFile);
  exclude->add_option("--bound", ex.bounds, "bound CSV (repeatable)")->required()->check(CLI::ExistingFile);
  exclude->add_option("--select-temp", select_temp, "temperature row filter for thermal curves");
  exclude->add_option("--select-path", ex.path, "poles|binned row filter for thermal curves");

  auto* ingest = app.add_subcommand("ingest", "thermal QFI from an external binned spectrum");
  std::string spectra, metadata;
  ingest->add_option("--spectra", spectra, "CSV with q_index, omega, value")->required()->check(CLI::ExistingFile);
  ingest->add_option("--metadata", metadata, "JSON with n_sites, temperature, bin_width")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = resolve(o);
    CommandResult result;
    if (spectrum->parsed()) {
      result = cmd_spectrum(cfg);
    } else if (ground->parsed()) {
      result = cmd_qfi_ground(cfg);
    } else if (thermal->parsed()) {
      result = cmd_qfi_thermal(cfg);
    } else if (bounds->parsed()) {
      result = cmd_bounds(cfg, cache);
    } else if (exclude->parsed()) {
      ex.temperature = select_temp;
      result = cmd_exclude(ex, cfg.margin);
    } else {
      result = cmd_ingest(spectra, metadata, cfg);
    }
    for (const auto& w : result.warnings) err << "warning: " << w << "\n";
    for (const auto& path : result.outputs.commit(cfg.out_dir)) out << "wrote " << path << "\n";
    out << result.summary;
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace greenqfi::cli
