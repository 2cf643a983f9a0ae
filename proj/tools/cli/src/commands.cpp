// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "greenqfi/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace greenqfi::cli {

using nlohmann::json;

namespace {

constexpr const char* kThermalKernel =
    "F = 4 sum_q sum_{w in A_q, e in A_q+k} tanh((e-w)/2T) (nF(w)-nF(e)) A_q(w) A_q+k(e)";

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json header(const std::string& command, const RunConfig& cfg) {
  return {{"command", command}, {"format_version", kFormatVersion}, {"config", cfg.to_json()}};
}

std::vector<std::string> cells(std::initializer_list<double> xs) {
  std::vector<std::string> out;
  for (double x : xs) out.push_back(format_number(x));
  return out;
}

template <typename F>
auto validated(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

std::vector<double> command_ks(const RunConfig& cfg) { return cfg.k_values.empty() ? cfg.k_grid() : cfg.k_values; }

void check_on_grid(const std::vector<double>& ks, int n_sites) {
  for (double k : ks) validated([&] { return momentum_index(k, n_sites); });
}

}  // namespace

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<double> default_thermal_ks(int n_sites) {
  const double pi = std::numbers::pi;
  std::vector<double> trio{pi / 2, 3 * pi / 4, pi};
  try {
    for (double k : trio) momentum_index(k, n_sites);
    return trio;
  } catch (const std::invalid_argument&) {
    return k_grid(n_sites);
  }
}

ThermalWeights run_weights(const EigenSystem& eigs, const RunConfig& cfg, double temperature) {
  if (temperature == 0.0) {
    ThermalWeights w = pure_state_weights(eigs, cfg.n_electrons(), 0);
    w.mu = cfg.model.mu;
    return w;
  }
  if (cfg.ensemble == Ensemble::canonical) {
    return canonical_weights(eigs, temperature, cfg.n_electrons(), cfg.model.mu);
  }
  return thermal_weights(eigs, temperature, cfg.model.mu);
}

std::string number_tag(double x) {
  std::string s = format_number(x);
  if (!s.empty() && s[0] == '-') s = "m" + s.substr(1);
  return s;
}

json ExclusionReport::to_json() const {
  json j;
  j["margin"] = margin;
  j["tolerance"] = kExclusionTolerance;
  j["provenance"] = provenance;
  j["patterns"] = json::array();
  for (const auto& v : verdicts) {
    j["patterns"].push_back({{"pattern", v.pattern},
                             {"excluded", v.excluded},
                             {"witnessing_k", v.witnessing_k},
                             {"max_margin", v.max_margin}});
  }
  return j;
}

std::string ExclusionReport::to_text() const {
  std::ostringstream os;
  os << "margin " << format_number(margin) << "\n";
  for (const auto& v : verdicts) {
    os << v.pattern << ": " << (v.excluded ? "EXCLUDED" : "not excluded") << " (max F - bound = "
       << format_number(v.max_margin) << ")";
    if (v.excluded) {
      os << " at " << v.witnessing_k.size() << " k:";
      for (double k : v.witnessing_k) os << " " << format_number(k);
    }
    os << "\n";
  }
  if (provenance.contains("warnings")) {
    for (const auto& w : provenance["warnings"]) os << "warning: " << w.get<std::string>() << "\n";
  }
  return os.str();
}

ExclusionReport exclusion_report(const NamedCurve& qfi, const std::vector<NamedCurve>& bounds, double margin) {
  if (!(margin >= 0.0)) throw ValidationError("margin must be >= 0");
  if (qfi.k.size() != qfi.values.size()) throw ValidationError("curve " + qfi.name + ": ragged data");
  ExclusionReport report;
  report.margin = margin;
  for (const auto& b : bounds) {
    if (b.k.size() != qfi.k.size()) {
      throw ValidationError("bound " + b.name + " has " + std::to_string(b.k.size()) + " k points, curve " +
                            qfi.name + " has " + std::to_string(qfi.k.size()));
    }
    for (std::size_t i = 0; i < b.k.size(); ++i) {
      if (std::abs(b.k[i] - qfi.k[i]) > 1e-12) {
        throw ValidationError("k grids of " + b.name + " and " + qfi.name + " differ at row " +
                              std::to_string(i + 1));
      }
    }
    PatternVerdict v;
    v.pattern = b.name;
    v.max_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b.k.size(); ++i) {
      const double d = qfi.values[i] - b.values[i];
      v.max_margin = std::max(v.max_margin, d);
      if (d > margin + kExclusionTolerance) v.witnessing_k.push_back(b.k[i]);
    }
    v.excluded = !v.witnessing_k.empty();
    report.verdicts.push_back(std::move(v));
  }
  return report;
}

CommandResult cmd_spectrum(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.model.boundary != Boundary::periodic) {
    throw ValidationError("spectrum: momentum spectra need periodic boundaries");
  }
  const int n = cfg.model.n_sites;
  const auto eigs = validated([&] { return solve_tu_model(cfg.model); });
  std::vector<double> temps = cfg.temperatures.empty() ? std::vector<double>{0.0} : cfg.temperatures;
  CommandResult result;
  for (double temp : temps) {
    const auto w = run_weights(eigs, cfg, temp);
    const auto poles = spectral_poles_momentum(eigs, w, cfg.model.boundary);
    const auto binned = bin_spectrum(poles, cfg.bin_width);
    const std::string stem = "spectrum_T" + number_tag(temp);

    CsvTable pc{{"q_index", "omega", "weight"}, {}, {}};
    CsvTable bc{{"q_index", "omega_bin_center", "value"}, {}, {}};
    for (int q = 0; q < n; ++q) {
      for (const auto& p : poles.momentum_channel(q)) {
        pc.add_row({std::to_string(q), format_number(p.omega), format_number(p.weight.real())});
      }
      for (std::size_t b = 0; b < binned.bin_count(); ++b) {
        bc.add_row({std::to_string(q), format_number(binned.center(b)),
                    format_number(binned.values[static_cast<std::size_t>(q)][b])});
      }
    }
    json meta = header("spectrum", cfg);
    meta["n_sites"] = n;
    meta["temperature"] = temp;
    meta["ensemble"] = temp == 0.0 ? "ground_state" : to_string(cfg.ensemble);
    meta["mu"] = cfg.model.mu;
    meta["omega0"] = poles.omega0;
    meta["bin_width"] = cfg.bin_width;
    meta["omega_min"] = binned.omega_min;
    meta["bin_count"] = binned.bin_count();
    meta["eta"] = cfg.eta ? json(*cfg.eta) : json(nullptr);
    meta["pole_count"] = poles.pole_count();
    meta["sum_rule_residuals"] = check_sum_rule(poles);
    if (temp == 0.0 || cfg.ensemble == Ensemble::canonical) meta["n_electrons"] = cfg.n_electrons();

    if (cfg.wants(OutputFormat::csv)) {
      result.outputs.add(stem + "_poles.csv", pc.to_string());
      result.outputs.add(stem + "_binned.csv", bc.to_string());
    }
    if (cfg.eta) {
      const double eta = *cfg.eta;
      const double step = std::min(cfg.bin_width, eta / 5.0);
      const double reach = poles.omega0 + 20.0 * eta;
      const auto broadened = broaden_spectrum(poles, eta, uniform_grid(-reach, reach, step));
      CsvTable lc{{"q_index", "omega", "value"}, {}, {}};
      for (int q = 0; q < n; ++q) {
        for (std::size_t i = 0; i < broadened.grid.size(); ++i) {
          lc.add_row({std::to_string(q), format_number(broadened.grid[i]),
                      format_number(broadened.values[static_cast<std::size_t>(q)][i])});
        }
      }
      meta["broadened_grid"] = {{"min", -reach}, {"step", step}, {"count", broadened.grid.size()}};
      if (cfg.wants(OutputFormat::csv)) result.outputs.add(stem + "_broadened.csv", lc.to_string());
    }
    if (cfg.wants(OutputFormat::json)) result.outputs.add(stem + ".json", dump(meta));

    double worst = 0.0;
    for (double r : check_sum_rule(poles)) worst = std::max(worst, r);
    if (worst > 1e-10) {
      result.warnings.push_back(stem + ": sum-rule residual " + format_number(worst));
    }
    result.summary += stem + ": " + std::to_string(poles.pole_count()) + " poles, omega0 " +
                      format_number(poles.omega0) + "\n";
  }
  return result;
}

CommandResult cmd_qfi_ground(const RunConfig& cfg) {
  cfg.validate();
  const auto ks = command_ks(cfg);
  const int n = cfg.model.n_sites;
  const SectorBasis sector(n, cfg.n_electrons());
  std::vector<double> us = cfg.u_values.empty() ? std::vector<double>{cfg.model.u} : cfg.u_values;
  CommandResult result;
  for (double u : us) {
    ModelParams params = cfg.model;
    params.u = u;
    const auto gs = validated([&] { return ground_state(params, sector); });
    const auto curve = qfi_curve(correlation_data(gs.state, sector), ks);
    const auto f = curve.density();
    const std::string stem = "qfi_ground_U" + number_tag(u);

    CsvTable t{{"k", "F_Q", "f_Q"}, {}, {}};
    for (std::size_t i = 0; i < ks.size(); ++i) t.add_row(cells({ks[i], curve.qfi[i], f[i]}));
    json meta = header("qfi-ground", cfg);
    meta["u"] = u;
    meta["n_sites"] = n;
    meta["n_electrons"] = sector.n_electrons();
    meta["temperature"] = 0.0;
    meta["energy"] = gs.energy;
    meta["gap"] = std::isfinite(gs.gap) ? json(gs.gap) : json(nullptr);
    meta["degenerate"] = gs.degenerate;
    meta["multiplicity"] = gs.multiplicity;
    meta["momentum"] = gs.momentum ? json(*gs.momentum) : json(nullptr);
    meta["k"] = ks;
    meta["F_Q"] = curve.qfi;
    json warnings = json::array();
    if (gs.degenerate) {
      std::string msg = "U=" + format_number(u) + ": ground level is " + std::to_string(gs.multiplicity) +
                        "-fold degenerate";
      msg += gs.momentum ? "; using the translation eigenstate with K=" + format_number(*gs.momentum)
                         : "; using the eigensolver's first vector";
      warnings.push_back(msg);
      result.warnings.push_back(msg);
    }
    meta["warnings"] = warnings;
    if (cfg.wants(OutputFormat::csv)) result.outputs.add(stem + ".csv", t.to_string());
    if (cfg.wants(OutputFormat::json)) result.outputs.add(stem + ".json", dump(meta));
    result.summary += stem + ": max F_Q " + format_number(*std::max_element(curve.qfi.begin(), curve.qfi.end())) +
                      "\n";
  }
  return result;
}

CommandResult cmd_qfi_thermal(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.temperatures.empty()) throw ValidationError("qfi-thermal: temperatures must not be empty");
  if (cfg.model.boundary != Boundary::periodic) {
    throw ValidationError("qfi-thermal: the spectral path needs periodic boundaries");
  }
  const int n = cfg.model.n_sites;
  const auto ks = cfg.k_values.empty() ? default_thermal_ks(n) : cfg.k_values;
  check_on_grid(ks, n);
  const auto eigs = validated([&] { return solve_tu_model(cfg.model); });

  const auto nt = cfg.temperatures.size();
  std::vector<std::vector<double>> exact(nt), binned(nt);
  parallel_for(static_cast<int>(nt), cfg.threads, [&](int ti) {
    const auto i = static_cast<std::size_t>(ti);
    const auto w = run_weights(eigs, cfg, cfg.temperatures[i]);
    const auto poles = spectral_poles_momentum(eigs, w, cfg.model.boundary);
    exact[i] = qfi_curve(poles, ks).qfi;
    if (cfg.binned) binned[i] = qfi_curve(bin_spectrum(poles, cfg.bin_width), ks).qfi;
  });

  CsvTable t{{"T", "k", "path", "F_Q", "f_Q"}, {}, {}};
  json rows = json::array();
  for (std::size_t i = 0; i < nt; ++i) {
    for (std::size_t j = 0; j < ks.size(); ++j) {
      const double temp = cfg.temperatures[i];
      t.add_row({format_number(temp), format_number(ks[j]), "poles", format_number(exact[i][j]),
                 format_number(exact[i][j] / (4.0 * n))});
      rows.push_back({{"T", temp}, {"k", ks[j]}, {"path", "poles"}, {"F_Q", exact[i][j]}});
      if (cfg.binned) {
        t.add_row({format_number(temp), format_number(ks[j]), "binned", format_number(binned[i][j]),
                   format_number(binned[i][j] / (4.0 * n))});
        rows.push_back({{"T", temp}, {"k", ks[j]}, {"path", "binned"}, {"F_Q", binned[i][j]}});
      }
    }
  }
  json meta = header("qfi-thermal", cfg);
  meta["n_sites"] = n;
  meta["ensemble"] = to_string(cfg.ensemble);
  meta["thermal_kernel"] = kThermalKernel;
  meta["k"] = ks;
  meta["values"] = rows;
  CommandResult result;
  if (cfg.wants(OutputFormat::csv)) result.outputs.add("qfi_thermal.csv", t.to_string());
  if (cfg.wants(OutputFormat::json)) result.outputs.add("qfi_thermal.json", dump(meta));
  result.summary = "qfi-thermal: " + std::to_string(nt) + " temperatures x " + std::to_string(ks.size()) + " k\n";
  return result;
}

namespace {

std::string symmetry_name(SymmetryClass s) { return greenqfi::to_string(s); }

json cache_to_json(const BoundCache& cache) {
  json entries = json::array();
  for (const auto& [key, bm] : cache.entries()) {
    std::ostringstream hex;
    hex << std::hex << key.k_bits;
    entries.push_back({{"block_size", key.block_size},
                       {"symmetry", symmetry_name(key.symmetry)},
                       {"n_electrons", key.n_electrons},
                       {"real_only", key.real_only},
                       {"k", std::bit_cast<double>(key.k_bits)},
                       {"k_bits", hex.str()},
                       {"seed", key.seed},
                       {"restarts", key.restarts},
                       {"qfi", bm.qfi},
                       {"converged", bm.converged},
                       {"grad_norm", bm.grad_norm},
                       {"iterations", bm.iterations},
                       {"best_restart", bm.best_restart}});
  }
  return {{"format_version", kFormatVersion}, {"entries", entries}};
}

void load_cache(const std::string& path, BoundCache& cache) {
  json doc;
  try {
    doc = json::parse(read_text(path));
    if (doc.at("format_version").get<int>() != kFormatVersion) {
      throw ValidationError(path + ": unsupported cache format_version");
    }
    for (const auto& e : doc.at("entries")) {
      BoundCache::Key key{};
      key.block_size = e.at("block_size").get<int>();
      key.symmetry = parse_symmetry(e.at("symmetry").get<std::string>());
      key.n_electrons = e.at("n_electrons").get<int>();
      key.real_only = e.at("real_only").get<bool>();
      key.k_bits = std::stoull(e.at("k_bits").get<std::string>(), nullptr, 16);
      key.seed = e.at("seed").get<std::uint64_t>();
      key.restarts = e.at("restarts").get<int>();
      BlockMaximum bm;
      bm.qfi = e.at("qfi").get<double>();
      bm.converged = e.at("converged").get<bool>();
      bm.grad_norm = e.at("grad_norm").get<double>();
      bm.iterations = e.at("iterations").get<int>();
      bm.best_restart = e.at("best_restart").get<int>();
      cache.insert(key, std::move(bm));
    }
  } catch (const json::exception& e) {
    throw ValidationError(path + ": malformed bound cache: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(path + ": malformed bound cache: " + e.what());
  }
}

std::string pattern_stem(const EntanglementPattern& p) {
  std::string s = "bound";
  for (std::size_t i = 0; i < p.blocks.size(); ++i) s += (i ? "-" : "_") + std::to_string(p.blocks[i]);
  if (p.symmetry != SymmetryClass::den) s += "_" + symmetry_name(p.symmetry);
  return s;
}

}  // namespace

CommandResult cmd_bounds(const RunConfig& cfg, const std::optional<std::string>& cache_path) {
  if (cfg.patterns.empty()) throw ValidationError("bounds: at least one pattern is required");
  for (const auto& p : cfg.patterns) {
    validated([&] { return parse_pattern(p, cfg.symmetry, cfg.filling); });
  }
  validated([&] {
    cfg.optimizer.validate();
    return 0;
  });
  const auto ks = command_ks(cfg);
  BoundCache cache;
  const std::string cache_file =
      cache_path ? *cache_path : (std::filesystem::path(cfg.out_dir) / "bounds_cache.json").string();
  if (std::filesystem::exists(cache_file)) load_cache(cache_file, cache);

  std::vector<EntanglementPattern> patterns;
  std::vector<std::pair<int, double>> tasks;
  for (const auto& p : cfg.patterns) {
    patterns.push_back(parse_pattern(p, cfg.symmetry, cfg.filling));
    for (const auto& [size, count] : patterns.back().multiplicities()) {
      for (double k : ks) tasks.emplace_back(size, k);
    }
  }
  std::sort(tasks.begin(), tasks.end());
  tasks.erase(std::unique(tasks.begin(), tasks.end()), tasks.end());
  parallel_for(static_cast<int>(tasks.size()), cfg.threads, [&](int i) {
    const auto [size, k] = tasks[static_cast<std::size_t>(i)];
    cache.get_or_compute(size, k, cfg.symmetry, cfg.optimizer, cfg.filling);
  });

  CommandResult result;
  std::vector<std::string> failures;
  for (const auto& pattern : patterns) {
    const auto curve = pattern_bound_curve(pattern, ks, cfg.optimizer, &cache);
    const auto f = curve.density();
    const std::string stem = pattern_stem(pattern);
    CsvTable t{{"k", "F_max", "f_max", "converged"}, {}, {}};
    json blocks = json::array();
    for (std::size_t i = 0; i < ks.size(); ++i) {
      t.add_row({format_number(ks[i]), format_number(curve.qfi[i]), format_number(f[i]),
                 curve.converged[i] ? "1" : "0"});
      std::size_t b = 0;
      for (const auto& [size, count] : pattern.multiplicities()) {
        const auto& bm = curve.blocks[i][b++];
        blocks.push_back({{"k", ks[i]},
                          {"block_size", size},
                          {"count", count},
                          {"qfi", bm.qfi},
                          {"converged", bm.converged},
                          {"grad_norm", bm.grad_norm}});
        if (!bm.converged) {
          failures.push_back(pattern.label() + ": block " + std::to_string(size) + " did not converge at k=" +
                             format_number(ks[i]) + " (gradient norm " + format_number(bm.grad_norm) + ")");
        }
      }
    }
    json meta = header("bounds", cfg);
    meta["pattern"] = pattern.label();
    meta["symmetry"] = symmetry_name(pattern.symmetry);
    meta["filling"] = pattern.filling;
    meta["n_sites"] = pattern.n_sites();
    meta["k"] = ks;
    meta["F_max"] = curve.qfi;
    meta["all_converged"] = curve.all_converged();
    meta["blocks"] = blocks;
    if (cfg.wants(OutputFormat::csv)) result.outputs.add(stem + ".csv", t.to_string());
    if (cfg.wants(OutputFormat::json)) result.outputs.add(stem + ".json", dump(meta));
    result.summary += stem + ": max F " + format_number(*std::max_element(curve.qfi.begin(), curve.qfi.end())) +
                      (curve.all_converged() ? "" : " (unconverged points)") + "\n";
  }
  if (!failures.empty()) {
    if (!cfg.allow_unconverged) {
      std::string msg = "optimizer did not converge:";
      for (const auto& f : failures) msg += "\n  " + f;
      throw ConvergenceError(msg);
    }
    result.warnings.insert(result.warnings.end(), failures.begin(), failures.end());
  }
  result.outputs.add(std::filesystem::path(cache_file).filename().string(), dump(cache_to_json(cache)));
  return result;
}

namespace {

json sidecar_of(const std::string& csv_path) {
  auto p = std::filesystem::path(csv_path).replace_extension(".json");
  if (!std::filesystem::exists(p)) return nullptr;
  try {
    return json::parse(read_text(p.string()));
  } catch (const json::exception& e) {
    throw ValidationError(p.string() + ": " + e.what());
  }
}

// A bound file may also be any QFI curve (F_Q column).
NamedCurve read_curve(const std::string& path, std::string value_column, const ExcludeInputs* filter) {
  const auto t = read_csv(path);
  const auto kc = t.column("k");
  if (value_column == "F_max" && std::find(t.header.begin(), t.header.end(), "F_max") == t.header.end() &&
      std::find(t.header.begin(), t.header.end(), "F_Q") != t.header.end()) {
    value_column = "F_Q";
  }
  const auto vc = t.column(value_column);
  std::optional<std::size_t> tc, pc;
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (t.header[i] == "T") tc = i;
    if (t.header[i] == "path") pc = i;
  }
  if (tc && (!filter || !filter->temperature)) {
    throw ValidationError(path + ": curve has several temperatures; select one with --select-temp");
  }
  NamedCurve c;
  const auto meta = sidecar_of(path);
  c.name = meta.is_object() && meta.contains("pattern") ? meta["pattern"].get<std::string>()
                                                         : std::filesystem::path(path).stem().string();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const int line = t.lines[r];
    if (tc && std::abs(parse_number(row[*tc], path, line, "T") - *filter->temperature) > 1e-12) continue;
    if (pc && filter && row[*pc] != filter->path) continue;
    c.k.push_back(parse_number(row[kc], path, line, "k"));
    c.values.push_back(parse_number(row[vc], path, line, value_column));
  }
  if (c.k.empty()) throw ValidationError(path + ": no rows selected");
  return c;
}

}  // namespace

CommandResult cmd_exclude(const ExcludeInputs& in, double margin) {
  if (in.bounds.empty()) throw ValidationError("exclude: at least one bound file is required");
  const auto curve = read_curve(in.curve, "F_Q", &in);
  std::vector<NamedCurve> bounds;
  for (const auto& b : in.bounds) bounds.push_back(read_curve(b, "F_max", nullptr));
  auto report = exclusion_report(curve, bounds, margin);

  json prov;
  prov["curve"] = std::filesystem::path(in.curve).filename().string();
  if (in.temperature) prov["temperature"] = *in.temperature;
  if (const auto meta = sidecar_of(in.curve); meta.is_object()) {
    for (const char* key : {"config", "u", "temperature", "n_sites", "degenerate", "momentum", "ensemble"}) {
      if (meta.contains(key)) prov[key] = meta[key];
    }
    if (meta.contains("warnings")) prov["warnings"] = meta["warnings"];
  }
  report.provenance = prov;

  CommandResult result;
  result.outputs.add("exclusion.json", dump(report.to_json()));
  result.outputs.add("exclusion.txt", report.to_text());
  result.summary = report.to_text();
  return result;
}

CommandResult cmd_ingest(const std::string& spectra_csv, const std::string& metadata_json, const RunConfig& cfg) {
  json meta;
  try {
    meta = json::parse(read_text(metadata_json));
  } catch (const json::parse_error& e) {
    throw ValidationError(metadata_json + ": " + e.what());
  }
  int n = 0;
  double temp = 0.0, dw = 0.0;
  try {
    n = meta.at("n_sites").get<int>();
    temp = meta.at("temperature").get<double>();
    dw = meta.at("bin_width").get<double>();
  } catch (const json::exception& e) {
    throw ValidationError(metadata_json + ": needs n_sites, temperature and bin_width: " + e.what());
  }
  if (n < 1) throw ValidationError(metadata_json + ": n_sites must be >= 1");
  if (!(temp > 0.0)) throw ValidationError(metadata_json + ": thermal QFI needs temperature > 0");
  if (!(dw > 0.0)) throw ValidationError(metadata_json + ": bin_width must be > 0");

  const auto t = read_csv(spectra_csv);
  const auto qc = t.column("q_index");
  std::size_t oc = 0;
  try {
    oc = t.column("omega");
  } catch (const ValidationError&) {
    oc = t.column("omega_bin_center");
  }
  const auto vc = t.column("value");

  std::vector<std::vector<std::pair<double, double>>> rows(static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const int line = t.lines[r];
    const double qd = parse_number(row[qc], spectra_csv, line, "q_index");
    if (qd != std::floor(qd) || qd < 0 || qd >= n) {
      throw ValidationError(spectra_csv + ":" + std::to_string(line) + ": q_index '" + row[qc] +
                            "' is not an integer in [0, " + std::to_string(n - 1) + "]");
    }
    const double omega = parse_number(row[oc], spectra_csv, line, t.header[oc]);
    const double value = parse_number(row[vc], spectra_csv, line, "value");
    if (value < -1e-6) {
      throw ValidationError(spectra_csv + ":" + std::to_string(line) + ": negative spectral weight " + row[vc]);
    }
    rows[static_cast<std::size_t>(qd)].emplace_back(omega, value);
  }

  BinnedSpectrum binned;
  binned.n_sites = n;
  binned.temperature = temp;
  binned.bin_width = dw;
  const auto& ref = rows.front();
  if (ref.empty()) throw ValidationError(spectra_csv + ": no rows for q_index 0");
  for (int q = 0; q < n; ++q) {
    auto& rq = rows[static_cast<std::size_t>(q)];
    if (rq.size() != ref.size()) {
      throw ValidationError(spectra_csv + ": q_index " + std::to_string(q) + " has " + std::to_string(rq.size()) +
                            " rows, q_index 0 has " + std::to_string(ref.size()));
    }
    std::stable_sort(rq.begin(), rq.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  const auto& grid = rows.front();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (int q = 1; q < n; ++q) {
      if (std::abs(rows[static_cast<std::size_t>(q)][i].first - grid[i].first) > 1e-9 * std::max(1.0, dw)) {
        throw ValidationError(spectra_csv + ": q_index " + std::to_string(q) + " uses a different omega grid");
      }
    }
    if (i > 0 && std::abs((grid[i].first - grid[i - 1].first) - dw) > 1e-6 * dw) {
      throw ValidationError(spectra_csv + ": omega grid is not uniform with spacing " + format_number(dw) +
                            " (step " + format_number(grid[i].first - grid[i - 1].first) + " before omega " +
                            format_number(grid[i].first) + ")");
    }
  }
  binned.omega_min = grid.front().first - 0.5 * dw;
  for (const auto& rq : rows) {
    std::vector<double> v;
    for (const auto& [omega, value] : rq) v.push_back(value);
    binned.values.push_back(std::move(v));
  }

  CommandResult result;
  std::vector<double> residuals;
  for (int q = 0; q < n; ++q) {
    double s = 0.0;
    for (double v : binned.values[static_cast<std::size_t>(q)]) s += v * dw;
    residuals.push_back(std::abs(s - 1.0));
    if (residuals.back() > 0.05) {
      result.warnings.push_back("q_index " + std::to_string(q) + ": sum-rule residual " +
                                format_number(residuals.back()) + " exceeds 5%");
    }
  }

  const auto ks = cfg.k_values.empty() ? default_thermal_ks(n) : cfg.k_values;
  check_on_grid(ks, n);
  const auto curve = qfi_curve(binned, ks);
  CsvTable out{{"T", "k", "path", "F_Q", "f_Q"}, {}, {}};
  for (std::size_t j = 0; j < ks.size(); ++j) {
    out.add_row({format_number(temp), format_number(ks[j]), "binned", format_number(curve.qfi[j]),
                 format_number(curve.qfi[j] / (4.0 * n))});
  }
  json side;
  side["command"] = "ingest";
  side["format_version"] = kFormatVersion;
  side["source"] = std::filesystem::path(spectra_csv).filename().string();
  side["n_sites"] = n;
  side["temperature"] = temp;
  side["bin_width"] = dw;
  side["thermal_kernel"] = kThermalKernel;
  side["sum_rule_residuals"] = residuals;
  side["warnings"] = result.warnings;
  side["k"] = ks;
  side["F_Q"] = curve.qfi;
  if (cfg.wants(OutputFormat::csv)) result.outputs.add("qfi_ingest.csv", out.to_string());
  if (cfg.wants(OutputFormat::json)) result.outputs.add("qfi_ingest.json", dump(side));
  result.summary = "ingest: " + std::to_string(ks.size()) + " k values at T=" + format_number(temp) + "\n";
  return result;
}

}  // namespace greenqfi::cli
