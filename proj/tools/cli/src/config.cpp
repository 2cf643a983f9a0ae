// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "greenqfi/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace greenqfi::cli {

using nlohmann::json;

std::string to_string(Ensemble e) {
  return e == Ensemble::canonical ? "canonical" : "grand_canonical";
}

Ensemble parse_ensemble(const std::string& s) {
  if (s == "grand_canonical" || s == "grand-canonical" || s == "gc") return Ensemble::grand_canonical;
  if (s == "canonical") return Ensemble::canonical;
  throw ValidationError("unknown ensemble '" + s + "' (expected grand_canonical|canonical)");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw ValidationError("unknown output format '" + s + "' (expected csv|json)");
}

bool RunConfig::wants(OutputFormat f) const {
  for (auto g : formats) {
    if (g == f) return true;
  }
  return false;
}

int RunConfig::n_electrons() const {
  const double ne = filling * model.n_sites;
  if (std::abs(ne - std::round(ne)) > 1e-9) {
    throw ValidationError("filling " + std::to_string(filling) + " gives a non-integer electron count on " +
                          std::to_string(model.n_sites) + " sites");
  }
  return static_cast<int>(std::lround(ne));
}

std::vector<double> RunConfig::k_grid() const { return greenqfi::k_grid(k_count); }

void RunConfig::validate() const {
  if (!n_sites_set) throw ValidationError("missing required field model.n_sites (or --sites)");
  try {
    model.validate();
    optimizer.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  if (!(filling >= 0.0 && filling <= 1.0)) throw ValidationError("model.filling must lie in [0, 1]");
  n_electrons();
  for (double t : temperatures) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw ValidationError("temperatures must be finite and > 0 (got " + std::to_string(t) + ")");
    }
  }
  for (double u : u_values) {
    if (!std::isfinite(u)) throw ValidationError("u_values must be finite");
  }
  if (k_count < 1) throw ValidationError("k_grid.count must be >= 1");
  for (double k : k_values) {
    if (!std::isfinite(k)) throw ValidationError("k_values must be finite");
  }
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) throw ValidationError("bin_width must be > 0");
  if (eta && (!(*eta > 0.0) || !std::isfinite(*eta))) throw ValidationError("eta must be > 0");
  if (!(margin >= 0.0) || !std::isfinite(margin)) throw ValidationError("margin must be >= 0");
  if (formats.empty()) throw ValidationError("output.formats must not be empty");
  if (threads < 0) throw ValidationError("threads must be >= 0");
  for (const auto& p : patterns) {
    try {
      parse_pattern(p, symmetry, filling).validate();
    } catch (const std::invalid_argument& e) {
      throw ValidationError("pattern '" + p + "': " + e.what());
    }
  }
}

json RunConfig::to_json() const {
  json j;
  j["model"] = {{"n_sites", model.n_sites}, {"t", model.t},     {"u", model.u},
                {"boundary", greenqfi::to_string(model.boundary)}, {"mu", model.mu},
                {"filling", filling}};
  j["u_values"] = u_values;
  j["temperatures"] = temperatures;
  j["ensemble"] = to_string(ensemble);
  j["k_grid"] = {{"count", k_count}};
  j["k_values"] = k_values;
  j["bin_width"] = bin_width;
  j["eta"] = eta ? json(*eta) : json(nullptr);
  j["binned"] = binned;
  j["patterns"] = patterns;
  j["symmetry"] = greenqfi::to_string(symmetry);
  j["optimizer"] = {{"restarts", optimizer.restarts}, {"max_iters", optimizer.max_iters},
                    {"grad_tol", optimizer.grad_tol}, {"seed", optimizer.seed},
                    {"real_only", optimizer.real_only}};
  j["margin"] = margin;
  return j;
}

namespace {

class Reader {
 public:
  Reader(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    std::ostringstream os;
    os << source_ << ":" << line_of(key) << ": " << key << ": " << what;
    throw ValidationError(os.str());
  }

  void only(const json& obj, const std::string& where, const std::set<std::string>& keys) const {
    if (!obj.is_object()) fail(where.empty() ? "config" : where, "expected an object");
    for (const auto& [k, v] : obj.items()) {
      if (!keys.count(k)) fail(k, "unknown field" + (where.empty() ? "" : " in " + where));
    }
  }

  double number(const json& v, const std::string& key) const {
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }

  int integer(const json& v, const std::string& key) const {
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<int>();
  }

  std::uint64_t unsigned_integer(const json& v, const std::string& key) const {
    if (!v.is_number_unsigned()) fail(key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const json& v, const std::string& key) const {
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
  }

  std::string string(const json& v, const std::string& key) const {
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& v, const std::string& key) const {
    if (!v.is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(number(x, key));
    return out;
  }

  std::vector<std::string> strings(const json& v, const std::string& key) const {
    if (!v.is_array()) fail(key, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& x : v) out.push_back(string(x, key));
    return out;
  }

  template <typename F>
  auto convert(const std::string& key, F&& f) const {
    try {
      return f();
    } catch (const ValidationError& e) {
      fail(key, e.what());
    } catch (const std::invalid_argument& e) {
      fail(key, e.what());
    }
  }

 private:
  int line_of(const std::string& key) const {
    const auto pos = text_.find("\"" + key + "\"");
    if (pos == std::string::npos) return 1;
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
  }

  const std::string& text_;
  std::string source_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(source + ": " + e.what());
  }
  const Reader r(text, source);
  r.only(doc, "",
         {"model", "u_values", "temperatures", "ensemble", "k_grid", "k_values", "bin_width", "eta", "binned",
          "patterns", "symmetry", "optimizer", "margin", "allow_unconverged", "output", "threads"});
  RunConfig cfg;
  if (doc.contains("model")) {
    const auto& m = doc["model"];
    r.only(m, "model", {"n_sites", "t", "u", "boundary", "mu", "filling", "allow_doubled_bond"});
    if (m.contains("n_sites")) {
      cfg.model.n_sites = r.integer(m["n_sites"], "n_sites");
      cfg.n_sites_set = true;
    }
    if (m.contains("t")) cfg.model.t = r.number(m["t"], "t");
    if (m.contains("u")) cfg.model.u = r.number(m["u"], "u");
    if (m.contains("mu")) cfg.model.mu = r.number(m["mu"], "mu");
    if (m.contains("filling")) cfg.filling = r.number(m["filling"], "filling");
    if (m.contains("boundary")) {
      const auto b = r.string(m["boundary"], "boundary");
      cfg.model.boundary = r.convert("boundary", [&] { return parse_boundary(b); });
    }
    if (m.contains("allow_doubled_bond")) {
      cfg.model.allow_doubled_bond = r.boolean(m["allow_doubled_bond"], "allow_doubled_bond");
    }
  }
  if (doc.contains("u_values")) cfg.u_values = r.numbers(doc["u_values"], "u_values");
  if (doc.contains("temperatures")) {
    cfg.temperatures = r.numbers(doc["temperatures"], "temperatures");
    for (double t : cfg.temperatures) {
      if (!(t > 0.0)) r.fail("temperatures", "every temperature must be > 0");
    }
  }
  if (doc.contains("ensemble")) {
    const auto e = r.string(doc["ensemble"], "ensemble");
    cfg.ensemble = r.convert("ensemble", [&] { return parse_ensemble(e); });
  }
  if (doc.contains("k_grid")) {
    const auto& g = doc["k_grid"];
    r.only(g, "k_grid", {"count"});
    if (g.contains("count")) cfg.k_count = r.integer(g["count"], "count");
  }
  if (doc.contains("k_values")) cfg.k_values = r.numbers(doc["k_values"], "k_values");
  if (doc.contains("bin_width")) cfg.bin_width = r.number(doc["bin_width"], "bin_width");
  if (doc.contains("eta") && !doc["eta"].is_null()) cfg.eta = r.number(doc["eta"], "eta");
  if (doc.contains("binned")) cfg.binned = r.boolean(doc["binned"], "binned");
  if (doc.contains("patterns")) cfg.patterns = r.strings(doc["patterns"], "patterns");
  if (doc.contains("symmetry")) {
    const auto s = r.string(doc["symmetry"], "symmetry");
    cfg.symmetry = r.convert("symmetry", [&] { return parse_symmetry(s); });
  }
  if (doc.contains("optimizer")) {
    const auto& o = doc["optimizer"];
    r.only(o, "optimizer",
           {"restarts", "max_iters", "grad_tol", "armijo", "backtrack", "max_backtracks", "seed", "real_only"});
    if (o.contains("restarts")) cfg.optimizer.restarts = r.integer(o["restarts"], "restarts");
    if (o.contains("max_iters")) cfg.optimizer.max_iters = r.integer(o["max_iters"], "max_iters");
    if (o.contains("grad_tol")) cfg.optimizer.grad_tol = r.number(o["grad_tol"], "grad_tol");
    if (o.contains("armijo")) cfg.optimizer.armijo = r.number(o["armijo"], "armijo");
    if (o.contains("backtrack")) cfg.optimizer.backtrack = r.number(o["backtrack"], "backtrack");
    if (o.contains("max_backtracks")) {
      cfg.optimizer.max_backtracks = r.integer(o["max_backtracks"], "max_backtracks");
    }
    if (o.contains("seed")) cfg.optimizer.seed = r.unsigned_integer(o["seed"], "seed");
    if (o.contains("real_only")) cfg.optimizer.real_only = r.boolean(o["real_only"], "real_only");
  }
  if (doc.contains("margin")) cfg.margin = r.number(doc["margin"], "margin");
  if (doc.contains("allow_unconverged")) {
    cfg.allow_unconverged = r.boolean(doc["allow_unconverged"], "allow_unconverged");
  }
  if (doc.contains("threads")) cfg.threads = r.integer(doc["threads"], "threads");
  if (doc.contains("output")) {
    const auto& o = doc["output"];
    r.only(o, "output", {"dir", "formats"});
    if (o.contains("dir")) cfg.out_dir = r.string(o["dir"], "dir");
    if (o.contains("formats")) {
      cfg.formats.clear();
      for (const auto& f : r.strings(o["formats"], "formats")) {
        cfg.formats.push_back(r.convert("formats", [&] { return parse_format(f); }));
      }
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace greenqfi::cli
