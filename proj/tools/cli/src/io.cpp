// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "greenqfi/cli/io.hpp"

#include "greenqfi/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>

namespace greenqfi::cli {

namespace fs = std::filesystem;

std::string format_number(double x) {
  if (x == 0.0) return "0";  // folds -0
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << x;
  return os.str();
}

void CsvTable::add_row(std::vector<std::string> row) {
  rows.push_back(std::move(row));
  lines.push_back(0);
}

std::string CsvTable::to_string() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ValidationError("missing CSV column '" + name + "'");
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  cells.push_back(cur);
  for (auto& c : cells) {
    const auto b = c.find_first_not_of(" \t");
    const auto e = c.find_last_not_of(" \t");
    c = b == std::string::npos ? std::string{} : c.substr(b, e - b + 1);
  }
  return cells;
}

}  // namespace

CsvTable parse_csv(const std::string& text, const std::string& source) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw ValidationError(source + ":" + std::to_string(n) + ": expected " + std::to_string(t.header.size()) +
                            " columns, found " + std::to_string(cells.size()));
    }
    t.rows.push_back(std::move(cells));
    t.lines.push_back(n);
  }
  if (t.header.empty()) throw ValidationError(source + ": empty CSV (header row required)");
  return t;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_text(path), path); }

double parse_number(const std::string& cell, const std::string& source, int line, const std::string& column) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw ValidationError(source + ":" + std::to_string(line) + ": column " + column + ": '" + cell +
                          "' is not a finite number");
  }
  return v;
}

void OutputSet::add(std::string name, std::string content) {
  for (auto& f : files_) {
    if (f.first == name) {
      f.second = std::move(content);
      return;
    }
  }
  files_.emplace_back(std::move(name), std::move(content));
}

std::vector<std::string> OutputSet::commit(const std::string& dir) const {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  std::vector<fs::path> temps;
  auto cleanup = [&temps] {
    std::error_code ignored;
    for (const auto& t : temps) fs::remove(t, ignored);
  };
  for (const auto& [name, content] : files_) {
    const fs::path tmp = fs::path(dir) / ("." + name + ".tmp");
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) {
      cleanup();
      throw IoError("cannot write " + tmp.string());
    }
  }
  std::vector<std::string> written;
  for (std::size_t i = 0; i < files_.size(); ++i) {
    const fs::path dest = fs::path(dir) / files_[i].first;
    fs::rename(temps[i], dest, ec);
    if (ec) {
      cleanup();
      throw IoError("cannot rename into " + dest.string() + ": " + ec.message());
    }
    written.push_back(dest.string());
  }
  return written;
}

}  // namespace greenqfi::cli
