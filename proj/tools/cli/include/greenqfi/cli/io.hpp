// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file io.hpp
 * @brief CSV text, locale-free number formatting and all-or-nothing output.
 */

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace greenqfi::cli {

/// Round-trip decimal form of a double ('.' separator, 17 significant digits).
std::string format_number(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based line number of every row in the source file (0 when built in memory).
  std::vector<int> lines;

  void add_row(std::vector<std::string> row);
  std::string to_string() const;
  /// Column position; throws ValidationError when absent.
  std::size_t column(const std::string& name) const;
};

/// Strict parser: header row required, every row must have header.size() cells.
CsvTable parse_csv(const std::string& text, const std::string& source);
CsvTable read_csv(const std::string& path);

/// Parses a whole cell as a finite double; errors name the source and line.
double parse_number(const std::string& cell, const std::string& source, int line, const std::string& column);

std::string read_text(const std::string& path);

/// Files of one command run, written to temporaries and renamed into place
/// only when every write succeeded.
class OutputSet {
 public:
  void add(std::string name, std::string content);
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }
  /// Returns the written paths.
  std::vector<std::string> commit(const std::string& dir) const;

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace greenqfi::cli
