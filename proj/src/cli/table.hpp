#pragma once

// Row-oriented result table shared by the run modes and the writers.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace kising::cli {

using Cell = std::variant<long long, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void append(const Table& other) { rows.insert(rows.end(), other.rows.begin(), other.rows.end()); }
};

/// "# {metadata}" line, header, then one line per row.
void write_csv(std::ostream& os, const nlohmann::json& metadata, const Table& table);

/// {"metadata": .., "columns": [..], "rows": [{column: value}, ..]}.
void write_json(std::ostream& os, const nlohmann::json& metadata, const Table& table);

}  // namespace kising::cli
