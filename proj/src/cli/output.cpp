#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "kising/cli.hpp"
#include "table.hpp"

namespace kising::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  return std::get<std::string>(c);
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    // Round through the 12-digit text so CSV and JSON carry the same value.
    return std::strtod(format_number(*d).c_str(), nullptr);
  }
  if (const auto* b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

}  // namespace

void write_csv(std::ostream& os, const nlohmann::json& metadata, const Table& table) {
  os << "# " << metadata.dump() << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

void write_json(std::ostream& os, const nlohmann::json& metadata, const Table& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[table.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(r));
  }
  nlohmann::json doc{{"metadata", metadata}, {"columns", table.columns}, {"rows", std::move(rows)}};
  os << doc.dump(2) << '\n';
}

}  // namespace kising::cli
