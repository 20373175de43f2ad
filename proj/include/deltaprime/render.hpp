#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace deltaprime {

enum class Format { Table, Csv, Json };

/// "table", "csv" or "json"; throws InvalidInput otherwise.
Format parse_format(std::string_view name);

/// monostate is an absent value: blank in csv, null in json, "-" in tables.
using Value = std::variant<std::monostate, double, long long, bool, std::string>;

/// Tabular result with optional scalar metadata. A report holding a single
/// row and no metadata is a record; tables render it as key=value pairs.
struct Report {
  std::vector<std::pair<std::string, Value>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  void add_row(std::vector<Value> row);
  bool is_record() const { return meta.empty() && rows.size() == 1; }
};

/// table: aligned columns, 6 significant digits.
/// csv: metadata as leading "# key=value" lines, then a header row and the
///      rows in shortest round-trip precision.
/// json: a record renders as one object; otherwise the metadata keys followed
///      by "rows", an array of objects. Keys keep column order.
std::string render(const Report& report, Format format);

/// Shortest decimal string that reads back to the same double. Integral
/// values keep a ".0" suffix so they still read as floating point.
std::string format_full(double x);

/// printf %.6g, with negative zero printed as 0.
std::string format_short(double x);

}  // namespace deltaprime
