#include "deltaprime/render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "deltaprime/error.hpp"

namespace deltaprime {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};

bool is_numeric(const Value& v) {
  return std::holds_alternative<double>(v) || std::holds_alternative<long long>(v);
}

std::string cell_short(const Value& v) {
  return std::visit(overloaded{
                        [](std::monostate) { return std::string("-"); },
                        [](double x) { return format_short(x); },
                        [](long long n) { return std::to_string(n); },
                        [](bool b) { return std::string(b ? "true" : "false"); },
                        [](const std::string& s) { return s; },
                    },
                    v);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_full(const Value& v) {
  return std::visit(overloaded{
                        [](std::monostate) { return std::string(); },
                        [](double x) { return format_full(x); },
                        [](long long n) { return std::to_string(n); },
                        [](bool b) { return std::string(b ? "true" : "false"); },
                        [](const std::string& s) { return csv_quote(s); },
                    },
                    v);
}

nlohmann::ordered_json to_json(const Value& v) {
  return std::visit(overloaded{
                        [](std::monostate) { return nlohmann::ordered_json(nullptr); },
                        [](double x) {
                          // JSON has no infinities or NaN.
                          return std::isfinite(x) ? nlohmann::ordered_json(x)
                                                  : nlohmann::ordered_json(nullptr);
                        },
                        [](long long n) { return nlohmann::ordered_json(n); },
                        [](bool b) { return nlohmann::ordered_json(b); },
                        [](const std::string& s) { return nlohmann::ordered_json(s); },
                    },
                    v);
}

nlohmann::ordered_json row_object(const Report& r, const std::vector<Value>& row) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < r.columns.size(); ++c) obj[r.columns[c]] = to_json(row[c]);
  return obj;
}

std::string render_table(const Report& r) {
  std::ostringstream out;
  if (r.is_record()) {
    for (std::size_t c = 0; c < r.columns.size(); ++c)
      out << (c ? " " : "") << r.columns[c] << '=' << cell_short(r.rows[0][c]);
    out << '\n';
    return out.str();
  }
  for (const auto& [key, value] : r.meta) out << key << ": " << cell_short(value) << '\n';
  if (r.columns.empty()) return out.str();

  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(r.columns.size());
  for (std::size_t c = 0; c < r.columns.size(); ++c) width[c] = r.columns[c].size();
  for (const auto& row : r.rows) {
    cells.emplace_back();
    for (std::size_t c = 0; c < row.size(); ++c) {
      cells.back().push_back(cell_short(row[c]));
      width[c] = std::max(width[c], cells.back().back().size());
    }
  }
  auto pad = [&](const std::string& s, std::size_t c, bool right) {
    std::string fill(width[c] - s.size(), ' ');
    return right ? fill + s : s + fill;
  };
  std::string line;
  for (std::size_t c = 0; c < r.columns.size(); ++c) {
    const bool right = !r.rows.empty() && is_numeric(r.rows[0][c]);
    line += (c ? "  " : "") + pad(r.columns[c], c, right);
  }
  while (!line.empty() && line.back() == ' ') line.pop_back();
  out << line << '\n';
  for (std::size_t i = 0; i < cells.size(); ++i) {
    line.clear();
    for (std::size_t c = 0; c < cells[i].size(); ++c)
      line += (c ? "  " : "") + pad(cells[i][c], c, is_numeric(r.rows[i][c]));
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  return out.str();
}

std::string render_csv(const Report& r) {
  std::ostringstream out;
  for (const auto& [key, value] : r.meta) out << "# " << key << '=' << cell_full(value) << '\n';
  for (std::size_t c = 0; c < r.columns.size(); ++c) out << (c ? "," : "") << r.columns[c];
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << cell_full(row[c]);
    out << '\n';
  }
  return out.str();
}

std::string render_json(const Report& r) {
  nlohmann::ordered_json doc;
  if (r.is_record()) {
    doc = row_object(r, r.rows[0]);
  } else {
    doc = nlohmann::ordered_json::object();
    for (const auto& [key, value] : r.meta) doc[key] = to_json(value);
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) doc["rows"].push_back(row_object(r, row));
  }
  return doc.dump(2) + "\n";
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "table") return Format::Table;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw InvalidInput("unknown format '" + std::string(name) + "' (expected table, csv or json)");
}

void Report::add_row(std::vector<Value> row) {
  if (row.size() != columns.size()) throw std::logic_error("report row width mismatch");
  rows.push_back(std::move(row));
}

std::string render(const Report& report, Format format) {
  switch (format) {
    case Format::Table:
      return render_table(report);
    case Format::Csv:
      return render_csv(report);
    case Format::Json:
      return render_json(report);
  }
  return {};
}

std::string format_full(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, end);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string format_short(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace deltaprime
