#include "torusq/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace torusq {
namespace {

// Numbers compare numerically across int/double; other kinds by index.
bool cell_less(const Cell& x, const Cell& y) {
  auto numeric = [](const Cell& c, double& out) {
    if (const auto* i = std::get_if<std::int64_t>(&c)) {
      out = static_cast<double>(*i);
      return true;
    }
    if (const auto* d = std::get_if<double>(&c)) {
      out = *d;
      return true;
    }
    return false;
  };
  double dx = 0.0;
  double dy = 0.0;
  if (numeric(x, dx) && numeric(y, dy)) return dx < dy;
  return x < y;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

nlohmann::json to_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_double(v);
        }
        return v;
      },
      cell);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("table row width does not match the header");
  }
  rows.push_back(std::move(row));
}

void Table::sort_rows() {
  const std::size_t keys = std::min(key_columns, columns.size());
  std::stable_sort(rows.begin(), rows.end(), [keys](const auto& x, const auto& y) {
    for (std::size_t k = 0; k < keys; ++k) {
      if (cell_less(x[k], y[k])) return true;
      if (cell_less(y[k], x[k])) return false;
    }
    return false;
  });
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // no "-0"
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

std::string format_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          return v;
        }
      },
      cell);
}

void write_csv(const Table& table, std::ostream& out) {
  auto line = [&](const auto& fields, auto to_text) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out << ',';
      out << csv_field(to_text(fields[i]));
    }
    out << "\r\n";
  };
  line(table.columns, [](const std::string& s) { return s; });
  for (const auto& row : table.rows) line(row, [](const Cell& c) { return format_cell(c); });
}

void write_json(const Table& table, std::ostream& out) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = to_json(row[i]);
    rows.push_back(std::move(obj));
  }
  nlohmann::json doc = {{"columns", table.columns}, {"rows", std::move(rows)}};
  out << doc.dump(2) << '\n';
}

void write_table(const Table& table, Format format, std::ostream& out) {
  if (format == Format::Json) {
    write_json(table, out);
  } else {
    write_csv(table, out);
  }
}

Format format_for_path(std::string_view path) {
  return path.size() >= 5 && path.substr(path.size() - 5) == ".json" ? Format::Json : Format::Csv;
}

}  // namespace torusq
