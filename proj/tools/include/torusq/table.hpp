#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace torusq {

using Cell = std::variant<std::int64_t, double, std::string, bool>;

// Column-named rows. Units belong in the column names (energy_E0, t3_T0).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  // Rows are ordered by the first key_columns columns before emission.
  std::size_t key_columns = 1;

  void add_row(std::vector<Cell> row);
  void sort_rows();
};

enum class Format { Csv, Json };

// Shortest decimal that round-trips; locale-independent. NaN and infinities
// are written as nan, inf and -inf.
std::string format_double(double value);

std::string format_cell(const Cell& cell);

// RFC 4180: header row, CRLF line endings, fields quoted only when needed.
void write_csv(const Table& table, std::ostream& out);

// {"columns": [...], "rows": [{column: value, ...}, ...]} with sorted keys.
void write_json(const Table& table, std::ostream& out);

void write_table(const Table& table, Format format, std::ostream& out);

// .json selects JSON, anything else CSV.
Format format_for_path(std::string_view path);

}  // namespace torusq
