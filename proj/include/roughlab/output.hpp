#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace roughlab {

// Shortest round-trip decimal form; "nan" and "inf" for non-finite values.
std::string format_number(double x);

using Metadata = std::vector<std::pair<std::string, std::string>>;

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  // Missing trailing cells are written empty.
  void add_row(std::vector<std::string> cells);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string render_csv(const Metadata& meta, const Table& table);
// {"meta": {...}, "columns": [...], "rows": [[...], ...]} with numeric cells as numbers.
std::string render_json(const Metadata& meta, const Table& table);
// Single-row table as one object: {"meta": {...}, "<column>": value, ...}.
std::string render_json_record(const Metadata& meta, const Table& table);

}  // namespace roughlab
