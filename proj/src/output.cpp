#include "roughlab/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "roughlab/errors.hpp"

namespace roughlab {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void Table::add_row(std::vector<std::string> cells) {
  require(cells.size() <= columns_.size(), "table: row has more cells than columns");
  cells.resize(columns_.size());
  rows_.push_back(std::move(cells));
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json json_cell(const std::string& s) {
  if (s.empty()) return nullptr;
  if (s == "nan" || s == "inf" || s == "-inf") return s;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec == std::errc() && res.ptr == s.data() + s.size()) {
    long long iv = 0;
    const auto ri = std::from_chars(s.data(), s.data() + s.size(), iv);
    if (ri.ec == std::errc() && ri.ptr == s.data() + s.size()) return iv;
    return v;
  }
  return s;
}

}  // namespace

std::string render_csv(const Metadata& meta, const Table& table) {
  std::string out;
  for (const auto& [k, v] : meta) out += "# " + k + "=" + v + "\n";
  for (std::size_t c = 0; c < table.columns().size(); ++c)
    out += (c ? "," : "") + csv_cell(table.columns()[c]);
  out += "\n";
  for (const auto& row : table.rows()) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + csv_cell(row[c]);
    out += "\n";
  }
  return out;
}

std::string render_json(const Metadata& meta, const Table& table) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta) m[k] = v;
  doc["meta"] = m;
  doc["columns"] = table.columns();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows()) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& cell : row) r.push_back(json_cell(cell));
    rows.push_back(r);
  }
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

std::string render_json_record(const Metadata& meta, const Table& table) {
  require(table.rows().size() == 1, "table: a record needs exactly one row");
  nlohmann::ordered_json doc;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta) m[k] = v;
  doc["meta"] = m;
  for (std::size_t c = 0; c < table.columns().size(); ++c)
    doc[table.columns()[c]] = json_cell(table.rows()[0][c]);
  return doc.dump(2) + "\n";
}

}  // namespace roughlab
