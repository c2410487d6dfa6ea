#include "table.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace xifm::cli {

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw std::logic_error("row has " + std::to_string(row.size()) + " cells for " +
                           std::to_string(columns_.size()) + " columns");
  }
  rows_.push_back(std::move(row));
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0 into 0
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

struct CsvCell {
  std::string operator()(std::monostate) const { return ""; }
  std::string operator()(bool b) const { return b ? "true" : "false"; }
  std::string operator()(std::int64_t i) const { return std::to_string(i); }
  std::string operator()(std::uint64_t u) const { return std::to_string(u); }
  std::string operator()(double d) const { return format_number(d); }
  std::string operator()(const std::string& s) const { return csv_field(s); }
};

struct JsonCell {
  nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
  nlohmann::ordered_json operator()(bool b) const { return b; }
  nlohmann::ordered_json operator()(std::int64_t i) const { return i; }
  nlohmann::ordered_json operator()(std::uint64_t u) const { return u; }
  nlohmann::ordered_json operator()(double d) const {
    if (!std::isfinite(d)) return nullptr;
    return d == 0.0 ? 0.0 : d;
  }
  nlohmann::ordered_json operator()(const std::string& s) const { return s; }
};

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  const auto& columns = table.columns();
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << csv_field(columns[i]);
  out << '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << std::visit(CsvCell{}, row[i]);
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table, std::string_view command) {
  nlohmann::ordered_json doc;
  doc["command"] = std::string(command);
  doc["columns"] = table.columns();
  auto& records = doc["records"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows()) {
    nlohmann::ordered_json record = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) record[table.columns()[i]] = std::visit(JsonCell{}, row[i]);
    records.push_back(std::move(record));
  }
  out << doc.dump(2) << '\n';
}

void write_table(std::ostream& out, const Table& table, Format format, std::string_view command) {
  if (format == Format::Json) {
    write_json(out, table, command);
  } else {
    write_csv(out, table);
  }
}

}  // namespace xifm::cli
