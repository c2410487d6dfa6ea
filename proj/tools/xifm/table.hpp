#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "config.hpp"

namespace xifm::cli {

// An empty cell (monostate) is written as an empty CSV field or JSON null.
using Cell = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string>;

class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Shortest decimal text that reads back to exactly `value`.
std::string format_number(double value);

void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table, std::string_view command);
void write_table(std::ostream& out, const Table& table, Format format, std::string_view command);

}  // namespace xifm::cli
