#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qrm::cli {

using Cell = std::variant<double, long, std::string>;

struct Table {
  std::vector<std::pair<std::string, std::string>> meta;  // ordered
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_meta(std::string k, std::string v) { meta.emplace_back(std::move(k), std::move(v)); }
};

std::string fmt(double x);  // shortest round-trip, locale-free
std::string to_csv(const Table& t);
std::string to_json(const Table& t);

}  // namespace qrm::cli
