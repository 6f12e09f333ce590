#include "table.hpp"

#include <charconv>
#include <cmath>
#include <json.hpp>
#include <sstream>

namespace qrm::cli {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

std::string cell_str(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return fmt(*d);
  if (auto l = std::get_if<long>(&c)) return std::to_string(*l);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (const auto& [k, v] : t.meta) os << "# " << k << "=" << v << "\n";
  for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell_str(r[i]);
    os << "\n";
  }
  return os.str();
}

std::string to_json(const Table& t) {
  nlohmann::ordered_json j;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.meta) j["metadata"][k] = v;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (const auto& c : r) {
      if (auto d = std::get_if<double>(&c)) {
        if (std::isfinite(*d))
          row.push_back(*d);
        else
          row.push_back(fmt(*d));
      } else if (auto l = std::get_if<long>(&c))
        row.push_back(*l);
      else
        row.push_back(std::get<std::string>(c));
    }
    j["rows"].push_back(row);
  }
  return j.dump(2) + "\n";
}

}  // namespace qrm::cli
