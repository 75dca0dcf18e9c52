#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "msel/harness/config.hpp"
#include "msel/harness/table.hpp"

namespace msel::harness {

struct LoadedRecord {
  std::string source;
  json document;
};

// Accepts either a record.json file or a run directory containing one.
inline LoadedRecord load_record(const std::filesystem::path& path) {
  const auto file = std::filesystem::is_directory(path) ? path / "record.json" : path;
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read record " + file.string());
  LoadedRecord r;
  r.source = path.string();
  try {
    r.document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("record " + file.string() + " is not valid JSON: " + e.what());
  }
  if (!r.document.contains("kind") || !r.document.contains("aggregates"))
    throw std::runtime_error("record " + file.string() + " lacks kind/aggregates");
  return r;
}

namespace detail {
inline std::string cell_text(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}
}  // namespace detail

// One row per record; columns are the scalar aggregates of the shared kind.
inline Table report(const std::vector<LoadedRecord>& records) {
  if (records.empty()) throw std::invalid_argument("report: no records given");
  const std::string kind = records.front().document.at("kind").get<std::string>();
  for (const auto& r : records)
    if (r.document.at("kind").get<std::string>() != kind)
      throw std::invalid_argument("report: mixed experiment kinds (" + kind + " vs " +
                                  r.document.at("kind").get<std::string>() + ")");

  std::vector<std::string> keys;
  for (const auto& r : records)
    for (const auto& [key, value] : r.document.at("aggregates").items())
      if (value.is_primitive() && std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);

  std::vector<std::string> columns{"record", "kind", "seed", "replicates", "checks_passed"};
  columns.insert(columns.end(), keys.begin(), keys.end());
  Table table(columns);
  for (const auto& r : records) {
    const auto& doc = r.document;
    bool passed = true;
    if (doc.contains("checks"))
      for (const auto& c : doc.at("checks")) passed = passed && c.value("passed", false);
    std::vector<std::string> row{r.source, kind,
                                 doc.contains("config") ? detail::cell_text(doc["config"].value("seed", json())) : "",
                                 doc.contains("config") ? detail::cell_text(doc["config"].value("replicates", json())) : "",
                                 passed ? "1" : "0"};
    const auto& agg = doc.at("aggregates");
    for (const auto& k : keys) row.push_back(agg.contains(k) ? detail::cell_text(agg.at(k)) : "");
    table.add_row(std::move(row));
  }
  return table;
}

}  // namespace msel::harness
