#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "msel/harness/config.hpp"
#include "msel/harness/table.hpp"
#include "msel/version.hpp"

namespace msel::harness {

// A pass/fail statement about an aggregate, with its admissible interval.
struct Check {
  std::string name;
  double value = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool passed = false;
};

inline Check make_check(std::string name, double value, double lower, double upper) {
  return {std::move(name), value, lower, upper, value >= lower && value <= upper};
}

struct RunRecord {
  ExperimentConfig config;
  Table replicates;
  std::vector<std::pair<std::string, Table>> curves;
  json aggregates = json::object();
  std::vector<Check> checks;
  std::string version = MSEL_VERSION;
  double seconds = 0.0;

  bool all_checks_pass() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  const Table* curve(const std::string& name) const {
    for (const auto& [n, t] : curves)
      if (n == name) return &t;
    return nullptr;
  }

  json to_json() const {
    json j;
    j["version"] = version;
    j["kind"] = to_string(config.kind);
    j["config"] = harness::to_json(config);
    j["aggregates"] = aggregates;
    json checks_json = json::array();
    for (const auto& c : checks)
      checks_json.push_back({{"name", c.name},
                             {"value", c.value},
                             {"lower", std::isfinite(c.lower) ? json(c.lower) : json(nullptr)},
                             {"upper", std::isfinite(c.upper) ? json(c.upper) : json(nullptr)},
                             {"passed", c.passed}});
    j["checks"] = checks_json;
    j["replicate_columns"] = replicates.columns();
    j["replicates"] = replicates.rows();
    json curve_names = json::array();
    for (const auto& [name, _] : curves) curve_names.push_back(name);
    j["curves"] = curve_names;
    j["seconds"] = seconds;
    return j;
  }

  // record.json is written last, via rename, so its presence marks a complete run.
  void write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    replicates.write_csv(dir / "replicates.csv");
    for (const auto& [name, table] : curves) table.write_csv(dir / (name + ".csv"));
    const auto tmp = dir / "record.json.tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
      out << to_json().dump(2) << '\n';
      out.flush();
      if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, dir / "record.json");
  }
};

}  // namespace msel::harness
