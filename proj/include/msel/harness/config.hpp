#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "msel/problems.hpp"

namespace msel::harness {

using json = nlohmann::ordered_json;

enum class ExperimentKind { verify_tail, holdout_adapt, calibrate, akaike_check, segment };

inline const char* to_string(ExperimentKind k) noexcept {
  switch (k) {
    case ExperimentKind::verify_tail: return "verify-tail";
    case ExperimentKind::holdout_adapt: return "holdout-adapt";
    case ExperimentKind::calibrate: return "calibrate";
    case ExperimentKind::akaike_check: return "akaike-check";
    case ExperimentKind::segment: return "segment";
  }
  return "?";
}

inline std::optional<ExperimentKind> parse_kind(const std::string& s) {
  for (auto k : {ExperimentKind::verify_tail, ExperimentKind::holdout_adapt, ExperimentKind::calibrate,
                 ExperimentKind::akaike_check, ExperimentKind::segment})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

// Lists every violated field at once.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : std::invalid_argument(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid configuration:";
    for (const auto& p : v) s += "\n  - " + p;
    return s;
  }
  std::vector<std::string> problems_;
};

// Finite classification design: either "geometric" (masses ~ ratio^j, eta =
// 1/2 +- margin/2 alternating) or "explicit" (probabilities + eta).
struct ClassificationSpec {
  std::string design = "geometric";
  std::size_t points = 32;
  double ratio = 0.8;
  double margin = 0.8;
  std::vector<double> probabilities;
  std::vector<double> eta;

  DiscreteClassificationProblem build() const {
    if (design == "geometric") return DiscreteClassificationProblem::geometric_alternating(points, ratio, margin);
    return {probabilities, eta, effective_margin()};
  }

  // Declared margin for geometric designs; min |2 eta - 1| for explicit ones.
  double effective_margin() const {
    if (design == "geometric") return margin;
    double h = 1.0;
    for (double e : eta) h = std::min(h, std::abs(2.0 * e - 1.0));
    return h;
  }

  friend bool operator==(const ClassificationSpec&, const ClassificationSpec&) = default;
};

struct MallowsSpec {
  std::size_t n = 512;
  std::size_t d_true = 8;
  std::size_t d_max = 64;
  double amplitude = 1.5;
  double sigma = 1.0;
  friend bool operator==(const MallowsSpec&, const MallowsSpec&) = default;
};

struct ChangepointSpec {
  std::size_t n = 400;
  std::vector<double> levels{0.0, 3.0, 0.0, 3.0};
  double sigma = 1.0;
  std::size_t d_max = 12;
  friend bool operator==(const ChangepointSpec&, const ChangepointSpec&) = default;
};

// Geometric alpha grid in reference units (sigma^2/n for calibrate,
// total empirical variance / n for segment).
struct GridSpec {
  double lo = 1e-3;
  double hi = 10.0;
  std::size_t points = 60;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::verify_tail;
  std::uint64_t seed = 1;
  std::size_t replicates = 1000;
  unsigned workers = 0;  // 0: one per processor
  std::string out = "out";

  double epsilon = 0.5;
  double x = 2.0;
  std::optional<double> modulus_c;  // defaults to the problem margin
  double modulus_p = 2.0;

  std::size_t n = 200;              // validation size (verify-tail) / training size (akaike classification)
  std::vector<std::size_t> ns;      // holdout-adapt sweep
  double train_ratio = 1.0;         // N / n
  std::string split = "prefix";     // prefix | shuffle
  std::vector<std::size_t> dims;    // model roster

  ClassificationSpec classification;
  MallowsSpec mallows;
  ChangepointSpec changepoint;
  GridSpec grid;
  std::optional<std::size_t> large_dim_threshold;

  std::optional<double> slope_at_most;
  std::optional<double> slope_at_least;
  double min_recovery = 0.9;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  static ExperimentConfig defaults(ExperimentKind kind) {
    ExperimentConfig c;
    c.kind = kind;
    switch (kind) {
      case ExperimentKind::verify_tail:
        c.replicates = 10000;
        c.n = 200;
        c.x = 2.0;
        c.dims = {2, 3, 4, 5, 6};
        c.classification.design = "explicit";
        c.classification.points = 8;
        c.classification.probabilities.assign(8, 0.125);
        c.classification.eta = {0.1, 0.25, 0.8, 0.7, 0.3, 0.85, 0.15, 0.9};
        break;
      case ExperimentKind::holdout_adapt:
        c.replicates = 500;
        c.ns = {250, 500, 1000, 2000, 4000};
        c.dims = {2, 4, 8, 16, 32};
        break;
      case ExperimentKind::calibrate:
        c.replicates = 1000;
        c.grid = {1e-3, 10.0, 60};
        break;
      case ExperimentKind::akaike_check:
        c.replicates = 10000;
        c.dims = {2, 8, 32};
        c.n = 1000;
        break;
      case ExperimentKind::segment:
        c.replicates = 200;
        c.grid = {1e-3, 100.0, 60};
        break;
    }
    return c;
  }

  double modulus_coefficient() const { return modulus_c ? *modulus_c : classification.effective_margin(); }

  std::size_t threshold_for(std::size_t max_dim) const {
    return large_dim_threshold ? *large_dim_threshold : (max_dim + 1) / 2;
  }

  std::vector<std::string> problems() const {
    std::vector<std::string> p;
    auto need = [&](bool ok, const std::string& msg) {
      if (!ok) p.push_back(msg);
    };
    need(replicates >= 1, "replicates: must be >= 1");
    need(!out.empty(), "out: output directory must be set");
    need(epsilon > 0.0 && epsilon < 1.0, "epsilon: must lie in (0,1)");
    need(split == "prefix" || split == "shuffle", "split: must be 'prefix' or 'shuffle'");
    need(modulus_p >= 2.0, "modulus.p: must be >= 2");
    if (modulus_c) need(*modulus_c > 0.0, "modulus.c: must be positive");
    need(grid.lo > 0.0 && grid.hi > grid.lo, "grid: need 0 < lo < hi");
    need(grid.points >= 2, "grid.points: must be >= 2");

    const bool classification_kind = kind == ExperimentKind::verify_tail || kind == ExperimentKind::holdout_adapt ||
                                     kind == ExperimentKind::akaike_check;
    if (classification_kind) {
      const auto& c = classification;
      if (c.design == "geometric") {
        need(c.points >= 1, "classification.points: must be >= 1");
        need(c.ratio > 0.0, "classification.ratio: must be positive");
        need(c.margin > 0.0 && c.margin <= 1.0, "classification.margin: must lie in (0,1]");
      } else if (c.design == "explicit") {
        need(!c.probabilities.empty() && c.probabilities.size() == c.eta.size(),
             "classification: probabilities and eta must be nonempty and aligned");
      } else {
        p.push_back("classification.design: must be 'geometric' or 'explicit'");
      }
      const std::size_t design_size = c.design == "geometric" ? c.points : c.probabilities.size();
      for (std::size_t d : dims)
        need(d >= 1 && d <= design_size, "dims: " + std::to_string(d) + " outside [1, design size]");
      if (kind != ExperimentKind::akaike_check && !modulus_c)
        need(c.effective_margin() > 0.0, "modulus.c: required when the design has no margin");
    }
    switch (kind) {
      case ExperimentKind::verify_tail:
        need(dims.size() >= 2, "dims: verify-tail needs at least 2 candidate functions");
        need(n >= 1, "n: must be >= 1");
        need(x >= 0.0, "x: must be >= 0");
        break;
      case ExperimentKind::holdout_adapt:
        need(!dims.empty(), "dims: roster must be nonempty");
        need(ns.size() >= 2, "ns: need at least two sample sizes for a slope");
        for (std::size_t v : ns) need(v >= 1, "ns: sample sizes must be >= 1");
        need(train_ratio > 0.0, "train_ratio: must be positive");
        break;
      case ExperimentKind::calibrate:
        need(mallows.d_max >= 1 && mallows.d_max <= mallows.n, "mallows.d_max: must lie in [1, n]");
        need(mallows.d_true <= mallows.n, "mallows.d_true: must be <= n");
        need(mallows.sigma > 0.0, "mallows.sigma: must be positive");
        if (large_dim_threshold)
          need(*large_dim_threshold >= 1 && *large_dim_threshold <= mallows.d_max,
               "large_dim_threshold: must lie in [1, d_max]");
        break;
      case ExperimentKind::akaike_check:
        need(!dims.empty(), "dims: roster must be nonempty");
        for (std::size_t d : dims) need(d >= 1 && d <= mallows.n, "dims: Mallows dimension outside [1, n]");
        need(mallows.d_true <= mallows.n, "mallows.d_true: must be <= n");
        need(mallows.sigma > 0.0, "mallows.sigma: must be positive");
        need(n >= 1, "n: classification training size must be >= 1");
        break;
      case ExperimentKind::segment:
        need(!changepoint.levels.empty(), "changepoint.levels: need at least one segment");
        need(changepoint.n >= changepoint.levels.size(), "changepoint.n: shorter than the number of segments");
        need(changepoint.d_max >= 1 && changepoint.d_max <= changepoint.n, "changepoint.d_max: must lie in [1, n]");
        need(changepoint.sigma >= 0.0, "changepoint.sigma: must be >= 0");
        need(min_recovery >= 0.0 && min_recovery <= 1.0, "min_recovery: must lie in [0,1]");
        if (large_dim_threshold)
          need(*large_dim_threshold >= 1 && *large_dim_threshold <= changepoint.d_max,
               "large_dim_threshold: must lie in [1, d_max]");
        break;
    }
    return p;
  }

  void validate() const {
    auto p = problems();
    if (!p.empty()) throw ValidationError(std::move(p));
  }
};

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

inline json to_json(const ExperimentConfig& c) {
  json j;
  j["kind"] = to_string(c.kind);
  j["seed"] = c.seed;
  j["replicates"] = c.replicates;
  j["workers"] = c.workers;
  j["out"] = c.out;
  j["epsilon"] = c.epsilon;
  j["x"] = c.x;
  j["modulus"] = {{"c", optional_json(c.modulus_c)}, {"p", c.modulus_p}};
  j["n"] = c.n;
  j["ns"] = c.ns;
  j["train_ratio"] = c.train_ratio;
  j["split"] = c.split;
  j["dims"] = c.dims;
  j["classification"] = {{"design", c.classification.design},         {"points", c.classification.points},
                         {"ratio", c.classification.ratio},           {"margin", c.classification.margin},
                         {"probabilities", c.classification.probabilities}, {"eta", c.classification.eta}};
  j["mallows"] = {{"n", c.mallows.n},
                  {"d_true", c.mallows.d_true},
                  {"d_max", c.mallows.d_max},
                  {"amplitude", c.mallows.amplitude},
                  {"sigma", c.mallows.sigma}};
  j["changepoint"] = {{"n", c.changepoint.n},
                      {"levels", c.changepoint.levels},
                      {"sigma", c.changepoint.sigma},
                      {"d_max", c.changepoint.d_max}};
  j["grid"] = {{"lo", c.grid.lo}, {"hi", c.grid.hi}, {"points", c.grid.points}};
  j["large_dim_threshold"] = optional_json(c.large_dim_threshold);
  j["slope_at_most"] = optional_json(c.slope_at_most);
  j["slope_at_least"] = optional_json(c.slope_at_least);
  j["min_recovery"] = c.min_recovery;
  return j;
}

namespace detail {

template <class T>
void read(const json& j, const char* key, T& dst, std::vector<std::string>& errors, const std::string& prefix = "") {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const std::exception&) {
    errors.push_back(prefix + key + ": wrong type");
  }
}

template <class T>
void read_optional(const json& j, const char* key, std::optional<T>& dst, std::vector<std::string>& errors,
                   const std::string& prefix = "") {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    dst.reset();
    return;
  }
  try {
    dst = j.at(key).get<T>();
  } catch (const std::exception&) {
    errors.push_back(prefix + key + ": wrong type");
  }
}

}  // namespace detail

// Missing fields take the defaults of the declared kind. Unknown keys are errors.
inline ExperimentConfig config_from_json(const json& j) {
  std::vector<std::string> errors;
  if (!j.is_object()) throw ValidationError({"config: top level must be a JSON object"});
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ValidationError({"kind: required string"});
  const auto kind = parse_kind(j.at("kind").get<std::string>());
  if (!kind) throw ValidationError({"kind: unknown experiment kind '" + j.at("kind").get<std::string>() + "'"});

  static const std::vector<std::string> known = {
      "kind",  "seed", "replicates",  "workers", "out",  "epsilon",        "x",           "modulus",
      "n",     "ns",   "train_ratio", "split",   "dims", "classification", "mallows",     "changepoint",
      "grid",  "large_dim_threshold", "slope_at_most",   "slope_at_least", "min_recovery"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) errors.push_back(key + ": unknown field");

  using detail::read;
  using detail::read_optional;
  ExperimentConfig c = ExperimentConfig::defaults(*kind);
  read(j, "seed", c.seed, errors);
  read(j, "replicates", c.replicates, errors);
  read(j, "workers", c.workers, errors);
  read(j, "out", c.out, errors);
  read(j, "epsilon", c.epsilon, errors);
  read(j, "x", c.x, errors);
  if (j.contains("modulus")) {
    const auto& m = j.at("modulus");
    read_optional(m, "c", c.modulus_c, errors, "modulus.");
    read(m, "p", c.modulus_p, errors, "modulus.");
  }
  read(j, "n", c.n, errors);
  read(j, "ns", c.ns, errors);
  read(j, "train_ratio", c.train_ratio, errors);
  read(j, "split", c.split, errors);
  read(j, "dims", c.dims, errors);
  if (j.contains("classification")) {
    const auto& s = j.at("classification");
    auto& d = c.classification;
    read(s, "design", d.design, errors, "classification.");
    read(s, "points", d.points, errors, "classification.");
    read(s, "ratio", d.ratio, errors, "classification.");
    read(s, "margin", d.margin, errors, "classification.");
    read(s, "probabilities", d.probabilities, errors, "classification.");
    read(s, "eta", d.eta, errors, "classification.");
  }
  if (j.contains("mallows")) {
    const auto& s = j.at("mallows");
    read(s, "n", c.mallows.n, errors, "mallows.");
    read(s, "d_true", c.mallows.d_true, errors, "mallows.");
    read(s, "d_max", c.mallows.d_max, errors, "mallows.");
    read(s, "amplitude", c.mallows.amplitude, errors, "mallows.");
    read(s, "sigma", c.mallows.sigma, errors, "mallows.");
  }
  if (j.contains("changepoint")) {
    const auto& s = j.at("changepoint");
    read(s, "n", c.changepoint.n, errors, "changepoint.");
    read(s, "levels", c.changepoint.levels, errors, "changepoint.");
    read(s, "sigma", c.changepoint.sigma, errors, "changepoint.");
    read(s, "d_max", c.changepoint.d_max, errors, "changepoint.");
  }
  if (j.contains("grid")) {
    const auto& s = j.at("grid");
    read(s, "lo", c.grid.lo, errors, "grid.");
    read(s, "hi", c.grid.hi, errors, "grid.");
    read(s, "points", c.grid.points, errors, "grid.");
  }
  read_optional(j, "large_dim_threshold", c.large_dim_threshold, errors);
  read_optional(j, "slope_at_most", c.slope_at_most, errors);
  read_optional(j, "slope_at_least", c.slope_at_least, errors);
  read(j, "min_recovery", c.min_recovery, errors);

  auto more = c.problems();
  errors.insert(errors.end(), more.begin(), more.end());
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("config: not valid JSON: ") + e.what()});
  }
  return config_from_json(j);
}

}  // namespace msel::harness
