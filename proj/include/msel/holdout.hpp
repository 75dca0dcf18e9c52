#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "msel/modulus.hpp"
#include "msel/problems.hpp"
#include "msel/rng.hpp"
#include "msel/selection.hpp"

namespace msel {

enum class SplitPolicy { prefix, seeded_shuffle };

struct HoldoutSplit {
  std::size_t train_size = 0;       // N
  std::size_t validation_size = 0;  // n
  SplitPolicy policy = SplitPolicy::prefix;
};

class SplitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class Sample>
struct SplitSets {
  std::vector<Sample> train;
  std::vector<Sample> validation;
};

// Prefix: the first N samples train. Shuffle: a permutation drawn from `rng`
// decides membership; each side keeps the permuted order.
template <class Sample>
SplitSets<Sample> split(std::span<const Sample> dataset, const HoldoutSplit& s, CounterRng& rng) {
  if (s.train_size == 0 || s.validation_size == 0) throw SplitError("hold-out split: N and n must be positive");
  if (dataset.size() != s.train_size + s.validation_size)
    throw SplitError("hold-out split: dataset has " + std::to_string(dataset.size()) + " samples, expected N + n = " +
                     std::to_string(s.train_size + s.validation_size));
  SplitSets<Sample> out;
  out.train.reserve(s.train_size);
  out.validation.reserve(s.validation_size);
  if (s.policy == SplitPolicy::prefix) {
    out.train.assign(dataset.begin(), dataset.begin() + static_cast<std::ptrdiff_t>(s.train_size));
    out.validation.assign(dataset.begin() + static_cast<std::ptrdiff_t>(s.train_size), dataset.end());
    return out;
  }
  const auto perm = seeded_permutation(dataset.size(), rng);
  for (std::size_t i = 0; i < perm.size(); ++i)
    (i < s.train_size ? out.train : out.validation).push_back(dataset[perm[i]]);
  return out;
}

template <class Sample>
SplitSets<Sample> split(std::span<const Sample> dataset, const HoldoutSplit& s, std::uint64_t seed) {
  CounterRng rng(seed, 0, StreamRole::shuffle);
  return split(dataset, s, rng);
}

class LossRangeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A roster of fitting procedures plus the ground truth needed to score them.
template <class Sample, class Predictor>
struct HoldoutTask {
  struct Model {
    std::string label;
    std::function<Predictor(std::span<const Sample>)> fit;
  };

  std::vector<Model> models;
  std::function<double(const Predictor&, const Sample&)> loss;  // into [0, 1]
  std::function<double(const Predictor&)> excess_risk;           // exact L(g, g*)
};

struct OracleSettings {
  double epsilon = 0.5;
  PowerModulus modulus{1.0, 2.0};
};

struct HoldoutReport {
  std::size_t selected = 0;  // index into the task's roster
  std::string selected_label;
  std::vector<double> excess_risks;  // NaN for excluded models
  std::vector<bool> excluded;
  std::vector<std::string> warnings;
  double oracle_excess = 0.0;
  double selected_excess = 0.0;
  std::size_t card_m = 0;          // models that took part in selection
  std::size_t validation_size = 0;
  std::optional<double> bound_rhs;

  bool has_exclusions() const noexcept { return !warnings.empty(); }
};

// C_eps * oracle + C'_eps * ln(e |M|) * ((4/eps) phi*(n^{-1/2}) + 1/(3n))
inline double holdout_bound_rhs(double oracle_excess, double epsilon, const PowerModulus& modulus,
                                std::uint64_t card_m, std::uint64_t n) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("oracle bound: epsilon must lie in (0,1)");
  if (n == 0 || card_m == 0) throw std::domain_error("oracle bound: n and |M| must be positive");
  const double log_e_card = 1.0 + std::log(static_cast<double>(card_m));
  return c_epsilon(epsilon) * oracle_excess +
         c_prime_epsilon(epsilon) * log_e_card * remainder_rate(modulus, epsilon, n);
}

struct OracleCheck {
  bool holds = false;
  double slack = 0.0;  // rhs - selected_excess
  double rhs = 0.0;
};

inline OracleCheck oracle_check(const HoldoutReport& r, double epsilon, const PowerModulus& modulus,
                                std::uint64_t card_m, std::uint64_t n) {
  OracleCheck c;
  c.rhs = holdout_bound_rhs(r.oracle_excess, epsilon, modulus, card_m, n);
  c.slack = c.rhs - r.selected_excess;
  c.holds = r.selected_excess <= c.rhs;
  return c;
}

// Fits every model on the first part, selects by empirical loss on the second
// and scores all fits exactly. The loss of g* is common to every candidate and
// is left out of the validation family.
template <class Sample, class Predictor>
HoldoutReport run_holdout(const HoldoutTask<Sample, Predictor>& task, std::span<const Sample> dataset,
                          const HoldoutSplit& s, CounterRng& shuffle_rng,
                          std::optional<OracleSettings> oracle = std::nullopt) {
  if (task.models.empty()) throw std::invalid_argument("run_holdout: empty model roster");
  const auto sets = split(dataset, s, shuffle_rng);
  const std::size_t n = sets.validation.size();
  const std::size_t count = task.models.size();

  HoldoutReport report;
  report.validation_size = n;
  report.excess_risks.assign(count, std::numeric_limits<double>::quiet_NaN());
  report.excluded.assign(count, false);

  std::vector<std::size_t> included;
  std::vector<std::string> labels;
  std::vector<double> values;
  values.reserve(count * n);
  for (std::size_t m = 0; m < count; ++m) {
    std::optional<Predictor> fitted;
    try {
      fitted.emplace(task.models[m].fit(sets.train));
    } catch (const std::exception& e) {
      report.excluded[m] = true;
      report.warnings.push_back(task.models[m].label + ": fit failed: " + e.what());
      continue;
    }
    for (const Sample& z : sets.validation) {
      const double l = task.loss(*fitted, z);
      if (!(l >= 0.0 && l <= 1.0))
        throw LossRangeError("run_holdout: loss " + std::to_string(l) + " outside [0,1] for model " +
                             task.models[m].label);
      values.push_back(l);
    }
    report.excess_risks[m] = task.excess_risk(*fitted);
    included.push_back(m);
    labels.push_back(task.models[m].label);
  }
  if (included.empty()) throw std::runtime_error("run_holdout: every model failed to fit");

  report.card_m = included.size();
  std::size_t pick = 0;
  if (included.size() >= 2) {
    const CandidateFamily family(std::move(labels), std::move(values), n);
    pick = erm_select(family).selected;
  }
  report.selected = included[pick];
  report.selected_label = task.models[report.selected].label;
  report.selected_excess = report.excess_risks[report.selected];
  report.oracle_excess = std::numeric_limits<double>::infinity();
  for (std::size_t m : included) report.oracle_excess = std::min(report.oracle_excess, report.excess_risks[m]);
  if (oracle)
    report.bound_rhs = holdout_bound_rhs(report.oracle_excess, oracle->epsilon, oracle->modulus, report.card_m, n);
  return report;
}

// Histogram classifiers on contiguous partitions with the given cell counts,
// scored with the square loss on {0,1} labels.
inline HoldoutTask<LabeledPoint, std::vector<int>> histogram_task(const DiscreteClassificationProblem& problem,
                                                                  std::span<const std::size_t> dims) {
  HoldoutTask<LabeledPoint, std::vector<int>> task;
  for (std::size_t d : dims) {
    const Partition partition = Partition::contiguous(problem.size(), d);
    const std::size_t design = problem.size();
    task.models.push_back({"D=" + std::to_string(d), [partition, design](std::span<const LabeledPoint> train) {
                             return fit_histogram(partition, train, design).on_design(partition);
                           }});
  }
  task.loss = [](const std::vector<int>& g, const LabeledPoint& z) {
    const double diff = static_cast<double>(z.y - g[z.x]);
    return diff * diff;
  };
  task.excess_risk = [problem](const std::vector<int>& g) { return excess_risk_01(g, problem); };
  return task;
}

}  // namespace msel
