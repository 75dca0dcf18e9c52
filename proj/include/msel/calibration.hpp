#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "msel/problems.hpp"

namespace msel {

struct PenalizedCriterion {
  std::vector<double> empirical_risks;
  std::vector<std::size_t> dims;
  double alpha = 0.0;
};

namespace detail {
inline void require_aligned(std::span<const double> risks, std::span<const std::size_t> dims) {
  if (risks.empty()) throw std::invalid_argument("penalized criterion: no models");
  if (risks.size() != dims.size()) throw std::invalid_argument("penalized criterion: risks and dims differ in length");
  for (std::size_t d : dims)
    if (d == 0) throw std::invalid_argument("penalized criterion: dimensions must be >= 1");
}
}  // namespace detail

// argmin_m risks[m] + alpha * dims[m]; ties to the smaller dimension, then to
// the smaller index.
inline std::size_t select_penalized(std::span<const double> risks, std::span<const std::size_t> dims, double alpha) {
  detail::require_aligned(risks, dims);
  if (!(alpha >= 0.0)) throw std::invalid_argument("penalized criterion: alpha must be >= 0");
  std::size_t best = 0;
  double best_value = risks[0] + alpha * static_cast<double>(dims[0]);
  for (std::size_t m = 1; m < risks.size(); ++m) {
    const double v = risks[m] + alpha * static_cast<double>(dims[m]);
    if (v < best_value || (v == best_value && dims[m] < dims[best])) {
      best = m;
      best_value = v;
    }
  }
  return best;
}

inline std::size_t select_penalized(const PenalizedCriterion& c) {
  return select_penalized(c.empirical_risks, c.dims, c.alpha);
}

// Geometric grid of `points` values spanning [lo, hi], multiplied by `scale`.
inline std::vector<double> geometric_grid(double lo, double hi, std::size_t points, double scale = 1.0) {
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("alpha grid: need 0 < lo < hi");
  if (points < 2) throw std::invalid_argument("alpha grid: need at least 2 points");
  if (!(scale > 0.0)) throw std::invalid_argument("alpha grid: scale must be positive");
  std::vector<double> grid(points);
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) grid[k] = scale * lo * std::exp(step * static_cast<double>(k));
  return grid;
}

struct PenaltyPath {
  std::vector<double> alphas;
  std::vector<std::size_t> selected_models;
  std::vector<std::size_t> selected_dims;
  std::size_t max_dim = 0;  // largest dimension in the roster
};

inline PenaltyPath penalty_path(std::span<const double> risks, std::span<const std::size_t> dims,
                                std::span<const double> alpha_grid) {
  detail::require_aligned(risks, dims);
  if (alpha_grid.empty()) throw std::invalid_argument("penalty path: empty alpha grid");
  for (std::size_t k = 0; k < alpha_grid.size(); ++k) {
    if (!(alpha_grid[k] >= 0.0)) throw std::invalid_argument("penalty path: negative alpha");
    if (k > 0 && !(alpha_grid[k] > alpha_grid[k - 1]))
      throw std::invalid_argument("penalty path: alpha grid must be strictly increasing");
  }
  PenaltyPath path;
  path.alphas.assign(alpha_grid.begin(), alpha_grid.end());
  path.max_dim = *std::max_element(dims.begin(), dims.end());
  for (double a : alpha_grid) {
    const std::size_t m = select_penalized(risks, dims, a);
    path.selected_models.push_back(m);
    path.selected_dims.push_back(dims[m]);
  }
  for (std::size_t k = 1; k < path.selected_dims.size(); ++k)
    if (path.selected_dims[k] > path.selected_dims[k - 1])
      throw std::logic_error("penalty path: selected dimension increased along the grid");
  return path;
}

enum class JumpStatus {
  ok,
  no_jump,     // already at or below the threshold on the first grid point
  unresolved,  // never falls to the threshold on the grid
};

inline const char* to_string(JumpStatus s) noexcept {
  switch (s) {
    case JumpStatus::ok: return "ok";
    case JumpStatus::no_jump: return "no-jump";
    case JumpStatus::unresolved: return "unresolved";
  }
  return "?";
}

struct DimensionJump {
  double alpha_min = 0.0;  // first grid alpha with selected dim <= threshold
  std::size_t index = 0;
  std::size_t jump_magnitude = 0;
  JumpStatus status = JumpStatus::ok;
  std::size_t threshold = 0;

  double drop_alpha = 0.0;  // grid alpha right after the largest single drop
  std::size_t drop_index = 0;
  std::size_t drop_magnitude = 0;
  bool detectors_agree = true;  // indices within one grid step
};

inline std::size_t default_large_dim_threshold(std::size_t max_dim) { return (max_dim + 1) / 2; }

inline DimensionJump dimension_jump(const PenaltyPath& path, std::size_t large_dim_threshold) {
  if (path.selected_dims.empty()) throw std::invalid_argument("dimension jump: empty path");
  if (large_dim_threshold == 0) throw std::invalid_argument("dimension jump: threshold must be >= 1");
  if (large_dim_threshold > path.max_dim)
    throw std::invalid_argument("dimension jump: degenerate threshold " + std::to_string(large_dim_threshold) +
                                " exceeds the largest dimension " + std::to_string(path.max_dim));
  const auto& dims = path.selected_dims;
  DimensionJump j;
  j.threshold = large_dim_threshold;

  const auto below = std::find_if(dims.begin(), dims.end(), [&](std::size_t d) { return d <= large_dim_threshold; });
  if (below == dims.begin()) {
    j.status = JumpStatus::no_jump;
    j.index = 0;
  } else if (below == dims.end()) {
    j.status = JumpStatus::unresolved;
    j.index = dims.size() - 1;
  } else {
    j.index = static_cast<std::size_t>(below - dims.begin());
    j.jump_magnitude = dims[j.index - 1] - dims[j.index];
  }
  j.alpha_min = path.alphas[j.index];

  for (std::size_t k = 1; k < dims.size(); ++k) {
    const std::size_t drop = dims[k - 1] - dims[k];
    if (drop > j.drop_magnitude) {
      j.drop_magnitude = drop;
      j.drop_index = k;
    }
  }
  j.drop_alpha = path.alphas[j.drop_index];
  if (j.status == JumpStatus::ok) {
    const std::size_t gap = j.index > j.drop_index ? j.index - j.drop_index : j.drop_index - j.index;
    j.detectors_agree = gap <= 1;
  }
  return j;
}

// pen(m) = 2 * alpha_min * D_m
struct LinearPenalty {
  double coefficient = 0.0;
  double operator()(std::size_t dim) const noexcept { return coefficient * static_cast<double>(dim); }
};

inline LinearPenalty calibrated_penalty(double alpha_min) {
  if (!(alpha_min >= 0.0)) throw std::invalid_argument("calibrated penalty: alpha_min must be >= 0");
  return {2.0 * alpha_min};
}

inline std::size_t select_calibrated(std::span<const double> risks, std::span<const std::size_t> dims,
                                     const LinearPenalty& pen) {
  return select_penalized(risks, dims, pen.coefficient);
}

// ---------------------------------------------------------------------------
// Dimension grouping
// ---------------------------------------------------------------------------

using DimensionGroups = std::map<std::size_t, std::vector<std::size_t>>;

inline DimensionGroups group_by_dimension(std::span<const std::size_t> dims) {
  DimensionGroups groups;
  for (std::size_t m = 0; m < dims.size(); ++m) {
    if (dims[m] == 0) throw std::invalid_argument("group_by_dimension: dimensions must be >= 1");
    groups[dims[m]].push_back(m);
  }
  return groups;
}

struct GroupedRoster {
  std::vector<std::size_t> dims;
  std::vector<double> risks;            // min over members
  std::vector<std::size_t> best_member;  // original index achieving the min (first on ties)
};

inline GroupedRoster grouped_risks(std::span<const double> risks, const DimensionGroups& groups) {
  GroupedRoster out;
  for (const auto& [dim, members] : groups) {
    std::size_t best = members.front();
    for (std::size_t m : members) {
      if (m >= risks.size()) throw std::invalid_argument("grouped_risks: member index out of range");
      if (risks[m] < risks[best]) best = m;
    }
    out.dims.push_back(dim);
    out.risks.push_back(risks[best]);
    out.best_member.push_back(best);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Akaike-style decomposition
// ---------------------------------------------------------------------------

class DiagnosticUnavailableError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AkaikeDiagnostics {
  std::vector<double> b_hat;          // P_n(loss.g_m - loss.g*)
  std::vector<double> v_hat;          // P_n(loss.g_m - loss.ghat_m)
  std::vector<double> excess_within;  // L(ghat_m, g_m)
};

template <class Predictor>
struct AkaikeModel {
  std::string label;
  Predictor fitted;                           // ghat_m, fitted on the same data
  std::optional<Predictor> best_in_model;     // g_m
};

template <class Predictor>
AkaikeDiagnostics akaike_diagnostics(std::span<const AkaikeModel<Predictor>> models, const Predictor& target,
                                     const std::function<double(const Predictor&)>& empirical_risk,
                                     const std::function<double(const Predictor&, const Predictor&)>& relative_risk) {
  AkaikeDiagnostics out;
  const double target_risk = empirical_risk(target);
  for (const auto& m : models) {
    if (!m.best_in_model) throw DiagnosticUnavailableError("akaike diagnostics: g_m unavailable for " + m.label);
    const double best_risk = empirical_risk(*m.best_in_model);
    out.b_hat.push_back(best_risk - target_risk);
    out.v_hat.push_back(best_risk - empirical_risk(m.fitted));
    out.excess_within.push_back(relative_risk(m.fitted, *m.best_in_model));
  }
  return out;
}

// Nested least squares on the orthonormal design; y is the training response.
inline AkaikeDiagnostics akaike_diagnostics(const MallowsProblem& problem, std::span<const double> y,
                                            std::span<const std::size_t> dims) {
  using Vec = std::vector<double>;
  std::vector<AkaikeModel<Vec>> models;
  for (std::size_t d : dims)
    models.push_back({"D=" + std::to_string(d), problem.fit(y, d), problem.best_in_model(d)});
  const Vec target(problem.signal().begin(), problem.signal().end());
  return akaike_diagnostics<Vec>(
      models, target, [&](const Vec& g) { return problem.empirical_risk(g, y); },
      [&](const Vec& a, const Vec& b) { return problem.excess_risk(a) - problem.excess_risk(b); });
}

// Histogram classifiers on contiguous partitions; `train` is the fitting sample.
inline AkaikeDiagnostics akaike_diagnostics(const DiscreteClassificationProblem& problem,
                                            std::span<const LabeledPoint> train, std::span<const std::size_t> dims) {
  using Vec = std::vector<int>;
  std::vector<AkaikeModel<Vec>> models;
  for (std::size_t d : dims) {
    const Partition part = Partition::contiguous(problem.size(), d);
    models.push_back({"D=" + std::to_string(d), fit_histogram(part, train, problem.size()).on_design(part),
                      best_in_histogram_model(part, problem)});
  }
  return akaike_diagnostics<Vec>(
      models, problem.bayes_classifier(), [&](const Vec& g) { return empirical_risk_01(g, train); },
      [&](const Vec& a, const Vec& b) { return relative_risk_01(a, b, problem); });
}

}  // namespace msel
