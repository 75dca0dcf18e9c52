#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "msel/rng.hpp"

namespace msel {

// ---------------------------------------------------------------------------
// Binary classification on a finite design
// ---------------------------------------------------------------------------

struct LabeledPoint {
  std::size_t x = 0;  // index into the design
  int y = 0;          // label in {0, 1}
};

// Finite design with point masses and regression function eta(x) = P(Y=1|X=x).
// Every risk below is an exact finite sum over the design.
class DiscreteClassificationProblem {
 public:
  DiscreteClassificationProblem(std::vector<double> probabilities, std::vector<double> eta,
                                std::optional<double> margin = std::nullopt)
      : probabilities_(std::move(probabilities)), eta_(std::move(eta)), margin_(margin) {
    if (probabilities_.empty()) throw std::invalid_argument("classification problem: empty design");
    if (probabilities_.size() != eta_.size())
      throw std::invalid_argument("classification problem: probabilities and eta differ in length");
    double total = 0.0;
    for (double p : probabilities_) {
      if (!(p >= 0.0)) throw std::invalid_argument("classification problem: negative probability");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("classification problem: probabilities sum to " + std::to_string(total));
    for (double e : eta_)
      if (!(e >= 0.0 && e <= 1.0)) throw std::invalid_argument("classification problem: eta outside [0,1]");
    if (margin_) {
      if (!(*margin_ > 0.0 && *margin_ <= 1.0))
        throw std::invalid_argument("classification problem: margin must lie in (0,1]");
      for (double e : eta_)
        if (std::abs(2.0 * e - 1.0) < *margin_ - 1e-12)
          throw std::invalid_argument("classification problem: |2 eta - 1| below declared margin");
    }
    cumulative_.resize(probabilities_.size());
    std::partial_sum(probabilities_.begin(), probabilities_.end(), cumulative_.begin());
  }

  // `points` design points with masses proportional to ratio^j and
  // eta = 1/2 +- margin/2, the sign alternating along the design.
  static DiscreteClassificationProblem geometric_alternating(std::size_t points, double ratio, double margin) {
    if (points == 0) throw std::invalid_argument("classification problem: points must be >= 1");
    if (!(ratio > 0.0)) throw std::invalid_argument("classification problem: ratio must be positive");
    std::vector<double> prob(points), eta(points);
    double total = 0.0;
    for (std::size_t j = 0; j < points; ++j) total += (prob[j] = std::pow(ratio, static_cast<double>(j)));
    for (std::size_t j = 0; j < points; ++j) {
      prob[j] /= total;
      eta[j] = (j % 2 == 1) ? 0.5 + margin / 2.0 : 0.5 - margin / 2.0;
    }
    return {std::move(prob), std::move(eta), margin};
  }

  std::size_t size() const noexcept { return probabilities_.size(); }
  std::span<const double> probabilities() const noexcept { return probabilities_; }
  std::span<const double> eta() const noexcept { return eta_; }
  std::optional<double> margin() const noexcept { return margin_; }

  int bayes_label(std::size_t x) const { return eta_.at(x) > 0.5 ? 1 : 0; }

  std::vector<int> bayes_classifier() const {
    std::vector<int> out(size());
    for (std::size_t x = 0; x < size(); ++x) out[x] = bayes_label(x);
    return out;
  }

  std::vector<LabeledPoint> sample(std::size_t n, CounterRng& rng) const {
    std::vector<LabeledPoint> out(n);
    for (auto& pt : out) {
      pt.x = rng.categorical(cumulative_);
      pt.y = rng.bernoulli(eta_[pt.x]) ? 1 : 0;
    }
    return out;
  }

 private:
  std::vector<double> probabilities_;
  std::vector<double> eta_;
  std::optional<double> margin_;
  std::vector<double> cumulative_;
};

inline std::vector<LabeledPoint> gen_classification(const DiscreteClassificationProblem& p, std::size_t n,
                                                    CounterRng& rng) {
  return p.sample(n, rng);
}

namespace detail {
inline void require_full_classifier(std::span<const int> g, const DiscreteClassificationProblem& p) {
  if (g.size() != p.size())
    throw std::invalid_argument("classifier is not defined on every design point (" + std::to_string(g.size()) +
                                " labels for " + std::to_string(p.size()) + " points)");
}
}  // namespace detail

// L(g, b*) = sum_x |2 eta(x) - 1| P(x) 1{g(x) != b*(x)}
inline double excess_risk_01(std::span<const int> g, const DiscreteClassificationProblem& p) {
  detail::require_full_classifier(g, p);
  double risk = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x)
    if (g[x] != p.bayes_label(x)) risk += std::abs(2.0 * p.eta()[x] - 1.0) * p.probabilities()[x];
  return risk;
}

// L(g, g') = R(g) - R(g') for two classifiers, exact.
inline double relative_risk_01(std::span<const int> g, std::span<const int> reference,
                               const DiscreteClassificationProblem& p) {
  return excess_risk_01(g, p) - excess_risk_01(reference, p);
}

// P f^2 for f = loss(g) - loss(b*), i.e. the mass where g disagrees with b*.
inline double disagreement_mass(std::span<const int> g, const DiscreteClassificationProblem& p) {
  detail::require_full_classifier(g, p);
  double mass = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x)
    if (g[x] != p.bayes_label(x)) mass += p.probabilities()[x];
  return mass;
}

inline double empirical_risk_01(std::span<const int> g, std::span<const LabeledPoint> sample) {
  if (sample.empty()) throw std::invalid_argument("empirical risk of an empty sample");
  std::size_t errors = 0;
  for (const auto& pt : sample) errors += (g[pt.x] != pt.y) ? 1 : 0;
  return static_cast<double>(errors) / static_cast<double>(sample.size());
}

// ---------------------------------------------------------------------------
// Histogram models
// ---------------------------------------------------------------------------

// Assignment of design points to D cells.
class Partition {
 public:
  Partition(std::vector<std::size_t> cell_of, std::size_t cells) : cell_of_(std::move(cell_of)), cells_(cells) {
    if (cells_ == 0) throw std::invalid_argument("partition: needs at least one cell");
    for (std::size_t c : cell_of_)
      if (c >= cells_) throw std::invalid_argument("partition: cell index out of range");
  }

  // D contiguous cells of (nearly) equal point count.
  static Partition contiguous(std::size_t points, std::size_t cells) {
    if (cells == 0 || cells > points) throw std::invalid_argument("partition: need 1 <= D <= number of points");
    std::vector<std::size_t> cell_of(points);
    for (std::size_t j = 0; j < points; ++j) cell_of[j] = j * cells / points;
    return {std::move(cell_of), cells};
  }

  std::size_t cells() const noexcept { return cells_; }
  std::size_t points() const noexcept { return cell_of_.size(); }
  std::size_t cell_of(std::size_t x) const { return cell_of_.at(x); }

  void require_covers(std::size_t design_size) const {
    if (cell_of_.size() != design_size)
      throw std::invalid_argument("partition does not cover the design (" + std::to_string(cell_of_.size()) +
                                  " assigned of " + std::to_string(design_size) + ")");
  }

 private:
  std::vector<std::size_t> cell_of_;
  std::size_t cells_;
};

struct HistogramClassifier {
  std::vector<int> cell_labels;
  std::vector<std::size_t> cell_counts;
  std::vector<bool> empty_cells;
  bool has_empty_cell = false;

  // Labels on every design point.
  std::vector<int> on_design(const Partition& partition) const {
    std::vector<int> g(partition.points());
    for (std::size_t x = 0; x < g.size(); ++x) g[x] = cell_labels[partition.cell_of(x)];
    return g;
  }
};

// Per-cell majority vote: the empirical square-loss minimizer over {0,1}-valued
// piecewise-constant classifiers. Ties and empty cells go to label 0.
inline HistogramClassifier fit_histogram(const Partition& partition, std::span<const LabeledPoint> sample,
                                         std::size_t design_size) {
  partition.require_covers(design_size);
  const std::size_t d = partition.cells();
  std::vector<std::size_t> ones(d, 0);
  HistogramClassifier out;
  out.cell_counts.assign(d, 0);
  for (const auto& pt : sample) {
    if (pt.x >= design_size) throw std::invalid_argument("fit_histogram: sample outside the design");
    const std::size_t c = partition.cell_of(pt.x);
    ++out.cell_counts[c];
    ones[c] += static_cast<std::size_t>(pt.y);
  }
  out.cell_labels.assign(d, 0);
  out.empty_cells.assign(d, false);
  for (std::size_t c = 0; c < d; ++c) {
    if (out.cell_counts[c] == 0) {
      out.empty_cells[c] = true;
      out.has_empty_cell = true;
      continue;
    }
    out.cell_labels[c] = 2 * ones[c] > out.cell_counts[c] ? 1 : 0;
  }
  return out;
}

struct HistogramRegressor {
  std::vector<double> cell_levels;
  std::vector<std::size_t> cell_counts;
  bool has_empty_cell = false;
};

// Per-cell mean of real responses; empty cells get level 0.
inline HistogramRegressor fit_histogram_regressor(const Partition& partition, std::span<const std::size_t> xs,
                                                  std::span<const double> ys, std::size_t design_size) {
  partition.require_covers(design_size);
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_histogram_regressor: xs and ys differ in length");
  const std::size_t d = partition.cells();
  HistogramRegressor out;
  out.cell_levels.assign(d, 0.0);
  out.cell_counts.assign(d, 0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] >= design_size) throw std::invalid_argument("fit_histogram_regressor: sample outside the design");
    const std::size_t c = partition.cell_of(xs[i]);
    out.cell_levels[c] += ys[i];
    ++out.cell_counts[c];
  }
  for (std::size_t c = 0; c < d; ++c) {
    if (out.cell_counts[c] == 0)
      out.has_empty_cell = true;
    else
      out.cell_levels[c] /= static_cast<double>(out.cell_counts[c]);
  }
  return out;
}

// g_m: the population risk minimizer within the histogram model (cell-wise
// weighted majority of eta; ties to 0).
inline std::vector<int> best_in_histogram_model(const Partition& partition, const DiscreteClassificationProblem& p) {
  partition.require_covers(p.size());
  std::vector<double> mass(partition.cells(), 0.0), mass_one(partition.cells(), 0.0);
  for (std::size_t x = 0; x < p.size(); ++x) {
    mass[partition.cell_of(x)] += p.probabilities()[x];
    mass_one[partition.cell_of(x)] += p.probabilities()[x] * p.eta()[x];
  }
  std::vector<int> g(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    const std::size_t c = partition.cell_of(x);
    g[x] = mass_one[c] > mass[c] - mass_one[c] ? 1 : 0;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Gaussian regression on an orthonormal fixed design (Mallows setting)
// ---------------------------------------------------------------------------

// Responses are expressed in the coordinates of the orthonormal design, so the
// nested model of dimension D is the span of the first D basis vectors and
// least squares is truncation. Losses are (1/n)||.||^2, invariant under the
// choice of orthonormal basis.
class MallowsProblem {
 public:
  MallowsProblem(std::size_t n, std::vector<double> signal_head, double sigma)
      : n_(n), d_true_(signal_head.size()), sigma_(sigma), signal_(n, 0.0) {
    if (n_ == 0) throw std::invalid_argument("mallows problem: n must be >= 1");
    if (d_true_ > n_) throw std::invalid_argument("mallows problem: D_true exceeds n");
    if (!(sigma_ >= 0.0)) throw std::invalid_argument("mallows problem: sigma must be >= 0");
    std::copy(signal_head.begin(), signal_head.end(), signal_.begin());
  }

  static MallowsProblem constant_amplitude(std::size_t n, std::size_t d_true, double amplitude, double sigma) {
    if (d_true > n) throw std::invalid_argument("mallows problem: D_true exceeds n");
    return {n, std::vector<double>(d_true, amplitude), sigma};
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t d_true() const noexcept { return d_true_; }
  double sigma() const noexcept { return sigma_; }
  std::span<const double> signal() const noexcept { return signal_; }

  std::vector<double> sample(CounterRng& rng) const {
    std::vector<double> y(signal_);
    for (double& v : y) v += sigma_ * rng.normal();
    return y;
  }

  // Least-squares fit in the model of dimension d.
  std::vector<double> fit(std::span<const double> y, std::size_t d) const {
    require_dim(d);
    std::vector<double> g(n_, 0.0);
    std::copy_n(y.begin(), d, g.begin());
    return g;
  }

  // g_m: projection of the signal on the model of dimension d.
  std::vector<double> best_in_model(std::size_t d) const {
    require_dim(d);
    std::vector<double> g(n_, 0.0);
    std::copy_n(signal_.begin(), d, g.begin());
    return g;
  }

  // P_n(loss . g) = (1/n)||y - g||^2
  double empirical_risk(std::span<const double> g, std::span<const double> y) const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += (y[i] - g[i]) * (y[i] - g[i]);
    return s / static_cast<double>(n_);
  }

  // L(g, g*) = (1/n)||g - signal||^2
  double excess_risk(std::span<const double> g) const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += (g[i] - signal_[i]) * (g[i] - signal_[i]);
    return s / static_cast<double>(n_);
  }

  // P_n(loss . ghat_D) for D = 1..d_max in one pass.
  std::vector<double> empirical_risk_profile(std::span<const double> y, std::size_t d_max) const {
    require_dim(d_max);
    std::vector<double> tail(n_ + 1, 0.0);
    for (std::size_t i = n_; i-- > 0;) tail[i] = tail[i + 1] + y[i] * y[i];
    std::vector<double> out(d_max);
    for (std::size_t d = 1; d <= d_max; ++d) out[d - 1] = tail[d] / static_cast<double>(n_);
    return out;
  }

  // L(ghat_D, g*) for D = 1..d_max in one pass.
  std::vector<double> excess_risk_profile(std::span<const double> y, std::size_t d_max) const {
    require_dim(d_max);
    std::vector<double> bias_tail(n_ + 1, 0.0);
    for (std::size_t i = n_; i-- > 0;) bias_tail[i] = bias_tail[i + 1] + signal_[i] * signal_[i];
    std::vector<double> out(d_max);
    double variance = 0.0;
    for (std::size_t d = 1; d <= d_max; ++d) {
      const double e = y[d - 1] - signal_[d - 1];
      variance += e * e;
      out[d - 1] = (variance + bias_tail[d]) / static_cast<double>(n_);
    }
    return out;
  }

 private:
  void require_dim(std::size_t d) const {
    if (d == 0 || d > n_) throw std::invalid_argument("mallows problem: model dimension outside [1, n]");
  }

  std::size_t n_;
  std::size_t d_true_;
  double sigma_;
  std::vector<double> signal_;
};

inline std::vector<double> gen_mallows(const MallowsProblem& p, CounterRng& rng) { return p.sample(rng); }

// ---------------------------------------------------------------------------
// Piecewise-constant mean with Gaussian noise
// ---------------------------------------------------------------------------

class ChangepointProblem {
 public:
  // segment_ends: exclusive end of each segment, strictly increasing; the last
  // one is the signal length.
  ChangepointProblem(std::vector<double> levels, std::vector<std::size_t> segment_ends, double sigma)
      : levels_(std::move(levels)), ends_(std::move(segment_ends)), sigma_(sigma) {
    if (levels_.empty()) throw std::invalid_argument("changepoint problem: needs at least one segment");
    if (levels_.size() != ends_.size())
      throw std::invalid_argument("changepoint problem: levels and boundaries differ in count");
    std::size_t prev = 0;
    for (std::size_t e : ends_) {
      if (e <= prev) throw std::invalid_argument("changepoint problem: boundaries must increase strictly");
      prev = e;
    }
    if (!(sigma_ >= 0.0)) throw std::invalid_argument("changepoint problem: sigma must be >= 0");
  }

  static ChangepointProblem equal_segments(std::vector<double> levels, std::size_t n, double sigma) {
    if (levels.empty() || n < levels.size())
      throw std::invalid_argument("changepoint problem: need 1 <= segments <= n");
    std::vector<std::size_t> ends(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k) ends[k] = (k + 1) * n / levels.size();
    return {std::move(levels), std::move(ends), sigma};
  }

  std::size_t n() const noexcept { return ends_.back(); }
  std::size_t segments() const noexcept { return levels_.size(); }
  double sigma() const noexcept { return sigma_; }
  std::span<const double> levels() const noexcept { return levels_; }
  std::span<const std::size_t> segment_ends() const noexcept { return ends_; }

  std::vector<double> signal() const {
    std::vector<double> s(n());
    std::size_t start = 0;
    for (std::size_t k = 0; k < ends_.size(); ++k) {
      std::fill(s.begin() + static_cast<std::ptrdiff_t>(start), s.begin() + static_cast<std::ptrdiff_t>(ends_[k]),
                levels_[k]);
      start = ends_[k];
    }
    return s;
  }

  std::vector<double> sample(CounterRng& rng) const {
    std::vector<double> y = signal();
    for (double& v : y) v += sigma_ * rng.normal();
    return y;
  }

 private:
  std::vector<double> levels_;
  std::vector<std::size_t> ends_;
  double sigma_;
};

}  // namespace msel
