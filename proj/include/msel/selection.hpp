#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "msel/modulus.hpp"
#include "msel/parallel.hpp"
#include "msel/rng.hpp"

namespace msel {

class InvalidFamilyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when two candidate functions differ by more than 1 on some sample.
class RangeConstraintError : public std::invalid_argument {
 public:
  RangeConstraintError(std::size_t first, std::size_t second, std::size_t sample, double gap)
      : std::invalid_argument("range constraint violated: |f_" + std::to_string(first) + " - f_" +
                              std::to_string(second) + "| = " + std::to_string(gap) +
                              " > 1 on sample " + std::to_string(sample)),
        first_(first),
        second_(second),
        sample_(sample) {}

  std::pair<std::size_t, std::size_t> pair() const noexcept { return {first_, second_}; }
  std::size_t sample() const noexcept { return sample_; }

 private:
  std::size_t first_, second_, sample_;
};

// A finite family {f_m} evaluated on n samples, stored row-major (|M| x n).
class CandidateFamily {
 public:
  struct Options {
    bool check_range = true;
  };

  CandidateFamily(std::vector<std::string> labels, std::vector<double> values, std::size_t sample_count,
                  std::optional<std::vector<double>> true_means = std::nullopt,
                  std::optional<std::vector<double>> true_second_moments = std::nullopt)
      : CandidateFamily(std::move(labels), std::move(values), sample_count, std::move(true_means),
                        std::move(true_second_moments), Options{}) {}

  CandidateFamily(std::vector<std::string> labels, std::vector<double> values, std::size_t sample_count,
                  std::optional<std::vector<double>> true_means,
                  std::optional<std::vector<double>> true_second_moments, Options options)
      : labels_(std::move(labels)),
        values_(std::move(values)),
        n_(sample_count),
        true_means_(std::move(true_means)),
        true_second_moments_(std::move(true_second_moments)) {
    if (labels_.size() < 2) throw InvalidFamilyError("candidate family needs at least 2 functions");
    if (n_ == 0) throw InvalidFamilyError("candidate family has no samples");
    if (values_.size() != labels_.size() * n_)
      throw InvalidFamilyError("evaluation matrix is not |M| x n");
    if (true_means_) {
      if (true_means_->size() != labels_.size()) throw InvalidFamilyError("true_means length != |M|");
      for (double m : *true_means_)
        if (!(m >= 0.0)) throw InvalidFamilyError("true means must be nonnegative");
    }
    if (true_second_moments_ && true_second_moments_->size() != labels_.size())
      throw InvalidFamilyError("true_second_moments length != |M|");
    if (options.check_range) check_range();
  }

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t sample_count() const noexcept { return n_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::span<const double> row(std::size_t m) const { return {values_.data() + m * n_, n_}; }
  const std::optional<std::vector<double>>& true_means() const noexcept { return true_means_; }
  const std::optional<std::vector<double>>& true_second_moments() const noexcept {
    return true_second_moments_;
  }

  double empirical_mean(std::size_t m) const {
    double s = 0.0;
    for (double v : row(m)) s += v;
    return s / static_cast<double>(n_);
  }

 private:
  void check_range() const {
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t lo = 0, hi = 0;
      for (std::size_t m = 1; m < labels_.size(); ++m) {
        const double v = values_[m * n_ + i];
        if (v < values_[lo * n_ + i]) lo = m;
        if (v > values_[hi * n_ + i]) hi = m;
      }
      const double gap = values_[hi * n_ + i] - values_[lo * n_ + i];
      if (gap > 1.0 + 1e-12) throw RangeConstraintError(std::min(lo, hi), std::max(lo, hi), i, gap);
    }
  }

  std::vector<std::string> labels_;
  std::vector<double> values_;
  std::size_t n_;
  std::optional<std::vector<double>> true_means_;
  std::optional<std::vector<double>> true_second_moments_;
};

struct SelectionOutcome {
  std::size_t selected = 0;
  std::vector<double> empirical_means;
  std::optional<double> selected_true_mean;
};

// Empirical risk minimizer over the family; ties go to the smallest index.
inline SelectionOutcome erm_select(const CandidateFamily& family) {
  SelectionOutcome out;
  out.empirical_means.reserve(family.size());
  for (std::size_t m = 0; m < family.size(); ++m) {
    out.empirical_means.push_back(family.empirical_mean(m));
    if (out.empirical_means[m] < out.empirical_means[out.selected]) out.selected = m;
  }
  if (family.true_means()) out.selected_true_mean = (*family.true_means())[out.selected];
  return out;
}

// sqrt(2y/n) * (sigma_m + sigma_m') + y / (3n)
inline double bernstein_deviation(double sigma_sum, double y, std::uint64_t n) {
  if (!(sigma_sum >= 0.0) || !(y >= 0.0)) throw std::domain_error("bernstein_deviation: negative argument");
  if (n == 0) throw std::domain_error("bernstein_deviation: n must be >= 1");
  const double nn = static_cast<double>(n);
  return std::sqrt(2.0 * y / nn) * sigma_sum + y / (3.0 * nn);
}

struct BoundInputs {
  std::uint64_t n = 1;
  std::uint64_t card_m = 2;
  double epsilon = 0.5;
  double x = 0.0;
  PowerModulus modulus{1.0, 2.0};
  double inf_true_mean = 0.0;

  void validate() const {
    if (n == 0) throw std::domain_error("bound inputs: n must be >= 1");
    if (card_m < 2) throw std::domain_error("bound inputs: |M| must be >= 2");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("bound inputs: epsilon must lie in (0,1)");
    if (!(x >= 0.0)) throw std::domain_error("bound inputs: x must be >= 0");
    if (!(inf_true_mean >= 0.0)) throw std::domain_error("bound inputs: inf_true_mean must be >= 0");
  }
};

inline double c_epsilon(double eps) { return (1.0 + eps) / (1.0 - eps); }
inline double c_prime_epsilon(double eps) { return 1.0 / (1.0 - eps); }

// (4/eps) phi*(n^{-1/2}) + 1/(3n)
inline double remainder_rate(const PowerModulus& phi, double epsilon, std::uint64_t n) {
  const double nn = static_cast<double>(n);
  return (4.0 / epsilon) * phi.conjugate(1.0 / std::sqrt(nn)) + 1.0 / (3.0 * nn);
}

struct TailBound {
  double threshold = 0.0;
  double probability = 1.0;
};

inline TailBound theorem1_tail_bound(const BoundInputs& b) {
  b.validate();
  const double log_card = std::log(static_cast<double>(b.card_m));
  return {c_epsilon(b.epsilon) * b.inf_true_mean +
              c_prime_epsilon(b.epsilon) * (b.x + log_card) * remainder_rate(b.modulus, b.epsilon, b.n),
          std::exp(-b.x)};
}

inline double theorem1_expectation_bound(const BoundInputs& b) {
  b.validate();
  const double log_e_card = 1.0 + std::log(static_cast<double>(b.card_m));
  return c_epsilon(b.epsilon) * b.inf_true_mean +
         c_prime_epsilon(b.epsilon) * log_e_card * remainder_rate(b.modulus, b.epsilon, b.n);
}

class VerificationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TailReplicate {
  std::size_t selected = 0;
  double selected_true_mean = 0.0;
  double inf_true_mean = 0.0;
  double threshold = 0.0;
  std::size_t card = 0;
  bool violation = false;
};

struct TailVerification {
  double violation_frequency = 0.0;
  double probability_bound = 0.0;  // e^{-x}
  double tolerance = 0.0;          // 3 sigma binomial band
  bool violated = false;
  double mean_selected_true_mean = 0.0;
  double sd_selected_true_mean = 0.0;
  double mean_inf_true_mean = 0.0;
  double expectation_bound = 0.0;  // evaluated at the mean infimum
  std::vector<TailReplicate> replicates;
};

// Monte Carlo check of the exponential selection bound. `sampler(rng)` must
// return a CandidateFamily carrying true means; each replicate draws from its
// own (seed, replicate) stream so worker count does not change results. The
// inf over true means is taken per replicate from the drawn family.
template <class Sampler>
TailVerification verify_tail_bound_mc(Sampler&& sampler, const BoundInputs& b, std::size_t replicates,
                                      std::uint64_t seed, unsigned workers = 1) {
  b.validate();
  if (replicates == 0) throw std::invalid_argument("verify_tail_bound_mc: replicates must be >= 1");

  TailVerification out;
  out.replicates.resize(replicates);
  parallel_for(replicates, workers, [&](std::size_t r) {
    CounterRng rng(seed, r, StreamRole::validation);
    const CandidateFamily family = sampler(rng);
    if (!family.true_means())
      throw VerificationError("family sampler does not expose true means; unusable for verification");
    const auto& means = *family.true_means();
    BoundInputs local = b;
    local.card_m = family.size();
    local.inf_true_mean = *std::min_element(means.begin(), means.end());
    const SelectionOutcome sel = erm_select(family);
    TailReplicate& rep = out.replicates[r];
    rep.selected = sel.selected;
    rep.selected_true_mean = *sel.selected_true_mean;
    rep.inf_true_mean = local.inf_true_mean;
    rep.threshold = theorem1_tail_bound(local).threshold;
    rep.card = family.size();
    rep.violation = rep.selected_true_mean > rep.threshold;
  });

  std::size_t violations = 0;
  double sum = 0.0, sum_sq = 0.0, sum_inf = 0.0;
  for (const auto& rep : out.replicates) {
    violations += rep.violation ? 1 : 0;
    sum += rep.selected_true_mean;
    sum_sq += rep.selected_true_mean * rep.selected_true_mean;
    sum_inf += rep.inf_true_mean;
  }
  const double reps = static_cast<double>(replicates);
  out.violation_frequency = static_cast<double>(violations) / reps;
  out.probability_bound = std::exp(-b.x);
  out.tolerance = 3.0 * std::sqrt(out.probability_bound * (1.0 - out.probability_bound) / reps);
  out.violated = out.violation_frequency > out.probability_bound + out.tolerance;
  out.mean_selected_true_mean = sum / reps;
  out.sd_selected_true_mean =
      replicates > 1 ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / reps) / (reps - 1.0))) : 0.0;
  out.mean_inf_true_mean = sum_inf / reps;
  BoundInputs at_mean = b;
  at_mean.card_m = out.replicates.front().card;
  at_mean.inf_true_mean = out.mean_inf_true_mean;
  out.expectation_bound = theorem1_expectation_bound(at_mean);
  return out;
}

}  // namespace msel
