#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "msel/problems.hpp"
#include "msel/rng.hpp"

using namespace msel;

namespace {

DiscreteClassificationProblem uniform_design(std::vector<double> eta, std::optional<double> margin = std::nullopt) {
  std::vector<double> p(eta.size(), 1.0 / static_cast<double>(eta.size()));
  return {p, std::move(eta), margin};
}

std::vector<int> classifier_from_mask(std::size_t mask, std::size_t size) {
  std::vector<int> g(size);
  for (std::size_t x = 0; x < size; ++x) g[x] = static_cast<int>((mask >> x) & 1U);
  return g;
}

DiscreteClassificationProblem random_problem(CounterRng& rng, std::size_t size, double margin) {
  std::vector<double> p(size), eta(size);
  double total = 0;
  for (double& v : p) total += (v = 0.05 + rng.uniform());
  for (double& v : p) v /= total;
  for (double& e : eta) {
    const double gap = margin + (1.0 - margin) * rng.uniform();
    e = rng.bernoulli(0.5) ? 0.5 + gap / 2 : 0.5 - gap / 2;
  }
  return {p, eta, margin};
}

}  // namespace

TEST(CounterRng, DeterministicAndKeyed) {
  CounterRng a(5, 3, StreamRole::noise), b(5, 3, StreamRole::noise), c(5, 4, StreamRole::noise),
      d(5, 3, StreamRole::training);
  for (int i = 0; i < 100; ++i) {
    const auto va = a();
    EXPECT_EQ(va, b());
    EXPECT_NE(va, c());
    EXPECT_NE(va, d());
  }
}

TEST(CounterRng, UniformAndNormalMoments) {
  CounterRng rng(1, 0, StreamRole::noise);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sn / n, 0.0, 4 / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(sn2 / n, 1.0, 4 * std::sqrt(2.0 / n));
}

TEST(Classification, RejectsInvalidProblems) {
  EXPECT_THROW(DiscreteClassificationProblem({0.5, 0.4}, {0.1, 0.9}), std::invalid_argument);
  EXPECT_THROW(DiscreteClassificationProblem({0.5, 0.5}, {0.1, 1.2}), std::invalid_argument);
  EXPECT_THROW(DiscreteClassificationProblem({1.0}, {0.1, 0.2}), std::invalid_argument);
  EXPECT_THROW(uniform_design({0.1, 0.45}, 0.5), std::invalid_argument);
  EXPECT_NO_THROW(uniform_design({0.1, 0.75}, 0.5));
}

TEST(Classification, DegenerateNoiseGivesConstantLabels) {
  CounterRng rng(1, 0, StreamRole::training);
  for (const auto& z : gen_classification(uniform_design({1.0, 1.0, 1.0}), 500, rng)) EXPECT_EQ(z.y, 1);
}

TEST(Classification, SymmetricNoiseBalancesLabels) {
  CounterRng rng(2, 0, StreamRole::training);
  const std::size_t n = 20000;
  const auto s = gen_classification(uniform_design({0.5, 0.5, 0.5, 0.5}), n, rng);
  double ones = 0;
  for (const auto& z : s) ones += z.y;
  EXPECT_NEAR(ones / n, 0.5, 4 * std::sqrt(0.25 / n));
}

TEST(Classification, LabelFrequenciesFollowEta) {
  CounterRng rng(3, 0, StreamRole::training);
  const DiscreteClassificationProblem p({0.5, 0.5}, {0.9, 0.2});
  const auto s = gen_classification(p, 100000, rng);
  double count[2] = {0, 0}, ones[2] = {0, 0};
  for (const auto& z : s) {
    count[z.x] += 1;
    ones[z.x] += z.y;
  }
  EXPECT_NEAR(count[0] / 100000, 0.5, 4 * std::sqrt(0.25 / 100000));
  for (int x = 0; x < 2; ++x) {
    const double eta = p.eta()[x];
    EXPECT_NEAR(ones[x] / count[x], eta, 4 * std::sqrt(eta * (1 - eta) / count[x]));
  }
}

TEST(Classification, SamplingIsSeedDeterministic) {
  const auto p = DiscreteClassificationProblem::geometric_alternating(32, 0.8, 0.8);
  CounterRng a(42, 7, StreamRole::training), b(42, 7, StreamRole::training);
  const auto sa = p.sample(300, a), sb = p.sample(300, b);
  for (std::size_t i = 0; i < sa.size(); ++i) {
    EXPECT_EQ(sa[i].x, sb[i].x);
    EXPECT_EQ(sa[i].y, sb[i].y);
  }
}

TEST(ExcessRisk, Examples) {
  const auto p = uniform_design({0.1, 0.8, 0.3, 0.95});
  EXPECT_EQ(excess_risk_01(p.bayes_classifier(), p), 0.0);
  const DiscreteClassificationProblem single({1.0}, {0.9});
  EXPECT_NEAR(excess_risk_01(std::vector<int>{0}, single), 0.8, 1e-15);
  auto flipped = p.bayes_classifier();
  for (int& v : flipped) v = 1 - v;
  EXPECT_NEAR(excess_risk_01(flipped, p), (0.8 + 0.6 + 0.4 + 0.9) / 4, 1e-15);
  EXPECT_THROW(excess_risk_01(std::vector<int>{0, 1}, p), std::invalid_argument);
}

TEST(ExcessRisk, BayesOptimalOverAllClassifiers) {
  CounterRng rng(4, 0, StreamRole::design);
  for (std::size_t size = 1; size <= 10; ++size) {
    const auto p = random_problem(rng, size, 0.05);
    const auto bayes = p.bayes_classifier();
    for (std::size_t mask = 0; mask < (std::size_t{1} << size); ++mask) {
      const auto g = classifier_from_mask(mask, size);
      const double excess = excess_risk_01(g, p);
      EXPECT_GE(excess, 0.0);
      if (g == bayes) {
        EXPECT_EQ(excess, 0.0);
      }
      // P(Y != g) - P(Y != b*) computed directly.
      double direct = 0.0;
      for (std::size_t x = 0; x < size; ++x) {
        auto err = [&](int label) { return label == 1 ? 1.0 - p.eta()[x] : p.eta()[x]; };
        direct += p.probabilities()[x] * (err(g[x]) - err(bayes[x]));
      }
      EXPECT_NEAR(excess, direct, 1e-14);
    }
  }
}

TEST(MarginControl, VarianceBoundedByExcessOverMargin) {
  CounterRng rng(5, 0, StreamRole::design);
  for (double h : {0.1, 0.4, 0.8}) {
    const auto p = random_problem(rng, 9, h);
    for (std::size_t mask = 0; mask < 512; ++mask) {
      const auto g = classifier_from_mask(mask, 9);
      EXPECT_LE(h * disagreement_mass(g, p), excess_risk_01(g, p) + 1e-15);
    }
    // Histogram fits on the same problem obey it too.
    CounterRng data(5, static_cast<std::uint64_t>(h * 100), StreamRole::training);
    const auto sample = p.sample(40, data);
    for (std::size_t d : {1, 3, 9}) {
      const auto part = Partition::contiguous(9, d);
      const auto g = fit_histogram(part, sample, 9).on_design(part);
      EXPECT_LE(h * disagreement_mass(g, p), excess_risk_01(g, p) + 1e-15);
    }
  }
}

TEST(Histogram, SingleCellMajority) {
  const Partition one = Partition::contiguous(3, 1);
  const std::vector<LabeledPoint> s = {{0, 1}, {1, 1}, {2, 0}, {1, 1}};
  const auto fit = fit_histogram(one, s, 3);
  EXPECT_EQ(fit.cell_labels, std::vector<int>{1});
  EXPECT_EQ(fit.on_design(one), (std::vector<int>{1, 1, 1}));
}

TEST(Histogram, EmptyCellsAndTiesDefaultToZero) {
  const Partition part = Partition::contiguous(4, 4);
  const std::vector<LabeledPoint> s = {{0, 1}, {0, 1}, {1, 1}, {1, 0}};
  const auto fit = fit_histogram(part, s, 4);
  EXPECT_EQ(fit.cell_labels, (std::vector<int>{1, 0, 0, 0}));
  EXPECT_TRUE(fit.has_empty_cell);
  EXPECT_EQ(fit.empty_cells, (std::vector<bool>{false, false, true, true}));
}

TEST(Histogram, NonCoveringPartitionIsRejected) {
  const Partition part({0, 0, 1}, 2);
  EXPECT_THROW(fit_histogram(part, std::vector<LabeledPoint>{}, 4), std::invalid_argument);
  EXPECT_THROW(Partition({0, 2}, 2), std::invalid_argument);
  EXPECT_THROW(Partition::contiguous(3, 4), std::invalid_argument);
}

TEST(Histogram, ConvergesToBayesOnSeparatingPartition) {
  const DiscreteClassificationProblem p({0.5, 0.5}, {0.9, 0.2});
  CounterRng rng(6, 0, StreamRole::training);
  const auto part = Partition::contiguous(2, 2);
  const auto g = fit_histogram(part, p.sample(5000, rng), 2).on_design(part);
  EXPECT_EQ(g, p.bayes_classifier());
}

TEST(Histogram, MinimizesEmpiricalRiskOverPiecewiseConstantClass) {
  CounterRng rng(7, 0, StreamRole::training);
  for (std::size_t d = 1; d <= 10; ++d) {
    const std::size_t design = 12;
    const auto p = random_problem(rng, design, 0.1);
    const auto part = Partition::contiguous(design, d);
    const auto sample = p.sample(30, rng);
    const double fitted = empirical_risk_01(fit_histogram(part, sample, design).on_design(part), sample);
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      HistogramClassifier h;
      for (std::size_t c = 0; c < d; ++c) h.cell_labels.push_back(static_cast<int>((mask >> c) & 1U));
      EXPECT_LE(fitted, empirical_risk_01(h.on_design(part), sample) + 1e-15);
    }
  }
}

TEST(Histogram, RegressorAveragesCells) {
  const Partition part = Partition::contiguous(4, 2);
  const std::vector<std::size_t> xs = {0, 1, 1, 0};
  const std::vector<double> ys = {1.0, 2.0, 4.0, 3.0};
  const auto fit = fit_histogram_regressor(part, xs, ys, 4);
  EXPECT_DOUBLE_EQ(fit.cell_levels[0], 2.5);
  EXPECT_DOUBLE_EQ(fit.cell_levels[1], 0.0);
  EXPECT_TRUE(fit.has_empty_cell);
}

TEST(Histogram, BestInModelMinimizesPopulationRisk) {
  CounterRng rng(8, 0, StreamRole::design);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_problem(rng, 8, 0.05);
    for (std::size_t d : {1, 2, 3, 4, 8}) {
      const auto part = Partition::contiguous(8, d);
      const double best = excess_risk_01(best_in_histogram_model(part, p), p);
      for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        HistogramClassifier h;
        for (std::size_t c = 0; c < d; ++c) h.cell_labels.push_back(static_cast<int>((mask >> c) & 1U));
        EXPECT_LE(best, excess_risk_01(h.on_design(part), p) + 1e-15);
      }
    }
  }
}

TEST(Mallows, NoiselessResponseEqualsSignal) {
  const auto p = MallowsProblem::constant_amplitude(16, 4, 1.5, 0.0);
  CounterRng rng(9, 0, StreamRole::noise);
  const auto y = gen_mallows(p, rng);
  for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(y[i], p.signal()[i]);
}

TEST(Mallows, SampleMeanMatchesSignal) {
  const auto p = MallowsProblem::constant_amplitude(12, 5, 2.0, 1.3);
  const int reps = 10000;
  std::vector<double> sum(12, 0.0);
  for (int r = 0; r < reps; ++r) {
    CounterRng rng(10, static_cast<std::uint64_t>(r), StreamRole::noise);
    const auto y = p.sample(rng);
    for (std::size_t i = 0; i < 12; ++i) sum[i] += y[i];
  }
  for (std::size_t i = 0; i < 12; ++i) EXPECT_NEAR(sum[i] / reps, p.signal()[i], 4 * 1.3 / std::sqrt(reps));
}

TEST(Mallows, NestedRssIsNonincreasingAndProfilesMatchDirectFits) {
  const auto p = MallowsProblem::constant_amplitude(40, 6, 1.0, 1.0);
  CounterRng rng(11, 0, StreamRole::noise);
  const auto y = p.sample(rng);
  const auto risks = p.empirical_risk_profile(y, 40);
  const auto excess = p.excess_risk_profile(y, 40);
  for (std::size_t d = 1; d <= 40; ++d) {
    const auto g = p.fit(y, d);
    EXPECT_NEAR(risks[d - 1], p.empirical_risk(g, y), 1e-12);
    EXPECT_NEAR(excess[d - 1], p.excess_risk(g), 1e-12);
    if (d > 1) {
      EXPECT_LE(risks[d - 1], risks[d - 2]);
    }
  }
  EXPECT_THROW(MallowsProblem::constant_amplitude(4, 5, 1.0, 1.0), std::invalid_argument);
}

TEST(Changepoint, Construction) {
  const auto p = ChangepointProblem::equal_segments({0, 3, 0, 3}, 400, 1.0);
  EXPECT_EQ(p.n(), 400u);
  EXPECT_EQ(p.segment_ends()[1], 200u);
  const auto s = p.signal();
  EXPECT_EQ(s[99], 0.0);
  EXPECT_EQ(s[100], 3.0);
  EXPECT_THROW(ChangepointProblem({0, 1}, {5, 5}, 1.0), std::invalid_argument);
  EXPECT_THROW(ChangepointProblem({}, {}, 1.0), std::invalid_argument);
  EXPECT_THROW(ChangepointProblem({0}, {3}, -1.0), std::invalid_argument);
}
