#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "msel/calibration.hpp"
#include "msel/harness/config.hpp"
#include "msel/harness/record.hpp"
#include "msel/holdout.hpp"
#include "msel/modulus.hpp"
#include "msel/parallel.hpp"
#include "msel/problems.hpp"
#include "msel/rng.hpp"
#include "msel/segmentation.hpp"
#include "msel/selection.hpp"
#include "msel/stats.hpp"

namespace msel::harness {

namespace detail {

inline std::vector<std::size_t> one_to(std::size_t d_max) {
  std::vector<std::size_t> d(d_max);
  for (std::size_t i = 0; i < d_max; ++i) d[i] = i + 1;
  return d;
}

inline std::size_t argmin(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// verify-tail: fixed histogram-induced loss differences on a finite design
// ---------------------------------------------------------------------------

inline RunRecord run_verify_tail(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto problem = cfg.classification.build();
  const PowerModulus phi(cfg.modulus_coefficient(), cfg.modulus_p);
  const std::vector<int> bayes = problem.bayes_classifier();

  std::vector<std::string> labels;
  std::vector<std::vector<int>> classifiers;
  std::vector<double> means, second;
  for (std::size_t d : cfg.dims) {
    const auto part = Partition::contiguous(problem.size(), d);
    classifiers.push_back(best_in_histogram_model(part, problem));
    labels.push_back("D=" + std::to_string(d));
    means.push_back(excess_risk_01(classifiers.back(), problem));
    second.push_back(disagreement_mass(classifiers.back(), problem));
  }

  const std::size_t n = cfg.n;
  auto sampler = [&](CounterRng& rng) {
    const auto sample = problem.sample(n, rng);
    std::vector<double> values;
    values.reserve(classifiers.size() * n);
    for (const auto& g : classifiers)
      for (const auto& z : sample)
        values.push_back(static_cast<double>(g[z.x] != z.y) - static_cast<double>(bayes[z.x] != z.y));
    return CandidateFamily(labels, std::move(values), n, means, second);
  };

  BoundInputs b;
  b.n = n;
  b.card_m = cfg.dims.size();
  b.epsilon = cfg.epsilon;
  b.x = cfg.x;
  b.modulus = phi;
  b.inf_true_mean = *std::min_element(means.begin(), means.end());
  const TailVerification v = verify_tail_bound_mc(sampler, b, cfg.replicates, cfg.seed, cfg.workers);

  RunRecord rec;
  rec.config = cfg;
  rec.replicates = Table({"replicate", "selected", "selected_label", "selected_true_mean", "threshold", "violation"});
  std::vector<double> selected_means;
  for (std::size_t r = 0; r < v.replicates.size(); ++r) {
    const auto& rep = v.replicates[r];
    rec.replicates.add(r, rep.selected, labels[rep.selected], rep.selected_true_mean, rep.threshold, rep.violation);
    selected_means.push_back(rep.selected_true_mean);
  }

  Table models({"model", "true_mean", "second_moment", "phi_of_sqrt_second_moment"});
  double modulus_slack = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < labels.size(); ++m) {
    const double lower = phi(std::sqrt(second[m]));
    models.add(labels[m], means[m], second[m], lower);
    modulus_slack = std::min(modulus_slack, means[m] - lower);
  }
  rec.curves.emplace_back("models", std::move(models));

  const double stderr_mean = stats::standard_error(selected_means);
  const double threshold = theorem1_tail_bound(b).threshold;
  rec.aggregates = {{"violation_frequency", v.violation_frequency},
                    {"probability_bound", v.probability_bound},
                    {"tolerance", v.tolerance},
                    {"threshold", threshold},
                    {"inf_true_mean", b.inf_true_mean},
                    {"mean_selected_true_mean", v.mean_selected_true_mean},
                    {"mc_standard_error", stderr_mean},
                    {"expectation_bound", v.expectation_bound},
                    {"modulus_c", phi.coefficient()},
                    {"modulus_p", phi.exponent()},
                    {"delta_n", rate_quantities(phi, n).delta_n},
                    {"underpowered", cfg.replicates < 1000}};
  rec.checks.push_back(make_check("modulus_condition_min_slack", modulus_slack, -1e-12,
                                  std::numeric_limits<double>::infinity()));
  rec.checks.push_back(make_check("tail_violation_frequency", v.violation_frequency, 0.0,
                                  v.probability_bound + v.tolerance));
  rec.checks.push_back(make_check("mean_selected_true_mean", v.mean_selected_true_mean, 0.0,
                                  v.expectation_bound + 3.0 * stderr_mean));
  return rec;
}

// ---------------------------------------------------------------------------
// holdout-adapt: hold-out over histogram classifiers across sample sizes
// ---------------------------------------------------------------------------

inline RunRecord run_holdout_adapt(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto problem = cfg.classification.build();
  const PowerModulus phi(cfg.modulus_coefficient(), cfg.modulus_p);
  const auto task = histogram_task(problem, cfg.dims);
  const OracleSettings oracle{cfg.epsilon, phi};
  const SplitPolicy policy = cfg.split == "shuffle" ? SplitPolicy::seeded_shuffle : SplitPolicy::prefix;
  const std::size_t reps = cfg.replicates;
  const std::size_t sizes = cfg.ns.size();

  std::vector<HoldoutReport> reports(sizes * reps);
  parallel_for(reports.size(), cfg.workers, [&](std::size_t key) {
    const std::size_t n = cfg.ns[key / reps];
    const auto train = static_cast<std::size_t>(std::max(1.0, std::round(cfg.train_ratio * static_cast<double>(n))));
    CounterRng data_rng(cfg.seed, key, StreamRole::training);
    CounterRng shuffle_rng(cfg.seed, key, StreamRole::shuffle);
    const auto dataset = problem.sample(train + n, data_rng);
    reports[key] = run_holdout(task, std::span<const LabeledPoint>(dataset), HoldoutSplit{train, n, policy},
                               shuffle_rng, oracle);
  });

  RunRecord rec;
  rec.config = cfg;
  rec.replicates = Table({"n", "replicate", "selected_label", "selected_excess", "oracle_excess", "bound_rhs",
                          "bound_holds", "excluded_models"});
  Table curve({"n", "N", "mean_selected_excess", "se_selected_excess", "mean_oracle_excess", "surrogate_rhs",
               "surrogate_holds", "pointwise_hold_frequency"});
  std::vector<double> xs, mean_sel, mean_orc;
  bool all_positive = true;
  json per_n = json::array();
  for (std::size_t k = 0; k < sizes; ++k) {
    const std::size_t n = cfg.ns[k];
    const auto train = static_cast<std::size_t>(std::max(1.0, std::round(cfg.train_ratio * static_cast<double>(n))));
    std::vector<double> sel, orc;
    std::size_t holds = 0;
    std::size_t card = cfg.dims.size();
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& rep = reports[k * reps + r];
      const bool ok = rep.selected_excess <= *rep.bound_rhs;
      holds += ok ? 1 : 0;
      card = std::min(card, rep.card_m);
      sel.push_back(rep.selected_excess);
      orc.push_back(rep.oracle_excess);
      rec.replicates.add(n, r, rep.selected_label, rep.selected_excess, rep.oracle_excess, *rep.bound_rhs, ok,
                         rep.warnings.size());
    }
    const double ms = stats::mean(sel), mo = stats::mean(orc);
    const double rhs = holdout_bound_rhs(mo, cfg.epsilon, phi, card, n);
    const double freq = static_cast<double>(holds) / static_cast<double>(reps);
    curve.add(n, train, ms, stats::standard_error(sel), mo, rhs, ms <= rhs, freq);
    rec.checks.push_back(make_check("surrogate_bound_n=" + std::to_string(n), rhs - ms, 0.0,
                                    std::numeric_limits<double>::infinity()));
    per_n.push_back({{"n", n}, {"mean_selected_excess", ms}, {"mean_oracle_excess", mo}, {"surrogate_rhs", rhs}});
    xs.push_back(static_cast<double>(n));
    mean_sel.push_back(ms);
    mean_orc.push_back(mo);
    all_positive = all_positive && ms > 0.0;
  }
  rec.curves.emplace_back("excess_vs_n", std::move(curve));

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double slope = all_positive ? stats::loglog_slope(xs, mean_sel) : nan;
  bool oracle_positive = std::all_of(mean_orc.begin(), mean_orc.end(), [](double v) { return v > 0.0; });
  const double oracle_slope = oracle_positive ? stats::loglog_slope(xs, mean_orc) : nan;
  rec.aggregates = {{"slope", all_positive ? json(slope) : json(nullptr)},
                    {"oracle_slope", oracle_positive ? json(oracle_slope) : json(nullptr)},
                    {"margin", cfg.classification.effective_margin()},
                    {"modulus_c", phi.coefficient()},
                    {"per_n", per_n}};
  if (cfg.slope_at_most)
    rec.checks.push_back(make_check("slope_at_most", slope, -std::numeric_limits<double>::infinity(),
                                    *cfg.slope_at_most));
  if (cfg.slope_at_least)
    rec.checks.push_back(make_check("slope_at_least", slope, *cfg.slope_at_least,
                                    std::numeric_limits<double>::infinity()));
  return rec;
}

// ---------------------------------------------------------------------------
// calibrate: dimension jump and doubling rule for nested Gaussian models
// ---------------------------------------------------------------------------

inline RunRecord run_calibrate(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& ms = cfg.mallows;
  const auto problem = MallowsProblem::constant_amplitude(ms.n, ms.d_true, ms.amplitude, ms.sigma);
  const double unit = ms.sigma * ms.sigma / static_cast<double>(ms.n);
  const auto units = geometric_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.points);
  const auto grid = geometric_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.points, unit);
  const auto dims = detail::one_to(ms.d_max);
  const std::size_t threshold = cfg.threshold_for(ms.d_max);

  struct Replicate {
    DimensionJump jump;
    std::vector<double> excess_on_grid;
    std::vector<std::size_t> dims_on_grid;
    std::size_t calibrated_dim = 0;
    double calibrated_excess = 0.0;
    double oracle_excess = 0.0;
  };
  std::vector<Replicate> reps(cfg.replicates);
  parallel_for(reps.size(), cfg.workers, [&](std::size_t r) {
    CounterRng rng(cfg.seed, r, StreamRole::noise);
    const auto y = problem.sample(rng);
    const auto risks = problem.empirical_risk_profile(y, ms.d_max);
    const auto excess = problem.excess_risk_profile(y, ms.d_max);
    const auto path = penalty_path(risks, dims, grid);
    Replicate& rep = reps[r];
    rep.jump = dimension_jump(path, threshold);
    for (std::size_t k = 0; k < grid.size(); ++k) rep.excess_on_grid.push_back(excess[path.selected_models[k]]);
    rep.dims_on_grid = path.selected_dims;
    const std::size_t m = select_calibrated(risks, dims, calibrated_penalty(rep.jump.alpha_min));
    rep.calibrated_dim = dims[m];
    rep.calibrated_excess = excess[m];
    rep.oracle_excess = *std::min_element(excess.begin(), excess.end());
  });

  RunRecord rec;
  rec.config = cfg;
  rec.replicates = Table({"replicate", "jump_alpha", "drop_alpha", "status", "detectors_agree", "jump_magnitude",
                          "calibrated_dim", "calibrated_excess", "oracle_excess"});
  std::vector<double> jumps, drops, cal, orc;
  std::size_t disagreements = 0, unresolved = 0;
  std::vector<double> mean_excess(grid.size(), 0.0), mean_dim(grid.size(), 0.0);
  for (std::size_t r = 0; r < reps.size(); ++r) {
    const auto& rep = reps[r];
    const double ja = rep.jump.alpha_min / unit, da = rep.jump.drop_alpha / unit;
    rec.replicates.add(r, ja, da, to_string(rep.jump.status), rep.jump.detectors_agree, rep.jump.jump_magnitude,
                       rep.calibrated_dim, rep.calibrated_excess, rep.oracle_excess);
    jumps.push_back(ja);
    drops.push_back(da);
    cal.push_back(rep.calibrated_excess);
    orc.push_back(rep.oracle_excess);
    disagreements += rep.jump.detectors_agree ? 0 : 1;
    unresolved += rep.jump.status == JumpStatus::ok ? 0 : 1;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      mean_excess[k] += rep.excess_on_grid[k];
      mean_dim[k] += static_cast<double>(rep.dims_on_grid[k]);
    }
  }
  Table curve({"alpha", "mean_excess", "mean_selected_dim"});
  for (std::size_t k = 0; k < grid.size(); ++k) {
    mean_excess[k] /= static_cast<double>(reps.size());
    mean_dim[k] /= static_cast<double>(reps.size());
    curve.add(units[k], mean_excess[k], mean_dim[k]);
  }
  rec.curves.emplace_back("risk_vs_alpha", std::move(curve));
  Table path0({"alpha", "selected_dim"});
  for (std::size_t k = 0; k < grid.size(); ++k) path0.add(units[k], reps[0].dims_on_grid[k]);
  rec.curves.emplace_back("path_replicate0", std::move(path0));

  const double jump = stats::median(jumps);
  const double optimum = units[detail::argmin(mean_excess)];
  rec.aggregates = {{"median_jump_alpha", jump},
                    {"median_drop_alpha", stats::median(drops)},
                    {"optimal_alpha", optimum},
                    {"optimal_over_jump", optimum / jump},
                    {"detector_disagreements", disagreements},
                    {"unresolved_jumps", unresolved},
                    {"mean_calibrated_excess", stats::mean(cal)},
                    {"mean_oracle_excess", stats::mean(orc)},
                    {"large_dim_threshold", threshold},
                    {"alpha_unit", "sigma^2/n"}};
  rec.checks.push_back(make_check("median_jump_alpha", jump, 0.8, 1.2));
  rec.checks.push_back(make_check("optimal_alpha", optimum, 1.6, 2.4));
  rec.checks.push_back(make_check("optimal_over_jump", optimum / jump, 1.6, 2.6));
  return rec;
}

// ---------------------------------------------------------------------------
// akaike-check: E[v_hat] against E[L(ghat_m, g_m)]
// ---------------------------------------------------------------------------

inline RunRecord run_akaike_check(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& ms = cfg.mallows;
  const auto problem = MallowsProblem::constant_amplitude(ms.n, ms.d_true, ms.amplitude, ms.sigma);
  const std::size_t nd = cfg.dims.size();

  std::vector<AkaikeDiagnostics> diag(cfg.replicates);
  parallel_for(diag.size(), cfg.workers, [&](std::size_t r) {
    CounterRng rng(cfg.seed, r, StreamRole::noise);
    const auto y = problem.sample(rng);
    diag[r] = akaike_diagnostics(problem, y, cfg.dims);
  });

  RunRecord rec;
  rec.config = cfg;
  rec.replicates = Table({"replicate", "dim", "v_hat", "excess_within", "b_hat"});
  std::vector<double> sum_v(nd, 0.0), sum_l(nd, 0.0), sum_b(nd, 0.0);
  double min_v = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < diag.size(); ++r)
    for (std::size_t i = 0; i < nd; ++i) {
      rec.replicates.add(r, cfg.dims[i], diag[r].v_hat[i], diag[r].excess_within[i], diag[r].b_hat[i]);
      sum_v[i] += diag[r].v_hat[i];
      sum_l[i] += diag[r].excess_within[i];
      sum_b[i] += diag[r].b_hat[i];
      min_v = std::min(min_v, diag[r].v_hat[i]);
    }

  const double reps = static_cast<double>(cfg.replicates);
  Table summary({"dim", "mean_v_hat", "mean_excess_within", "expected", "mean_b_hat", "bias"});
  json per_dim = json::array();
  for (std::size_t i = 0; i < nd; ++i) {
    const std::size_t d = cfg.dims[i];
    const double mv = sum_v[i] / reps, ml = sum_l[i] / reps, mb = sum_b[i] / reps;
    const double expected = static_cast<double>(d) * ms.sigma * ms.sigma / static_cast<double>(ms.n);
    const double bias = problem.excess_risk(problem.best_in_model(d));
    summary.add(d, mv, ml, expected, mb, bias);
    per_dim.push_back({{"dim", d}, {"mean_v_hat", mv}, {"mean_excess_within", ml}, {"expected", expected}});
    const std::string tag = "_D=" + std::to_string(d);
    rec.checks.push_back(make_check("v_hat_rel_error" + tag, std::abs(mv / expected - 1.0), 0.0, 0.05));
    rec.checks.push_back(make_check("excess_within_rel_error" + tag, std::abs(ml / expected - 1.0), 0.0, 0.05));
    rec.checks.push_back(make_check("v_hat_vs_excess_within" + tag, std::abs(mv / ml - 1.0), 0.0, 0.03));
  }
  rec.checks.push_back(make_check("min_v_hat", min_v, -1e-12, std::numeric_limits<double>::infinity()));
  rec.curves.emplace_back("mallows_summary", std::move(summary));

  // Classification histograms: ratio reported, no tolerance asserted.
  const auto cproblem = cfg.classification.build();
  std::vector<std::size_t> cdims;
  for (std::size_t d : cfg.dims)
    if (d <= cproblem.size()) cdims.push_back(d);
  json class_json = json::array();
  if (!cdims.empty()) {
    std::vector<AkaikeDiagnostics> cdiag(cfg.replicates);
    parallel_for(cdiag.size(), cfg.workers, [&](std::size_t r) {
      CounterRng rng(cfg.seed, r, StreamRole::training);
      const auto train = cproblem.sample(cfg.n, rng);
      cdiag[r] = akaike_diagnostics(cproblem, train, cdims);
    });
    Table ctable({"dim", "mean_v_hat", "mean_excess_within", "ratio", "mean_b_hat", "bias"});
    double cmin_v = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cdims.size(); ++i) {
      double sv = 0.0, sl = 0.0, sb = 0.0;
      for (const auto& dg : cdiag) {
        sv += dg.v_hat[i];
        sl += dg.excess_within[i];
        sb += dg.b_hat[i];
        cmin_v = std::min(cmin_v, dg.v_hat[i]);
      }
      const auto part = Partition::contiguous(cproblem.size(), cdims[i]);
      const double bias = excess_risk_01(best_in_histogram_model(part, cproblem), cproblem);
      const double ratio = sl > 0.0 ? sv / sl : std::numeric_limits<double>::quiet_NaN();
      ctable.add(cdims[i], sv / reps, sl / reps, ratio, sb / reps, bias);
      class_json.push_back({{"dim", cdims[i]}, {"ratio", std::isfinite(ratio) ? json(ratio) : json(nullptr)}});
    }
    rec.checks.push_back(make_check("classification_min_v_hat", cmin_v, -1e-12,
                                    std::numeric_limits<double>::infinity()));
    rec.curves.emplace_back("classification_summary", std::move(ctable));
  }
  rec.aggregates = {{"mallows", per_dim}, {"classification", class_json}};
  return rec;
}

// ---------------------------------------------------------------------------
// segment: slope-calibrated change-point selection
// ---------------------------------------------------------------------------

inline RunRecord run_segment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& cs = cfg.changepoint;
  const auto problem = ChangepointProblem::equal_segments(cs.levels, cs.n, cs.sigma);
  const auto units = geometric_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.points);
  const auto dims = detail::one_to(cs.d_max);
  const std::size_t threshold = cfg.threshold_for(cs.d_max);
  const double n = static_cast<double>(cs.n);

  struct Replicate {
    DimensionJump jump;  // alphas in reference units
    std::size_t selected = 0;
    std::size_t selected_drop = 0;
    std::vector<std::size_t> path_dims;
    std::vector<double> rss;
    Segmentation chosen;
    std::vector<double> y;
  };
  std::vector<Replicate> reps(cfg.replicates);
  parallel_for(reps.size(), cfg.workers, [&](std::size_t r) {
    CounterRng rng(cfg.seed, r, StreamRole::noise);
    Replicate& rep = reps[r];
    rep.y = problem.sample(rng);
    const auto segs = dp_segment(rep.y, cs.d_max);
    std::vector<double> risks;
    for (const auto& s : segs) {
      rep.rss.push_back(s.rss);
      risks.push_back(s.rss / n);
    }
    // Reference scale: total empirical variance / n, so the grid is scale free.
    const double scale = risks[0] > 0.0 ? risks[0] / n : 1.0 / n;
    std::vector<double> grid(units);
    for (double& a : grid) a *= scale;
    const auto path = penalty_path(risks, dims, grid);
    rep.jump = dimension_jump(path, threshold);
    rep.path_dims = path.selected_dims;
    const std::size_t m = select_calibrated(risks, dims, calibrated_penalty(rep.jump.alpha_min));
    rep.selected = dims[m];
    rep.selected_drop = dims[select_calibrated(risks, dims, calibrated_penalty(rep.jump.drop_alpha))];
    rep.chosen = segs[m];
    rep.jump.alpha_min /= scale;
    rep.jump.drop_alpha /= scale;
    if (r != 0) rep.y.clear();
  });

  RunRecord rec;
  rec.config = cfg;
  rec.replicates = Table({"replicate", "jump_alpha", "drop_alpha", "status", "detectors_agree", "selected_segments",
                          "recovered", "selected_segments_drop"});
  std::size_t recovered = 0, recovered_drop = 0, disagreements = 0;
  std::vector<double> jumps;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    const auto& rep = reps[r];
    const bool ok = rep.selected == problem.segments();
    recovered += ok ? 1 : 0;
    recovered_drop += rep.selected_drop == problem.segments() ? 1 : 0;
    disagreements += rep.jump.detectors_agree ? 0 : 1;
    jumps.push_back(rep.jump.alpha_min);
    rec.replicates.add(r, rep.jump.alpha_min, rep.jump.drop_alpha, to_string(rep.jump.status),
                       rep.jump.detectors_agree, rep.selected, ok, rep.selected_drop);
  }
  const auto& first = reps.front();
  Table path0({"alpha", "selected_dim"});
  for (std::size_t k = 0; k < units.size(); ++k) path0.add(units[k], first.path_dims[k]);
  rec.curves.emplace_back("path_replicate0", std::move(path0));
  Table rss0({"segments", "rss"});
  for (std::size_t d = 0; d < first.rss.size(); ++d) rss0.add(d + 1, first.rss[d]);
  rec.curves.emplace_back("rss_replicate0", std::move(rss0));
  Table seg0({"segment", "end", "level"});
  for (std::size_t k = 0; k < first.chosen.segments(); ++k)
    seg0.add(k + 1, first.chosen.segment_ends[k], first.chosen.levels[k]);
  rec.curves.emplace_back("segmentation_replicate0", std::move(seg0));
  Table signal0({"index", "signal", "observed"});
  const auto truth = problem.signal();
  for (std::size_t i = 0; i < first.y.size(); ++i) signal0.add(i, truth[i], first.y[i]);
  rec.curves.emplace_back("signal_replicate0", std::move(signal0));

  const double reps_d = static_cast<double>(reps.size());
  const double rate = static_cast<double>(recovered) / reps_d;
  rec.aggregates = {{"true_segments", problem.segments()},
                    {"recovery_rate", rate},
                    {"recovery_rate_drop_detector", static_cast<double>(recovered_drop) / reps_d},
                    {"median_jump_alpha", stats::median(jumps)},
                    {"detector_disagreements", disagreements},
                    {"large_dim_threshold", threshold},
                    {"alpha_unit", "empirical variance/n"}};
  rec.checks.push_back(make_check("recovery_rate", rate, cfg.min_recovery, 1.0));
  return rec;
}

// Dispatches on the experiment kind and stamps the wall time.
inline RunRecord run(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  switch (cfg.kind) {
    case ExperimentKind::verify_tail: rec = run_verify_tail(cfg); break;
    case ExperimentKind::holdout_adapt: rec = run_holdout_adapt(cfg); break;
    case ExperimentKind::calibrate: rec = run_calibrate(cfg); break;
    case ExperimentKind::akaike_check: rec = run_akaike_check(cfg); break;
    case ExperimentKind::segment: rec = run_segment(cfg); break;
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace msel::harness
