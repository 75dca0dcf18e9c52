// Command-line driver: one subcommand per experiment kind, plus `report`.
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure,
// 3 acceptance-check failure (only with --assert).

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "msel/harness/config.hpp"
#include "msel/harness/experiments.hpp"
#include "msel/harness/report.hpp"
#include "msel/version.hpp"

namespace {

enum ExitCode : int { ok = 0, validation = 1, runtime = 2, check_failed = 3 };

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
  bool assert_checks = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON experiment config (defaults apply when omitted)");
  cmd->add_option("--seed", f.seed, "Master seed (u64)");
  cmd->add_option("--replicates", f.replicates, "Monte Carlo replicates");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--workers", f.workers, "Worker threads (0 = one per processor)");
  cmd->add_flag("--assert", f.assert_checks, "Exit with code 3 when any check fails");
}

msel::harness::ExperimentConfig resolve(msel::harness::ExperimentKind kind, const CommonFlags& f) {
  using namespace msel::harness;
  ExperimentConfig cfg = ExperimentConfig::defaults(kind);
  cfg.out = std::string("out/") + to_string(kind);
  if (!f.config_path.empty()) {
    cfg = load_config(f.config_path);
    if (cfg.kind != kind)
      throw ValidationError({std::string("kind: config declares '") + to_string(cfg.kind) + "' but subcommand is '" +
                             to_string(kind) + "'"});
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.replicates) cfg.replicates = *f.replicates;
  if (f.out) cfg.out = *f.out;
  if (f.workers) cfg.workers = *f.workers;
  cfg.validate();
  return cfg;
}

int run_experiment(msel::harness::ExperimentKind kind, const CommonFlags& flags) {
  using namespace msel::harness;
  const ExperimentConfig cfg = resolve(kind, flags);
  const RunRecord rec = run(cfg);
  rec.write(cfg.out);

  std::cout << to_string(kind) << ": " << cfg.replicates << " replicates, seed " << cfg.seed << ", "
            << format_number(rec.seconds) << " s -> " << cfg.out << "\n";
  std::cout << rec.aggregates.dump(2) << "\n";
  for (const auto& c : rec.checks)
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " = " << format_number(c.value) << " in ["
              << format_number(c.lower) << ", " << format_number(c.upper) << "]\n";
  if (flags.assert_checks && !rec.all_checks_pass()) return check_failed;
  return ok;
}

int run_report(const std::vector<std::string>& paths, const std::string& out) {
  using namespace msel::harness;
  std::vector<LoadedRecord> records;
  for (const auto& p : paths) records.push_back(load_record(p));
  const Table table = report(records);
  std::cout << table.to_csv();
  if (!out.empty()) {
    std::filesystem::path target(out);
    if (std::filesystem::is_directory(target)) target /= "report.csv";
    table.write_csv(target);
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  using msel::harness::ExperimentKind;
  CLI::App app{"Hold-out selection and penalty calibration experiments"};
  app.set_version_flag("--version", MSEL_VERSION);
  app.require_subcommand(1);

  struct Entry {
    ExperimentKind kind;
    const char* name;
    const char* help;
  };
  const std::vector<Entry> entries = {
      {ExperimentKind::verify_tail, "verify-tail", "Monte Carlo check of the hold-out selection tail bound"},
      {ExperimentKind::holdout_adapt, "holdout-adapt", "Hold-out excess risk across sample sizes"},
      {ExperimentKind::calibrate, "calibrate", "Dimension jump and doubling rule on nested Gaussian models"},
      {ExperimentKind::akaike_check, "akaike-check", "Compare E[v_hat] with E[L(ghat_m, g_m)]"},
      {ExperimentKind::segment, "segment", "Slope-calibrated change-point selection"},
  };
  std::vector<CommonFlags> flags(entries.size());
  std::vector<CLI::App*> commands;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    commands.push_back(app.add_subcommand(entries[i].name, entries[i].help));
    add_common(commands.back(), flags[i]);
  }
  std::vector<std::string> report_paths;
  std::string report_out;
  auto* report_cmd = app.add_subcommand("report", "Merge run records of one kind into a table");
  report_cmd->add_option("records", report_paths, "record.json files or run directories")->required();
  report_cmd->add_option("--out", report_out, "CSV file or directory for the merged table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : validation;
  }

  try {
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (commands[i]->parsed()) return run_experiment(entries[i].kind, flags[i]);
    if (report_cmd->parsed()) return run_report(report_paths, report_out);
  } catch (const msel::harness::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return validation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return validation;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return runtime;
  }
  return runtime;
}
