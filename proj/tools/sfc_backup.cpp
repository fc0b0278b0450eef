// Command-line driver: load an experiment config, apply overrides, run every
// (policy, seed) pair and write the per-slot trace plus a summary.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sfcbackup/harness.hpp"
#include "sfcbackup/oracle.hpp"

namespace {

using namespace sfcbackup;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> slots;
  std::optional<std::string> seed;
  std::optional<std::string> policy;
  bool regret = false;
  std::optional<double> capacity_scale;
  std::optional<std::size_t> users;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> learner_log;
  bool print_default_config = false;
  bool quiet = false;
};

OutputFormat resolve_format(const Options& opt) {
  std::optional<OutputFormat> from_flag;
  if (opt.format) {
    from_flag = *opt.format == "csv" ? OutputFormat::kCsv : OutputFormat::kJsonLines;
  }
  std::optional<OutputFormat> from_ext;
  if (opt.out) {
    const std::string ext = std::filesystem::path(*opt.out).extension().string();
    if (ext == ".csv") from_ext = OutputFormat::kCsv;
    if (ext == ".jsonl") from_ext = OutputFormat::kJsonLines;
  }
  if (from_flag && from_ext && *from_flag != *from_ext) {
    throw ConfigError("--format " + *opt.format + " conflicts with output file " + *opt.out);
  }
  return from_flag.value_or(from_ext.value_or(OutputFormat::kCsv));
}

void apply_overrides(ExperimentConfig& cfg, const Options& opt) {
  if (opt.slots) cfg.slots = *opt.slots;
  if (opt.seed) cfg.seeds = parse_seed_spec(*opt.seed);
  if (opt.policy) {
    if (*opt.policy == "all") {
      cfg.policies = {PolicyKind::kRtsd, PolicyKind::kBandit, PolicyKind::kRandom};
    } else {
      cfg.policies = {*parse_policy(*opt.policy)};
    }
  }
  if (opt.regret) cfg.regret = true;
  if (opt.capacity_scale) cfg.capacity_scale = *opt.capacity_scale;
  if (opt.users) cfg.set_users(*opt.users);
  cfg.validate();
}

void print_summary(const std::vector<RunTrace>& traces, bool regret) {
  std::fprintf(stderr, "%-8s %5s %14s %12s %14s %12s%s\n", "policy", "runs",
               "reward(mean)", "reward(sd)", "remaining", "deployed",
               regret ? "       regret" : "");
  for (const PolicySummary& s : summarize(traces)) {
    std::fprintf(stderr, "%-8s %5zu %14.4f %12.4f %14.4f %12.4f",
                 std::string(to_string(s.policy)).c_str(), s.runs, s.mean_reward,
                 s.std_reward, s.mean_remaining, s.mean_deployed);
    if (regret) std::fprintf(stderr, " %12.4f", s.mean_regret);
    std::fprintf(stderr, "\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online SFC backup selection and placement simulator"};
  Options opt;

  app.add_option("--config", opt.config_path, "Experiment config (JSON)");
  app.add_option("--slots", opt.slots, "Number of decision slots T")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "Seed or inclusive range, e.g. 7 or 1..30");
  app.add_option("--policy", opt.policy, "rtsd | bandit | random | all")
      ->check(CLI::IsMember({"rtsd", "bandit", "random", "all"}));
  app.add_flag("--regret", opt.regret, "Add oracle_value and regret columns");
  app.add_option("--capacity-scale", opt.capacity_scale,
                 "Multiply every server capacity, then floor")
      ->check(CLI::PositiveNumber);
  app.add_option("--users", opt.users, "Override the user count K")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", opt.out,
                 "Output file, or directory (existing or ending in '/'); "
                 "stdout when omitted");
  app.add_option("--format", opt.format, "csv | jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_option("--learner-log", opt.learner_log,
                 "Write per-slot learner state (JSON lines) to this file");
  app.add_flag("--print-default-config", opt.print_default_config,
               "Print the bundled reference config and exit");
  app.add_flag("-q,--quiet", opt.quiet, "Do not print the summary table");

  CLI11_PARSE(app, argc, argv);

  if (opt.print_default_config) {
    std::cout << canonical_config_json();
    return 0;
  }
  if (opt.config_path.empty()) {
    std::cerr << "error: --config is required\n" << app.help();
    return 2;
  }

  try {
    ExperimentConfig cfg = load_config(opt.config_path);
    apply_overrides(cfg, opt);
    const OutputFormat format = resolve_format(opt);

    std::ofstream learner_log;
    SlotObserver observer;
    if (opt.learner_log) {
      learner_log.open(*opt.learner_log, std::ios::binary | std::ios::trunc);
      if (!learner_log) throw std::runtime_error("cannot open '" + *opt.learner_log + "'");
      observer = [&](const SlotEvent& e) { learner_log << learner_state_jsonl(e); };
    }
    const auto traces = run(cfg, observer);
    if (learner_log.is_open() && !learner_log.flush()) {
      throw std::runtime_error("write to '" + *opt.learner_log + "' failed");
    }
    if (opt.out) {
      for (const auto& path : emit(traces, *opt.out, format)) {
        if (!opt.quiet) std::cerr << "wrote " << path.string() << "\n";
      }
    } else if (format == OutputFormat::kCsv) {
      write_csv(std::cout, traces);
    } else {
      write_jsonl(std::cout, traces);
    }
    if (!opt.quiet) print_summary(traces, cfg.regret);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SearchSpaceTooLarge& e) {
    std::cerr << "error: regret oracle refused this instance: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
