// Command line front end: analyze, simulate, sweep, verify.
#include "qtel/report.hpp"
#include "qtel/verify.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

qtel::RunConfig load_or_default(const std::string& config_path) {
  if (config_path.empty()) return qtel::RunConfig{};
  return qtel::load_run_config(config_path);
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
  out << content;
  if (!out) throw std::invalid_argument("cannot write output file: " + out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probabilistic teleportation of an unknown qubit over a partially "
               "entangled multi-party channel"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::uint64_t> trials_override;
  std::optional<std::string> format_override;
  std::string scale = "quick";

  CLI::App* analyze = app.add_subcommand("analyze", "closed-form channel report, no randomness");
  analyze->add_option("--config", config_path, "JSON config file");
  analyze->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* simulate = app.add_subcommand("simulate", "seeded Monte Carlo ensemble");
  simulate->add_option("--config", config_path, "JSON config file");
  simulate->add_option("--seed", seed_override, "override the config seed");
  simulate->add_option("--trials", trials_override, "override the config trial count");
  simulate->add_option("--format", format_override, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  simulate->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* sweep = app.add_subcommand("sweep", "CSV grid scan over channel coordinates");
  sweep->add_option("--config", config_path, "JSON config file with a sweep spec")->required();
  sweep->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "randomized self-consistency checks");
  verify->add_option("--seed", seed_override, "seed for the randomized checks");
  verify->add_option("--scale", scale, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (analyze->parsed()) {
      const qtel::RunConfig cfg = load_or_default(config_path);
      write_output(out_path, qtel::analyze_report(cfg).dump(2));
      return 0;
    }
    if (simulate->parsed()) {
      qtel::RunConfig cfg = load_or_default(config_path);
      if (seed_override) cfg.seed = *seed_override;
      if (trials_override) {
        if (*trials_override < 1) throw std::invalid_argument("trials must be at least 1");
        cfg.trials = *trials_override;
      }
      if (format_override) cfg.output_format = *format_override;
      const qtel::InputPolicy policy =
          cfg.haar_input ? qtel::InputPolicy::haar()
                         : qtel::InputPolicy::fixed(qtel::make_ket(
                               std::vector<qtel::Complex>{cfg.alpha, cfg.beta}));
      const qtel::EnsembleStats stats =
          qtel::run_trials(cfg.channel, cfg.trials, policy, cfg.seed);
      if (cfg.output_format == "csv")
        write_output(out_path, qtel::simulate_csv(cfg, stats));
      else
        write_output(out_path, qtel::simulate_report(cfg, stats).dump(2));
      return 0;
    }
    if (sweep->parsed()) {
      const qtel::RunConfig cfg = load_or_default(config_path);
      write_output(out_path, qtel::sweep_csv(cfg));
      return 0;
    }
    if (verify->parsed()) {
      const std::uint64_t seed = seed_override.value_or(12345);
      const bool full = scale == "full";
      const qtel::VerificationReport report = qtel::run_verification(seed, full);
      write_output(out_path, qtel::format_verification(report, seed, full));
      return report.all_pass ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
