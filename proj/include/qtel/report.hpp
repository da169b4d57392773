// report.hpp
// Run configuration (JSON in) and deterministic report generation (JSON or
// CSV out) for the command line front end. Key order and formatting are
// fixed so identical runs produce identical bytes.
#pragma once

#include "qtel/analytics.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace qtel {

struct SweepAxis {
  double min = 0.0;
  double max = 0.0;
  int steps = 1;

  bool operator==(const SweepAxis&) const = default;
};

// Grid over three channel coordinates: squared weights (xi, zeta, eta) or
// parameter moduli (|n|, |m|, |b|). Sweeps describe three-party channels.
struct SweepSpec {
  enum class Space { Weights, Moduli };
  Space space = Space::Weights;
  SweepAxis a1, a2, a3;

  bool operator==(const SweepSpec&) const = default;
};

struct RunConfig {
  ChannelConfig channel;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 12345;
  bool haar_input = true;
  Complex alpha{1.0, 0.0};  // used when haar_input is false
  Complex beta{0.0, 0.0};
  std::string output_format = "json";
  std::optional<SweepSpec> sweep;

  bool operator==(const RunConfig&) const = default;
};

// Parses and validates a config object. Unknown keys are rejected. The
// channel X weights come either as one "b" replicated across intermediates
// or an explicit "b_list"; complex values are a number or [re, im].
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

// Canonical echo of a config; parse_run_config(config_to_json(c)) == c.
nlohmann::ordered_json config_to_json(const RunConfig& cfg);

// Standard normal deviation of the empirical success count from the
// analytic probability; empty when the variance vanishes.
std::optional<double> success_z_score(double empirical, double analytic, std::uint64_t trials);

// Closed-form channel report: success probability two ways, per-branch
// table, region classification for canonical three-party weights.
nlohmann::ordered_json analyze_report(const RunConfig& cfg);

// Monte Carlo ensemble report with the analytic cross-check attached.
nlohmann::ordered_json simulate_report(const RunConfig& cfg, const EnsembleStats& stats);
std::string simulate_csv(const RunConfig& cfg, const EnsembleStats& stats);

// Grid scan over the sweep spec; one CSV row per grid point.
std::string sweep_csv(const RunConfig& cfg);

}  // namespace qtel
