#include "qtel/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qtel {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Complex parse_complex(const json& j, const std::string& what) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw std::invalid_argument("config: " + what + " must be a number or [re, im]");
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

std::uint64_t parse_u64(const json& j, const std::string& what) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw std::invalid_argument("config: " + what + " must be a nonnegative integer");
}

SweepAxis parse_axis(const json& j, const std::string& what) {
  SweepAxis ax;
  if (j.is_number()) {
    ax.min = ax.max = j.get<double>();
    ax.steps = 1;
  } else if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (key == "min") ax.min = value.get<double>();
      else if (key == "max") ax.max = value.get<double>();
      else if (key == "steps") ax.steps = value.get<int>();
      else throw std::invalid_argument("config: unrecognized key '" + key + "' in " + what);
    }
    if (!j.contains("min")) throw std::invalid_argument("config: " + what + " needs 'min'");
    if (!j.contains("max")) ax.max = ax.min;
    if (!j.contains("steps")) ax.steps = 1;
  } else {
    throw std::invalid_argument("config: " + what + " must be a number or {min, max, steps}");
  }
  if (!std::isfinite(ax.min) || !std::isfinite(ax.max))
    throw std::invalid_argument("config: " + what + " bounds must be finite");
  if (ax.steps < 1) throw std::invalid_argument("config: " + what + " needs steps >= 1");
  if (ax.steps == 1 && ax.min != ax.max)
    throw std::invalid_argument("config: " + what + " with one step needs min == max");
  if (ax.max < ax.min) throw std::invalid_argument("config: " + what + " needs max >= min");
  return ax;
}

json axis_to_json(const SweepAxis& ax) {
  return json{{"min", ax.min}, {"max", ax.max}, {"steps", ax.steps}};
}

SweepSpec parse_sweep(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: sweep must be an object");
  SweepSpec sweep;
  if (!j.contains("space")) throw std::invalid_argument("config: sweep needs 'space'");
  const std::string space = j.at("space").get<std::string>();
  const bool weights = space == "weights";
  if (!weights && space != "moduli")
    throw std::invalid_argument("config: sweep space must be 'weights' or 'moduli'");
  sweep.space = weights ? SweepSpec::Space::Weights : SweepSpec::Space::Moduli;

  const std::array<std::string, 3> keys =
      weights ? std::array<std::string, 3>{"xi", "zeta", "eta"}
              : std::array<std::string, 3>{"n", "m", "b"};
  for (const auto& [key, value] : j.items()) {
    if (key == "space") continue;
    if (key != keys[0] && key != keys[1] && key != keys[2])
      throw std::invalid_argument("config: unrecognized key '" + key + "' in sweep");
  }
  SweepAxis* axes[3] = {&sweep.a1, &sweep.a2, &sweep.a3};
  for (int i = 0; i < 3; ++i) {
    if (!j.contains(keys[i]))
      throw std::invalid_argument("config: sweep needs axis '" + keys[i] + "'");
    *axes[i] = parse_axis(j.at(keys[i]), "sweep axis '" + keys[i] + "'");
    const double hi = weights ? 1.0 : 1e6;
    if (axes[i]->min < 0.0 || axes[i]->max > hi)
      throw std::invalid_argument("config: sweep axis '" + keys[i] + "' out of range");
  }
  return sweep;
}

json sweep_to_json(const SweepSpec& sweep) {
  const bool weights = sweep.space == SweepSpec::Space::Weights;
  ordered_json j;
  j["space"] = weights ? "weights" : "moduli";
  const std::array<std::string, 3> keys =
      weights ? std::array<std::string, 3>{"xi", "zeta", "eta"}
              : std::array<std::string, 3>{"n", "m", "b"};
  const SweepAxis* axes[3] = {&sweep.a1, &sweep.a2, &sweep.a3};
  for (int i = 0; i < 3; ++i) j[keys[i]] = axis_to_json(*axes[i]);
  return j;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_complex_token(Complex z) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

// Region block shared by analyze and simulate reports; null for channels
// whose weights leave the open cube (classification undefined there).
ordered_json region_block(const ChannelConfig& channel, std::vector<std::string>& warnings) {
  const SquaredWeights w =
      weights_from_moduli(channel.n, channel.m, channel.b_list.at(0));
  const SquaredWeights canon = canonicalize(w);
  ordered_json j;
  j["weights"] = {{"xi", w.xi}, {"zeta", w.zeta}, {"eta", w.eta}};
  j["canonical"] = {{"xi", canon.xi}, {"zeta", canon.zeta}, {"eta", canon.eta}};
  if (!is_canonical(canon)) {
    warnings.push_back(
        "degenerate channel: weights sit on the domain boundary; region analysis skipped");
    j["label"] = nullptr;
    return j;
  }
  const Region reg = classify_region(canon);
  j["label"] = to_string(reg.label);
  j["matches"] = matches_string(reg);
  j["tight"] = {{"t1", reg.tight_t1}, {"t2", reg.tight_t2}, {"t3", reg.tight_t3}};
  j["regional_p"] = regional_formula(reg, canon);
  j["p_max"] = max_success_probability(canon.xi);
  return j;
}

// General-L prefactor N^2 M^2 prod a_i^2 for the per-branch table.
double channel_prefactor(const ChannelConfig& cfg) {
  double pref = 1.0 / ((1.0 + std::norm(cfg.n)) * (1.0 + std::norm(cfg.m)));
  for (const Complex& b : cfg.b_list) pref /= 1.0 + std::norm(b);
  return pref;
}

ordered_json branch_table(const ChannelConfig& cfg) {
  const double pref = channel_prefactor(cfg);
  const std::vector<double> products = lparty_branch_products(cfg);
  ordered_json rows = ordered_json::array();
  const int n_int = cfg.num_intermediates();
  for (std::size_t idx = 0; idx < products.size(); ++idx) {
    const auto bell = static_cast<BellOutcome>(idx >> n_int);
    std::vector<XOutcome> xs;
    for (int i = n_int - 1; i >= 0; --i)
      xs.push_back(static_cast<XOutcome>((idx >> i) & 1));
    const BranchCorrection bc = branch_coefficients(bell, xs, cfg);
    const double c2 = std::norm(bc.coeff.c);
    const double d2 = std::norm(bc.coeff.d);
    const double mean_weight = (c2 + d2) / 2.0;
    ordered_json row;
    row["label"] = branch_label(bell, xs);
    row["pauli"] = to_string(bc.pauli);
    row["c"] = complex_to_json(bc.coeff.c);
    row["d"] = complex_to_json(bc.coeff.d);
    row["joint"] = pref * mean_weight;
    row["conversion"] = mean_weight > 0.0 ? std::min(c2, d2) / mean_weight : 0.0;
    row["product"] = products[idx];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  RunConfig cfg;
  cfg.channel.b_list.clear();

  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "L" && key != "n" && key != "m" && key != "b" && key != "b_list" &&
        key != "trials" && key != "seed" && key != "input" && key != "output_format" &&
        key != "sweep")
      throw std::invalid_argument("config: unrecognized key '" + key + "'");
  }

  int num_parties = 3;
  if (j.contains("L")) {
    if (!j.at("L").is_number_integer())
      throw std::invalid_argument("config: L must be an integer");
    num_parties = j.at("L").get<int>();
    if (num_parties < 2) throw std::invalid_argument("config: L must be at least 2");
    if (num_parties > 10)
      throw std::invalid_argument("config: L above 10 is outside the supported range");
  }
  cfg.channel.num_parties = num_parties;

  cfg.channel.n = j.contains("n") ? parse_complex(j.at("n"), "n") : Complex(1.0, 0.0);
  cfg.channel.m = j.contains("m") ? parse_complex(j.at("m"), "m") : Complex(1.0, 0.0);

  if (j.contains("b") && j.contains("b_list"))
    throw std::invalid_argument("config: give either 'b' or 'b_list', not both");
  if (j.contains("b_list")) {
    if (!j.at("b_list").is_array())
      throw std::invalid_argument("config: b_list must be an array");
    for (const auto& item : j.at("b_list"))
      cfg.channel.b_list.push_back(parse_complex(item, "b_list entry"));
  } else {
    const Complex b = j.contains("b") ? parse_complex(j.at("b"), "b") : Complex(1.0, 0.0);
    cfg.channel.b_list.assign(static_cast<std::size_t>(num_parties - 2), b);
  }
  cfg.channel.validate();

  if (j.contains("trials")) {
    cfg.trials = parse_u64(j.at("trials"), "trials");
    if (cfg.trials < 1) throw std::invalid_argument("config: trials must be at least 1");
  }
  if (j.contains("seed")) cfg.seed = parse_u64(j.at("seed"), "seed");

  if (j.contains("input")) {
    const json& in = j.at("input");
    if (in.is_string()) {
      if (in.get<std::string>() != "haar")
        throw std::invalid_argument("config: input must be \"haar\" or [alpha, beta]");
      cfg.haar_input = true;
    } else if (in.is_array() && in.size() == 2) {
      cfg.haar_input = false;
      cfg.alpha = parse_complex(in[0], "input alpha");
      cfg.beta = parse_complex(in[1], "input beta");
      const double nrm2 = std::norm(cfg.alpha) + std::norm(cfg.beta);
      if (!std::isfinite(nrm2) || !(nrm2 > 0.0))
        throw std::invalid_argument("config: input state must be nonzero and finite");
      const double nrm = std::sqrt(nrm2);
      cfg.alpha /= nrm;
      cfg.beta /= nrm;
    } else {
      throw std::invalid_argument("config: input must be \"haar\" or [alpha, beta]");
    }
  }

  if (j.contains("output_format")) {
    cfg.output_format = j.at("output_format").get<std::string>();
    if (cfg.output_format != "json" && cfg.output_format != "csv")
      throw std::invalid_argument("config: output_format must be 'json' or 'csv'");
  }

  if (j.contains("sweep")) cfg.sweep = parse_sweep(j.at("sweep"));
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config file " + path + " is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

ordered_json config_to_json(const RunConfig& cfg) {
  ordered_json j;
  j["L"] = cfg.channel.num_parties;
  j["n"] = complex_to_json(cfg.channel.n);
  j["m"] = complex_to_json(cfg.channel.m);
  json blist = json::array();
  for (const Complex& b : cfg.channel.b_list) blist.push_back(complex_to_json(b));
  j["b_list"] = blist;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  if (cfg.haar_input)
    j["input"] = "haar";
  else
    j["input"] = json::array({complex_to_json(cfg.alpha), complex_to_json(cfg.beta)});
  j["output_format"] = cfg.output_format;
  if (cfg.sweep) j["sweep"] = sweep_to_json(*cfg.sweep);
  return j;
}

std::optional<double> success_z_score(double empirical, double analytic, std::uint64_t trials) {
  const double variance = analytic * (1.0 - analytic) / static_cast<double>(trials);
  if (!(variance > 0.0)) return std::nullopt;
  return (empirical - analytic) / std::sqrt(variance);
}

ordered_json analyze_report(const RunConfig& cfg) {
  cfg.channel.validate();
  const ChannelConfig& ch = cfg.channel;
  std::vector<std::string> warnings;

  ordered_json j;
  j["config"] = config_to_json(cfg);
  const double oracle = lparty_success_oracle(ch);
  if (ch.num_parties == 3) {
    j["analytic_p"] = success_probability(ch.n, ch.m, ch.b_list.at(0));
    j["analytic_p_weights_form"] =
        success_probability_weights(weights_from_moduli(ch.n, ch.m, ch.b_list.at(0)));
  } else {
    j["analytic_p"] = oracle;
  }
  j["oracle_p"] = oracle;
  j["branches"] = branch_table(ch);
  if (ch.num_parties == 3)
    j["region"] = region_block(ch, warnings);
  else
    j["region"] = nullptr;
  j["warnings"] = warnings;
  return j;
}

ordered_json simulate_report(const RunConfig& cfg, const EnsembleStats& stats) {
  const ChannelConfig& ch = cfg.channel;
  std::vector<std::string> warnings;

  const double analytic = ch.num_parties == 3
                              ? success_probability(ch.n, ch.m, ch.b_list.at(0))
                              : lparty_success_oracle(ch);
  const std::optional<double> z = success_z_score(stats.empirical_p, analytic, stats.trials);
  const bool suspicious = z && std::abs(*z) > 4.0;
  if (suspicious)
    warnings.push_back("empirical success rate deviates from the analytic value by more than "
                       "4 standard deviations");

  ordered_json j;
  j["config"] = config_to_json(cfg);
  ordered_json res;
  res["trials"] = stats.trials;
  res["successes"] = stats.successes;
  res["empirical_p"] = stats.empirical_p;
  res["analytic_p"] = analytic;
  if (z)
    res["z_score"] = *z;
  else
    res["z_score"] = nullptr;
  res["suspicious"] = suspicious;
  res["mean_success_fidelity"] = stats.mean_success_fidelity;
  res["min_success_fidelity"] = stats.min_success_fidelity;
  j["results"] = res;

  const std::vector<double> products = lparty_branch_products(ch);
  ordered_json rows = ordered_json::array();
  const int n_int = ch.num_intermediates();
  for (std::size_t idx = 0; idx < products.size(); ++idx) {
    const auto bell = static_cast<BellOutcome>(idx >> n_int);
    std::vector<XOutcome> xs;
    for (int i = n_int - 1; i >= 0; --i)
      xs.push_back(static_cast<XOutcome>((idx >> i) & 1));
    ordered_json row;
    row["label"] = branch_label(bell, xs);
    row["count"] = stats.branch_counts.at(idx);
    row["empirical"] =
        static_cast<double>(stats.branch_counts.at(idx)) / static_cast<double>(stats.trials);
    row["success_term"] = products[idx];
    rows.push_back(std::move(row));
  }
  j["branches"] = rows;

  if (ch.num_parties == 3)
    j["region"] = region_block(ch, warnings);
  else
    j["region"] = nullptr;
  j["warnings"] = warnings;
  return j;
}

std::string simulate_csv(const RunConfig& cfg, const EnsembleStats& stats) {
  const ChannelConfig& ch = cfg.channel;
  const double analytic = ch.num_parties == 3
                              ? success_probability(ch.n, ch.m, ch.b_list.at(0))
                              : lparty_success_oracle(ch);
  const std::optional<double> z = success_z_score(stats.empirical_p, analytic, stats.trials);

  std::ostringstream out;
  out << "L,trials,seed,input,n,m,b_list,successes,empirical_p,analytic_p,z_score,"
         "suspicious,mean_success_fidelity,min_success_fidelity,branch_counts\n";
  out << ch.num_parties << ',' << stats.trials << ',' << cfg.seed << ',';
  if (cfg.haar_input)
    out << "haar";
  else
    out << format_complex_token(cfg.alpha) << ';' << format_complex_token(cfg.beta);
  out << ',' << format_complex_token(ch.n) << ',' << format_complex_token(ch.m) << ',';
  for (std::size_t i = 0; i < ch.b_list.size(); ++i)
    out << (i ? ";" : "") << format_complex_token(ch.b_list[i]);
  out << ',' << stats.successes << ',' << format_double(stats.empirical_p) << ','
      << format_double(analytic) << ',';
  if (z) out << format_double(*z);
  out << ',' << (z && std::abs(*z) > 4.0 ? "true" : "false") << ','
      << format_double(stats.mean_success_fidelity) << ','
      << format_double(stats.min_success_fidelity) << ',';
  for (std::size_t i = 0; i < stats.branch_counts.size(); ++i)
    out << (i ? ";" : "") << stats.branch_counts[i];
  out << '\n';
  return out.str();
}

std::string sweep_csv(const RunConfig& cfg) {
  if (!cfg.sweep) throw std::invalid_argument("sweep: config has no sweep spec");
  const SweepSpec& sw = *cfg.sweep;
  const bool weights = sw.space == SweepSpec::Space::Weights;

  const auto axis_value = [](const SweepAxis& ax, int i) {
    if (ax.steps == 1) return ax.min;
    return ax.min + (ax.max - ax.min) * static_cast<double>(i) /
                        static_cast<double>(ax.steps - 1);
  };

  std::ostringstream out;
  if (weights)
    out << "xi,zeta,eta,p,p_max,region,matches\n";
  else
    out << "abs_n,abs_m,abs_b,xi,zeta,eta,p,p_max,region,matches\n";

  for (int i1 = 0; i1 < sw.a1.steps; ++i1)
    for (int i2 = 0; i2 < sw.a2.steps; ++i2)
      for (int i3 = 0; i3 < sw.a3.steps; ++i3) {
        const double v1 = axis_value(sw.a1, i1);
        const double v2 = axis_value(sw.a2, i2);
        const double v3 = axis_value(sw.a3, i3);
        SquaredWeights w;
        double p = 0.0;
        if (weights) {
          w = {v1, v2, v3};
          p = success_probability_weights(w);
          out << format_double(v1) << ',' << format_double(v2) << ',' << format_double(v3);
        } else {
          const Complex n(v1, 0.0), m(v2, 0.0), b(v3, 0.0);
          w = weights_from_moduli(n, m, b);
          p = success_probability(n, m, b);
          out << format_double(v1) << ',' << format_double(v2) << ',' << format_double(v3)
              << ',' << format_double(w.xi) << ',' << format_double(w.zeta) << ','
              << format_double(w.eta);
        }
        const SquaredWeights canon = canonicalize(w);
        out << ',' << format_double(p) << ','
            << format_double(2.0 * std::min(w.xi, 1.0 - w.xi)) << ',';
        if (is_canonical(canon)) {
          const Region reg = classify_region(canon);
          out << to_string(reg.label) << ',' << matches_string(reg);
        } else {
          out << "-,-";
        }
        out << '\n';
      }
  return out.str();
}

}  // namespace qtel
