#include "qtel/verify.hpp"

#include "qtel/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace qtel {

namespace {

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Complex random_param(TrialRng& rng, double lo = 1e-3, double hi = 1e3) {
  const double modulus = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * rng.uniform());
  const double phase = 2.0 * std::numbers::pi * rng.uniform();
  return std::polar(modulus, phase);
}

SquaredWeights random_canonical(TrialRng& rng) {
  SquaredWeights w{rng.uniform(), rng.uniform(), rng.uniform()};
  w = canonicalize(w);
  // interior almost surely; nudge the measure-zero boundary draws
  if (!is_canonical(w)) w = canonicalize({0.3, 0.2, 0.4});
  return w;
}

CheckResult check_basis_orthonormality(TrialRng& rng, int count) {
  double max_dev = 0.0;
  for (int i = 0; i < count; ++i) {
    const BellBasis bb = bell_basis(random_param(rng));
    const XBasis xb = x_basis(random_param(rng));
    for (const auto* basis : {&bb.basis, &xb.basis})
      for (std::size_t a = 0; a < basis->size(); ++a)
        for (std::size_t b = a; b < basis->size(); ++b) {
          const Complex g = basis->vector(a).amplitudes().dot(basis->vector(b).amplitudes());
          max_dev = std::max(max_dev, std::abs(g - (a == b ? Complex(1.0) : Complex(0.0))));
        }
  }
  return {"basis orthonormality",
          max_dev <= 1e-12,
          "max Gram deviation " + format_g(max_dev) + " over " + std::to_string(count) +
              " random Bell/X bases"};
}

CheckResult check_conversion_unitarity(TrialRng& rng, int count) {
  double max_dev = 0.0;
  for (int i = 0; i < count; ++i) {
    const double abs_c = std::abs(random_param(rng));
    const double abs_d = std::abs(random_param(rng));
    const UnitaryMatrix u = conversion_unitary(abs_c, abs_d);
    const double dev = (u.entries().adjoint() * u.entries() - Eigen::Matrix4cd::Identity())
                           .cwiseAbs()
                           .maxCoeff();
    max_dev = std::max(max_dev, dev);
  }
  return {"conversion unitarity",
          max_dev <= 1e-12,
          "max deviation from identity " + format_g(max_dev) + " over " +
              std::to_string(count) + " coefficient pairs"};
}

CheckResult check_input_independence(TrialRng& rng, int configs, int inputs) {
  double max_spread = 0.0;
  for (int i = 0; i < configs; ++i) {
    const Complex n = random_param(rng, 0.1, 10.0);
    const Complex m = random_param(rng, 0.1, 10.0);
    const Complex b = random_param(rng, 0.1, 10.0);
    std::array<double, 8> lo{}, hi{};
    lo.fill(1.0);
    hi.fill(0.0);
    for (int k = 0; k < inputs; ++k) {
      const Ket in = haar_random_qubit(rng);
      const auto profile = branch_profile(n, m, b, in.amplitude(0), in.amplitude(1));
      for (std::size_t br = 0; br < 8; ++br) {
        const double prod = profile[br].joint_probability * profile[br].conversion_probability;
        lo[br] = std::min(lo[br], prod);
        hi[br] = std::max(hi[br], prod);
      }
    }
    for (std::size_t br = 0; br < 8; ++br) max_spread = std::max(max_spread, hi[br] - lo[br]);
  }
  return {"branch yield input independence",
          max_spread <= 1e-10,
          "max per-branch spread " + format_g(max_spread) + " over " + std::to_string(configs) +
              " channels x " + std::to_string(inputs) + " inputs"};
}

CheckResult check_oracle_agreement(TrialRng& rng, int configs) {
  double max_diff = 0.0;
  for (int i = 0; i < configs; ++i) {
    const Complex n = random_param(rng);
    const Complex m = random_param(rng);
    const Complex b = random_param(rng);
    const double p_moduli = success_probability(n, m, b);
    const double p_weights = success_probability_weights(weights_from_moduli(n, m, b));
    const double p_oracle = lparty_success_oracle(ChannelConfig::three_party(n, m, b));
    double p_branches = 0.0;
    for (const BranchRecord& rec : branch_profile(n, m, b))
      p_branches += rec.joint_times_conversion;
    max_diff = std::max({max_diff, std::abs(p_moduli - p_weights),
                         std::abs(p_moduli - p_oracle), std::abs(p_moduli - p_branches)});
  }
  return {"success probability oracle agreement",
          max_diff <= 1e-10,
          "max disagreement " + format_g(max_diff) + " across 4 routes, " +
              std::to_string(configs) + " channels"};
}

CheckResult check_monte_carlo(TrialRng& rng, int configs, std::uint64_t trials) {
  double max_z = 0.0;
  for (int i = 0; i < configs; ++i) {
    const Complex n = random_param(rng, 1.0 / 3.0, 3.0);
    const Complex m = random_param(rng, 1.0 / 3.0, 3.0);
    const Complex b = random_param(rng, 1.0 / 3.0, 3.0);
    const ChannelConfig cfg = ChannelConfig::three_party(n, m, b);
    const double analytic = success_probability(n, m, b);
    const EnsembleStats stats = run_trials(cfg, trials, InputPolicy::haar(), rng.raw());
    const double variance = analytic * (1.0 - analytic) / static_cast<double>(trials);
    if (variance > 0.0) {
      max_z = std::max(max_z, std::abs(stats.empirical_p - analytic) / std::sqrt(variance));
    } else if (stats.empirical_p != analytic) {
      max_z = std::numeric_limits<double>::infinity();
    }
  }
  return {"monte carlo agreement",
          max_z <= 3.0,
          "max |z| " + format_g(max_z) + " over " + std::to_string(configs) + " channels x " +
              std::to_string(trials) + " trials"};
}

CheckResult check_region_coverage(TrialRng& rng, int triples) {
  double max_diff = 0.0;
  int max_matches = 0;
  for (int i = 0; i < triples; ++i) {
    const SquaredWeights w = random_canonical(rng);
    const Region reg = classify_region(w);
    if (reg.match_count() == 0)
      return {"region coverage", false, "canonical point matched no region"};
    max_matches = std::max(max_matches, reg.match_count());
    const double diff =
        std::abs(regional_formula(reg, w) - success_probability_weights(w));
    max_diff = std::max(max_diff, diff);
  }
  return {"region coverage and formula agreement",
          max_diff <= 1e-12,
          "max |regional - direct| " + format_g(max_diff) + " over " + std::to_string(triples) +
              " canonical triples (max simultaneous matches " + std::to_string(max_matches) +
              ")"};
}

CheckResult check_excluded_systems(TrialRng& rng, int triples) {
  // The three comparisons t1, t2, t3 with both strict orientations give
  // eight sign patterns; these pairs are infeasible on the canonical domain.
  int violations = 0;
  for (int i = 0; i < triples; ++i) {
    const SquaredWeights w = random_canonical(rng);
    const double xi = w.xi, zeta = w.zeta, eta = w.eta;
    const double xic = 1.0 - xi, zetac = 1.0 - zeta, etac = 1.0 - eta;
    const bool t1_gt = xi * zeta * etac > xic * zetac * eta;
    const bool t2_gt = xi * zetac * eta > xic * zeta * etac;
    const bool t2_lt = xi * zetac * eta < xic * zeta * etac;
    const bool t3_gt = xic * zeta * eta > xi * zetac * etac;
    if ((t1_gt && t2_gt) || (t2_gt && t3_gt) || (t1_gt && t2_lt)) ++violations;
  }
  return {"excluded inequality systems",
          violations == 0,
          std::to_string(violations) + " violations over " + std::to_string(triples) +
              " canonical triples"};
}

CheckResult check_grid_maximum(const std::vector<double>& xis, int resolution) {
  double max_excess = 0.0;
  double max_gap = 0.0;
  bool plateau_region = true;
  for (double xi : xis) {
    const GridSearchResult gs = grid_search_max(xi, resolution);
    const double bound = max_success_probability(xi);
    max_excess = std::max(max_excess, gs.p_star - bound);
    max_gap = std::max(max_gap, bound - gs.p_star);
    plateau_region = plateau_region && gs.region.matches_f;
  }
  return {"grid maximum vs closed form",
          max_excess <= 1e-12 && max_gap <= 1e-2 && plateau_region,
          "max excess " + format_g(max_excess) + ", max gap " + format_g(max_gap) +
              ", argmax always in the plateau region, resolution " +
              std::to_string(resolution)};
}

}  // namespace

VerificationReport run_verification(std::uint64_t seed, bool full_scale) {
  TrialRng rng(seed);
  const int bases = full_scale ? 2000 : 300;
  const int unitaries = full_scale ? 2000 : 300;
  const int indep_configs = full_scale ? 50 : 10;
  const int indep_inputs = full_scale ? 100 : 30;
  const int oracle_configs = full_scale ? 500 : 100;
  const int mc_configs = full_scale ? 6 : 3;
  const std::uint64_t mc_trials = full_scale ? 100000 : 20000;
  const int triples = full_scale ? 100000 : 20000;
  const int grid_res = full_scale ? 200 : 100;
  const std::vector<double> grid_xis =
      full_scale ? std::vector<double>{0.05, 0.1, 0.2, 0.3, 0.4, 0.5}
                 : std::vector<double>{0.2, 0.5};

  VerificationReport report;
  report.checks.push_back(check_basis_orthonormality(rng, bases));
  report.checks.push_back(check_conversion_unitarity(rng, unitaries));
  report.checks.push_back(check_input_independence(rng, indep_configs, indep_inputs));
  report.checks.push_back(check_oracle_agreement(rng, oracle_configs));
  report.checks.push_back(check_monte_carlo(rng, mc_configs, mc_trials));
  report.checks.push_back(check_region_coverage(rng, triples));
  report.checks.push_back(check_excluded_systems(rng, triples));
  report.checks.push_back(check_grid_maximum(grid_xis, grid_res));
  report.all_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const CheckResult& c) { return c.pass; });
  return report;
}

std::string format_verification(const VerificationReport& report, std::uint64_t seed,
                                bool full_scale) {
  std::ostringstream out;
  out << "verification  seed=" << seed << "  scale=" << (full_scale ? "full" : "quick") << "\n";
  std::size_t width = 0;
  for (const CheckResult& c : report.checks) width = std::max(width, c.name.size());
  int passed = 0;
  for (const CheckResult& c : report.checks) {
    out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
        << std::string(width - c.name.size() + 2, ' ') << c.detail << "\n";
    if (c.pass) ++passed;
  }
  out << passed << "/" << report.checks.size() << " checks passed\n";
  return out.str();
}

}  // namespace qtel
