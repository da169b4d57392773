#include "qtel/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace qtel {

namespace {

// The three comparisons that carve the canonical domain, as (lhs, rhs) pairs:
//   t1: xi zeta eta'  vs  xi' zeta' eta
//   t2: xi zeta' eta  vs  xi' zeta eta'
//   t3: xi' zeta eta  vs  xi zeta' eta'
struct Comparisons {
  double t1l, t1r, t2l, t2r, t3l, t3r;
};

Comparisons comparisons(const SquaredWeights& w) {
  const double xi = w.xi, zeta = w.zeta, eta = w.eta;
  const double xic = 1.0 - xi, zetac = 1.0 - zeta, etac = 1.0 - eta;
  return {xi * zeta * etac,  xic * zetac * eta, xi * zetac * eta,
          xic * zeta * etac, xic * zeta * eta,  xi * zetac * etac};
}

}  // namespace

void validate_weights(const SquaredWeights& w) {
  for (double v : {w.xi, w.zeta, w.eta})
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw std::invalid_argument("SquaredWeights: components must lie in [0, 1]");
}

SquaredWeights weights_from_moduli(Complex n, Complex m, Complex b) {
  detail::check_finite_param(n, "weights_from_moduli n");
  detail::check_finite_param(m, "weights_from_moduli m");
  detail::check_finite_param(b, "weights_from_moduli b");
  return {1.0 / (1.0 + std::norm(n)), 1.0 / (1.0 + std::norm(m)), 1.0 / (1.0 + std::norm(b))};
}

const char* to_string(RegionLabel r) {
  switch (r) {
    case RegionLabel::E: return "E";
    case RegionLabel::F: return "F";
    case RegionLabel::G: return "G";
  }
  return "?";
}

std::string matches_string(const Region& r) {
  std::string s;
  if (r.matches_e) s += 'E';
  if (r.matches_f) s += 'F';
  if (r.matches_g) s += 'G';
  return s;
}

std::array<BranchRecord, 8> branch_profile(Complex n, Complex m, Complex b) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return branch_profile(n, m, b, Complex(inv_sqrt2, 0.0), Complex(inv_sqrt2, 0.0));
}

std::array<BranchRecord, 8> branch_profile(Complex n, Complex m, Complex b, Complex alpha,
                                           Complex beta) {
  const double input_norm2 = std::norm(alpha) + std::norm(beta);
  if (!std::isfinite(input_norm2) || !(input_norm2 > 0.0))
    throw std::invalid_argument("branch_profile: input coefficients must be a nonzero state");
  const double a2 = std::norm(alpha) / input_norm2;
  const double b2_in = std::norm(beta) / input_norm2;

  const ChannelConfig cfg = ChannelConfig::three_party(n, m, b);
  const double prefactor =
      1.0 / ((1.0 + std::norm(n)) * (1.0 + std::norm(m)) * (1.0 + std::norm(b)));

  std::array<BranchRecord, 8> out;
  for (int bi = 0; bi < 4; ++bi)
    for (int xi = 0; xi < 2; ++xi) {
      const auto bell = static_cast<BellOutcome>(bi);
      const auto x = static_cast<XOutcome>(xi);
      const BranchCorrection bc = branch_coefficients(bell, {x}, cfg);
      const double c2 = std::norm(bc.coeff.c);
      const double d2 = std::norm(bc.coeff.d);
      const double weighted = a2 * c2 + b2_in * d2;
      BranchRecord rec;
      rec.bell = bell;
      rec.x = x;
      rec.coeff = bc.coeff;
      rec.joint_probability = prefactor * weighted;
      rec.conversion_probability = weighted > 0.0 ? std::min(c2, d2) / weighted : 0.0;
      rec.joint_times_conversion = prefactor * std::min(c2, d2);
      out[branch_index(bell, {x})] = rec;
    }
  return out;
}

double success_probability(Complex n, Complex m, Complex b) {
  detail::check_finite_param(n, "success_probability n");
  detail::check_finite_param(m, "success_probability m");
  detail::check_finite_param(b, "success_probability b");
  const double n2 = std::norm(n), m2 = std::norm(m), b2 = std::norm(b);
  const double prefactor = 1.0 / ((1.0 + n2) * (1.0 + m2) * (1.0 + b2));
  return 2.0 * prefactor *
         (std::min(1.0, m2 * n2 * b2) + std::min(b2, m2 * n2) + std::min(m2, n2 * b2) +
          std::min(n2, m2 * b2));
}

double success_probability_weights(const SquaredWeights& w) {
  validate_weights(w);
  const double xi = w.xi, zeta = w.zeta, eta = w.eta;
  const double xic = 1.0 - xi, zetac = 1.0 - zeta, etac = 1.0 - eta;
  return 2.0 * (std::min(xi * zeta * eta, xic * zetac * etac) +
                std::min(xi * zeta * etac, xic * zetac * eta) +
                std::min(xi * zetac * eta, xic * zeta * etac) +
                std::min(xic * zeta * eta, xi * zetac * etac));
}

SquaredWeights canonicalize(const SquaredWeights& w) {
  validate_weights(w);
  double xi = std::min(w.xi, 1.0 - w.xi);
  double zeta = std::min(w.zeta, 1.0 - w.zeta);
  double eta = std::min(w.eta, 1.0 - w.eta);
  if (zeta > eta) std::swap(zeta, eta);
  return {xi, zeta, eta};
}

bool is_canonical(const SquaredWeights& w) {
  return w.xi > 0.0 && w.xi <= 0.5 && w.zeta > 0.0 && w.zeta <= w.eta && w.eta <= 0.5;
}

Region classify_region(const SquaredWeights& w) {
  validate_weights(w);
  if (!is_canonical(w))
    throw std::domain_error(
        "classify_region: weights must be canonical (0 < xi <= 1/2, 0 < zeta <= eta <= 1/2)");
  const Comparisons c = comparisons(w);

  const auto evaluate = [&](double tol) {
    const auto le = [tol](double l, double r) {
      return l <= r || std::abs(l - r) <= tol * std::max({1.0, std::abs(l), std::abs(r)});
    };
    Region reg;
    reg.matches_e = le(c.t1l, c.t1r) && le(c.t2l, c.t2r) && le(c.t3l, c.t3r);
    reg.matches_f = le(c.t1l, c.t1r) && le(c.t2l, c.t2r) && le(c.t3r, c.t3l);
    reg.matches_g = le(c.t1l, c.t1r) && le(c.t2r, c.t2l) && le(c.t3l, c.t3r);
    reg.tight_t1 = le(c.t1l, c.t1r) && le(c.t1r, c.t1l);
    reg.tight_t2 = le(c.t2l, c.t2r) && le(c.t2r, c.t2l);
    reg.tight_t3 = le(c.t3l, c.t3r) && le(c.t3r, c.t3l);
    return reg;
  };

  Region reg = evaluate(0.0);
  if (reg.match_count() == 0) {
    // Exact comparisons can miss on a boundary where rounding flipped a
    // product; retry with a relative tolerance before giving up.
    reg = evaluate(1e-12);
    if (reg.match_count() == 0)
      throw std::logic_error("classify_region: no region matched a canonical point");
  }
  reg.label = reg.matches_e ? RegionLabel::E : (reg.matches_f ? RegionLabel::F : RegionLabel::G);
  return reg;
}

double regional_formula(const Region& r, const SquaredWeights& w) {
  const Region check = classify_region(w);
  const bool member = (r.label == RegionLabel::E && check.matches_e) ||
                      (r.label == RegionLabel::F && check.matches_f) ||
                      (r.label == RegionLabel::G && check.matches_g);
  if (!member)
    throw std::invalid_argument("regional_formula: point does not lie in the given region");
  switch (r.label) {
    case RegionLabel::E:
      return 2.0 * (w.xi * (w.eta + w.zeta) + (1.0 - 2.0 * w.xi) * w.zeta * w.eta);
    case RegionLabel::F:
      return 2.0 * w.xi;
    case RegionLabel::G:
      return 2.0 * w.zeta;
  }
  throw std::logic_error("regional_formula: bad enum");
}

double max_success_probability(double xi) {
  if (!std::isfinite(xi) || xi <= 0.0 || xi >= 1.0)
    throw std::domain_error("max_success_probability: xi must lie strictly inside (0, 1)");
  return 2.0 * std::min(xi, 1.0 - xi);
}

GridSearchResult grid_search_max(double xi, int resolution) {
  if (!std::isfinite(xi) || xi <= 0.0 || xi >= 1.0)
    throw std::domain_error("grid_search_max: xi must lie strictly inside (0, 1)");
  if (resolution < 2) throw std::invalid_argument("grid_search_max: resolution must be >= 2");

  GridSearchResult best;
  best.p_star = -1.0;
  for (int i = 1; i < resolution; ++i) {
    const double zeta = static_cast<double>(i) / resolution;
    for (int j = 1; j < resolution; ++j) {
      const double eta = static_cast<double>(j) / resolution;
      const double p = success_probability_weights({xi, zeta, eta});
      if (p > best.p_star) {
        best.p_star = p;
        best.zeta = zeta;
        best.eta = eta;
      }
    }
  }
  best.canonical_argmax = canonicalize({xi, best.zeta, best.eta});
  best.region = classify_region(best.canonical_argmax);
  return best;
}

double lparty_success_oracle(const ChannelConfig& cfg) {
  const std::vector<double> products = lparty_branch_products(cfg);
  double total = 0.0;
  for (double p : products) total += p;
  return total;
}

std::vector<double> lparty_branch_products(const ChannelConfig& cfg) {
  cfg.validate();
  if (cfg.num_parties > 8)
    throw std::invalid_argument("lparty_branch_products: more than 8 parties");

  const int n_int = cfg.num_intermediates();
  const std::size_t n_branches = branch_count(cfg);
  const BellBasis bb = bell_basis(cfg.m);
  std::vector<XBasis> xbs;
  xbs.reserve(static_cast<std::size_t>(n_int));
  for (const Complex& b : cfg.b_list) xbs.push_back(x_basis(b));

  // Squared projection weight of every measurement chain, for the two
  // computational inputs separately. The branch success term is the smaller
  // of the two weights; summed over branches this is the total probability.
  std::array<std::vector<double>, 2> chain_weight;
  for (int in_bit = 0; in_bit < 2; ++in_bit) {
    chain_weight[static_cast<std::size_t>(in_bit)].assign(n_branches, 0.0);
    const Ket joint = tensor(basis_ket<double>(1, in_bit), make_ghz(cfg.n, cfg.num_parties));

    const std::function<void(const Ket&, double, int, std::size_t)> descend =
        [&](const Ket& st, double weight, int depth, std::size_t prefix) {
          if (depth == n_int) {
            chain_weight[static_cast<std::size_t>(in_bit)][prefix] = weight;
            return;
          }
          const auto& xb = xbs[static_cast<std::size_t>(depth)];
          const RealVector<double> xw = projection_weights(st, xb.basis, {0});
          for (std::size_t o = 0; o < 2; ++o) {
            if (!(xw(static_cast<Eigen::Index>(o)) > 0.0)) continue;
            auto [p, collapsed] = project_onto(st, xb.basis, o, {0});
            descend(collapsed, weight * p, depth + 1, (prefix << 1) | o);
          }
        };

    const RealVector<double> bell_weights = projection_weights(joint, bb.basis, {0, 1});
    for (std::size_t bell = 0; bell < 4; ++bell) {
      if (!(bell_weights(static_cast<Eigen::Index>(bell)) > 0.0)) continue;
      auto [p, collapsed] = project_onto(joint, bb.basis, bell, {0, 1});
      descend(collapsed, p, 0, bell);
    }
  }

  std::vector<double> products(n_branches, 0.0);
  for (std::size_t k = 0; k < n_branches; ++k)
    products[k] = std::min(chain_weight[0][k], chain_weight[1][k]);
  return products;
}

}  // namespace qtel
