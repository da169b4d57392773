#include "qtel/analytics.hpp"

#include "doctest.h"
#include "testutil.hpp"

#include <cmath>

using namespace qtel;
using qtest::random_param;

namespace {

SquaredWeights random_cube_point(TrialRng& rng) {
  return {rng.uniform(), rng.uniform(), rng.uniform()};
}

}  // namespace

TEST_CASE("squared weights from moduli") {
  const SquaredWeights w = weights_from_moduli(2.0, 1.0, 3.0);
  CHECK(w.xi == 0.2);
  CHECK(w.zeta == 0.5);
  CHECK(w.eta == 0.1);
  const SquaredWeights m = weights_from_moduli(1.0, 1.0, 1.0);
  CHECK(m.xi == 0.5);
  CHECK(m.zeta == 0.5);
  CHECK(m.eta == 0.5);
  // depends only on moduli
  const SquaredWeights rot = weights_from_moduli(Complex{0.0, 2.0}, 1.0, 3.0);
  CHECK(rot.xi == w.xi);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(weights_from_moduli(Complex{inf, 0.0}, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("success probability at hand-evaluated points") {
  CHECK(success_probability(1.0, 1.0, 1.0) == 1.0);
  CHECK(success_probability(0.0, 1.0, 1.0) == 0.0);
  CHECK(success_probability(2.0, 1.0, 1.0) == doctest::Approx(0.4).epsilon(1e-15));

  // four min terms: 2(0.018 + 0.042 + 0.042 + 0.072)
  CHECK(success_probability_weights({0.2, 0.3, 0.3}) == doctest::Approx(0.348).epsilon(1e-15));
  CHECK(success_probability_weights({0.3, 0.4, 0.45}) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(success_probability_weights({0.4, 0.1, 0.45}) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(success_probability_weights({0.5, 0.5, 0.5}) == 1.0);
}

TEST_CASE("weight form and modulus form agree everywhere") {
  TrialRng rng(2020);
  for (int iter = 0; iter < 1000; ++iter) {
    const Complex n = random_param(rng, 1e-2, 1e2);
    const Complex m = random_param(rng, 1e-2, 1e2);
    const Complex b = random_param(rng, 1e-2, 1e2);
    const double direct = success_probability(n, m, b);
    const double via_weights = success_probability_weights(weights_from_moduli(n, m, b));
    CHECK(std::abs(direct - via_weights) < 1e-12);
  }
}

TEST_CASE("branch profile sums to the closed form and ignores the input") {
  const auto skew = branch_profile(2.0, 1.0, 1.0);
  double joint_sum = 0.0, product_sum = 0.0;
  for (const auto& rec : skew) {
    CHECK(rec.joint_times_conversion == doctest::Approx(1.0 / 20.0).epsilon(1e-13));
    joint_sum += rec.joint_probability;
    product_sum += rec.joint_times_conversion;
  }
  CHECK(std::abs(joint_sum - 1.0) < 1e-12);
  CHECK(std::abs(product_sum - 0.4) < 1e-14);

  const auto maximal = branch_profile(1.0, 1.0, 1.0);
  for (const auto& rec : maximal)
    CHECK(rec.joint_times_conversion == doctest::Approx(0.125).epsilon(1e-14));

  // per-branch products do not move with alpha, beta
  TrialRng rng(33);
  const Complex n = random_param(rng), m = random_param(rng), b = random_param(rng);
  const auto base = branch_profile(n, m, b);
  for (int iter = 0; iter < 100; ++iter) {
    const Ket input = qtest::random_ket(1, rng);
    const auto probe = branch_profile(n, m, b, input.amplitude(0), input.amplitude(1));
    double joint_total = 0.0;
    for (std::size_t k = 0; k < 8; ++k) {
      CHECK(std::abs(probe[k].joint_times_conversion - base[k].joint_times_conversion) < 1e-10);
      joint_total += probe[k].joint_probability;
    }
    CHECK(std::abs(joint_total - 1.0) < 1e-12);
  }

  CHECK_THROWS_AS(branch_profile(1.0, 1.0, 1.0, Complex{0.0}, Complex{0.0}),
                  std::invalid_argument);
}

TEST_CASE("canonicalize folds into the reference octant") {
  const SquaredWeights a = canonicalize({0.8, 0.3, 0.4});
  CHECK(a.xi == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(a.zeta == 0.3);
  CHECK(a.eta == 0.4);

  const SquaredWeights b = canonicalize({0.2, 0.4, 0.3});
  CHECK(b.zeta == 0.3);
  CHECK(b.eta == 0.4);

  const SquaredWeights c = canonicalize({0.5, 0.5, 0.5});
  CHECK(c.xi == 0.5);
  CHECK(c.zeta == 0.5);
  CHECK(c.eta == 0.5);

  CHECK(is_canonical({0.2, 0.3, 0.4}));
  CHECK_FALSE(is_canonical({0.6, 0.3, 0.4}));
  CHECK_FALSE(is_canonical({0.2, 0.4, 0.3}));
  CHECK_FALSE(is_canonical({0.0, 0.3, 0.4}));
}

TEST_CASE("the probability is invariant under complements and the zeta-eta swap") {
  TrialRng rng(606060);
  for (int iter = 0; iter < 10000; ++iter) {
    const SquaredWeights w = random_cube_point(rng);
    const double p = success_probability_weights(w);
    CHECK(std::abs(p - success_probability_weights({1.0 - w.xi, w.zeta, w.eta})) < 1e-15);
    CHECK(std::abs(p - success_probability_weights({w.xi, 1.0 - w.zeta, w.eta})) < 1e-15);
    CHECK(std::abs(p - success_probability_weights({w.xi, w.zeta, 1.0 - w.eta})) < 1e-15);
    CHECK(std::abs(p - success_probability_weights({w.xi, w.eta, w.zeta})) < 1e-15);
    CHECK(std::abs(p - success_probability_weights(canonicalize(w))) < 1e-15);
  }
}

TEST_CASE("region classification at the worked examples") {
  const Region e = classify_region({0.2, 0.3, 0.3});
  CHECK(e.label == RegionLabel::E);
  CHECK(matches_string(e) == "E");
  CHECK_FALSE(e.boundary_tie());

  const Region f = classify_region({0.3, 0.4, 0.45});
  CHECK(f.label == RegionLabel::F);
  CHECK(matches_string(f) == "F");

  const Region g = classify_region({0.4, 0.1, 0.45});
  CHECK(g.label == RegionLabel::G);
  CHECK(matches_string(g) == "G");

  // fully balanced point lies on every boundary
  const Region all = classify_region({0.5, 0.5, 0.5});
  CHECK(all.label == RegionLabel::E);
  CHECK(matches_string(all) == "EFG");
  CHECK(all.boundary_tie());
  CHECK(all.tight_t1);
  CHECK(all.tight_t2);
  CHECK(all.tight_t3);

  CHECK_THROWS_AS(classify_region({0.7, 0.3, 0.4}), std::domain_error);
  CHECK_THROWS_AS(classify_region({0.2, 0.45, 0.4}), std::domain_error);
}

TEST_CASE("regional formulas match the defining evaluation") {
  const SquaredWeights we{0.2, 0.3, 0.3};
  CHECK(regional_formula(classify_region(we), we) == doctest::Approx(0.348).epsilon(1e-15));
  const SquaredWeights wf{0.3, 0.4, 0.45};
  CHECK(regional_formula(classify_region(wf), wf) == doctest::Approx(0.6).epsilon(1e-15));
  const SquaredWeights wg{0.4, 0.1, 0.45};
  CHECK(regional_formula(classify_region(wg), wg) == doctest::Approx(0.2).epsilon(1e-15));

  Region wrong;
  wrong.label = RegionLabel::G;
  CHECK_THROWS_AS(regional_formula(wrong, we), std::invalid_argument);
}

TEST_CASE("random canonical triples classify exactly once and consistently") {
  TrialRng rng(515151);
  int ties = 0;
  for (int iter = 0; iter < 20000; ++iter) {
    const SquaredWeights w = canonicalize(random_cube_point(rng));
    if (!is_canonical(w)) continue;  // boundary draws have measure zero
    const Region r = classify_region(w);
    CHECK(r.match_count() >= 1);
    if (r.boundary_tie()) ++ties;

    // the deterministic label is the first of the matching regions
    if (r.matches_e) CHECK(r.label == RegionLabel::E);
    else if (r.matches_f) CHECK(r.label == RegionLabel::F);
    else CHECK(r.label == RegionLabel::G);

    CHECK(std::abs(regional_formula(r, w) - success_probability_weights(w)) < 1e-12);

    // inequality systems that cannot occur in the canonical octant
    const double t1l = w.xi * w.zeta * (1.0 - w.eta);
    const double t1r = (1.0 - w.xi) * (1.0 - w.zeta) * w.eta;
    const double t2l = w.xi * (1.0 - w.zeta) * w.eta;
    const double t2r = (1.0 - w.xi) * w.zeta * (1.0 - w.eta);
    const double t3l = (1.0 - w.xi) * w.zeta * w.eta;
    const double t3r = w.xi * (1.0 - w.zeta) * (1.0 - w.eta);
    CHECK_FALSE((t1l > t1r && t2l > t2r));
    CHECK_FALSE((t2l > t2r && t3l > t3r));
    CHECK_FALSE((t1l > t1r && t2l < t2r));
  }
  // random points essentially never hit a measure-zero boundary
  CHECK(ties == 0);
}

TEST_CASE("fixed-weight maximum formula") {
  CHECK(max_success_probability(0.5) == 1.0);
  CHECK(max_success_probability(0.2) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(max_success_probability(0.8) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK_THROWS_AS(max_success_probability(0.0), std::domain_error);
  CHECK_THROWS_AS(max_success_probability(1.0), std::domain_error);
  CHECK_THROWS_AS(max_success_probability(-0.3), std::domain_error);
}

TEST_CASE("grid search attains the fixed-weight maximum") {
  const GridSearchResult low = grid_search_max(0.2, 200);
  CHECK(low.p_star <= 0.4 + 1e-12);
  CHECK(low.p_star > 0.4 - 1e-2);
  CHECK(low.region.matches_f);

  const GridSearchResult mid = grid_search_max(0.5, 200);
  CHECK(mid.p_star == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mid.zeta == 0.5);
  CHECK(mid.eta == 0.5);
  CHECK(mid.region.matches_f);

  // above one half the complement symmetry caps the attainable value
  const GridSearchResult high = grid_search_max(0.8, 120);
  CHECK(high.p_star <= max_success_probability(0.8) + 1e-12);

  TrialRng rng(777);
  for (int iter = 0; iter < 20; ++iter) {
    const double xi = 0.02 + 0.96 * rng.uniform();
    const GridSearchResult r = grid_search_max(xi, 50);
    CHECK(r.p_star <= max_success_probability(xi) + 1e-12);
  }

  CHECK_THROWS_AS(grid_search_max(0.0, 100), std::domain_error);
  CHECK_THROWS_AS(grid_search_max(0.3, 1), std::invalid_argument);
}

TEST_CASE("balanced bases collapse the probability to the channel weight term") {
  TrialRng rng(888);
  for (int iter = 0; iter < 100; ++iter) {
    const double mag = std::exp(std::log(1e-2) + std::log(1e4) * rng.uniform());
    const double p = success_probability(Complex{mag, 0.0}, 1.0, 1.0);
    const double xi = 1.0 / (1.0 + mag * mag);
    CHECK(std::abs(p - 2.0 * std::min(xi, 1.0 - xi)) < 1e-12);
  }
}

TEST_CASE("projection oracle matches the closed form for three parties") {
  CHECK(std::abs(lparty_success_oracle(ChannelConfig::three_party(2.0, 1.0, 1.0)) - 0.4) < 1e-12);

  TrialRng rng(3131);
  for (int iter = 0; iter < 50; ++iter) {
    const Complex n = random_param(rng), m = random_param(rng), b = random_param(rng);
    const ChannelConfig cfg = ChannelConfig::three_party(n, m, b);
    const double oracle = lparty_success_oracle(cfg);
    CHECK(std::abs(oracle - success_probability(n, m, b)) < 1e-10);

    // per-branch products line up with the closed-form branch profile
    const std::vector<double> products = lparty_branch_products(cfg);
    const auto profile = branch_profile(n, m, b);
    REQUIRE(products.size() == 8);
    for (std::size_t k = 0; k < 8; ++k)
      CHECK(std::abs(products[k] - profile[k].joint_times_conversion) < 1e-12);
  }
}

TEST_CASE("projection oracle covers longer chains") {
  CHECK(std::abs(lparty_success_oracle(ChannelConfig::uniform_b(1.0, 1.0, 1.0, 4)) - 1.0) <
        1e-12);
  CHECK(std::abs(lparty_success_oracle(ChannelConfig::uniform_b(2.0, 1.0, 1.0, 4)) - 0.4) <
        1e-12);
  CHECK(lparty_branch_products(ChannelConfig::uniform_b(2.0, 1.0, 1.0, 5)).size() == 32);
  CHECK_THROWS_AS(lparty_branch_products(ChannelConfig::uniform_b(1.0, 1.0, 1.0, 9)),
                  std::invalid_argument);
}
