// analytics.hpp
// Closed-form success probabilities, the squared-weight landscape with its
// three-region classification, grid search for the attainable maximum, and a
// projection-based L-party oracle that bypasses the branch algebra entirely.
#pragma once

#include "qtel/protocol.hpp"

#include <array>
#include <vector>

namespace qtel {

// Squared normalization weights of the three channel parameters:
//   xi = 1/(1+|n|^2), zeta = 1/(1+|m|^2), eta = 1/(1+|b|^2).
// Valid on the closed cube [0,1]^3; classification needs the open interior.
struct SquaredWeights {
  double xi = 0.5;
  double zeta = 0.5;
  double eta = 0.5;
};

void validate_weights(const SquaredWeights& w);
SquaredWeights weights_from_moduli(Complex n, Complex m, Complex b);

enum class RegionLabel : int { E = 0, F = 1, G = 2 };
const char* to_string(RegionLabel r);

// Classification of a canonical triple. The three closed regions overlap on
// their boundaries; `label` is the first match in the fixed order E, F, G,
// and the matches_* flags expose every region the point lies in. tight_*
// marks defining comparisons that hold with equality.
struct Region {
  RegionLabel label = RegionLabel::E;
  bool matches_e = false;
  bool matches_f = false;
  bool matches_g = false;
  bool tight_t1 = false;
  bool tight_t2 = false;
  bool tight_t3 = false;

  int match_count() const {
    return static_cast<int>(matches_e) + static_cast<int>(matches_f) +
           static_cast<int>(matches_g);
  }
  bool boundary_tie() const { return match_count() > 1; }
};

std::string matches_string(const Region& r);

// Per-branch decomposition of the three-party protocol at channel (n, m, b).
// joint_probability and conversion_probability refer to the given input;
// their product is input independent and sums to the success probability.
struct BranchRecord {
  BellOutcome bell = BellOutcome::PhiPlus;
  XOutcome x = XOutcome::Plus;
  double joint_probability = 0.0;
  ConditionalCoefficients coeff;
  double conversion_probability = 0.0;
  double joint_times_conversion = 0.0;
};

// Reference input |alpha|^2 = |beta|^2 = 1/2 (the Haar average), so the
// joint probabilities sum to 1.
std::array<BranchRecord, 8> branch_profile(Complex n, Complex m, Complex b);
std::array<BranchRecord, 8> branch_profile(Complex n, Complex m, Complex b, Complex alpha,
                                           Complex beta);

// Total success probability of the three-party protocol, modulus form:
// 2 N^2 M^2 a^2 (min{1,|mnb|^2} + min{|b|^2,|mn|^2} + min{|m|^2,|nb|^2}
//                + min{|n|^2,|mb|^2}).
double success_probability(Complex n, Complex m, Complex b);

// Same quantity in squared weights:
// 2 [min{xi zeta eta, xi' zeta' eta'} + min{xi zeta eta', xi' zeta' eta}
//    + min{xi zeta' eta, xi' zeta eta'} + min{xi' zeta eta, xi zeta' eta'}]
// with x' = 1 - x. Agrees with the modulus form within 1e-12.
double success_probability_weights(const SquaredWeights& w);

// Maps each weight to min(w, 1-w) and orders zeta <= eta. Leaves the success
// probability invariant (each complement map and the zeta/eta swap are exact
// symmetries of the formula).
SquaredWeights canonicalize(const SquaredWeights& w);
bool is_canonical(const SquaredWeights& w);

// Region of a canonical triple (throws on non-canonical input). The three
// closed systems cover the canonical domain; ties on shared boundaries
// resolve to the first match in the order E, F, G.
Region classify_region(const SquaredWeights& w);

// Closed-form success probability of the given region, validated against the
// point actually lying in that region:
//   E: 2 [xi (eta + zeta) + (1 - 2 xi) zeta eta]    F: 2 xi    G: 2 zeta
double regional_formula(const Region& r, const SquaredWeights& w);

// Largest success probability attainable at fixed xi: 2 min(xi, 1 - xi).
double max_success_probability(double xi);

struct GridSearchResult {
  double p_star = 0.0;
  double zeta = 0.0;  // argmax grid coordinates as searched
  double eta = 0.0;
  SquaredWeights canonical_argmax;
  Region region;
};

// Scans the interior lattice {i/resolution : 0 < i < resolution}^2 over
// (zeta, eta) at fixed xi. The lattice contains the midpoint 1/2 for even
// resolutions, which carries the maximum at xi = 1/2. First strict argmax in
// row-major order wins.
GridSearchResult grid_search_max(double xi, int resolution);

// Success probability of the full L-party protocol by explicit projection:
// per branch, the smaller of the squared projection weights of the two
// computational basis inputs. No branch algebra, no closed form.
double lparty_success_oracle(const ChannelConfig& cfg);

// The per-branch joint-times-conversion terms of the same computation,
// indexed by branch_index.
std::vector<double> lparty_branch_products(const ChannelConfig& cfg);

}  // namespace qtel
