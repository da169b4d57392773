#include "qtel/protocol.hpp"

#include <cmath>
#include <numbers>

namespace qtel {

const char* to_string(BellOutcome o) {
  switch (o) {
    case BellOutcome::PhiPlus: return "phi+";
    case BellOutcome::PhiMinus: return "phi-";
    case BellOutcome::PsiPlus: return "psi+";
    case BellOutcome::PsiMinus: return "psi-";
  }
  return "?";
}

const char* to_string(XOutcome o) { return o == XOutcome::Plus ? "+" : "-"; }

const char* to_string(PauliCorrection p) {
  switch (p) {
    case PauliCorrection::I: return "I";
    case PauliCorrection::X: return "X";
    case PauliCorrection::Y: return "Y";
    case PauliCorrection::Z: return "Z";
  }
  return "?";
}

const UnitaryMatrix& pauli_matrix(PauliCorrection p) {
  static const UnitaryMatrix identity = [] {
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
    return UnitaryMatrix(u);
  }();
  static const UnitaryMatrix sigma_x = [] {
    Eigen::Matrix2cd u;
    u << 0, 1, 1, 0;
    return UnitaryMatrix(u);
  }();
  static const UnitaryMatrix sigma_y = [] {
    Eigen::Matrix2cd u;
    u << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return UnitaryMatrix(u);
  }();
  static const UnitaryMatrix sigma_z = [] {
    Eigen::Matrix2cd u;
    u << 1, 0, 0, -1;
    return UnitaryMatrix(u);
  }();
  switch (p) {
    case PauliCorrection::I: return identity;
    case PauliCorrection::X: return sigma_x;
    case PauliCorrection::Y: return sigma_y;
    case PauliCorrection::Z: return sigma_z;
  }
  throw std::logic_error("pauli_matrix: bad enum");
}

Ket haar_random_qubit(TrialRng& rng) {
  const double cos_theta = 2.0 * rng.uniform() - 1.0;
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const double half = std::acos(cos_theta) / 2.0;
  AmpVector<double> v(2);
  v(0) = Complex(std::cos(half), 0.0);
  v(1) = std::polar(std::sin(half), phi);
  return Ket(v);
}

Ket prepare_joint(const Ket& input, const ChannelConfig& cfg) {
  if (input.num_qubits() != 1)
    throw std::invalid_argument("prepare_joint: input must be a single qubit");
  cfg.validate();
  return tensor(input, make_ghz(cfg.n, cfg.num_parties));
}

std::size_t branch_index(BellOutcome bell, const std::vector<XOutcome>& xs) {
  std::size_t idx = static_cast<std::size_t>(bell);
  for (XOutcome x : xs) idx = (idx << 1) | static_cast<std::size_t>(x);
  return idx;
}

std::string branch_label(BellOutcome bell, const std::vector<XOutcome>& xs) {
  std::string label = to_string(bell);
  if (!xs.empty()) {
    label += ':';
    for (XOutcome x : xs) label += to_string(x);
  }
  return label;
}

std::size_t branch_count(const ChannelConfig& cfg) {
  cfg.validate();
  return std::size_t{4} << cfg.num_intermediates();
}

BranchCorrection branch_coefficients(BellOutcome bell, const std::vector<XOutcome>& xs,
                                     const ChannelConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(xs.size()) != cfg.num_intermediates())
    throw std::invalid_argument(
        "branch_coefficients: expected one X outcome per intermediate party");

  // Fold the intermediate outcomes into two products: conjugated weights of
  // the + outcomes, plain weights of the - outcomes. Each - outcome also
  // swaps which residual slot carries the channel weight, tracked by parity.
  Complex plus_conj{1.0, 0.0};
  Complex minus_plain{1.0, 0.0};
  int minus_count = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == XOutcome::Plus) {
      plus_conj *= std::conj(cfg.b_list[i]);
    } else {
      minus_plain *= cfg.b_list[i];
      ++minus_count;
    }
  }
  const bool even = minus_count % 2 == 0;
  const Complex n = cfg.n;
  const Complex mc = std::conj(cfg.m);
  switch (bell) {
    case BellOutcome::PhiPlus:
      return {even ? PauliCorrection::I : PauliCorrection::Z, {minus_plain, mc * n * plus_conj}};
    case BellOutcome::PhiMinus:
      return {even ? PauliCorrection::Z : PauliCorrection::I, {cfg.m * minus_plain, n * plus_conj}};
    case BellOutcome::PsiPlus:
      return {even ? PauliCorrection::X : PauliCorrection::Y, {n * plus_conj, mc * minus_plain}};
    case BellOutcome::PsiMinus:
      return {even ? PauliCorrection::Y : PauliCorrection::X, {cfg.m * n * plus_conj, minus_plain}};
  }
  throw std::logic_error("branch_coefficients: bad enum");
}

AlignedState phase_align(const Ket& state, const ConditionalCoefficients& coeff) {
  if (state.num_qubits() != 1)
    throw std::invalid_argument("phase_align: expected the single receiver qubit");
  const auto phase = [](Complex z) { return z == Complex{} ? 0.0 : std::arg(z); };
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Zero();
  u(0, 0) = std::polar(1.0, -phase(coeff.c));
  u(1, 1) = std::polar(1.0, -phase(coeff.d));
  return {apply_unitary(state, UnitaryMatrix(u), {0}), std::abs(coeff.c), std::abs(coeff.d)};
}

UnitaryMatrix conversion_unitary(double abs_c, double abs_d) {
  if (!(abs_c >= 0.0) || !(abs_d >= 0.0) || !std::isfinite(abs_c) || !std::isfinite(abs_d))
    throw std::invalid_argument("conversion_unitary: moduli must be finite and nonnegative");
  if (abs_c == 0.0 && abs_d == 0.0)
    throw std::invalid_argument("conversion_unitary: both moduli vanish");
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
  if (abs_c <= abs_d) {
    // shrink the |1> component of the receiver qubit
    const double r = abs_c / abs_d;
    const double s = std::sqrt(1.0 - r * r);
    u(2, 2) = r;
    u(2, 3) = s;
    u(3, 2) = -s;
    u(3, 3) = r;
  } else {
    const double r = abs_d / abs_c;
    const double s = std::sqrt(1.0 - r * r);
    u(0, 0) = r;
    u(0, 1) = s;
    u(1, 0) = -s;
    u(1, 1) = r;
  }
  return UnitaryMatrix(u);
}

RecoveryResult bob_recover(const Ket& state, const ConditionalCoefficients& coeff, TrialRng& rng) {
  if (state.num_qubits() != 1)
    throw std::invalid_argument("bob_recover: expected the single receiver qubit");
  const double abs_c = std::abs(coeff.c);
  const double abs_d = std::abs(coeff.d);
  if (abs_c == 0.0 || abs_d == 0.0) {
    // The residual carries no trace of one input component; nothing to
    // convert, the trial is an unconditional failure and costs no draw.
    return {false, std::nullopt, 0.0, 1};
  }
  const Ket with_ancilla = tensor(state, basis_ket<double>(1, 0));
  const Ket converted = apply_unitary(with_ancilla, conversion_unitary(abs_c, abs_d), {0, 1});
  const OrthonormalBasis zbasis = computational_basis<double>(1);
  const RealVector<double> weights = projection_weights(converted, zbasis, {1});
  const double p0 = weights(0);
  const int outcome = sample_index(weights, rng);
  if (outcome != 0) return {false, std::nullopt, p0, 1};
  auto [p, final_state] = project_onto(converted, zbasis, 0, {1});
  return {true, std::move(final_state), p0, 0};
}

TrialRecord run_teleportation(const Ket& input, const ChannelConfig& cfg, TrialRng& rng) {
  const Ket joint = prepare_joint(input, cfg);

  TrialRecord rec;
  const BellBasis bb = bell_basis(cfg.m);
  Measurement bm = measure_in_basis(joint, bb.basis, {0, 1}, rng);
  rec.bell_outcome = static_cast<BellOutcome>(bm.outcome);
  rec.transcript.push_back(
      {ClassicalMessage::Kind::BellResult, 0, bm.outcome, cfg.m});

  Ket st = std::move(bm.collapsed);
  for (int i = 0; i < cfg.num_intermediates(); ++i) {
    const XBasis xb = x_basis(cfg.b_list[static_cast<std::size_t>(i)]);
    Measurement xm = measure_in_basis(st, xb.basis, {0}, rng);
    rec.x_outcomes.push_back(static_cast<XOutcome>(xm.outcome));
    rec.transcript.push_back({ClassicalMessage::Kind::XResult, i + 1, xm.outcome,
                              cfg.b_list[static_cast<std::size_t>(i)]});
    st = std::move(xm.collapsed);
  }

  const BranchCorrection bc = branch_coefficients(rec.bell_outcome, rec.x_outcomes, cfg);
  rec.pauli_applied = bc.pauli;
  rec.coefficients = bc.coeff;
  st = apply_unitary(st, pauli_matrix(bc.pauli), {0});
  const AlignedState aligned = phase_align(st, bc.coeff);
  const RecoveryResult rr = bob_recover(aligned.state, bc.coeff, rng);
  rec.ancilla_outcome = rr.ancilla_outcome;
  rec.success = rr.success;
  rec.fidelity = rr.success ? fidelity(*rr.final_state, input) : 0.0;
  return rec;
}

EnsembleStats run_trials(const ChannelConfig& cfg, std::uint64_t trials,
                         const InputPolicy& policy, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("run_trials: need at least one trial");
  cfg.validate();
  if (!policy.is_haar) {
    if (!policy.state) throw std::invalid_argument("run_trials: fixed policy without a state");
    if (policy.state->num_qubits() != 1)
      throw std::invalid_argument("run_trials: input must be a single qubit");
  }

  TrialRng rng(seed);
  EnsembleStats stats;
  stats.trials = trials;
  stats.branch_counts.assign(branch_count(cfg), 0);
  double fid_sum = 0.0;
  double fid_min = 1.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Ket input = policy.is_haar ? haar_random_qubit(rng) : *policy.state;
    const TrialRecord rec = run_teleportation(input, cfg, rng);
    ++stats.branch_counts[branch_index(rec.bell_outcome, rec.x_outcomes)];
    if (rec.success) {
      ++stats.successes;
      fid_sum += rec.fidelity;
      fid_min = std::min(fid_min, rec.fidelity);
    }
  }
  stats.empirical_p = static_cast<double>(stats.successes) / static_cast<double>(trials);
  stats.mean_success_fidelity =
      stats.successes ? fid_sum / static_cast<double>(stats.successes) : 0.0;
  stats.min_success_fidelity = stats.successes ? fid_min : 1.0;
  return stats;
}

}  // namespace qtel
