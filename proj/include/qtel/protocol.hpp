// protocol.hpp
// The teleportation protocol over an L-party GHZ channel: sender Bell
// measurement, intermediate X measurements, classical messages, receiver-side
// Pauli correction, phase alignment, and the probabilistic conversion that
// either completes the transfer or discards the trial.
#pragma once

#include "qtel/bases.hpp"
#include "qtel/rng.hpp"
#include "qtel/statevec.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace qtel {

enum class BellOutcome : int { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };
enum class XOutcome : int { Plus = 0, Minus = 1 };
enum class PauliCorrection : int { I = 0, X = 1, Y = 2, Z = 3 };

const char* to_string(BellOutcome o);
const char* to_string(XOutcome o);
const char* to_string(PauliCorrection p);

// Residual coefficients of the receiver qubit for one measurement branch:
// after the Pauli correction the state is proportional to
// alpha*c|0> + beta*d|1> for input alpha|0> + beta|1>.
struct ConditionalCoefficients {
  Complex c{1.0, 0.0};
  Complex d{1.0, 0.0};
};

struct BranchCorrection {
  PauliCorrection pauli = PauliCorrection::I;
  ConditionalCoefficients coeff;
};

// One entry of the classical transcript. Party 0 holds the input qubit and
// party 0's register A1; parties are numbered along the chain, the receiver
// is party num_parties - 1.
struct ClassicalMessage {
  enum class Kind { BellResult, XResult };
  Kind kind;
  int sender;
  int outcome;           // BellOutcome or XOutcome as int
  Complex basis_weight;  // m for Bell results, the party's b for X results
};

struct TrialRecord {
  BellOutcome bell_outcome = BellOutcome::PhiPlus;
  std::vector<XOutcome> x_outcomes;
  PauliCorrection pauli_applied = PauliCorrection::I;
  ConditionalCoefficients coefficients;
  int ancilla_outcome = 1;  // 0 signals success
  bool success = false;
  double fidelity = 0.0;  // against the input; 0 when the trial fails
  std::vector<ClassicalMessage> transcript;
};

struct AlignedState {
  Ket state;
  double abs_c = 0.0;
  double abs_d = 0.0;
};

struct RecoveryResult {
  bool success = false;
  std::optional<Ket> final_state;
  double success_probability = 0.0;  // conditional on the branch
  int ancilla_outcome = 1;
};

// Input sampling policy for ensembles: a fresh Haar-random qubit per trial,
// or one fixed state for every trial.
struct InputPolicy {
  bool is_haar = true;
  std::optional<Ket> state;

  static InputPolicy haar() { return {true, std::nullopt}; }
  static InputPolicy fixed(Ket k) { return {false, std::move(k)}; }
};

struct EnsembleStats {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double empirical_p = 0.0;
  double mean_success_fidelity = 0.0;  // 0 when no trial succeeded
  double min_success_fidelity = 1.0;   // vacuously 1 when no trial succeeded
  std::vector<std::uint64_t> branch_counts;  // indexed by branch_index
};

const UnitaryMatrix& pauli_matrix(PauliCorrection p);

// alpha = cos(theta/2), beta = e^{i phi} sin(theta/2) with cos(theta)
// uniform on [-1, 1] and phi uniform on [0, 2 pi). Two draws.
Ket haar_random_qubit(TrialRng& rng);

// Input qubit in front of the channel GHZ state: qubit 0 is the input,
// qubits 1..L are the channel registers in chain order.
Ket prepare_joint(const Ket& input, const ChannelConfig& cfg);

// Bell-major flat index of a measurement branch; X outcome bits follow in
// chain order, first intermediate most significant.
std::size_t branch_index(BellOutcome bell, const std::vector<XOutcome>& xs);
std::string branch_label(BellOutcome bell, const std::vector<XOutcome>& xs);
std::size_t branch_count(const ChannelConfig& cfg);

// Pauli correction and residual coefficients for one branch, composed from
// the Bell outcome and every intermediate X outcome.
BranchCorrection branch_coefficients(BellOutcome bell, const std::vector<XOutcome>& xs,
                                     const ChannelConfig& cfg);

// Removes the phases of c and d from the receiver qubit so only the moduli
// matter for the conversion step.
AlignedState phase_align(const Ket& state, const ConditionalCoefficients& coeff);

// Two-qubit unitary on (receiver, ancilla) that rotates the larger residual
// coefficient down to the smaller one; ancilla outcome 0 then heralds an
// exact transfer.
UnitaryMatrix conversion_unitary(double abs_c, double abs_d);

// Attaches an ancilla in |0>, applies the conversion, measures the ancilla.
// Pre: state is the phase-aligned residual for these coefficients.
RecoveryResult bob_recover(const Ket& state, const ConditionalCoefficients& coeff, TrialRng& rng);

// One full protocol round. Draw order: Bell outcome, X outcomes in chain
// order, ancilla outcome (skipped when a residual coefficient vanishes).
TrialRecord run_teleportation(const Ket& input, const ChannelConfig& cfg, TrialRng& rng);

// Sequential seeded ensemble; a Haar policy draws the input first in each
// trial, so the whole run is reproducible from the seed alone.
EnsembleStats run_trials(const ChannelConfig& cfg, std::uint64_t trials,
                         const InputPolicy& policy, std::uint64_t seed);

}  // namespace qtel
