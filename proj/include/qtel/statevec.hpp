// statevec.hpp
// Dense complex state vectors over ordered qubit registers: tensor products,
// targeted unitaries, and projective measurement in arbitrary orthonormal
// bases. Templated on the real scalar; double aliases at the bottom.
//
// Register convention: qubit 0 is the leftmost ket label. The amplitude index
// of |q0 q1 ... q_{n-1}> reads q0 q1 ... q_{n-1} as a binary number with q0
// the most significant bit, so |01> sits at index 1 and |10> at index 2.
// tensor(a, b) places a's qubits before b's. Measurement removes the measured
// qubits from the register; remaining qubits keep their relative order.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qtel {

template <typename RealT>
using ComplexT = std::complex<RealT>;

template <typename RealT>
using AmpVector = Eigen::Matrix<ComplexT<RealT>, Eigen::Dynamic, 1>;

template <typename RealT>
using AmpMatrix = Eigen::Matrix<ComplexT<RealT>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename RealT>
using RealVector = Eigen::Matrix<RealT, Eigen::Dynamic, 1>;

using Complex = ComplexT<double>;

// Single algebraic identities are held to 1e-12, accumulated pipeline sums
// to 1e-9. Constructors enforce the former.
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kPipelineTol = 1e-9;

namespace detail {

inline bool is_pow2(Eigen::Index x) { return x > 0 && (x & (x - 1)) == 0; }

inline int log2_exact(Eigen::Index x) {
  int k = 0;
  while ((Eigen::Index{1} << k) < x) ++k;
  return k;
}

}  // namespace detail

// Normalized pure state. Construction requires unit norm within kAlgebraTol;
// use make_ket to normalize arbitrary amplitudes first.
template <typename RealT = double>
class BasicKet {
 public:
  template <typename Derived>
  explicit BasicKet(const Eigen::MatrixBase<Derived>& amplitudes)
      : amps_(amplitudes.template cast<ComplexT<RealT>>()) {
    validate();
  }

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return amps_.size(); }
  const AmpVector<RealT>& amplitudes() const { return amps_; }
  ComplexT<RealT> amplitude(Eigen::Index i) const { return amps_(i); }
  RealT norm() const { return amps_.norm(); }

 private:
  void validate() {
    if (!detail::is_pow2(amps_.size()))
      throw std::invalid_argument("Ket: amplitude count must be a power of two, got " +
                                  std::to_string(amps_.size()));
    if (!amps_.allFinite()) throw std::invalid_argument("Ket: non-finite amplitude");
    const RealT nrm = amps_.norm();
    if (std::abs(nrm - RealT(1)) > RealT(kAlgebraTol))
      throw std::invalid_argument("Ket: amplitudes are not normalized");
    num_qubits_ = detail::log2_exact(amps_.size());
  }

  AmpVector<RealT> amps_;
  int num_qubits_ = 0;
};

// Normalizes and wraps arbitrary nonzero amplitudes.
template <typename Derived>
  requires requires { typename Derived::Scalar; }
auto make_ket(const Eigen::MatrixBase<Derived>& amplitudes) {
  using RealT = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  AmpVector<RealT> v = amplitudes.template cast<ComplexT<RealT>>();
  if (!detail::is_pow2(v.size()))
    throw std::invalid_argument("make_ket: amplitude count must be a power of two");
  if (!v.allFinite()) throw std::invalid_argument("make_ket: non-finite amplitude");
  const RealT nrm = v.stableNorm();
  if (!(nrm > RealT(0)) || !std::isfinite(static_cast<double>(nrm)))
    throw std::invalid_argument("make_ket: cannot normalize a zero vector");
  v /= nrm;
  return BasicKet<RealT>(v);
}

template <typename RealT = double>
BasicKet<RealT> make_ket(const std::vector<ComplexT<RealT>>& amplitudes) {
  const Eigen::Map<const AmpVector<RealT>> m(amplitudes.data(),
                                             static_cast<Eigen::Index>(amplitudes.size()));
  return make_ket(m);
}

// Computational basis state |index> on num_qubits qubits.
template <typename RealT = double>
BasicKet<RealT> basis_ket(int num_qubits, Eigen::Index index) {
  if (num_qubits < 0) throw std::invalid_argument("basis_ket: negative qubit count");
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  if (index < 0 || index >= d) throw std::invalid_argument("basis_ket: index out of range");
  AmpVector<RealT> v = AmpVector<RealT>::Zero(d);
  v(index) = ComplexT<RealT>(1);
  return BasicKet<RealT>(v);
}

template <typename RealT>
BasicKet<RealT> tensor(const BasicKet<RealT>& a, const BasicKet<RealT>& b) {
  AmpVector<RealT> out(a.dim() * b.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i)
    for (Eigen::Index j = 0; j < b.dim(); ++j)
      out(i * b.dim() + j) = a.amplitude(i) * b.amplitude(j);
  return BasicKet<RealT>(out);
}

// |<a|b>|^2
template <typename RealT>
RealT fidelity(const BasicKet<RealT>& a, const BasicKet<RealT>& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("fidelity: qubit count mismatch");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

// Square matrix on k qubits with U^dagger U = I within kAlgebraTol.
template <typename RealT = double>
class BasicUnitary {
 public:
  template <typename Derived>
  explicit BasicUnitary(const Eigen::MatrixBase<Derived>& entries)
      : entries_(entries.template cast<ComplexT<RealT>>()) {
    if (entries_.rows() != entries_.cols() || !detail::is_pow2(entries_.rows()))
      throw std::invalid_argument("UnitaryMatrix: dimension must be a power of two and square");
    if (!entries_.allFinite()) throw std::invalid_argument("UnitaryMatrix: non-finite entry");
    const RealT dev = (entries_.adjoint() * entries_ -
                       AmpMatrix<RealT>::Identity(entries_.rows(), entries_.cols()))
                          .cwiseAbs()
                          .maxCoeff();
    if (dev > RealT(kAlgebraTol))
      throw std::invalid_argument("UnitaryMatrix: U^dagger U deviates from identity by " +
                                  std::to_string(static_cast<double>(dev)));
    arity_ = detail::log2_exact(entries_.rows());
  }

  Eigen::Index dim() const { return entries_.rows(); }
  int arity() const { return arity_; }
  const AmpMatrix<RealT>& entries() const { return entries_; }

 private:
  AmpMatrix<RealT> entries_;
  int arity_ = 0;
};

// 2^k states of k qubits each, pairwise orthonormal within kAlgebraTol.
template <typename RealT = double>
class BasicOrthonormalBasis {
 public:
  explicit BasicOrthonormalBasis(std::vector<BasicKet<RealT>> vectors)
      : vectors_(std::move(vectors)) {
    if (vectors_.empty()) throw std::invalid_argument("OrthonormalBasis: no vectors");
    arity_ = vectors_[0].num_qubits();
    if (vectors_.size() != (std::size_t{1} << arity_))
      throw std::invalid_argument("OrthonormalBasis: expected 2^arity vectors");
    for (const auto& v : vectors_)
      if (v.num_qubits() != arity_)
        throw std::invalid_argument("OrthonormalBasis: mixed qubit counts");
    for (std::size_t i = 0; i < vectors_.size(); ++i)
      for (std::size_t j = i; j < vectors_.size(); ++j) {
        const ComplexT<RealT> g = vectors_[i].amplitudes().dot(vectors_[j].amplitudes());
        const RealT dev = std::abs(g - (i == j ? ComplexT<RealT>(1) : ComplexT<RealT>(0)));
        if (dev > RealT(kAlgebraTol))
          throw std::invalid_argument("OrthonormalBasis: vectors are not orthonormal");
      }
  }

  int arity() const { return arity_; }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<BasicKet<RealT>>& vectors() const { return vectors_; }
  const BasicKet<RealT>& vector(std::size_t k) const { return vectors_.at(k); }

 private:
  std::vector<BasicKet<RealT>> vectors_;
  int arity_ = 0;
};

// Basis |0..0>, |0..1>, ..., |1..1> on k qubits.
template <typename RealT = double>
BasicOrthonormalBasis<RealT> computational_basis(int num_qubits) {
  std::vector<BasicKet<RealT>> vs;
  vs.reserve(std::size_t{1} << num_qubits);
  for (Eigen::Index i = 0; i < (Eigen::Index{1} << num_qubits); ++i)
    vs.push_back(basis_ket<RealT>(num_qubits, i));
  return BasicOrthonormalBasis<RealT>(std::move(vs));
}

namespace detail {

inline void check_targets(int num_qubits, const std::vector<int>& targets, int expected_arity) {
  if (static_cast<int>(targets.size()) != expected_arity)
    throw std::invalid_argument("target count does not match operator arity");
  std::vector<bool> seen(static_cast<std::size_t>(num_qubits), false);
  for (int t : targets) {
    if (t < 0 || t >= num_qubits) throw std::invalid_argument("target qubit out of range");
    if (seen[static_cast<std::size_t>(t)])
      throw std::invalid_argument("duplicate target qubit");
    seen[static_cast<std::size_t>(t)] = true;
  }
}

// Global-index bit pattern for each local index over the target qubits.
// Local bit j (MSB first) maps to global bit of qubit targets[j].
inline std::vector<Eigen::Index> scatter_table(int num_qubits, const std::vector<int>& targets) {
  const int k = static_cast<int>(targets.size());
  std::vector<Eigen::Index> scat(std::size_t{1} << k, 0);
  for (Eigen::Index l = 0; l < (Eigen::Index{1} << k); ++l) {
    Eigen::Index g = 0;
    for (int j = 0; j < k; ++j)
      if ((l >> (k - 1 - j)) & 1) g |= Eigen::Index{1} << (num_qubits - 1 - targets[j]);
    scat[static_cast<std::size_t>(l)] = g;
  }
  return scat;
}

inline std::vector<int> remaining_qubits(int num_qubits, const std::vector<int>& targets) {
  std::vector<bool> is_target(static_cast<std::size_t>(num_qubits), false);
  for (int t : targets) is_target[static_cast<std::size_t>(t)] = true;
  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(num_qubits) - targets.size());
  for (int q = 0; q < num_qubits; ++q)
    if (!is_target[static_cast<std::size_t>(q)]) rest.push_back(q);
  return rest;
}

}  // namespace detail

// Applies u to the listed qubits, identity elsewhere. targets[j] receives
// local qubit j of u (u's qubit 0 is its own leftmost label).
template <typename RealT>
BasicKet<RealT> apply_unitary(const BasicKet<RealT>& state, const BasicUnitary<RealT>& u,
                              const std::vector<int>& targets) {
  const int n = state.num_qubits();
  detail::check_targets(n, targets, u.arity());
  const auto scat = detail::scatter_table(n, targets);
  Eigen::Index tmask = 0;
  for (int t : targets) tmask |= Eigen::Index{1} << (n - 1 - t);
  const Eigen::Index dim = state.dim();
  const Eigen::Index ldim = Eigen::Index{1} << targets.size();
  AmpVector<RealT> out(dim);
  AmpVector<RealT> local(ldim);
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (base & tmask) continue;
    for (Eigen::Index l = 0; l < ldim; ++l)
      local(l) = state.amplitude(base | scat[static_cast<std::size_t>(l)]);
    const AmpVector<RealT> transformed = u.entries() * local;
    for (Eigen::Index l = 0; l < ldim; ++l)
      out(base | scat[static_cast<std::size_t>(l)]) = transformed(l);
  }
  return BasicKet<RealT>(out);
}

namespace detail {

// Unnormalized residual on the unmeasured qubits after projecting the
// targets onto basis vector `outcome`.
template <typename RealT>
AmpVector<RealT> residual_vector(const BasicKet<RealT>& state,
                                 const BasicOrthonormalBasis<RealT>& basis, std::size_t outcome,
                                 const std::vector<int>& targets) {
  const int n = state.num_qubits();
  const auto scat = scatter_table(n, targets);
  const auto rest = remaining_qubits(n, targets);
  const auto rscat = scatter_table(n, rest);
  const Eigen::Index ldim = Eigen::Index{1} << targets.size();
  const Eigen::Index rdim = Eigen::Index{1} << rest.size();
  const auto& v = basis.vector(outcome).amplitudes();
  AmpVector<RealT> w(rdim);
  for (Eigen::Index r = 0; r < rdim; ++r) {
    ComplexT<RealT> acc{};
    for (Eigen::Index l = 0; l < ldim; ++l)
      acc += std::conj(v(l)) *
             state.amplitude(scat[static_cast<std::size_t>(l)] | rscat[static_cast<std::size_t>(r)]);
    w(r) = acc;
  }
  return w;
}

}  // namespace detail

// Born probabilities of every basis outcome for a measurement of the listed
// qubits. Sums to 1 within kPipelineTol for a valid basis.
template <typename RealT>
RealVector<RealT> projection_weights(const BasicKet<RealT>& state,
                                     const BasicOrthonormalBasis<RealT>& basis,
                                     const std::vector<int>& targets) {
  detail::check_targets(state.num_qubits(), targets, basis.arity());
  RealVector<RealT> weights(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t o = 0; o < basis.size(); ++o)
    weights(static_cast<Eigen::Index>(o)) =
        detail::residual_vector(state, basis, o, targets).squaredNorm();
  return weights;
}

// Deterministic collapse onto one outcome: (probability, post-state with the
// measured qubits removed). Throws on a zero-probability outcome.
template <typename RealT>
std::pair<RealT, BasicKet<RealT>> project_onto(const BasicKet<RealT>& state,
                                               const BasicOrthonormalBasis<RealT>& basis,
                                               std::size_t outcome,
                                               const std::vector<int>& targets) {
  detail::check_targets(state.num_qubits(), targets, basis.arity());
  if (outcome >= basis.size()) throw std::invalid_argument("project_onto: outcome out of range");
  AmpVector<RealT> w = detail::residual_vector(state, basis, outcome, targets);
  const RealT p = w.squaredNorm();
  if (!(p > RealT(0)))
    throw std::runtime_error("project_onto: zero-probability outcome");
  w /= std::sqrt(p);
  return {p, BasicKet<RealT>(w)};
}

// First index whose cumulative weight exceeds the draw; never selects a
// zero-weight outcome. Throws if all weights vanish.
template <typename RealT, typename Rng>
int sample_index(const RealVector<RealT>& weights, Rng& rng) {
  const RealT total = weights.sum();
  if (!(total > RealT(0)) || !std::isfinite(static_cast<double>(total)))
    throw std::runtime_error("sample_index: all outcome weights vanished");
  const RealT u = static_cast<RealT>(rng.uniform()) * total;
  RealT cum{};
  int last_positive = -1;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights(i) > RealT(0)) last_positive = static_cast<int>(i);
    cum += weights(i);
    if (cum > u && weights(i) > RealT(0)) return static_cast<int>(i);
  }
  return last_positive;  // rounding pushed the cumulative sum below the draw
}

template <typename RealT>
struct MeasurementResult {
  int outcome;
  RealT probability;
  BasicKet<RealT> collapsed;
};

// Random projective measurement of the listed qubits in the given basis.
// The measured qubits are removed from the returned state.
template <typename RealT, typename Rng>
MeasurementResult<RealT> measure_in_basis(const BasicKet<RealT>& state,
                                          const BasicOrthonormalBasis<RealT>& basis,
                                          const std::vector<int>& targets, Rng& rng) {
  const RealVector<RealT> weights = projection_weights(state, basis, targets);
  const int o = sample_index(weights, rng);
  auto [p, collapsed] = project_onto(state, basis, static_cast<std::size_t>(o), targets);
  return {o, p, std::move(collapsed)};
}

using Ket = BasicKet<double>;
using UnitaryMatrix = BasicUnitary<double>;
using OrthonormalBasis = BasicOrthonormalBasis<double>;
using Measurement = MeasurementResult<double>;

}  // namespace qtel
