// bases.hpp
// Parameterized measurement bases and channel states: the generalized Bell
// basis with weight m, the generalized X basis with weight b, and L-party
// GHZ channel states (|0...0> + n|1...1>) / sqrt(1 + |n|^2).
#pragma once

#include "qtel/statevec.hpp"

namespace qtel {

namespace detail {

template <typename RealT>
void check_finite_param(ComplexT<RealT> x, const char* what) {
  if (!std::isfinite(static_cast<double>(x.real())) ||
      !std::isfinite(static_cast<double>(x.imag())) ||
      !std::isfinite(static_cast<double>(std::norm(x))))
    throw std::invalid_argument(std::string(what) + ": parameter is not finite");
}

}  // namespace detail

// 1 / sqrt(1 + |x|^2), the normalization attached to a weight parameter.
template <typename RealT = double>
RealT normalizer(ComplexT<RealT> x) {
  detail::check_finite_param(x, "normalizer");
  return RealT(1) / std::sqrt(RealT(1) + std::norm(x));
}

// Order is fixed: phi+, phi-, psi+, psi-.
//   |phi+> = M (|00> + m|11>)      |phi-> = M (m*|00> - |11>)
//   |psi+> = M (|01> + m|10>)      |psi-> = M (m*|01> - |10>)
template <typename RealT = double>
struct BasicBellBasis {
  ComplexT<RealT> m;
  BasicOrthonormalBasis<RealT> basis;
};

template <typename RealT = double>
BasicBellBasis<RealT> bell_basis(ComplexT<RealT> m) {
  const RealT M = normalizer(m);
  const ComplexT<RealT> mc = std::conj(m);
  AmpVector<RealT> phip = AmpVector<RealT>::Zero(4);
  AmpVector<RealT> phim = AmpVector<RealT>::Zero(4);
  AmpVector<RealT> psip = AmpVector<RealT>::Zero(4);
  AmpVector<RealT> psim = AmpVector<RealT>::Zero(4);
  phip(0) = M;
  phip(3) = M * m;
  phim(0) = M * mc;
  phim(3) = -M;
  psip(1) = M;
  psip(2) = M * m;
  psim(1) = M * mc;
  psim(2) = -M;
  std::vector<BasicKet<RealT>> vs;
  vs.emplace_back(phip);
  vs.emplace_back(phim);
  vs.emplace_back(psip);
  vs.emplace_back(psim);
  return {m, BasicOrthonormalBasis<RealT>(std::move(vs))};
}

// Order is fixed: +, -.
//   |+> = a (|0> + b|1>)      |-> = a (b*|0> - |1>)
template <typename RealT = double>
struct BasicXBasis {
  ComplexT<RealT> b;
  BasicOrthonormalBasis<RealT> basis;
};

template <typename RealT = double>
BasicXBasis<RealT> x_basis(ComplexT<RealT> b) {
  const RealT a = normalizer(b);
  AmpVector<RealT> plus(2);
  AmpVector<RealT> minus(2);
  plus(0) = ComplexT<RealT>(a);
  plus(1) = a * b;
  minus(0) = a * std::conj(b);
  minus(1) = ComplexT<RealT>(-a);
  std::vector<BasicKet<RealT>> vs;
  vs.emplace_back(plus);
  vs.emplace_back(minus);
  return {b, BasicOrthonormalBasis<RealT>(std::move(vs))};
}

// (|0...0> + n|1...1>) / sqrt(1 + |n|^2) on num_parties qubits.
template <typename RealT = double>
BasicKet<RealT> make_ghz(ComplexT<RealT> n, int num_parties) {
  if (num_parties < 2)
    throw std::invalid_argument("make_ghz: a channel needs at least two parties");
  detail::check_finite_param(n, "make_ghz");
  const RealT N = normalizer(n);
  AmpVector<RealT> amps = AmpVector<RealT>::Zero(Eigen::Index{1} << num_parties);
  amps(0) = ComplexT<RealT>(N);
  amps(amps.size() - 1) = n * N;
  return BasicKet<RealT>(amps);
}

// Full channel parameterization: GHZ weight n on num_parties qubits, Bell
// weight m for the sender, one X weight per intermediate party.
struct ChannelConfig {
  Complex n{1.0, 0.0};
  Complex m{1.0, 0.0};
  std::vector<Complex> b_list{Complex{1.0, 0.0}};
  int num_parties = 3;

  int num_intermediates() const { return num_parties - 2; }

  bool operator==(const ChannelConfig&) const = default;

  void validate() const {
    if (num_parties < 2)
      throw std::invalid_argument("ChannelConfig: a channel needs at least two parties");
    if (static_cast<int>(b_list.size()) != num_parties - 2)
      throw std::invalid_argument("ChannelConfig: expected one X weight per intermediate party (" +
                                  std::to_string(num_parties - 2) + ", got " +
                                  std::to_string(b_list.size()) + ")");
    detail::check_finite_param(n, "ChannelConfig n");
    detail::check_finite_param(m, "ChannelConfig m");
    for (const Complex& b : b_list) detail::check_finite_param(b, "ChannelConfig b");
  }

  static ChannelConfig three_party(Complex n, Complex m, Complex b) {
    return ChannelConfig{n, m, {b}, 3};
  }

  static ChannelConfig uniform_b(Complex n, Complex m, Complex b, int num_parties) {
    ChannelConfig cfg;
    cfg.n = n;
    cfg.m = m;
    cfg.num_parties = num_parties;
    cfg.b_list.assign(num_parties >= 2 ? static_cast<std::size_t>(num_parties - 2) : 0, b);
    cfg.validate();
    return cfg;
  }
};

using BellBasis = BasicBellBasis<double>;
using XBasis = BasicXBasis<double>;

}  // namespace qtel
