#pragma once

// Qubit-chain parameterization and the XX + DM spin Hamiltonian.
//
// Conventions used throughout the library:
//   * energies in units of the probe frequency, k_B = hbar = 1;
//   * qubit 1 is the most significant tensor factor, the probe (qubit N) the
//     least significant one;
//   * computational state |0> is spin up (sigma_z = +1).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "chainthermo/errors.hpp"

namespace chainthermo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Dense 2^N matrices only; 4096 x 4096 complex is the largest we build.
inline constexpr int kMaxQubits = 12;

struct ChainSpec {
  std::vector<double> omegas;        // omega_1 .. omega_N, omega_N is the probe
  std::vector<double> xx_couplings;  // J_1 .. J_{N-1}
  std::vector<double> dm_couplings;  // g_1 .. g_{N-1}

  int n_qubits() const { return static_cast<int>(omegas.size()); }

  /// Throws ConfigError unless lengths are N, N-1, N-1, all entries are
  /// finite, every omega is positive and 2 <= N <= kMaxQubits.
  void validate() const {
    const auto n = omegas.size();
    if (n < 2) throw ConfigError("chain needs at least 2 qubits");
    if (n > static_cast<std::size_t>(kMaxQubits))
      throw ConfigError("chain has " + std::to_string(n) + " qubits; dense limit is " +
                        std::to_string(kMaxQubits));
    if (xx_couplings.size() != n - 1 || dm_couplings.size() != n - 1)
      throw ConfigError("expected " + std::to_string(n - 1) + " XX and DM couplings, got " +
                        std::to_string(xx_couplings.size()) + " and " +
                        std::to_string(dm_couplings.size()));
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(omegas[i])) throw ConfigError("omega" + std::to_string(i + 1) + " is not finite");
      if (omegas[i] <= 0.0) throw ConfigError("omega" + std::to_string(i + 1) + " must be positive");
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!std::isfinite(xx_couplings[i])) throw ConfigError("J" + std::to_string(i + 1) + " is not finite");
      if (!std::isfinite(dm_couplings[i])) throw ConfigError("g" + std::to_string(i + 1) + " is not finite");
    }
  }

  /// Ancilla (qubit 1) coupled to the probe (qubit 2).
  static ChainSpec two_qubit(double omega_a, double omega_p, double xx, double dm) {
    return ChainSpec{{omega_a, omega_p}, {xx}, {dm}};
  }

  bool operator==(const ChainSpec&) const = default;
};

/// Addresses one entry of a ChainSpec by name: "omegaK", "JK" or "gK",
/// K 1-based as in the chain numbering.
struct ParameterSelector {
  enum class Kind { omega, xx, dm };
  Kind kind = Kind::omega;
  int index = 1;

  static ParameterSelector parse(const std::string& text) {
    ParameterSelector sel;
    std::string digits;
    if (text.rfind("omega", 0) == 0) {
      sel.kind = Kind::omega;
      digits = text.substr(5);
    } else if (!text.empty() && (text[0] == 'J' || text[0] == 'g')) {
      sel.kind = text[0] == 'J' ? Kind::xx : Kind::dm;
      digits = text.substr(1);
    } else {
      throw ConfigError("bad parameter selector '" + text + "' (want omegaK, JK or gK)");
    }
    if (digits.empty() || digits.size() > 3 ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw ConfigError("bad parameter selector '" + text + "' (missing index)");
    sel.index = std::stoi(digits);
    if (sel.index < 1) throw ConfigError("parameter selector index must be >= 1: '" + text + "'");
    return sel;
  }

  std::string name() const {
    const char* prefix = kind == Kind::omega ? "omega" : kind == Kind::xx ? "J" : "g";
    return prefix + std::to_string(index);
  }

  double get(const ChainSpec& spec) const { return slot(spec, *this); }

  ChainSpec apply(ChainSpec spec, double value) const {
    slot(spec, *this) = value;
    return spec;
  }

  bool operator==(const ParameterSelector&) const = default;

 private:
  template <class Spec>
  static std::conditional_t<std::is_const_v<Spec>, const double&, double&> slot(
      Spec& spec, const ParameterSelector& sel) {
    auto& v = sel.kind == Kind::omega ? spec.omegas
              : sel.kind == Kind::xx  ? spec.xx_couplings
                                      : spec.dm_couplings;
    if (sel.index > static_cast<int>(v.size()))
      throw ConfigError("selector " + sel.name() + " does not exist in a chain of " +
                        std::to_string(spec.n_qubits()) + " qubits");
    return v[sel.index - 1];
  }
};

enum class Axis { x, y, z };

namespace detail {

inline Eigen::Matrix2cd pauli(Axis axis) {
  Eigen::Matrix2cd m;
  switch (axis) {
    case Axis::x: m << 0.0, 1.0, 1.0, 0.0; break;
    case Axis::y: m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0; break;
    case Axis::z: m << 1.0, 0.0, 0.0, -1.0; break;
  }
  return m;
}

// Bit of `site` (1-based) inside a basis index; qubit 1 is the top bit.
inline int site_bit(std::size_t index, int site, int n_qubits) {
  return static_cast<int>((index >> (n_qubits - site)) & 1U);
}

}  // namespace detail

/// sigma^axis acting on `site`, identity elsewhere.
inline ComplexMatrix pauli_at(int site, Axis axis, int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw ConfigError("n_qubits out of range: " + std::to_string(n_qubits));
  if (site < 1 || site > n_qubits)
    throw ConfigError("site " + std::to_string(site) + " outside 1.." + std::to_string(n_qubits));
  const std::size_t dim = std::size_t{1} << n_qubits;
  const Eigen::Matrix2cd s = detail::pauli(axis);
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  const std::size_t mask = std::size_t{1} << (n_qubits - site);
  for (std::size_t col = 0; col < dim; ++col) {
    const int b = detail::site_bit(col, site, n_qubits);
    for (int a = 0; a < 2; ++a) {
      const Complex amp = s(a, b);
      if (amp == Complex(0.0)) continue;
      const std::size_t row = a == b ? col : (col ^ mask);
      out(row, col) = amp;
    }
  }
  return out;
}

/// H = sum_i (omega_i/2) sz_i + sum_i J_i (sx sx + sy sy) + sum_i g_i (sx sy - sy sx).
///
/// Built directly in the computational basis: the exchange terms only hop an
/// excitation between neighbours, with amplitude 2(J_i + i g_i) for moving it
/// from site i+1 to site i.
inline ComplexMatrix build_hamiltonian(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.n_qubits();
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    double diag = 0.0;
    for (int site = 1; site <= n; ++site) {
      const double sz = detail::site_bit(idx, site, n) == 0 ? 1.0 : -1.0;
      diag += 0.5 * spec.omegas[site - 1] * sz;
    }
    h(idx, idx) = diag;
  }
  for (int site = 1; site < n; ++site) {
    const Complex hop(2.0 * spec.xx_couplings[site - 1], 2.0 * spec.dm_couplings[site - 1]);
    const std::size_t left = std::size_t{1} << (n - site);
    const std::size_t right = std::size_t{1} << (n - site - 1);
    for (std::size_t idx = 0; idx < dim; ++idx) {
      // idx: site down, site+1 up  ->  target: site up, site+1 down
      if ((idx & left) != 0 && (idx & right) == 0) {
        const std::size_t target = idx ^ left ^ right;
        h(target, idx) += hop;
        h(idx, target) += std::conj(hop);
      }
    }
  }
  return h;
}

/// Closed-form two-qubit quantities (ancilla frequency omega_a, probe omega_p).
struct TwoQubitClosedForm {
  double omega_a = 0.0;
  double omega_p = 0.0;
  double xx = 0.0;
  double dm = 0.0;
  double omega_s = 0.0;  // (omega_p + omega_a) / 2
  double omega_d = 0.0;  // (omega_p - omega_a) / 2
  double eta = 0.0;      // sqrt(omega_d^2 + 4 g^2 + 4 J^2)
  double delta = 0.0;    // sqrt(4 J^2 + 4 g^2 + (omega_d - eta)^2)
  double theta = 0.0;    // asin((omega_d - eta) / delta), 0 when delta == 0
  double omega_minus = 0.0;
  double omega_plus = 0.0;

  double cos2theta() const { return std::cos(2.0 * theta); }
  double sin2theta() const { return std::sin(2.0 * theta); }
  double sin2() const { double s = std::sin(theta); return s * s; }
  double cos2() const { double c = std::cos(theta); return c * c; }

  /// Unit phase of J + i g; 1 for the decoupled pair.
  Complex coupling_phase() const {
    const double mag = std::hypot(xx, dm);
    return mag > 0.0 ? Complex(xx / mag, dm / mag) : Complex(1.0, 0.0);
  }

  /// chi(T) = cosh(eta/T) + cosh(omega_s/T). Overflows for T << omega_s;
  /// the thermal routines use rescaled forms instead.
  double chi_at(double temperature) const {
    return std::cosh(eta / temperature) + std::cosh(omega_s / temperature);
  }
};

inline TwoQubitClosedForm two_qubit_closed_form(double omega_a, double omega_p, double xx,
                                                double dm) {
  if (!std::isfinite(omega_a) || !std::isfinite(omega_p) || !std::isfinite(xx) ||
      !std::isfinite(dm))
    throw ConfigError("two-qubit parameters must be finite");
  TwoQubitClosedForm cf;
  cf.omega_a = omega_a;
  cf.omega_p = omega_p;
  cf.xx = xx;
  cf.dm = dm;
  cf.omega_s = 0.5 * (omega_p + omega_a);
  cf.omega_d = 0.5 * (omega_p - omega_a);
  const double coupling2 = 4.0 * (xx * xx + dm * dm);
  cf.eta = std::sqrt(cf.omega_d * cf.omega_d + coupling2);
  const double gap = cf.omega_d - cf.eta;
  cf.delta = std::sqrt(coupling2 + gap * gap);
  cf.theta = cf.delta > 0.0 ? std::asin(std::clamp(gap / cf.delta, -1.0, 1.0)) : 0.0;
  cf.omega_minus = cf.omega_s - cf.eta;
  cf.omega_plus = cf.omega_s + cf.eta;
  return cf;
}

inline TwoQubitClosedForm two_qubit_closed_form(const ChainSpec& spec) {
  spec.validate();
  if (spec.n_qubits() != 2) throw ConfigError("closed forms need a two-qubit chain");
  return two_qubit_closed_form(spec.omegas[0], spec.omegas[1], spec.xx_couplings[0],
                               spec.dm_couplings[0]);
}

}  // namespace chainthermo
