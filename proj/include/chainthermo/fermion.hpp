#pragma once

// Free-fermion route. After a Jordan-Wigner transformation the chain is a
// quadratic hopping model c^dagger M c with an N x N tridiagonal M, so every
// thermal probe quantity follows from the eigenpairs of M.
//
// The eigensolver here is deliberately self-contained (no Eigen): this path
// is the independent cross-check of the exact-diagonalization route.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "chainthermo/chain_model.hpp"
#include "chainthermo/errors.hpp"

namespace chainthermo {

/// Hermitian tridiagonal M: diagonal omega_i, upper band 2(J_i + i g_i).
struct MMatrix {
  std::vector<double> diagonal;
  std::vector<Complex> upper;  // M_{i,i+1}; M_{i+1,i} is its conjugate

  int dimension() const { return static_cast<int>(diagonal.size()); }

  Complex operator()(int row, int col) const {
    if (row == col) return diagonal[row];
    if (col == row + 1) return upper[row];
    if (row == col + 1) return std::conj(upper[col]);
    return 0.0;
  }
};

inline MMatrix build_m_matrix(const ChainSpec& spec) {
  spec.validate();
  MMatrix m;
  m.diagonal = spec.omegas;
  m.upper.reserve(spec.xx_couplings.size());
  for (std::size_t i = 0; i < spec.xx_couplings.size(); ++i)
    m.upper.emplace_back(2.0 * spec.xx_couplings[i], 2.0 * spec.dm_couplings[i]);
  return m;
}

struct TransitionSpectrum {
  std::vector<double> energies;       // E_l ascending
  std::vector<double> probe_weights;  // |U_{N,l}|^2
  // U with M = U diag(E) U^dagger, stored column-major: modes[l][i] = U_{i,l}.
  std::vector<std::vector<Complex>> modes;

  int size() const { return static_cast<int>(energies.size()); }
};

namespace detail {

// Implicit QL with Wilkinson-style shifts on a real symmetric tridiagonal
// matrix (the classic tql2 scheme). d: diagonal, e[i]: coupling between i and
// i+1 (e.back() unused). z accumulates the rotations, z[row][col].
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double> e,
                           std::vector<std::vector<double>>& z) {
  const int n = static_cast<int>(d.size());
  e.resize(n, 0.0);
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 60)
          throw NumericalError("tridiagonal QL did not converge at index " + std::to_string(l));
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          e[i + 1] = (r = std::hypot(f, g));
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = z[k][i + 1];
            z[k][i + 1] = s * z[k][i] + c * f;
            z[k][i] = c * z[k][i] - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// 1/(1+e^x) without overflow.
inline double fermi(double x) {
  if (x > 0.0) {
    const double t = std::exp(-x);
    return t / (1.0 + t);
  }
  return 1.0 / (1.0 + std::exp(x));
}

// f(x)(1 - f(x)) = e^{-|x|} / (1 + e^{-|x|})^2
inline double fermi_variance(double x) {
  const double t = std::exp(-std::abs(x));
  return t / ((1.0 + t) * (1.0 + t));
}

// log(1 + e^y)
inline double softplus(double y) { return std::max(y, 0.0) + std::log1p(std::exp(-std::abs(y))); }

inline void require_positive_temperature(double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");
}

}  // namespace detail

/// Eigenpairs of M. A diagonal phase gauge D = diag(e^{i phi_k}) makes
/// D^dagger M D real symmetric with couplings |M_{k,k+1}|; QL on that matrix
/// gives Q, and U = D Q.
inline TransitionSpectrum transition_spectrum(const MMatrix& m) {
  const int n = m.dimension();
  if (n < 1) throw ConfigError("M matrix is empty");
  if (static_cast<int>(m.upper.size()) != n - 1) throw ConfigError("M matrix band has wrong length");
  for (double x : m.diagonal)
    if (!std::isfinite(x)) throw ConfigError("M matrix has a non-finite diagonal entry");
  for (const Complex& x : m.upper)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw ConfigError("M matrix has a non-finite coupling");

  std::vector<double> phase(n, 0.0);
  std::vector<double> off(n, 0.0);
  for (int k = 0; k + 1 < n; ++k) {
    off[k] = std::abs(m.upper[k]);
    phase[k + 1] = phase[k] - std::arg(m.upper[k]);
  }
  std::vector<double> d = m.diagonal;
  std::vector<std::vector<double>> z(n, std::vector<double>(n, 0.0));
  for (int k = 0; k < n; ++k) z[k][k] = 1.0;
  detail::tridiagonal_ql(d, off, z);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&d](int a, int b) { return d[a] < d[b]; });

  TransitionSpectrum out;
  out.energies.resize(n);
  out.probe_weights.resize(n);
  out.modes.assign(n, std::vector<Complex>(n));
  for (int l = 0; l < n; ++l) {
    const int src = order[l];
    out.energies[l] = d[src];
    for (int i = 0; i < n; ++i) out.modes[l][i] = std::polar(1.0, phase[i]) * z[i][src];
    const double probe = z[n - 1][src];
    out.probe_weights[l] = probe * probe;
  }
  return out;
}

inline TransitionSpectrum transition_spectrum(const ChainSpec& spec) {
  return transition_spectrum(build_m_matrix(spec));
}

/// log Z = sum_l log(1 + e^{-E_l/T}). The spin-space partition function is
/// this times e^{sum_i omega_i / 2T}.
inline double partition_function(const TransitionSpectrum& spectrum, double temperature) {
  detail::require_positive_temperature(temperature);
  double log_z = 0.0;
  for (double e : spectrum.energies) log_z += detail::softplus(-e / temperature);
  return log_z;
}

/// <c_N^dagger c_N> = sum_l w_l / (1 + e^{E_l/T}). The Jordan-Wigner particle
/// is spin up (n = (1 + sz)/2), so this is the probe spin-up population.
inline double fermionic_probe_population(const TransitionSpectrum& spectrum, double temperature) {
  detail::require_positive_temperature(temperature);
  double p = 0.0;
  for (int l = 0; l < spectrum.size(); ++l)
    p += spectrum.probe_weights[l] * detail::fermi(spectrum.energies[l] / temperature);
  return p;
}

/// 1 - p accumulated from the complementary Fermi factors, so it keeps full
/// relative precision when p -> 1.
inline double fermionic_probe_hole(const TransitionSpectrum& spectrum, double temperature) {
  detail::require_positive_temperature(temperature);
  double q = 0.0;
  for (int l = 0; l < spectrum.size(); ++l)
    q += spectrum.probe_weights[l] * detail::fermi(-spectrum.energies[l] / temperature);
  return q;
}

/// dp/dT = sum_l w_l f(1 - f) E_l / T^2.
inline double fermionic_probe_population_derivative(const TransitionSpectrum& spectrum,
                                                    double temperature) {
  detail::require_positive_temperature(temperature);
  double dp = 0.0;
  const double t2 = temperature * temperature;
  for (int l = 0; l < spectrum.size(); ++l) {
    const double e = spectrum.energies[l];
    dp += spectrum.probe_weights[l] * detail::fermi_variance(e / temperature) * e / t2;
  }
  return dp;
}

/// E_l(x) for x on a grid of one parameter; row k belongs to grid[k].
struct TransitionTable {
  ParameterSelector parameter;
  std::vector<double> grid;
  std::vector<std::vector<double>> energies;
};

inline TransitionTable transitions_vs_parameter(const ChainSpec& spec, const ParameterSelector& parameter,
                                                const std::vector<double>& grid) {
  spec.validate();
  parameter.get(spec);  // rejects selectors outside the chain
  TransitionTable table;
  table.parameter = parameter;
  table.grid = grid;
  table.energies.reserve(grid.size());
  for (double x : grid) table.energies.push_back(transition_spectrum(parameter.apply(spec, x)).energies);
  return table;
}

}  // namespace chainthermo
