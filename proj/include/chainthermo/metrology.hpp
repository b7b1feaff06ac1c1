#pragma once

// Fisher information of the probe as a thermometer: QFI, CFI of a sigma_z
// readout, observable-based Fisher information and the two-qubit closed and
// approximate forms.

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "chainthermo/chain_model.hpp"
#include "chainthermo/errors.hpp"
#include "chainthermo/fermion.hpp"
#include "chainthermo/gibbs.hpp"

namespace chainthermo {

namespace detail {

inline void require_interior(double p, double hole) {
  if (!(p > 0.0) || !(hole > 0.0) || !std::isfinite(p) || !std::isfinite(hole))
    throw BoundaryError("population at the boundary (p = " + std::to_string(p) +
                        "); Fisher information is not defined there");
}

}  // namespace detail

/// QFI of diag(p, 1 - p) with 1 - p supplied separately (hole) to keep
/// precision near p = 1.
inline double qfi_from_split_population(double p, double hole, double dp) {
  detail::require_interior(p, hole);
  return dp * dp / (p * hole);
}

/// dp^2 / (p (1 - p)).
inline double qfi_from_population(double p, double dp) { return qfi_from_split_population(p, 1.0 - p, dp); }

/// Sum over the two sigma_z outcomes of (d prob)^2 / prob.
inline double cfi_from_split_population(double p, double hole, double dp) {
  detail::require_interior(p, hole);
  return dp * dp / p + dp * dp / hole;
}

inline double cfi_from_population(double p, double dp) { return cfi_from_split_population(p, 1.0 - p, dp); }

/// Scaled auxiliaries of the two-qubit QFI:
///   b_term    = -sinh(omega_s/T) sinh(eta/T) (eta + omega_s cos 2theta)
///   zeta_term =  cosh(omega_s/T) cosh(eta/T) (omega_s + eta cos 2theta)
/// both multiplied by e^{-log_scale}, and alpha_term = u^2 / chi^2 with
/// u = sinh(omega_s/T) + cos 2theta sinh(eta/T). The QFI numerator is
/// K = omega_s + eta cos 2theta + zeta + B.
struct TwoQubitQfiAuxiliaries {
  double b_term = 0.0;
  double zeta_term = 0.0;
  double alpha_term = 0.0;
  double log_scale = 0.0;
};

inline TwoQubitQfiAuxiliaries two_qubit_qfi_auxiliaries(const TwoQubitClosedForm& cf, double temperature) {
  detail::require_positive_temperature(temperature);
  const double a = cf.omega_s / temperature, b = cf.eta / temperature;
  const double m = std::max(a, b);
  // sinh/cosh of a and b each scaled by e^{-m}
  const double sa = 0.5 * (std::exp(a - m) - std::exp(-a - m));
  const double ca = 0.5 * (std::exp(a - m) + std::exp(-a - m));
  const double sb = 0.5 * (std::exp(b - m) - std::exp(-b - m));
  const double cb = 0.5 * (std::exp(b - m) + std::exp(-b - m));
  const double c2 = cf.cos2theta();
  TwoQubitQfiAuxiliaries aux;
  aux.log_scale = 2.0 * m;
  aux.b_term = -sa * sb * (cf.eta + cf.omega_s * c2);
  aux.zeta_term = ca * cb * (cf.omega_s + cf.eta * c2);
  const double u = sa + c2 * sb;
  const double chi = ca + cb;
  aux.alpha_term = (u * u) / (chi * chi);
  return aux;
}

/// Exact two-qubit QFI, K^2 / (T^4 chi^2 (chi - u)(chi + u)).
///
/// K is evaluated as sin^2 theta omega_- (1 + cosh(omega_+/T)) +
/// cos^2 theta omega_+ (1 + cosh(omega_-/T)), the same quantity as
/// omega_s + eta cos 2theta + zeta + B without the cancellation between zeta
/// and B; chi -/+ u are sums of positive exponentials.
inline double qfi_exact_two_qubit(const TwoQubitClosedForm& cf, double temperature) {
  detail::require_positive_temperature(temperature);
  const double t = temperature;
  const double a = cf.omega_s / t, b = cf.eta / t;
  const double m = std::max(a, b);
  const double s2 = cf.sin2(), c2 = cf.cos2();
  const double chi_minus_u = std::exp(-a - m) + s2 * std::exp(b - m) + c2 * std::exp(-b - m);
  const double chi_plus_u = std::exp(a - m) + c2 * std::exp(b - m) + s2 * std::exp(-b - m);
  const double chi = 0.5 * (chi_minus_u + chi_plus_u);
  const double m2 = 2.0 * m;
  const auto ch = [m2](double x) { return 0.5 * (std::exp(x - m2) + std::exp(-x - m2)); };
  const double floor = std::exp(-m2);
  const double k = s2 * cf.omega_minus * (floor + ch(a + b)) + c2 * cf.omega_plus * (floor + ch(a - b));
  detail::require_interior(chi_minus_u, chi_plus_u);
  const double t2 = t * t;
  const double r = k / (t2 * chi);
  return r * r / (chi_minus_u * chi_plus_u);
}

struct PopulationApproximations {
  double p_low = 0.0, dp_low = 0.0;
  double p_high = 0.0, dp_high = 0.0;
};

/// Low-T: only the omega_- channel is active, p ~ sin^2 theta f(omega_-/T).
/// High-T: p ~ f(omega_+/T). f is the Fermi function 1/(1 + e^x).
inline PopulationApproximations population_approximations(const TwoQubitClosedForm& cf, double temperature) {
  detail::require_positive_temperature(temperature);
  const double t2 = temperature * temperature;
  const double xm = cf.omega_minus / temperature;
  const double xp = cf.omega_plus / temperature;
  PopulationApproximations out;
  out.p_low = cf.sin2() * detail::fermi(xm);
  out.dp_low = cf.sin2() * cf.omega_minus * detail::fermi_variance(xm) / t2;
  out.p_high = detail::fermi(xp);
  out.dp_high = cf.omega_plus * detail::fermi_variance(xp) / t2;
  return out;
}

struct QfiApproximation {
  double low = 0.0;
  double high = 0.0;
  double total = 0.0;
};

/// low  = omega_-^2 sin^2 theta e^{2x} / (T^4 (1 + e^x)^2 (cos^2 theta + e^x)), x = omega_-/T
/// high = omega_+^2 sech^2(omega_+/2T) / (4 T^4)
inline QfiApproximation qfi_approx(const TwoQubitClosedForm& cf, double temperature) {
  detail::require_positive_temperature(temperature);
  const double t4 = std::pow(temperature, 4);
  const double x = cf.omega_minus / temperature;
  const double s2 = cf.sin2(), c2 = cf.cos2();
  double shape;
  if (x > 0.0) {
    const double r = std::exp(-x);  // divide through by e^{3x}
    shape = r / ((r + 1.0) * (r + 1.0) * (c2 * r + 1.0));
  } else {
    const double ex = std::exp(x);
    shape = ex * ex / ((1.0 + ex) * (1.0 + ex) * (c2 + ex));
  }
  QfiApproximation out;
  out.low = cf.omega_minus * cf.omega_minus * s2 * shape / t4;
  out.high = cf.omega_plus * cf.omega_plus * detail::fermi_variance(cf.omega_plus / temperature) / t4;
  out.total = out.low + out.high;
  return out;
}

enum class Observable { sigma_z, sigma_x };

inline std::string to_string(Observable o) { return o == Observable::sigma_z ? "sigma_z" : "sigma_x"; }

/// (d<X>/dT)^2 / Var(X) on a probe state rho with derivative drho.
inline double observable_fisher(const Eigen::Matrix2cd& rho, const Eigen::Matrix2cd& drho, Observable o) {
  if (o == Observable::sigma_z) {
    const double p = rho(0, 0).real(), q = rho(1, 1).real();
    detail::require_interior(p, q);
    const double d_mean = drho(0, 0).real() - drho(1, 1).real();
    return d_mean * d_mean / (4.0 * p * q);
  }
  const double mean = 2.0 * rho(0, 1).real();
  const double var = 1.0 - mean * mean;
  if (!(var > 0.0)) throw BoundaryError("sigma_x has zero variance on this state");
  const double d_mean = 2.0 * drho(0, 1).real();
  return d_mean * d_mean / var;
}

inline double observable_fisher(const ExactProbeModel& model, double temperature, Observable o) {
  const ProbeState s = model.probe_state(temperature);
  Eigen::Matrix2cd rho = s.density;
  rho(1, 1) = s.hole;
  return observable_fisher(rho, model.density_derivative(temperature), o);
}

inline double observable_fisher(const ChainSpec& spec, double temperature, Observable o) {
  detail::require_positive_temperature(temperature);
  return observable_fisher(ExactProbeModel(spec), temperature, o);
}

struct FisherPoint {
  double temperature = 0.0;
  double qfi = 0.0;
  double cfi = 0.0;
  double fi_sigma_z = 0.0;
  double fi_sigma_x = 0.0;
  double population = 0.0;
  double population_derivative = 0.0;
  bool boundary = false;  // p underflowed to 0 or 1; Fisher fields are reported as 0
};

/// All Fisher quantities from the exact-diagonalization model.
inline FisherPoint fisher_point(const ExactProbeModel& model, double temperature) {
  FisherPoint f;
  f.temperature = temperature;
  const ProbeState s = model.probe_state(temperature);
  const Eigen::Matrix2cd drho = model.density_derivative(temperature);
  f.population = s.p;
  f.population_derivative = drho(0, 0).real();
  try {
    f.qfi = qfi_from_split_population(s.p, s.hole, f.population_derivative);
    f.cfi = cfi_from_split_population(s.p, s.hole, f.population_derivative);
    Eigen::Matrix2cd rho = s.density;
    rho(1, 1) = s.hole;
    f.fi_sigma_z = observable_fisher(rho, drho, Observable::sigma_z);
    f.fi_sigma_x = observable_fisher(rho, drho, Observable::sigma_x);
  } catch (const BoundaryError&) {
    f = FisherPoint{temperature, 0.0, 0.0, 0.0, 0.0, s.p, f.population_derivative, true};
  }
  return f;
}

/// Same quantities from the free-fermion spectrum. The fermionic probe state
/// is diagonal, so the sigma_x readout carries no information.
inline FisherPoint fisher_point(const TransitionSpectrum& spectrum, double temperature) {
  FisherPoint f;
  f.temperature = temperature;
  f.population = fermionic_probe_population(spectrum, temperature);
  const double hole = fermionic_probe_hole(spectrum, temperature);
  f.population_derivative = fermionic_probe_population_derivative(spectrum, temperature);
  try {
    f.qfi = qfi_from_split_population(f.population, hole, f.population_derivative);
    f.cfi = cfi_from_split_population(f.population, hole, f.population_derivative);
    const double d_mean = 2.0 * f.population_derivative;
    f.fi_sigma_z = d_mean * d_mean / (4.0 * f.population * hole);
  } catch (const BoundaryError&) {
    f.qfi = f.cfi = f.fi_sigma_z = 0.0;
    f.boundary = true;
  }
  return f;
}

}  // namespace chainthermo
