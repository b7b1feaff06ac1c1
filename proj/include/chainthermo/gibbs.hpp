#pragma once

// Exact-diagonalization path: spectral decomposition, Gibbs weights, the
// probe's reduced state and its exact temperature derivative, plus the
// two-qubit thermal state in closed form.

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "chainthermo/chain_model.hpp"
#include "chainthermo/errors.hpp"

namespace chainthermo {

/// H = V diag(E) V^dagger with E ascending.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  ComplexMatrix eigenvectors;
};

inline double max_hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline SpectralDecomposition eigendecompose(const ComplexMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw ConfigError("operator must be square and non-empty");
  if (!h.allFinite()) throw NumericalError("operator has non-finite entries");
  if (max_hermiticity_defect(h) > 1e-12) throw ConfigError("operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw NumericalError("Hermitian eigensolver did not converge (dimension " +
                         std::to_string(h.rows()) + ")");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

struct GibbsState {
  std::shared_ptr<const SpectralDecomposition> decomposition;
  double temperature = 0.0;
  Eigen::VectorXd weights;  // lambda_k = exp(-E_k/T) / Z
  double log_partition = 0.0;
};

/// Boltzmann weights with the exponent shifted by the ground energy, so the
/// weights stay finite down to T ~ 1e-6 and below.
inline GibbsState gibbs_weights(std::shared_ptr<const SpectralDecomposition> decomp,
                                double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");
  const Eigen::VectorXd& e = decomp->eigenvalues;
  const double e_min = e.minCoeff();
  // std::exp rather than Eigen's vectorized exp, which clamps underflow to
  // the smallest normal number instead of returning 0.
  const Eigen::VectorXd w = (-(e.array() - e_min) / temperature).unaryExpr([](double x) { return std::exp(x); });
  const double sum = w.sum();
  GibbsState state;
  state.weights = w / sum;
  state.log_partition = -e_min / temperature + std::log(sum);
  state.temperature = temperature;
  state.decomposition = std::move(decomp);
  return state;
}

inline GibbsState gibbs_weights(const SpectralDecomposition& decomp, double temperature) {
  return gibbs_weights(std::make_shared<const SpectralDecomposition>(decomp), temperature);
}

struct ProbeState {
  double p = 0.0;           // probe spin-up population
  double hole = 0.0;        // 1 - p, accumulated separately
  double coherence_magnitude = 0.0;
  Eigen::Matrix2cd density = Eigen::Matrix2cd::Zero();  // basis {up, down}
};

/// Probe quantities of the full chain evaluated from one eigendecomposition.
///
/// Each eigenvector k contributes a reduced 2x2 block rho_k = Tr_A |v_k><v_k|;
/// at temperature T the probe state is sum_k lambda_k rho_k and, because the
/// partial trace is linear, its derivative is sum_k (d lambda_k / dT) rho_k
/// with d lambda_k / dT = lambda_k (E_k - <H>) / T^2.
class ExactProbeModel {
 public:
  explicit ExactProbeModel(const ChainSpec& spec)
      : spec_(spec),
        decomp_(std::make_shared<const SpectralDecomposition>(eigendecompose(build_hamiltonian(spec)))) {
    const auto& v = decomp_->eigenvectors;
    const Eigen::Index dim = v.rows();
    blocks_.resize(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
      for (Eigen::Index a = 0; a < dim / 2; ++a) {
        const Complex up = v(2 * a, k);
        const Complex down = v(2 * a + 1, k);
        rho(0, 0) += std::norm(up);
        rho(1, 1) += std::norm(down);
        rho(0, 1) += up * std::conj(down);
      }
      rho(1, 0) = std::conj(rho(0, 1));
      blocks_[k] = rho;
    }
  }

  const ChainSpec& spec() const { return spec_; }
  const SpectralDecomposition& decomposition() const { return *decomp_; }
  std::shared_ptr<const SpectralDecomposition> shared_decomposition() const { return decomp_; }

  GibbsState gibbs(double temperature) const { return gibbs_weights(decomp_, temperature); }

  ProbeState probe_state(double temperature) const {
    const GibbsState g = gibbs(temperature);
    ProbeState out;
    for (std::size_t k = 0; k < blocks_.size(); ++k) out.density += g.weights[k] * blocks_[k];
    out.p = out.density(0, 0).real();
    out.hole = out.density(1, 1).real();
    out.coherence_magnitude = std::abs(out.density(0, 1));
    return out;
  }

  /// d rho_probe / dT.
  Eigen::Matrix2cd density_derivative(double temperature) const {
    const GibbsState g = gibbs(temperature);
    const Eigen::VectorXd& e = decomp_->eigenvalues;
    const double e_min = e.minCoeff();
    double mean = 0.0;  // <E - E_min>
    for (Eigen::Index k = 0; k < e.size(); ++k) mean += g.weights[k] * (e[k] - e_min);
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (Eigen::Index k = 0; k < e.size(); ++k) rho += g.weights[k] * blocks_[k];
    Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
    // Centering the block by rho leaves the sum unchanged (sum of dlambda is 0)
    // and avoids cancellation between large equal-sign terms.
    for (Eigen::Index k = 0; k < e.size(); ++k)
      d += g.weights[k] * ((e[k] - e_min) - mean) * (blocks_[k] - rho);
    return d / (temperature * temperature);
  }

  double population_derivative(double temperature) const {
    return density_derivative(temperature)(0, 0).real();
  }

 private:
  ChainSpec spec_;
  std::shared_ptr<const SpectralDecomposition> decomp_;
  std::vector<Eigen::Matrix2cd> blocks_;
};

inline ProbeState probe_state(const ChainSpec& spec, double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");
  return ExactProbeModel(spec).probe_state(temperature);
}

inline double probe_population_derivative(const ChainSpec& spec, double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");
  return ExactProbeModel(spec).population_derivative(temperature);
}

namespace detail {

// exp(+-omega_s/T) and exp(+-eta/T), all divided by exp(m/T) with
// m = max(omega_s, eta), so every factor lies in (0, 1].
struct ScaledExponentials {
  double sp, sm, ep, em;  // e^{(ws-m)/T}, e^{(-ws-m)/T}, e^{(eta-m)/T}, e^{(-eta-m)/T}
  double partition;       // 2 chi e^{-m/T}

  ScaledExponentials(const TwoQubitClosedForm& cf, double t) {
    const double a = cf.omega_s / t;
    const double b = cf.eta / t;
    const double m = std::max(a, b);
    sp = std::exp(a - m);
    sm = std::exp(-a - m);
    ep = std::exp(b - m);
    em = std::exp(-b - m);
    partition = sp + sm + ep + em;
  }
};

}  // namespace detail

/// Two-qubit Gibbs state (ancilla = qubit 1) in the basis |00>,|01>,|10>,|11>.
///
/// With cos 2theta = omega_d / eta the central block reads
///   d2 = (cos^2 theta e^{eta/T} + sin^2 theta e^{-eta/T}) / 2chi
///   d3 = (sin^2 theta e^{eta/T} + cos^2 theta e^{-eta/T}) / 2chi
///   c  = e^{i arg(J + i g)} sin 2theta sinh(eta/T) / 2chi
/// and the probe population is p = d1 + d3.
struct TwoQubitThermalState {
  double d1 = 0.0, d2 = 0.0, d3 = 0.0, d4 = 0.0;
  Complex c{0.0, 0.0};

  Eigen::Matrix4cd matrix() const {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = d1;
    m(1, 1) = d2;
    m(2, 2) = d3;
    m(3, 3) = d4;
    m(1, 2) = c;
    m(2, 1) = std::conj(c);
    return m;
  }
  double probe_population() const { return d1 + d3; }
};

inline TwoQubitThermalState two_qubit_thermal_state(const TwoQubitClosedForm& cf, double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");
  const detail::ScaledExponentials x(cf, temperature);
  const double cc = cf.cos2(), ss = cf.sin2();
  TwoQubitThermalState s;
  s.d1 = x.sm / x.partition;
  s.d4 = x.sp / x.partition;
  s.d2 = (cc * x.ep + ss * x.em) / x.partition;
  s.d3 = (ss * x.ep + cc * x.em) / x.partition;
  s.c = cf.coupling_phase() * (cf.sin2theta() * 0.5 * (x.ep - x.em) / x.partition);
  return s;
}

/// p(T) = (chi - sinh(omega_s/T) - cos 2theta sinh(eta/T)) / (2 chi).
inline double two_qubit_population(const TwoQubitClosedForm& cf, double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");
  const detail::ScaledExponentials x(cf, temperature);
  return (x.sm + cf.sin2() * x.ep + cf.cos2() * x.em) / x.partition;
}

/// dp/dT = K / (2 T^2 chi^2). Expanding the hyperbolic products gives the
/// cancellation-free numerator
///   K = sin^2 theta omega_- (1 + cosh(omega_+/T)) + cos^2 theta omega_+ (1 + cosh(omega_-/T)).
inline double two_qubit_population_derivative(const TwoQubitClosedForm& cf, double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");
  const double t = temperature;
  const double a = cf.omega_s / t, b = cf.eta / t;
  const double m2 = 2.0 * std::max(a, b);
  // cosh(x) e^{-m2} for |x| <= m2
  const auto ch = [m2](double x) { return 0.5 * (std::exp(x - m2) + std::exp(-x - m2)); };
  const double floor = std::exp(-m2);
  const double k_scaled = cf.sin2() * cf.omega_minus * (floor + ch(a + b)) +
                          cf.cos2() * cf.omega_plus * (floor + ch(a - b));
  const detail::ScaledExponentials x(cf, t);
  const double chi_scaled = 0.5 * x.partition;
  return k_scaled / (2.0 * t * t * chi_scaled * chi_scaled);
}

}  // namespace chainthermo
