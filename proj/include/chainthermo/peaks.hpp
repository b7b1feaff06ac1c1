#pragma once

// Peak analytics for sampled curves: the universal peak equation, local
// maximum detection with a prominence cut, and peak prediction from the
// transition spectrum.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "chainthermo/chain_model.hpp"
#include "chainthermo/errors.hpp"
#include "chainthermo/fermion.hpp"

namespace chainthermo {

/// Root of T = (|E|/2) tanh(|E|/2T). With t = T/|E| the equation is
/// t = tanh(1/(2t))/2, whose map has |slope| ~ 0.44 at the root, so plain
/// fixed-point iteration converges.
inline double solve_peak_equation(double energy) {
  if (!std::isfinite(energy)) throw ConfigError("peak equation needs a finite energy");
  if (energy == 0.0) throw ConfigError("peak equation has no positive root for E = 0");
  double t = 0.4;
  for (int it = 0; it < 500; ++it) {
    const double next = 0.5 * std::tanh(0.5 / t);
    if (std::abs(next - t) <= 1e-12 * next) return std::abs(energy) * next;
    t = next;
  }
  throw NumericalError("peak equation iteration did not converge");
}

/// T- = omega_- / 4 and T+ = omega_+ / 4.4, the empirical QFI peak positions
/// of the two-qubit probe.
inline double two_qubit_low_peak_rule(const TwoQubitClosedForm& cf) { return cf.omega_minus / 4.0; }
inline double two_qubit_high_peak_rule(const TwoQubitClosedForm& cf) { return cf.omega_plus / 4.4; }

struct Peak {
  double temperature = 0.0;
  double height = 0.0;
  double prominence = 0.0;
  std::size_t index = 0;  // sample index in the curve
};

using PeakList = std::vector<Peak>;

struct PeakRule {
  enum class Reference {
    own_height,  // prominence >= fraction * peak height
    global_max   // prominence >= fraction * max(curve)
  };
  Reference reference = Reference::own_height;
  double min_relative_prominence = 0.01;
  // Peaks below this fraction of the global maximum are ignored (rounding
  // ripples in the far tails of a curve spanning many decades).
  double min_relative_height = 1e-8;
};

/// Interior local maxima, plateaus collapsed to their first sample. The
/// prominence of a maximum is its height above the higher of the two lowest
/// points reached when walking left and right until the curve rises above
/// the peak again (or the grid ends).
inline PeakList detect_peaks(const std::vector<double>& temperatures, const std::vector<double>& values,
                             const PeakRule& rule = {}) {
  const std::size_t n = values.size();
  if (temperatures.size() != n) throw ConfigError("curve columns have different lengths");
  if (n < 3) throw ConfigError("peak detection needs at least 3 samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(temperatures[i] > temperatures[i - 1]))
      throw ConfigError("temperature grid must be strictly increasing");

  double global_max = 0.0;
  for (double v : values)
    if (std::isfinite(v)) global_max = std::max(global_max, v);

  PeakList peaks;
  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(values[i] > values[i - 1])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && values[j + 1] == values[i]) ++j;
    if (j + 1 >= n) break;  // plateau runs into the right endpoint
    if (!(values[j + 1] < values[i])) {
      i = j + 1;
      continue;
    }
    const double h = values[i];
    double left_min = h;
    for (std::size_t k = i; k-- > 0;) {
      if (values[k] > h) break;
      left_min = std::min(left_min, values[k]);
    }
    double right_min = h;
    for (std::size_t k = j + 1; k < n; ++k) {
      if (values[k] > h) break;
      right_min = std::min(right_min, values[k]);
    }
    const double prominence = h - std::max(left_min, right_min);
    const double reference = rule.reference == PeakRule::Reference::own_height ? h : global_max;
    if (h > 0.0 && h >= rule.min_relative_height * global_max &&
        prominence >= rule.min_relative_prominence * reference)
      peaks.push_back({temperatures[i], h, prominence, i});
    i = j + 1;
  }
  return peaks;
}

struct PeakPrediction {
  double energy = 0.0;
  double temperature = 0.0;  // 0 for a zero-energy mode, which has no peak
};

inline std::vector<PeakPrediction> predict_peaks(const TransitionSpectrum& spectrum) {
  std::vector<PeakPrediction> out;
  out.reserve(spectrum.energies.size());
  for (double e : spectrum.energies) out.push_back({e, e == 0.0 ? 0.0 : solve_peak_equation(e)});
  return out;
}

}  // namespace chainthermo
