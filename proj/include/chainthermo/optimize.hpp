#pragma once

// Coupling tuner: maximizes the QFI at a target temperature over a box of
// chain parameters by coordinate-wise golden-section search.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "chainthermo/chain_model.hpp"
#include "chainthermo/errors.hpp"
#include "chainthermo/fermion.hpp"
#include "chainthermo/gibbs.hpp"
#include "chainthermo/metrology.hpp"
#include "chainthermo/scenario.hpp"

namespace chainthermo {

struct FreeParameter {
  ParameterSelector selector;
  double lo = 0.0;
  double hi = 0.0;
};

struct OptimizeOptions {
  int passes = 2;
  double relative_tolerance = 1e-6;  // of each bound width
  int max_iterations = 200;          // golden-section steps per coordinate
};

struct OptimizationStep {
  int pass = 0;
  std::string parameter;      // coordinate being searched
  std::vector<double> values;  // full parameter vector evaluated
  double qfi = 0.0;
};

struct OptimizationResult {
  std::vector<double> values;
  double qfi = 0.0;
  ChainSpec spec;
  std::vector<OptimizationStep> trace;
};

inline double qfi_at(const ChainSpec& spec, double temperature, Engine engine) {
  return engine == Engine::exact ? fisher_point(ExactProbeModel(spec), temperature).qfi
                                 : fisher_point(transition_spectrum(spec), temperature).qfi;
}

/// Starts from the scenario's own values (clamped into the box), then runs
/// `passes` sweeps of golden-section search over each coordinate. The best
/// point ever evaluated is kept, endpoints included, so a maximum on the
/// boundary of the box is found.
inline OptimizationResult optimize_coupling(const Scenario& scenario, double target_temperature,
                                            const std::vector<FreeParameter>& free,
                                            const OptimizeOptions& options = {}) {
  if (free.empty()) throw ConfigError("optimizer needs at least one free parameter");
  if (!(target_temperature > 0.0) || !std::isfinite(target_temperature))
    throw ConfigError("target temperature must be positive and finite");
  for (const auto& f : free) {
    if (!std::isfinite(f.lo) || !std::isfinite(f.hi)) throw ConfigError("bounds of " + f.selector.name() + " must be finite");
    if (f.lo > f.hi) throw ConfigError("empty feasible region for " + f.selector.name());
    f.selector.get(scenario.spec);
  }

  OptimizationResult res;
  std::vector<double> x;
  for (const auto& f : free) x.push_back(std::clamp(f.selector.get(scenario.spec), f.lo, f.hi));

  const auto make_spec = [&](const std::vector<double>& v) {
    ChainSpec s = scenario.spec;
    for (std::size_t i = 0; i < free.size(); ++i) s = free[i].selector.apply(s, v[i]);
    return s;
  };
  int pass = 0;
  std::string coordinate = "start";
  const auto evaluate = [&](const std::vector<double>& v) {
    double q;
    try {
      q = qfi_at(make_spec(v), target_temperature, scenario.engine);
    } catch (...) {
      std::string where;
      for (std::size_t i = 0; i < free.size(); ++i)
        where += (i ? ", " : "") + free[i].selector.name() + "=" + format_short(v[i]);
      detail::rethrow_at(where);
    }
    res.trace.push_back({pass, coordinate, v, q});
    if (res.trace.size() == 1 || q > res.qfi) {
      res.qfi = q;
      res.values = v;
    }
    return q;
  };

  evaluate(x);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (pass = 1; pass <= options.passes; ++pass) {
    for (std::size_t k = 0; k < free.size(); ++k) {
      coordinate = free[k].selector.name();
      x = res.values;
      if (free[k].lo == free[k].hi) continue;
      const auto at = [&](double t) {
        std::vector<double> v = x;
        v[k] = t;
        return evaluate(v);
      };
      double a = free[k].lo, b = free[k].hi;
      at(a);
      at(b);
      double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
      double fc = at(c), fd = at(d);
      const double tol = options.relative_tolerance * (free[k].hi - free[k].lo);
      for (int it = 0; it < options.max_iterations && (b - a) > tol; ++it) {
        if (fc >= fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - inv_phi * (b - a);
          fc = at(c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + inv_phi * (b - a);
          fd = at(d);
        }
      }
    }
  }
  res.spec = make_spec(res.values);
  return res;
}

}  // namespace chainthermo
