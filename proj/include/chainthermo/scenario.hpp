#pragma once

// Scenario runner: evaluates the requested probe quantities on a log-spaced
// temperature grid, optionally for every value of one swept parameter.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "chainthermo/chain_model.hpp"
#include "chainthermo/csv.hpp"
#include "chainthermo/errors.hpp"
#include "chainthermo/fermion.hpp"
#include "chainthermo/gibbs.hpp"
#include "chainthermo/metrology.hpp"
#include "chainthermo/peaks.hpp"

namespace chainthermo {

enum class Quantity {
  population,
  dpopulation,
  population_approx,
  qfi,
  qfi_approx,
  cfi,
  fi_sigma_z,
  fi_sigma_x,
  spectrum,
  peaks
};

inline const std::vector<std::pair<Quantity, std::string>>& quantity_names() {
  static const std::vector<std::pair<Quantity, std::string>> names = {
      {Quantity::population, "population"},
      {Quantity::dpopulation, "dpopulation"},
      {Quantity::population_approx, "population_approx"},
      {Quantity::qfi, "qfi"},
      {Quantity::qfi_approx, "qfi_approx"},
      {Quantity::cfi, "cfi"},
      {Quantity::fi_sigma_z, "fi_sigma_z"},
      {Quantity::fi_sigma_x, "fi_sigma_x"},
      {Quantity::spectrum, "spectrum"},
      {Quantity::peaks, "peaks"},
  };
  return names;
}

inline std::string to_string(Quantity q) {
  for (const auto& [k, v] : quantity_names())
    if (k == q) return v;
  return "?";
}

inline Quantity parse_quantity(const std::string& s) {
  for (const auto& [k, v] : quantity_names())
    if (v == s) return k;
  throw ConfigError("unknown quantity '" + s + "'");
}

enum class Engine { exact, fermion };

inline std::string to_string(Engine e) { return e == Engine::exact ? "exact" : "fermion"; }

inline Engine parse_engine(const std::string& s) {
  if (s == "exact") return Engine::exact;
  if (s == "fermion") return Engine::fermion;
  throw ConfigError("unknown engine '" + s + "' (want exact or fermion)");
}

struct Sweep {
  ParameterSelector parameter;
  std::vector<double> values;

  bool operator==(const Sweep&) const = default;
};

/// n evenly spaced values from `from` to `to`, both ends exact.
inline std::vector<double> linspace(double from, double to, int n) {
  if (n < 1) throw ConfigError("linspace needs at least one point");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? from : from + (to - from) * i / (n - 1);
  if (n > 1) v.back() = to;
  return v;
}

inline std::vector<double> logspace(double from, double to, int n) {
  if (!(from > 0.0) || !(to > from)) throw ConfigError("log grid needs 0 < min < max");
  if (n < 2) throw ConfigError("log grid needs at least 2 points");
  std::vector<double> v(n);
  const double la = std::log(from), lb = std::log(to);
  for (int i = 0; i < n; ++i) v[i] = std::exp(la + (lb - la) * i / (n - 1));
  v.front() = from;
  v.back() = to;
  return v;
}

struct Scenario {
  std::string name = "scenario";
  std::string notes;  // free text, emitted as comment lines only
  ChainSpec spec;
  double t_min = 1e-3;
  double t_max = 3.0;
  int n_points = 400;
  std::vector<Quantity> quantities{Quantity::qfi};
  Quantity peak_quantity = Quantity::qfi;
  Engine engine = Engine::exact;
  std::optional<Sweep> sweep;

  bool wants(Quantity q) const { return std::find(quantities.begin(), quantities.end(), q) != quantities.end(); }

  void validate() const {
    spec.validate();
    if (!std::isfinite(t_min) || !std::isfinite(t_max) || !(t_min > 0.0) || !(t_max > t_min))
      throw ConfigError("grid needs 0 < t_min < t_max");
    if (n_points < 3) throw ConfigError("grid needs at least 3 points");
    if (quantities.empty()) throw ConfigError("no quantities requested");
    const bool two_qubit = spec.n_qubits() == 2;
    if ((wants(Quantity::qfi_approx) || wants(Quantity::population_approx)) && !two_qubit)
      throw ConfigError("approximate forms exist only for a two-qubit chain");
    switch (peak_quantity) {
      case Quantity::population_approx:
      case Quantity::fi_sigma_x:
      case Quantity::spectrum:
      case Quantity::peaks:
        throw ConfigError("peaks cannot be located on '" + to_string(peak_quantity) + "'");
      case Quantity::qfi_approx:
        if (!two_qubit) throw ConfigError("approximate forms exist only for a two-qubit chain");
        break;
      default:
        break;
    }
    if (sweep) {
      if (sweep->values.empty()) throw ConfigError("sweep has no values");
      for (double v : sweep->values) {
        try {
          sweep->parameter.apply(spec, v).validate();
        } catch (const ConfigError& e) {
          throw ConfigError(std::string(e.what()) + " (at " + sweep->parameter.name() + "=" + format_short(v) + ")");
        }
      }
    }
  }

  std::vector<double> temperature_grid() const { return logspace(t_min, t_max, n_points); }

  /// Chains evaluated by this scenario: one per sweep value, or just spec.
  std::vector<ChainSpec> variants() const {
    if (!sweep) return {spec};
    std::vector<ChainSpec> out;
    for (double v : sweep->values) out.push_back(sweep->parameter.apply(spec, v));
    return out;
  }

  /// Column suffix of variant k, e.g. "@g1=0.01"; empty without a sweep.
  std::string variant_label(std::size_t k) const {
    if (!sweep) return "";
    return "@" + sweep->parameter.name() + "=" + format_short(sweep->values[k]);
  }
};

/// Temperatures plus aligned, named value columns.
struct QfiCurve {
  std::vector<double> temperatures;
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;

  const std::vector<double>& column(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return values[i];
    throw ConfigError("curve has no column '" + name + "'");
  }

  Table to_table() const {
    Table t;
    t.add_column("T", temperatures);
    for (std::size_t i = 0; i < names.size(); ++i) t.add_column(names[i], values[i]);
    return t;
  }

  static QfiCurve from_table(const Table& t) {
    if (t.names.empty() || t.names.front() != "T") throw ConfigError("curve table must start with a T column");
    QfiCurve c;
    c.temperatures = t.columns.front();
    for (std::size_t i = 1; i < t.names.size(); ++i) {
      c.names.push_back(t.names[i]);
      c.values.push_back(t.columns[i]);
    }
    return c;
  }
};

struct VariantResult {
  ChainSpec spec;
  TransitionSpectrum spectrum;
  std::vector<PeakPrediction> predictions;
  PeakList peaks;  // on scenario.peak_quantity
};

struct ScenarioResult {
  QfiCurve curve;
  std::vector<VariantResult> variants;
  std::optional<TransitionTable> transitions;  // spectrum requested together with a sweep
};

namespace detail {

// Calls fn(i) for i in [0, n) on a small pool of threads. Each index is
// written by exactly one task, so the output does not depend on scheduling.
// The exception of the lowest failing chunk is rethrown.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads = 0) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, n / 32)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w * chunk; i < std::min(n, (w + 1) * chunk); ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

[[noreturn]] inline void rethrow_at(const std::string& where) {
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(e.what()) + " (at " + where + ")");
  } catch (const std::exception& e) {
    throw NumericalError(std::string(e.what()) + " (at " + where + ")");
  }
}

struct PointValues {
  FisherPoint fisher;
  PopulationApproximations pop_approx;
  QfiApproximation qfi_approx;
};

}  // namespace detail

struct RunOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

inline ScenarioResult run_scenario(const Scenario& scenario, const RunOptions& options = {}) {
  scenario.validate();
  const std::vector<double> grid = scenario.temperature_grid();
  const std::vector<ChainSpec> specs = scenario.variants();
  const bool need_approx = scenario.wants(Quantity::population_approx) || scenario.wants(Quantity::qfi_approx) ||
                           scenario.peak_quantity == Quantity::qfi_approx;
  const bool need_curve = std::any_of(scenario.quantities.begin(), scenario.quantities.end(),
                                      [](Quantity q) { return q != Quantity::spectrum; });

  ScenarioResult result;
  result.curve.temperatures = grid;

  for (std::size_t k = 0; k < specs.size(); ++k) {
    const std::string label = scenario.variant_label(k);
    const std::string where_spec = scenario.sweep ? label.substr(1) : scenario.name;

    VariantResult vr;
    vr.spec = specs[k];
    std::optional<ExactProbeModel> model;
    std::optional<TwoQubitClosedForm> cf;
    try {
      vr.spectrum = transition_spectrum(specs[k]);
      vr.predictions = predict_peaks(vr.spectrum);
      if (need_curve && scenario.engine == Engine::exact) model.emplace(specs[k]);
      if (need_approx) cf = two_qubit_closed_form(specs[k]);
    } catch (...) {
      detail::rethrow_at(where_spec);
    }
    if (!need_curve) {
      result.variants.push_back(std::move(vr));
      continue;
    }

    std::vector<detail::PointValues> points(grid.size());
    detail::parallel_for(
        grid.size(),
        [&](std::size_t i) {
          try {
            detail::PointValues pv;
            pv.fisher = model ? fisher_point(*model, grid[i]) : fisher_point(vr.spectrum, grid[i]);
            if (cf) {
              pv.pop_approx = population_approximations(*cf, grid[i]);
              pv.qfi_approx = qfi_approx(*cf, grid[i]);
            }
            const FisherPoint& f = pv.fisher;
            if (!std::isfinite(f.population) || !std::isfinite(f.population_derivative) || !std::isfinite(f.qfi) ||
                !std::isfinite(f.cfi) || !std::isfinite(f.fi_sigma_z) || !std::isfinite(f.fi_sigma_x))
              throw NumericalError("non-finite probe quantity");
            points[i] = pv;
          } catch (...) {
            detail::rethrow_at("T=" + format_short(grid[i]) + (scenario.sweep ? ", " + label.substr(1) : ""));
          }
        },
        options.threads);

    const auto collect = [&](auto getter) {
      std::vector<double> v(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) v[i] = getter(points[i]);
      return v;
    };
    auto& curve = result.curve;
    const auto add = [&](const std::string& name, std::vector<double> v) {
      curve.names.push_back(name + label);
      curve.values.push_back(std::move(v));
    };
    using PV = detail::PointValues;
    for (Quantity q : scenario.quantities) {
      switch (q) {
        case Quantity::population:
          add("p", collect([](const PV& p) { return p.fisher.population; }));
          break;
        case Quantity::dpopulation:
          add("dp_dT", collect([](const PV& p) { return p.fisher.population_derivative; }));
          break;
        case Quantity::population_approx:
          add("p_low", collect([](const PV& p) { return p.pop_approx.p_low; }));
          add("dp_low", collect([](const PV& p) { return p.pop_approx.dp_low; }));
          add("p_high", collect([](const PV& p) { return p.pop_approx.p_high; }));
          add("dp_high", collect([](const PV& p) { return p.pop_approx.dp_high; }));
          break;
        case Quantity::qfi:
          add("qfi", collect([](const PV& p) { return p.fisher.qfi; }));
          break;
        case Quantity::qfi_approx:
          add("qfi_low", collect([](const PV& p) { return p.qfi_approx.low; }));
          add("qfi_high", collect([](const PV& p) { return p.qfi_approx.high; }));
          add("qfi_approx", collect([](const PV& p) { return p.qfi_approx.total; }));
          break;
        case Quantity::cfi:
          add("cfi", collect([](const PV& p) { return p.fisher.cfi; }));
          break;
        case Quantity::fi_sigma_z:
          add("fi_sigma_z", collect([](const PV& p) { return p.fisher.fi_sigma_z; }));
          break;
        case Quantity::fi_sigma_x:
          add("fi_sigma_x", collect([](const PV& p) { return p.fisher.fi_sigma_x; }));
          break;
        case Quantity::spectrum:
          break;
        case Quantity::peaks: {
          // Marker column: predicted peak temperatures in the first rows.
          std::vector<double> marks(grid.size(), std::numeric_limits<double>::quiet_NaN());
          std::vector<double> t;
          for (const auto& pr : vr.predictions) t.push_back(pr.temperature);
          std::sort(t.begin(), t.end());
          for (std::size_t i = 0; i < t.size() && i < marks.size(); ++i) marks[i] = t[i];
          add("t_tilde", std::move(marks));
          break;
        }
      }
    }

    std::vector<double> target;
    switch (scenario.peak_quantity) {
      case Quantity::population: target = collect([](const PV& p) { return p.fisher.population; }); break;
      case Quantity::dpopulation:
        target = collect([](const PV& p) { return p.fisher.population_derivative; });
        break;
      case Quantity::cfi: target = collect([](const PV& p) { return p.fisher.cfi; }); break;
      case Quantity::fi_sigma_z: target = collect([](const PV& p) { return p.fisher.fi_sigma_z; }); break;
      case Quantity::qfi_approx: target = collect([](const PV& p) { return p.qfi_approx.total; }); break;
      default: target = collect([](const PV& p) { return p.fisher.qfi; }); break;
    }
    vr.peaks = detect_peaks(grid, target);
    result.variants.push_back(std::move(vr));
  }

  if (scenario.sweep && scenario.wants(Quantity::spectrum))
    result.transitions = transitions_vs_parameter(scenario.spec, scenario.sweep->parameter, scenario.sweep->values);
  return result;
}

}  // namespace chainthermo
