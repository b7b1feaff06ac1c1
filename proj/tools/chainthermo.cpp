// chainthermo: command-line front end for probe-qubit thermometry scenarios.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chainthermo/chainthermo.hpp"

namespace fs = std::filesystem;
using namespace chainthermo;

namespace {

constexpr const char* kOutEnv = "CHAINTHERMO_OUT";

struct Options {
  std::string config;
  std::string preset_name;
  std::string out;
  std::string format;  // csv | svg | both; empty = command default
  std::string grid;
  std::string engine;
  unsigned threads = 0;
  // reproduce
  std::string reproduce_target;
  // optimize
  double target_t = 0.0;
  std::vector<std::string> free;
  int passes = 2;
};

std::optional<std::string> output_dir(const Options& o) {
  if (!o.out.empty()) return o.out;
  if (const char* env = std::getenv(kOutEnv); env && *env) return std::string(env);
  return std::nullopt;
}

bool wants_csv(const std::string& f) { return f == "csv" || f == "both"; }
bool wants_svg(const std::string& f) { return f == "svg" || f == "both"; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

void apply_grid(Scenario& sc, const std::string& grid) {
  const auto parts = split(grid, ':');
  if (parts.size() != 3) throw ConfigError("--grid wants min:max:n, got '" + grid + "'");
  sc.t_min = parse_double(parts[0], "--grid min");
  sc.t_max = parse_double(parts[1], "--grid max");
  const double n = parse_double(parts[2], "--grid n");
  if (n != std::floor(n) || n < 0 || n > 1e7) throw ConfigError("--grid n must be a whole number");
  sc.n_points = static_cast<int>(n);
}

Scenario resolve_scenario(const Options& o) {
  if (!o.config.empty() && !o.preset_name.empty()) throw ConfigError("give either --config or --preset, not both");
  Scenario sc;
  if (!o.config.empty()) {
    sc = load_scenario(o.config);
  } else if (!o.preset_name.empty()) {
    // "figT-top" selects the first panel, "figT-top:b" the second.
    const auto colon = o.preset_name.find(':');
    const Preset p = preset(o.preset_name.substr(0, colon));
    std::size_t idx = 0;
    if (colon != std::string::npos) {
      const std::string tag = o.preset_name.substr(colon + 1);
      if (tag.size() != 1 || tag[0] < 'a' || static_cast<std::size_t>(tag[0] - 'a') >= p.panels.size())
        throw ConfigError("preset " + p.name + " has no panel '" + tag + "'");
      idx = static_cast<std::size_t>(tag[0] - 'a');
    }
    sc = p.panels[idx];
  } else {
    throw ConfigError("need --config <file> or --preset <name>");
  }
  if (!o.grid.empty()) apply_grid(sc, o.grid);
  if (!o.engine.empty()) sc.engine = parse_engine(o.engine);
  sc.validate();
  return sc;
}

class Emitter {
 public:
  Emitter(const Options& o, std::string default_format, bool require_dir)
      : dir_(output_dir(o)), format_(o.format.empty() ? std::move(default_format) : o.format) {
    if (format_ != "csv" && format_ != "svg" && format_ != "both")
      throw ConfigError("--format must be csv, svg or both");
    if (require_dir && !dir_) dir_ = "chainthermo-out";
    if (!dir_ && wants_svg(format_)) throw ConfigError("svg output needs --out <dir> or " + std::string(kOutEnv));
    if (dir_) fs::create_directories(*dir_);
  }

  void table(const Table& t, const std::string& stem, const std::optional<SvgOptions>& svg) {
    if (!dir_) {
      write_csv(std::cout, t);
      return;
    }
    if (wants_csv(format_)) write_file(stem + ".csv", [&](std::ostream& out) { write_csv(out, t); });
    if (svg && wants_svg(format_)) write_file(stem + ".svg", [&](std::ostream& out) { write_svg(out, t, *svg); });
  }

  void text(const std::string& name, const std::string& body) {
    if (!dir_) return;
    write_file(name, [&](std::ostream& out) { out << body; });
  }

 private:
  template <class F>
  void write_file(const std::string& name, F&& fn) {
    const fs::path path = fs::path(*dir_) / name;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    fn(out);
    std::cerr << "wrote " << path.string() << '\n';
  }

  std::optional<std::string> dir_;
  std::string format_;
};

Table spectrum_table(const Scenario& sc, const VariantResult& v) {
  Table t;
  t.comments = scenario_comment_lines(sc);
  std::vector<double> index, e, w, tt;
  for (int l = 0; l < v.spectrum.size(); ++l) {
    index.push_back(l + 1);
    e.push_back(v.spectrum.energies[l]);
    w.push_back(v.spectrum.probe_weights[l]);
    tt.push_back(v.predictions[l].temperature);
  }
  t.add_column("l", index);
  t.add_column("E", e);
  t.add_column("probe_weight", w);
  t.add_column("t_tilde", tt);
  return t;
}

Table transitions_table(const Scenario& sc, const TransitionTable& tr) {
  Table t;
  t.comments = scenario_comment_lines(sc);
  t.add_column(tr.parameter.name(), tr.grid);
  const std::size_t n = tr.energies.empty() ? 0 : tr.energies.front().size();
  for (std::size_t l = 0; l < n; ++l) {
    std::vector<double> col;
    for (const auto& row : tr.energies) col.push_back(row[l]);
    t.add_column("E" + std::to_string(l + 1), col);
  }
  return t;
}

Table peaks_table(const Scenario& sc, const ScenarioResult& r) {
  Table t;
  t.comments = scenario_comment_lines(sc);
  t.comments.push_back("peaks located on " + to_string(sc.peak_quantity));
  std::vector<double> variant, temp, height, prom;
  for (std::size_t k = 0; k < r.variants.size(); ++k) {
    std::string pred;
    for (const auto& p : r.variants[k].predictions) pred += " " + format_short(p.temperature);
    t.comments.push_back("variant " + std::to_string(k) + (sc.sweep ? " (" + sc.variant_label(k).substr(1) + ")" : "") +
                         " predicted t_tilde:" + pred);
    for (const auto& p : r.variants[k].peaks) {
      variant.push_back(static_cast<double>(k));
      temp.push_back(p.temperature);
      height.push_back(p.height);
      prom.push_back(p.prominence);
    }
  }
  t.add_column("variant", variant);
  t.add_column("T", temp);
  t.add_column("height", height);
  t.add_column("prominence", prom);
  return t;
}

Table curve_table(const Scenario& sc, const ScenarioResult& r) {
  Table t = r.curve.to_table();
  t.comments = scenario_comment_lines(sc);
  return t;
}

SvgOptions curve_svg(const Scenario& sc, const std::string& y_label) {
  SvgOptions o;
  o.title = sc.name;
  o.y_label = y_label;
  return o;
}

SvgOptions linear_svg(const std::string& title, const std::string& x, const std::string& y) {
  SvgOptions o;
  o.title = title;
  o.x_label = x;
  o.y_label = y;
  o.log_x = false;
  o.log_y = false;
  return o;
}

int cmd_spectrum(const Options& o) {
  Scenario sc = resolve_scenario(o);
  sc.quantities = {Quantity::spectrum};
  const ScenarioResult r = run_scenario(sc, {o.threads});
  Emitter em(o, "csv", false);
  if (r.transitions)
    em.table(transitions_table(sc, *r.transitions), sc.name + "-transitions",
             linear_svg(sc.name, sc.sweep->parameter.name(), "E"));
  else
    em.table(spectrum_table(sc, r.variants.front()), sc.name + "-spectrum", linear_svg(sc.name, "l", "E"));
  return 0;
}

int cmd_curve(const Options& o, std::vector<Quantity> quantities, const std::string& stem, const std::string& y) {
  Scenario sc = resolve_scenario(o);
  sc.quantities = std::move(quantities);
  const ScenarioResult r = run_scenario(sc, {o.threads});
  Emitter em(o, "csv", false);
  em.table(curve_table(sc, r), sc.name + "-" + stem, curve_svg(sc, y));
  return 0;
}

int cmd_peaks(const Options& o) {
  Scenario sc = resolve_scenario(o);
  if (!sc.wants(Quantity::peaks)) sc.quantities.push_back(Quantity::peaks);
  const ScenarioResult r = run_scenario(sc, {o.threads});
  Emitter em(o, "csv", false);
  em.table(peaks_table(sc, r), sc.name + "-peaks", std::nullopt);
  return 0;
}

int cmd_sweep(const Options& o) {
  const Scenario sc = resolve_scenario(o);
  if (!sc.sweep) throw ConfigError("sweep needs a [sweep] section (parameter plus values)");
  const ScenarioResult r = run_scenario(sc, {o.threads});
  Emitter em(o, "csv", false);
  if (!r.curve.names.empty()) em.table(curve_table(sc, r), sc.name + "-sweep", curve_svg(sc, "value"));
  if (r.transitions)
    em.table(transitions_table(sc, *r.transitions), sc.name + "-transitions",
             linear_svg(sc.name, sc.sweep->parameter.name(), "E"));
  return 0;
}

void reproduce_one(const Preset& p, const Options& o, Emitter& em) {
  for (Scenario sc : p.panels) {
    if (!o.grid.empty()) apply_grid(sc, o.grid);
    if (!o.engine.empty()) sc.engine = parse_engine(o.engine);
    const ScenarioResult r = run_scenario(sc, {o.threads});
    em.text(sc.name + ".ini", scenario_to_ini(sc));
    const bool has_curve = !r.curve.names.empty();
    if (has_curve) em.table(curve_table(sc, r), sc.name, curve_svg(sc, to_string(sc.peak_quantity)));
    if (r.transitions)
      em.table(transitions_table(sc, *r.transitions), has_curve ? sc.name + "-transitions" : sc.name,
               linear_svg(sc.name, sc.sweep->parameter.name(), "E"));
    else if (sc.wants(Quantity::spectrum) && !sc.sweep)
      em.table(spectrum_table(sc, r.variants.front()), sc.name + "-spectrum", linear_svg(sc.name, "l", "E"));
    if (sc.wants(Quantity::peaks)) em.table(peaks_table(sc, r), sc.name + "-peaks", std::nullopt);
  }
}

int cmd_reproduce(const Options& o) {
  if (!o.config.empty() || !o.preset_name.empty())
    throw ConfigError("reproduce takes the preset as its argument, not --config/--preset");
  Emitter em(o, "both", true);
  if (o.reproduce_target == "all") {
    for (const auto& name : preset_names()) reproduce_one(preset(name), o, em);
  } else {
    reproduce_one(preset(o.reproduce_target), o, em);
  }
  return 0;
}

int cmd_optimize(const Options& o) {
  const Scenario sc = resolve_scenario(o);
  std::vector<FreeParameter> free;
  for (const auto& f : o.free) {
    const auto parts = split(f, ':');
    if (parts.size() != 3) throw ConfigError("--free wants selector:lo:hi, got '" + f + "'");
    free.push_back({ParameterSelector::parse(parts[0]), parse_double(parts[1], "--free lo"),
                    parse_double(parts[2], "--free hi")});
  }
  OptimizeOptions opt;
  opt.passes = o.passes;
  const OptimizationResult res = optimize_coupling(sc, o.target_t, free, opt);

  Table t;
  t.comments = scenario_comment_lines(sc);
  t.comments.push_back("target T = " + format_short(o.target_t));
  std::string best;
  for (std::size_t i = 0; i < free.size(); ++i)
    best += (i ? ", " : "") + free[i].selector.name() + " = " + format_double(res.values[i]);
  t.comments.push_back("best: " + best + ", qfi = " + format_double(res.qfi));
  std::vector<double> pass, coord, qfi;
  std::vector<std::vector<double>> vals(free.size());
  for (const auto& step : res.trace) {
    pass.push_back(step.pass);
    double c = 0;
    for (std::size_t i = 0; i < free.size(); ++i)
      if (free[i].selector.name() == step.parameter) c = static_cast<double>(i + 1);
    coord.push_back(c);
    for (std::size_t i = 0; i < free.size(); ++i) vals[i].push_back(step.values[i]);
    qfi.push_back(step.qfi);
  }
  t.add_column("pass", pass);
  t.add_column("coordinate", coord);
  for (std::size_t i = 0; i < free.size(); ++i) t.add_column(free[i].selector.name(), vals[i]);
  t.add_column("qfi", qfi);
  std::cerr << "best " << best << ", qfi = " << format_double(res.qfi) << '\n';
  Emitter em(o, "csv", false);
  em.table(t, sc.name + "-optimize", linear_svg(sc.name + " optimizer trace", "evaluation", "qfi"));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probe-qubit thermometry on XX + DM spin chains"};
  app.require_subcommand(1);
  Options o;
  const auto add_common = [&o](CLI::App* sub, bool scenario) {
    if (scenario) {
      sub->add_option("--config", o.config, "scenario file (INI)");
      sub->add_option("--preset", o.preset_name, "built-in preset, optionally name:panel (e.g. figT-top:b)");
    }
    sub->add_option("--out", o.out, std::string("output directory (default: $") + kOutEnv + ", else stdout)");
    sub->add_option("--format", o.format, "csv, svg or both");
    sub->add_option("--grid", o.grid, "temperature grid override min:max:n (log-spaced)");
    sub->add_option("--engine", o.engine, "exact or fermion");
    sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  };

  auto* spectrum = app.add_subcommand("spectrum", "transition energies, probe weights and peak temperatures");
  auto* population = app.add_subcommand("population", "probe population p(T) and dp/dT");
  auto* qfi = app.add_subcommand("qfi", "QFI, CFI and observable Fisher information vs T");
  auto* peaks = app.add_subcommand("peaks", "detected peaks and predicted peak temperatures");
  auto* sweep = app.add_subcommand("sweep", "run the configured quantities for every sweep value");
  auto* reproduce = app.add_subcommand("reproduce", "write CSV, SVG and INI files for a preset (or 'all')");
  auto* optimize = app.add_subcommand("optimize", "maximize the QFI at a target temperature");
  for (auto* s : {spectrum, population, qfi, peaks, sweep, optimize}) add_common(s, true);
  add_common(reproduce, false);
  reproduce->add_option("preset", o.reproduce_target, "preset name or 'all'")->required();
  optimize->add_option("--target-T", o.target_t, "temperature at which the QFI is maximized")->required();
  optimize->add_option("--free", o.free, "free parameter selector:lo:hi (repeatable)")->required();
  optimize->add_option("--passes", o.passes, "coordinate passes")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*spectrum) return cmd_spectrum(o);
    if (*population) return cmd_curve(o, {Quantity::population, Quantity::dpopulation}, "population", "p, dp/dT");
    if (*qfi)
      return cmd_curve(o, {Quantity::qfi, Quantity::cfi, Quantity::fi_sigma_z, Quantity::fi_sigma_x}, "qfi",
                       "Fisher information");
    if (*peaks) return cmd_peaks(o);
    if (*sweep) return cmd_sweep(o);
    if (*reproduce) return cmd_reproduce(o);
    if (*optimize) return cmd_optimize(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
