#pragma once

// Scenario files: INI text with sections [scenario], [chain], [grid],
// [quantities] and an optional [sweep]. ';' and '#' start a comment that
// runs to the end of the line. Lists are comma separated.
//
//   [scenario]
//   name = fig5a
//   engine = exact          ; exact | fermion
//   [chain]
//   omegas = 0.04, 1        ; omega_1 .. omega_N, the last one is the probe
//   xx = 0.05               ; J_1 .. J_{N-1}
//   dm = 0.03               ; g_1 .. g_{N-1}
//   [grid]
//   t_min = 0.001
//   t_max = 3
//   n_points = 400
//   [quantities]
//   compute = qfi, peaks
//   peaks_on = qfi
//   [sweep]
//   parameter = g1          ; omegaK | JK | gK
//   values = 0.01, 0.02, 0.03
//   ; or: from = 0, to = 0.1, count = 101 (one key per line)

#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "chainthermo/csv.hpp"
#include "chainthermo/errors.hpp"
#include "chainthermo/scenario.hpp"

namespace chainthermo {

namespace detail {

inline std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> parse_words(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_short(v[i]);
  return s;
}

using boost::property_tree::ptree;

inline void check_keys(const ptree& section, const std::string& name, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : section)
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in [" + name + "]");
}

inline std::string get_string(const ptree& section, const std::string& sec, const std::string& key) {
  const auto v = section.get_optional<std::string>(key);
  if (!v) throw ConfigError("missing key '" + key + "' in [" + sec + "]");
  return trim(*v);
}

}  // namespace detail

inline Scenario scenario_from_ini(std::istream& in) {
  using detail::ptree;
  std::ostringstream stripped;
  for (std::string line; std::getline(in, line);) stripped << line.substr(0, line.find_first_of(";#")) << '\n';
  std::istringstream clean(stripped.str());
  ptree root;
  try {
    boost::property_tree::ini_parser::read_ini(clean, root);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  for (const auto& [name, section] : root) {
    static const std::set<std::string> known = {"scenario", "chain", "grid", "quantities", "sweep"};
    if (!known.count(name)) throw ConfigError("unknown section [" + name + "]");
    if (section.empty() && !section.data().empty()) throw ConfigError("key '" + name + "' outside a section");
  }

  Scenario sc;
  if (const auto s = root.get_child_optional("scenario")) {
    detail::check_keys(*s, "scenario", {"name", "engine"});
    if (auto v = s->get_optional<std::string>("name")) sc.name = detail::trim(*v);
    if (auto v = s->get_optional<std::string>("engine")) sc.engine = parse_engine(detail::trim(*v));
  }

  const auto chain = root.get_child_optional("chain");
  if (!chain) throw ConfigError("missing [chain] section");
  detail::check_keys(*chain, "chain", {"omegas", "xx", "dm"});
  sc.spec.omegas = detail::parse_list(detail::get_string(*chain, "chain", "omegas"), "chain.omegas");
  sc.spec.xx_couplings = detail::parse_list(detail::get_string(*chain, "chain", "xx"), "chain.xx");
  sc.spec.dm_couplings = detail::parse_list(detail::get_string(*chain, "chain", "dm"), "chain.dm");

  if (const auto g = root.get_child_optional("grid")) {
    detail::check_keys(*g, "grid", {"t_min", "t_max", "n_points"});
    if (auto v = g->get_optional<std::string>("t_min")) sc.t_min = parse_double(*v, "grid.t_min");
    if (auto v = g->get_optional<std::string>("t_max")) sc.t_max = parse_double(*v, "grid.t_max");
    if (auto v = g->get_optional<std::string>("n_points")) {
      const double n = parse_double(*v, "grid.n_points");
      if (n != std::floor(n) || n < 0 || n > 1e7) throw ConfigError("grid.n_points must be a whole number");
      sc.n_points = static_cast<int>(n);
    }
  }

  if (const auto q = root.get_child_optional("quantities")) {
    detail::check_keys(*q, "quantities", {"compute", "peaks_on"});
    if (auto v = q->get_optional<std::string>("compute")) {
      sc.quantities.clear();
      for (const auto& w : detail::parse_words(*v)) sc.quantities.push_back(parse_quantity(w));
    }
    if (auto v = q->get_optional<std::string>("peaks_on")) sc.peak_quantity = parse_quantity(detail::trim(*v));
  }

  if (const auto s = root.get_child_optional("sweep")) {
    detail::check_keys(*s, "sweep", {"parameter", "values", "from", "to", "count"});
    Sweep sw;
    sw.parameter = ParameterSelector::parse(detail::get_string(*s, "sweep", "parameter"));
    const bool has_values = s->count("values") > 0;
    const bool has_range = s->count("from") || s->count("to") || s->count("count");
    if (has_values == has_range) throw ConfigError("[sweep] needs either 'values' or 'from'/'to'/'count'");
    if (has_values) {
      sw.values = detail::parse_list(detail::get_string(*s, "sweep", "values"), "sweep.values");
    } else {
      const double from = parse_double(detail::get_string(*s, "sweep", "from"), "sweep.from");
      const double to = parse_double(detail::get_string(*s, "sweep", "to"), "sweep.to");
      const double count = parse_double(detail::get_string(*s, "sweep", "count"), "sweep.count");
      if (count != std::floor(count) || count < 1 || count > 1e6)
        throw ConfigError("sweep.count must be a positive whole number");
      sw.values = linspace(from, to, static_cast<int>(count));
    }
    sc.sweep = sw;
  }
  sc.validate();
  return sc;
}

inline Scenario scenario_from_ini_text(const std::string& text) {
  std::istringstream in(text);
  return scenario_from_ini(in);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return scenario_from_ini(in);
}

/// Inverse of scenario_from_ini; notes become leading comment lines.
inline std::string scenario_to_ini(const Scenario& sc) {
  std::ostringstream out;
  std::istringstream notes(sc.notes);
  for (std::string line; std::getline(notes, line);) out << (line.empty() ? ";" : "; " + line) << '\n';
  if (!sc.notes.empty()) out << '\n';
  out << "[scenario]\nname = " << sc.name << "\nengine = " << to_string(sc.engine) << "\n\n";
  out << "[chain]\nomegas = " << detail::join(sc.spec.omegas) << "\nxx = " << detail::join(sc.spec.xx_couplings)
      << "\ndm = " << detail::join(sc.spec.dm_couplings) << "\n\n";
  out << "[grid]\nt_min = " << format_short(sc.t_min) << "\nt_max = " << format_short(sc.t_max)
      << "\nn_points = " << sc.n_points << "\n\n";
  out << "[quantities]\ncompute = ";
  for (std::size_t i = 0; i < sc.quantities.size(); ++i) out << (i ? ", " : "") << to_string(sc.quantities[i]);
  out << "\npeaks_on = " << to_string(sc.peak_quantity) << '\n';
  if (sc.sweep) {
    out << "\n[sweep]\nparameter = " << sc.sweep->parameter.name() << '\n';
    const auto& v = sc.sweep->values;
    if (v.size() > 2 && linspace(v.front(), v.back(), static_cast<int>(v.size())) == v)
      out << "from = " << format_short(v.front()) << "\nto = " << format_short(v.back()) << "\ncount = " << v.size()
          << '\n';
    else
      out << "values = " << detail::join(v) << '\n';
  }
  return out.str();
}

/// "key = value" lines describing a scenario, for CSV comment headers.
inline std::vector<std::string> scenario_comment_lines(const Scenario& sc) {
  std::vector<std::string> lines;
  std::istringstream in(scenario_to_ini(sc));
  std::string section;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == ';') continue;
    if (line[0] == '[') {
      section = line.substr(1, line.find(']') - 1);
      continue;
    }
    lines.push_back(section + "." + line);
  }
  return lines;
}

}  // namespace chainthermo
