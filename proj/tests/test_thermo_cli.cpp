#include <cmath>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "chainthermo/config.hpp"
#include "chainthermo/csv.hpp"
#include "chainthermo/optimize.hpp"
#include "chainthermo/presets.hpp"
#include "chainthermo/scenario.hpp"
#include "chainthermo/svg.hpp"

using namespace chainthermo;

namespace {

void expect_same_scenario(const Scenario& a, const Scenario& b) {
  EXPECT_EQ(a.name, b.name);
  EXPECT_EQ(a.spec, b.spec);
  EXPECT_EQ(a.t_min, b.t_min);
  EXPECT_EQ(a.t_max, b.t_max);
  EXPECT_EQ(a.n_points, b.n_points);
  EXPECT_EQ(a.quantities, b.quantities);
  EXPECT_EQ(a.peak_quantity, b.peak_quantity);
  EXPECT_EQ(a.engine, b.engine);
  ASSERT_EQ(a.sweep.has_value(), b.sweep.has_value());
  if (a.sweep) {
    EXPECT_EQ(a.sweep->parameter, b.sweep->parameter);
    EXPECT_EQ(a.sweep->values, b.sweep->values);
  }
}

}  // namespace

TEST(Csv, RoundTripIsBitExact) {
  Table t;
  t.comments = {"chain.omegas = 0.04, 1"};
  t.add_column("T", {1e-5, 0.1, 3.0});
  t.add_column("qfi", {1.0 / 3.0, NAN, 6.02214076e23});
  std::stringstream ss;
  write_csv(ss, t);
  const Table back = read_csv(ss);
  EXPECT_EQ(back.comments, t.comments);
  EXPECT_EQ(back.names, t.names);
  EXPECT_EQ(back.columns[0], t.columns[0]);
  EXPECT_EQ(back.columns[1][0], t.columns[1][0]);
  EXPECT_TRUE(std::isnan(back.columns[1][1]));
  EXPECT_EQ(back.columns[1][2], t.columns[1][2]);
}

TEST(Csv, RejectsRaggedRowsAndBadNumbers) {
  std::istringstream ragged("a,b\n1,2\n3\n");
  EXPECT_THROW(read_csv(ragged), ConfigError);
  std::istringstream junk("a\n1x\n");
  EXPECT_THROW(read_csv(junk), ConfigError);
  EXPECT_THROW(parse_double("", "x"), ConfigError);
  EXPECT_EQ(format_short(0.1), "0.1");
}

TEST(Config, ParsesDocumentedExample) {
  const Scenario s = scenario_from_ini_text(
      "[scenario]\nname = demo   ; trailing comment\nengine = fermion\n"
      "[chain]\nomegas = 0.04, 1\nxx = 0.05\ndm = 0.03  # hash comment\n"
      "[grid]\nt_min = 0.001\nt_max = 3\nn_points = 50\n"
      "[quantities]\ncompute = qfi, peaks\npeaks_on = qfi\n"
      "[sweep]\nparameter = g1\nfrom = 0\nto = 0.1\ncount = 11\n");
  EXPECT_EQ(s.name, "demo");
  EXPECT_EQ(s.engine, Engine::fermion);
  EXPECT_EQ(s.spec, ChainSpec::two_qubit(0.04, 1, 0.05, 0.03));
  EXPECT_EQ(s.n_points, 50);
  ASSERT_TRUE(s.sweep);
  EXPECT_EQ(s.sweep->values, linspace(0, 0.1, 11));
}

TEST(Config, RejectsMalformedFiles) {
  const std::string chain = "[chain]\nomegas = 0.04, 1\nxx = 0.05\ndm = 0.03\n";
  EXPECT_THROW(scenario_from_ini_text("[grid]\nt_min = 1\n"), ConfigError);
  EXPECT_THROW(scenario_from_ini_text(chain + "[bogus]\nx = 1\n"), ConfigError);
  EXPECT_THROW(scenario_from_ini_text(chain + "[grid]\nt_mni = 1\n"), ConfigError);
  EXPECT_THROW(scenario_from_ini_text(chain + "[grid]\nn_points = 2.5\n"), ConfigError);
  EXPECT_THROW(scenario_from_ini_text(chain + "[grid]\nt_min = 3\nt_max = 1\n"), ConfigError);
  EXPECT_THROW(scenario_from_ini_text(chain + "[quantities]\ncompute = entropy\n"), ConfigError);
  EXPECT_THROW(scenario_from_ini_text(chain + "[quantities]\npeaks_on = spectrum\n"), ConfigError);
  EXPECT_THROW(scenario_from_ini_text(chain + "[sweep]\nparameter = g1\n"), ConfigError);
  EXPECT_THROW(scenario_from_ini_text(chain + "[sweep]\nparameter = g1\nvalues = 1\nfrom = 0\n"), ConfigError);
  EXPECT_THROW(scenario_from_ini_text(chain + "[sweep]\nparameter = g2\nvalues = 1\n"), ConfigError);
  EXPECT_THROW(scenario_from_ini_text("[chain]\nomegas = 0.04, -1\nxx = 0.05\ndm = 0.03\n"), ConfigError);
  EXPECT_THROW(scenario_from_ini_text("[chain]\nomegas = 0.04, 1, 1\nxx = 0.05\ndm = 0.03\n"), ConfigError);
  EXPECT_THROW(scenario_from_ini_text(
                   "[chain]\nomegas = 1, 1, 1\nxx = 0.1, 0.1\ndm = 0.1, 0.1\n[quantities]\ncompute = qfi_approx\n"),
               ConfigError);
  EXPECT_THROW(load_scenario("/nonexistent/file.ini"), ConfigError);
}

TEST(Config, RoundTripOfEveryPresetPanel) {
  for (const auto& name : preset_names())
    for (const auto& panel : preset(name).panels) {
      SCOPED_TRACE(panel.name);
      expect_same_scenario(scenario_from_ini_text(scenario_to_ini(panel)), panel);
    }
}

TEST(Config, ShippedPresetFilesMatchBuiltIns) {
  const std::filesystem::path dir = std::filesystem::path(CHAINTHERMO_SOURCE_DIR) / "presets";
  std::size_t seen = 0;
  for (const auto& name : preset_names())
    for (const auto& panel : preset(name).panels) {
      SCOPED_TRACE(panel.name);
      const auto path = dir / (panel.name + ".ini");
      ASSERT_TRUE(std::filesystem::exists(path)) << path;
      expect_same_scenario(load_scenario(path.string()), panel);
      ++seen;
    }
  EXPECT_EQ(seen, 20u);
}

TEST(Presets, UnknownNameIsConfigError) { EXPECT_THROW(preset("fig99"), ConfigError); }

TEST(RunScenario, DeterministicAcrossThreadCounts) {
  Scenario s = preset("fig9b").panels[0];
  s.n_points = 300;
  const auto a = run_scenario(s, {1}), b = run_scenario(s, {4});
  ASSERT_EQ(a.curve.names, b.curve.names);
  for (std::size_t c = 0; c < a.curve.values.size(); ++c) {
    for (std::size_t i = 0; i < a.curve.values[c].size(); ++i) {
      const double x = a.curve.values[c][i], y = b.curve.values[c][i];
      EXPECT_TRUE(x == y || (std::isnan(x) && std::isnan(y)));
    }
  }
}

TEST(RunScenario, ColumnsAndSweepLabels) {
  const auto r = run_scenario(preset("fig5a").panels[0]);
  const auto t = r.curve.to_table();
  EXPECT_EQ(t.names.front(), "T");
  EXPECT_TRUE(t.has_column("qfi@g1=0.01"));
  EXPECT_TRUE(t.has_column("qfi@g1=0.03"));
  EXPECT_TRUE(t.has_column("t_tilde@g1=0.02"));
  EXPECT_EQ(r.variants.size(), 3u);
  const auto back = QfiCurve::from_table(t);
  EXPECT_EQ(back.names, r.curve.names);
}

TEST(RunScenario, EnginesAgreeOnLongChain) {
  Scenario s = preset("fig10a").panels[0];
  s.n_points = 200;
  const auto exact = run_scenario(s);
  s.engine = Engine::fermion;
  const auto fermion = run_scenario(s);
  const auto& a = exact.curve.column("qfi");
  const auto& b = fermion.curve.column("qfi");
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9 * std::max(1.0, a[i]));
}

TEST(RunScenario, SpectrumSweepFillsTransitions) {
  const auto r = run_scenario(preset("figT-top").panels[0]);
  ASSERT_TRUE(r.transitions);
  EXPECT_EQ(r.transitions->grid.size(), 101u);
  EXPECT_TRUE(r.curve.names.empty());
}

TEST(RunScenario, ErrorsCarryCoordinates) {
  Scenario s = preset("fig5a").panels[0];
  s.sweep->values = {0.01, std::nan("")};
  try {
    run_scenario(s);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("g1"), std::string::npos) << e.what();
  }
}

TEST(Svg, WritesPolylinePerColumn) {
  Table t;
  t.add_column("T", {0.01, 0.1, 1});
  t.add_column("a", {1, 2, 3});
  t.add_column("b", {3, 2, 1});
  std::ostringstream out;
  write_svg(out, t, SvgOptions{"demo <x>", "T", "qfi"});
  const std::string s = out.str();
  EXPECT_NE(s.find("<svg"), std::string::npos);
  EXPECT_NE(s.find("demo &lt;x&gt;"), std::string::npos);
  std::size_t count = 0;
  for (auto pos = s.find("<polyline"); pos != std::string::npos; pos = s.find("<polyline", pos + 1)) ++count;
  EXPECT_EQ(count, 2u);
}

TEST(Optimizer, MatchesExhaustiveGrid) {
  Scenario s = preset("fig5a").panels[0];
  s.sweep.reset();
  const double target = 0.0065;
  const FreeParameter g{ParameterSelector::parse("g1"), 0.0, 0.2};
  const auto res = optimize_coupling(s, target, {g});
  double best = 0.0;
  for (double x : linspace(0.0, 0.2, 2001)) best = std::max(best, qfi_at(g.selector.apply(s.spec, x), target, s.engine));
  EXPECT_GE(res.qfi, best * (1 - 1e-6));
  EXPECT_EQ(res.spec.dm_couplings[0], res.values[0]);
  EXPECT_FALSE(res.trace.empty());
}

TEST(Optimizer, TwoCoordinatesNeverWorseThanStart) {
  const Scenario s = preset("fig9b").panels[0];
  const double start = qfi_at(s.spec, 1e-3, s.engine);
  const auto res = optimize_coupling(
      s, 1e-3, {{ParameterSelector::parse("g1"), 0.0, 0.02}, {ParameterSelector::parse("J1"), 0.0, 0.02}});
  EXPECT_GE(res.qfi, start);
  EXPECT_LE(res.values[0], 0.02);
  EXPECT_GE(res.values[1], 0.0);
}

TEST(Optimizer, ZeroWidthBoundPinsValue) {
  Scenario s = preset("fig7").panels[0];
  const auto res = optimize_coupling(s, 0.3, {{ParameterSelector::parse("g1"), 0.05, 0.05}});
  EXPECT_EQ(res.values[0], 0.05);
  EXPECT_EQ(res.qfi, qfi_at(ParameterSelector::parse("g1").apply(s.spec, 0.05), 0.3, s.engine));
}

TEST(Optimizer, RejectsBadInput) {
  const Scenario s = preset("fig7").panels[0];
  const auto g1 = ParameterSelector::parse("g1");
  EXPECT_THROW(optimize_coupling(s, 0.3, {{g1, 0.2, 0.1}}), ConfigError);
  EXPECT_THROW(optimize_coupling(s, 0.3, {}), ConfigError);
  EXPECT_THROW(optimize_coupling(s, -1.0, {{g1, 0.0, 0.1}}), ConfigError);
  EXPECT_THROW(optimize_coupling(s, 0.3, {{ParameterSelector::parse("g5"), 0.0, 0.1}}), ConfigError);
}
