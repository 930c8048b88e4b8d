#include "qdiode/sweep.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "json.hpp"

using namespace qdiode;

namespace {

const char* kSinglePointConfig =
    "# resonant diode working point\n"
    "omega_l = 1.0\n"
    "omega_r = 1.0\n"
    "g = 1.0\n"
    "t_l = 3.0\n"
    "t_r = 0.5\n"
    "kappa_ll = 0.01\n"
    "kappa_rr = 0.01\n";

TEST(SweepAxis, ValueGrid) {
  const SweepAxis axis{"g", 0.5, 2.5, 5};
  EXPECT_DOUBLE_EQ(axis.value(0), 0.5);
  EXPECT_DOUBLE_EQ(axis.value(2), 1.5);
  EXPECT_DOUBLE_EQ(axis.value(4), 2.5);
  const SweepAxis pinned{"g", 0.7, 9.9, 1};
  EXPECT_DOUBLE_EQ(pinned.value(0), 0.7);
}

TEST(ParseConfig, MinimalSinglePoint) {
  const RunSpec spec = parse_config(std::string(kSinglePointConfig));
  EXPECT_EQ(spec.mode, RunMode::single);
  EXPECT_EQ(spec.format, OutputFormat::csv);
  EXPECT_TRUE(spec.axes.empty());
  EXPECT_TRUE(spec.output.empty());
  EXPECT_EQ(spec.baths.kind, SpectralDensity::flat);
  EXPECT_DOUBLE_EQ(spec.system.omega_l, 1.0);
  EXPECT_DOUBLE_EQ(spec.baths.t_left, 3.0);
  EXPECT_DOUBLE_EQ(spec.baths.kappa_lr, 0.0);
  EXPECT_EQ(spec.row_count(), 1);
}

TEST(ParseConfig, FullSweepRoundTrip) {
  const std::string text =
      "omega_l = 1.0\nomega_r = 0.8\ng = 0.3\nt_l = 2.0\nt_r = 1.0\n"
      "kappa_ll = 0.01\nkappa_rr = 0.02\nkappa_lr = 0.003\nkappa_rl = 0.004\n"
      "spectrum = ohmic\nformat = json\noutput = out.json\n"
      "mode = rectification_map\n"
      "sweep1 = t_l 0.1 5 11\n"
      "sweep2 = t_r 0.2 6 7  # grid\n";
  const RunSpec spec = parse_config(text);
  EXPECT_EQ(spec.mode, RunMode::rectification_map);
  EXPECT_EQ(spec.format, OutputFormat::json);
  EXPECT_EQ(spec.output, "out.json");
  EXPECT_EQ(spec.baths.kind, SpectralDensity::ohmic);
  EXPECT_DOUBLE_EQ(spec.baths.kappa_lr, 0.003);
  EXPECT_DOUBLE_EQ(spec.baths.kappa_rl, 0.004);
  ASSERT_EQ(spec.axes.size(), 2u);
  EXPECT_EQ(spec.axes[0].param, "t_l");
  EXPECT_EQ(spec.axes[0].points, 11);
  EXPECT_EQ(spec.axes[1].param, "t_r");
  EXPECT_DOUBLE_EQ(spec.axes[1].max, 6.0);
  EXPECT_EQ(spec.row_count(), 77);
}

TEST(ParseConfig, ModeInferredFromAxes) {
  const RunSpec spec =
      parse_config(std::string(kSinglePointConfig) + "sweep1 = g 0 1 5\n");
  EXPECT_EQ(spec.mode, RunMode::sweep);
  ASSERT_EQ(spec.axes.size(), 1u);
  EXPECT_EQ(spec.axes[0].param, "g");
}

void expect_config_error(const std::string& text, const std::string& needle) {
  try {
    parse_config(text);
    FAIL() << "expected ConfigError containing '" << needle << "'";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos)
        << "actual message: " << e.what();
  }
}

TEST(ParseConfig, ErrorPaths) {
  const std::string base = kSinglePointConfig;
  expect_config_error(base + "voltage = 3\n", "unknown key 'voltage'");
  expect_config_error(base + "voltage = 3\n", "line 9");
  expect_config_error("omega_l = fast\n", "expected a number");
  expect_config_error("omega_l = 1.0\nomega_r = 1.0\ng = 1\nt_l = 1\nt_r = 1\nkappa_ll = 0.01\n",
                      "missing required key 'kappa_rr'");
  expect_config_error(base + "g = 2\n", "duplicate key 'g'");
  expect_config_error(base + "sweep2 = g 0 1 5\n", "sweep2 given without sweep1");
  expect_config_error(base + "sweep1 = g 0 1\n", "expected '<param> <min> <max> <points>'");
  expect_config_error(base + "sweep1 = g 0 1 2.5\n", "points must be a positive integer");
  expect_config_error(base + "sweep1 = g 1 0 5\n", "min exceeds max");
  expect_config_error(base + "sweep1 = g 0 1 5\nsweep2 = g 0 1 5\n", "swept twice");
  expect_config_error(base + "sweep1 = kappa_ll 0 1 5\n", "not sweepable");
  expect_config_error(base + "mode = single\nsweep1 = g 0 1 5\n",
                      "mode single does not take sweep axes");
  expect_config_error(base + "mode = sweep\n", "requires at least one sweep axis");
  expect_config_error(base + "mode = backwards\n", "mode must be");
  expect_config_error(base + "spectrum = lorentzian\n", "spectral density");
  expect_config_error(base + "format = tsv\n", "format must be csv or json");
  expect_config_error(base + "just words\n", "expected 'key = value'");
}

TEST(Presets, TemperatureMaps) {
  const RunSpec a = preset("fig4a");
  EXPECT_DOUBLE_EQ(a.system.g, 0.01);
  EXPECT_EQ(a.mode, RunMode::sweep);
  ASSERT_EQ(a.axes.size(), 2u);
  EXPECT_EQ(a.axes[0].param, "t_l");
  EXPECT_EQ(a.axes[1].param, "t_r");
  EXPECT_EQ(a.axes[0].points, 101);
  EXPECT_DOUBLE_EQ(a.axes[0].min, 0.01);
  EXPECT_DOUBLE_EQ(a.axes[0].max, 10.0);

  const RunSpec d = preset("fig4d");
  EXPECT_DOUBLE_EQ(d.system.g, 1.0);
  EXPECT_EQ(d.mode, RunMode::rectification_map);
  EXPECT_DOUBLE_EQ(d.baths.kappa_ll, 0.01);
  EXPECT_DOUBLE_EQ(d.baths.kappa_rr, 0.01);
  EXPECT_EQ(d.baths.kind, SpectralDensity::flat);
}

TEST(Presets, FrequencyMaps) {
  std::vector<std::string> warnings;
  const RunSpec b = preset("fig5b", &warnings);
  EXPECT_DOUBLE_EQ(b.system.g, 1.0);
  EXPECT_DOUBLE_EQ(b.baths.t_left, 2.0);
  EXPECT_DOUBLE_EQ(b.baths.t_right, 1.0);
  EXPECT_EQ(b.mode, RunMode::rectification_map);
  ASSERT_EQ(b.axes.size(), 2u);
  EXPECT_EQ(b.axes[0].param, "omega_l");
  EXPECT_EQ(b.axes[1].param, "omega_r");
  EXPECT_DOUBLE_EQ(b.axes[0].min, 0.05);
  EXPECT_DOUBLE_EQ(b.axes[0].max, 4.0);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("caption"), std::string::npos);

  const RunSpec c = preset("fig5c", &warnings);
  EXPECT_DOUBLE_EQ(c.system.g, 0.5);
  EXPECT_DOUBLE_EQ(c.baths.t_left, 200.0);
  EXPECT_DOUBLE_EQ(c.baths.t_right, 10.0);
}

TEST(Presets, CrossCouplingFamily) {
  EXPECT_DOUBLE_EQ(preset("fig6a").baths.kappa_lr, 0.0);
  EXPECT_DOUBLE_EQ(preset("fig6b").baths.kappa_lr, 0.005);
  EXPECT_DOUBLE_EQ(preset("fig6b").baths.kappa_rl, 0.005);
  EXPECT_DOUBLE_EQ(preset("fig6c").baths.kappa_lr, 0.01);
  const RunSpec b = preset("fig6b");
  EXPECT_DOUBLE_EQ(b.baths.t_left, 10.0);
  EXPECT_DOUBLE_EQ(b.baths.t_right, 0.5);
  EXPECT_EQ(preset_names().size(), 11u);
  try {
    preset("fig9z");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("fig4a"), std::string::npos);
  }
}

TEST(Presets, GridOverride) {
  RunSpec spec = preset("fig4d");
  override_grid(spec, 7);
  EXPECT_EQ(spec.axes[0].points, 7);
  EXPECT_EQ(spec.axes[1].points, 7);
  EXPECT_EQ(spec.row_count(), 49);
  EXPECT_THROW(override_grid(spec, 0), ConfigError);
}

TEST(Run, SingleModeMatchesDirectComputation) {
  const RunSpec spec = parse_config(std::string(kSinglePointConfig));
  const std::vector<ResultRow> rows = run(spec);
  ASSERT_EQ(rows.size(), 1u);
  const Generator gen = assemble(spec.system, spec.baths);
  const HeatReport direct = heat_report(gen, steady_state(gen).rho);
  EXPECT_DOUBLE_EQ(rows[0].j_left, direct.j_left);
  EXPECT_DOUBLE_EQ(rows[0].j_right, direct.j_right);
  EXPECT_DOUBLE_EQ(rows[0].entropy_production, direct.entropy_production);
  EXPECT_EQ(rows[0].nullspace_dim, 1);
  EXPECT_FALSE(rows[0].r.has_value());
  EXPECT_TRUE(rows[0].flags.empty());
}

TEST(Run, RowMajorOrder) {
  RunSpec spec = parse_config(std::string(kSinglePointConfig) +
                              "sweep1 = t_l 1 3 3\nsweep2 = t_r 0.5 1 2\n");
  const std::vector<ResultRow> rows = run(spec);
  ASSERT_EQ(rows.size(), 6u);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) {
      const ResultRow& row = rows[static_cast<std::size_t>(2 * i + j)];
      ASSERT_EQ(row.swept.size(), 2u);
      EXPECT_DOUBLE_EQ(row.swept[0], spec.axes[0].value(i));
      EXPECT_DOUBLE_EQ(row.swept[1], spec.axes[1].value(j));
    }
}

TEST(Run, RectificationOrientationInvariance) {
  // The same physical pair of biases must give the same factor whichever
  // orientation the grid point names first.
  const std::string base =
      "omega_l = 1\nomega_r = 1\ng = 1\nt_l = 0\nt_r = 0\nkappa_ll = 0.01\nkappa_rr = 0.01\n"
      "mode = rectification_map\n";
  RunSpec hot_right = parse_config(base + "sweep1 = t_l 0.5 0.5 1\nsweep2 = t_r 10 10 1\n");
  RunSpec hot_left = parse_config(base + "sweep1 = t_l 10 10 1\nsweep2 = t_r 0.5 0.5 1\n");
  const ResultRow a = run(hot_right)[0];
  const ResultRow b = run(hot_left)[0];
  ASSERT_TRUE(a.r.has_value());
  ASSERT_TRUE(b.r.has_value());
  EXPECT_DOUBLE_EQ(*a.r, *b.r);
  EXPECT_NEAR(*a.r, 0.64352065596823993, 1e-10);
}

TEST(Run, EqualBiasRectificationIsUndefined) {
  const RunSpec spec = parse_config(
      "omega_l = 1\nomega_r = 1\ng = 1\nt_l = 0\nt_r = 0\nkappa_ll = 0.01\nkappa_rr = 0.01\n"
      "mode = rectification_map\nsweep1 = t_l 2 2 1\nsweep2 = t_r 2 2 1\n");
  const ResultRow row = run(spec)[0];
  EXPECT_FALSE(row.r.has_value());
  ASSERT_EQ(row.flags.size(), 1u);
  EXPECT_EQ(row.flags[0], "rectification_undefined");

  std::ostringstream out;
  emit_csv(spec, {row}, out);
  // The r column is left empty, not zero.
  EXPECT_NE(out.str().find(",,"), std::string::npos);
}

TEST(Run, ErrorRowsAreContained) {
  // g = 0 with an undamped right qubit has no unique steady state; the row is
  // flagged and the remaining rows still solve.
  const RunSpec spec = parse_config(
      "omega_l = 1\nomega_r = 1\ng = 0\nt_l = 2\nt_r = 1\nkappa_ll = 0.01\nkappa_rr = 0\n"
      "sweep1 = g 0 1 3\n");
  const std::vector<ResultRow> rows = run(spec);
  ASSERT_EQ(rows.size(), 3u);
  // The g = 0 row is also spectrally degenerate (omega_l equals the dressed
  // splitting), so it carries the near-degeneracy diagnostic as well.
  ASSERT_FALSE(rows[0].flags.empty());
  EXPECT_NE(std::find(rows[0].flags.begin(), rows[0].flags.end(), "degenerate_steady_state"),
            rows[0].flags.end());
  EXPECT_EQ(rows[0].nullspace_dim, 4);
  EXPECT_TRUE(std::isnan(rows[0].j_left));
  for (int i = 1; i < 3; ++i) {
    EXPECT_TRUE(rows[static_cast<std::size_t>(i)].flags.empty());
    EXPECT_TRUE(std::isfinite(rows[static_cast<std::size_t>(i)].j_left));
  }
}

TEST(Run, ExceptionRowsAreContained) {
  // omega_r = g = 0 leaves the mixing angle undefined; the row reports the
  // error text instead of aborting the run.
  const RunSpec spec = parse_config(
      "omega_l = 1\nomega_r = 0\ng = 0\nt_l = 2\nt_r = 1\nkappa_ll = 0.01\nkappa_rr = 0.01\n"
      "sweep1 = omega_r 0 1 3\n");
  const std::vector<ResultRow> rows = run(spec);
  ASSERT_EQ(rows.size(), 3u);
  ASSERT_EQ(rows[0].flags.size(), 1u);
  EXPECT_EQ(rows[0].flags[0].rfind("error: ", 0), 0u) << rows[0].flags[0];
  EXPECT_TRUE(std::isfinite(rows[1].j_left));
  EXPECT_TRUE(std::isfinite(rows[2].j_left));
}

TEST(Output, CsvSchemaAndRoundTrip) {
  RunSpec spec = preset("fig4d");
  override_grid(spec, 3);
  const std::vector<ResultRow> rows = run(spec);
  std::ostringstream out;
  emit_csv(spec, rows, out);
  const std::string text = out.str();

  std::istringstream lines(text);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header,
            "t_l,t_r,j_left,j_right,r,first_law_residual,entropy_production,nullspace_dim,"
            "diagnostic_flags");
  EXPECT_EQ(text.find('\r'), std::string::npos);

  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    ++count;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream fs(line);
    while (std::getline(fs, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    ASSERT_GE(fields.size(), 8u) << line;
  }
  EXPECT_EQ(count, 9u);

  // %.17g survives a strtod round trip bit for bit.
  const std::size_t row0 = text.find('\n') + 1;
  const std::string first = text.substr(row0, text.find('\n', row0) - row0);
  const std::string first_field = first.substr(0, first.find(','));
  EXPECT_EQ(std::strtod(first_field.c_str(), nullptr), rows[0].swept[0]);
  EXPECT_EQ(std::strtod(detail::format_double(rows[4].j_left).c_str(), nullptr), rows[4].j_left);
  EXPECT_EQ(std::strtod(detail::format_double(1.0 / 3.0).c_str(), nullptr), 1.0 / 3.0);
  EXPECT_EQ(std::strtod(detail::format_double(1e-300).c_str(), nullptr), 1e-300);
}

TEST(Output, JsonIsParseableWithNullForMissing) {
  RunSpec spec = preset("fig4d");
  spec.format = OutputFormat::json;
  override_grid(spec, 3);
  const std::string text = run_to_string(spec);
  const nlohmann::json doc = nlohmann::json::parse(text);
  ASSERT_TRUE(doc.is_array());
  ASSERT_EQ(doc.size(), 9u);
  for (const auto& row : doc) {
    ASSERT_TRUE(row.contains("t_l"));
    ASSERT_TRUE(row.contains("r"));
    ASSERT_TRUE(row["diagnostic_flags"].is_array());
    EXPECT_TRUE(row["j_left"].is_number());
  }
  // Equal temperatures on the diagonal: rectification undefined, r is null.
  bool saw_null = false, saw_value = false;
  for (const auto& row : doc) {
    if (row["r"].is_null()) saw_null = true;
    else saw_value = true;
  }
  EXPECT_TRUE(saw_null);
  EXPECT_TRUE(saw_value);
}

TEST(Output, DeterministicAcrossWorkersAndReruns) {
  RunSpec spec = preset("fig4d");
  override_grid(spec, 5);
  const std::string once = run_to_string(spec, 1);
  EXPECT_EQ(once, run_to_string(spec, 1));
  EXPECT_EQ(once, run_to_string(spec, 2));
  EXPECT_EQ(once, run_to_string(spec, 4));
  EXPECT_EQ(once, run_to_string(spec, 7));
}

TEST(Run, ValidatesSpec) {
  RunSpec spec = preset("fig4d");
  spec.axes.push_back({"g", 0.0, 1.0, 3});
  EXPECT_THROW(run(spec), ConfigError);
}

}  // namespace
