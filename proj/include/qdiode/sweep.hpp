#ifndef QDIODE_SWEEP_HPP
#define QDIODE_SWEEP_HPP

#include <algorithm>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qdiode/observables.hpp"

// Parameter sweeps over steady-state transport quantities, a line-based
// config format, figure presets, and deterministic CSV/JSON emission.
// Output bytes are identical across runs and worker counts: every double is
// printed with %.17g (full round-trip precision) and rows are written in
// row-major grid order regardless of which thread computed them.

namespace qdiode {

enum class RunMode { single, sweep, rectification_map };
enum class OutputFormat { csv, json };

inline std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::single: return "single";
    case RunMode::sweep: return "sweep";
    default: return "rectification_map";
  }
}

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One swept parameter on a uniform grid; points = 1 pins the minimum.
struct SweepAxis {
  std::string param;
  double min = 0.0;
  double max = 0.0;
  int points = 1;

  double value(int i) const {
    if (points == 1) return min;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
};

inline const std::set<std::string>& sweepable_params() {
  static const std::set<std::string> params{"t_l",     "t_r", "omega_l",  "omega_r",
                                            "g",       "kappa_lr", "kappa_rl"};
  return params;
}

struct RunSpec {
  SystemSpec system;
  BathSpec baths;
  std::vector<SweepAxis> axes;
  RunMode mode = RunMode::single;
  std::string output;  // empty = stdout
  OutputFormat format = OutputFormat::csv;

  void validate() const {
    if (axes.size() > 2) throw ConfigError("at most two sweep axes are supported");
    std::set<std::string> seen;
    for (const auto& axis : axes) {
      if (!sweepable_params().count(axis.param))
        throw ConfigError("parameter '" + axis.param + "' is not sweepable");
      if (!seen.insert(axis.param).second)
        throw ConfigError("parameter '" + axis.param + "' swept twice");
      if (axis.points < 1) throw ConfigError("axis '" + axis.param + "': points must be >= 1");
      if (axis.min > axis.max)
        throw ConfigError("axis '" + axis.param + "': min exceeds max");
    }
    if (mode == RunMode::single && !axes.empty())
      throw ConfigError("mode single does not take sweep axes");
    if (mode != RunMode::single && axes.empty())
      throw ConfigError("mode " + to_string(mode) + " requires at least one sweep axis");
  }

  int row_count() const {
    int n = 1;
    for (const auto& axis : axes) n *= axis.points;
    return n;
  }
};

struct ResultRow {
  std::vector<double> swept;  // axis values, config axis order
  double j_left = std::numeric_limits<double>::quiet_NaN();
  double j_right = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> r;
  double first_law_residual = std::numeric_limits<double>::quiet_NaN();
  double entropy_production = std::numeric_limits<double>::quiet_NaN();
  int nullspace_dim = 0;
  std::vector<std::string> flags;
};

namespace detail {

inline void apply_param(SystemSpec& system, BathSpec& baths, const std::string& name,
                        double value) {
  if (name == "t_l") baths.t_left = value;
  else if (name == "t_r") baths.t_right = value;
  else if (name == "omega_l") system.omega_l = value;
  else if (name == "omega_r") system.omega_r = value;
  else if (name == "g") system.g = value;
  else if (name == "kappa_lr") baths.kappa_lr = value;
  else if (name == "kappa_rl") baths.kappa_rl = value;
  else throw ConfigError("parameter '" + name + "' is not sweepable");
}

// Both rectified currents below this magnitude are numerical zero: the ratio
// |J1+J2|/max is pure roundoff noise there, so r is reported missing.
constexpr double kRectificationFloor = 1e-13;

struct PointSolution {
  HeatReport report;
  int nullspace_dim = 0;
  bool ok = false;
  std::string error;
};

inline PointSolution solve_point(const SystemSpec& system, const BathSpec& baths,
                                 std::vector<std::string>* flags) {
  PointSolution out;
  try {
    const Generator gen = assemble(system, baths);
    if (gen.near_degenerate && flags) flags->push_back("near_degenerate_spectrum");
    const SteadySolution steady = steady_state(gen);
    out.report = heat_report(gen, steady.rho);
    out.nullspace_dim = steady.nullspace_dim;
    out.ok = true;
  } catch (const DegenerateSteadyStateError& e) {
    out.nullspace_dim = static_cast<int>(e.null_vectors.size());
    out.error = "degenerate_steady_state";
  } catch (const std::exception& e) {
    out.error = std::string("error: ") + e.what();
  }
  return out;
}

inline ResultRow solve_row(const RunSpec& spec, int index) {
  ResultRow row;
  SystemSpec system = spec.system;
  BathSpec baths = spec.baths;

  int rest = index;
  std::vector<int> coords(spec.axes.size(), 0);
  for (int k = static_cast<int>(spec.axes.size()) - 1; k >= 0; --k) {
    coords[static_cast<std::size_t>(k)] = rest % spec.axes[static_cast<std::size_t>(k)].points;
    rest /= spec.axes[static_cast<std::size_t>(k)].points;
  }
  for (std::size_t k = 0; k < spec.axes.size(); ++k) {
    const double value = spec.axes[k].value(coords[k]);
    row.swept.push_back(value);
    apply_param(system, baths, spec.axes[k].param, value);
  }

  const PointSolution direct = solve_point(system, baths, &row.flags);
  if (!direct.ok) {
    row.flags.push_back(direct.error);
    row.nullspace_dim = direct.nullspace_dim;
    return row;
  }
  row.j_left = direct.report.j_left;
  row.j_right = direct.report.j_right;
  row.first_law_residual = direct.report.first_law_residual;
  row.entropy_production = direct.report.entropy_production;
  row.nullspace_dim = direct.nullspace_dim;

  if (spec.mode == RunMode::rectification_map) {
    BathSpec swapped = baths;
    std::swap(swapped.t_left, swapped.t_right);
    const PointSolution mirror = solve_point(system, swapped, nullptr);
    if (!mirror.ok) {
      row.flags.push_back("swapped_" + mirror.error);
      return row;
    }
    const double j_direct = direct.report.j_right;
    const double j_mirror = mirror.report.j_right;
    if (std::max(std::abs(j_direct), std::abs(j_mirror)) < kRectificationFloor) {
      row.flags.push_back("rectification_undefined");
    } else {
      // Forward orientation: the right bath is the hot one.
      const double j_forward = baths.t_right >= baths.t_left ? j_direct : j_mirror;
      const double j_backward = baths.t_right >= baths.t_left ? j_mirror : j_direct;
      row.r = rectification(j_forward, j_backward).r;
    }
  }
  return row;
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (i) out += ';';
    out += flags[i];
  }
  return out;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

inline std::vector<ResultRow> run(const RunSpec& spec, int workers = 1) {
  spec.validate();
  const int n = spec.row_count();
  std::vector<ResultRow> rows(static_cast<std::size_t>(n));
  const int used = std::max(1, workers);
  if (used == 1) {
    for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = detail::solve_row(spec, i);
    return rows;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < used; ++t) {
    const int begin = static_cast<int>(static_cast<long>(n) * t / used);
    const int end = static_cast<int>(static_cast<long>(n) * (t + 1) / used);
    pool.emplace_back([&spec, &rows, begin, end] {
      for (int i = begin; i < end; ++i)
        rows[static_cast<std::size_t>(i)] = detail::solve_row(spec, i);
    });
  }
  for (auto& th : pool) th.join();
  return rows;
}

inline void emit_csv(const RunSpec& spec, const std::vector<ResultRow>& rows, std::ostream& out) {
  for (const auto& axis : spec.axes) out << axis.param << ',';
  out << "j_left,j_right,r,first_law_residual,entropy_production,nullspace_dim,diagnostic_flags\n";
  for (const auto& row : rows) {
    for (double v : row.swept) out << detail::format_double(v) << ',';
    out << detail::format_double(row.j_left) << ',' << detail::format_double(row.j_right) << ',';
    if (row.r) out << detail::format_double(*row.r);
    out << ',' << detail::format_double(row.first_law_residual) << ','
        << detail::format_double(row.entropy_production) << ',' << row.nullspace_dim << ','
        << detail::join_flags(row.flags) << '\n';
  }
}

inline void emit_json(const RunSpec& spec, const std::vector<ResultRow>& rows, std::ostream& out) {
  auto number = [](double x) {
    return std::isfinite(x) ? detail::format_double(x) : std::string("null");
  };
  out << "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    out << "  {";
    for (std::size_t k = 0; k < spec.axes.size(); ++k)
      out << '"' << spec.axes[k].param << "\": " << number(row.swept[k]) << ", ";
    out << "\"j_left\": " << number(row.j_left) << ", \"j_right\": " << number(row.j_right)
        << ", \"r\": " << (row.r ? detail::format_double(*row.r) : std::string("null"))
        << ", \"first_law_residual\": " << number(row.first_law_residual)
        << ", \"entropy_production\": " << number(row.entropy_production)
        << ", \"nullspace_dim\": " << row.nullspace_dim << ", \"diagnostic_flags\": [";
    for (std::size_t k = 0; k < row.flags.size(); ++k)
      out << (k ? ", " : "") << '"' << detail::json_escape(row.flags[k]) << '"';
    out << "]}" << (i + 1 < rows.size() ? "," : "") << '\n';
  }
  out << "]\n";
}

inline std::string render(const RunSpec& spec, const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  if (spec.format == OutputFormat::csv)
    emit_csv(spec, rows, out);
  else
    emit_json(spec, rows, out);
  return out.str();
}

inline std::string run_to_string(const RunSpec& spec, int workers = 1) {
  return render(spec, run(spec, workers));
}

// ---------------------------------------------------------------------------
// Config parsing.  Line format: "key = value", '#' starts a comment.  Keys:
//   omega_l omega_r g t_l t_r kappa_ll kappa_rr  (required numbers)
//   kappa_lr kappa_rl   (default 0)
//   spectrum = flat|ohmic   (default flat)
//   mode = single|sweep|rectification_map   (default inferred from axes)
//   sweep1 = <param> <min> <max> <points>   (likewise sweep2)
//   output = <path>, format = csv|json
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

inline double parse_number(const std::string& key, const std::string& value, int line) {
  std::size_t used = 0;
  double parsed = 0.0;
  try {
    parsed = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty())
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "': expected a number, got '" + value + "'");
  return parsed;
}

inline SweepAxis parse_axis(const std::string& key, const std::string& value, int line) {
  std::istringstream in(value);
  SweepAxis axis;
  std::string min_s, max_s, points_s, extra;
  if (!(in >> axis.param >> min_s >> max_s >> points_s) || (in >> extra))
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "': expected '<param> <min> <max> <points>'");
  axis.min = parse_number(key, min_s, line);
  axis.max = parse_number(key, max_s, line);
  const double points = parse_number(key, points_s, line);
  axis.points = static_cast<int>(points);
  if (points != axis.points || axis.points < 1)
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "': points must be a positive integer");
  return axis;
}

}  // namespace detail

inline RunSpec parse_config(std::istream& in) {
  RunSpec spec;
  spec.baths.kappa_lr = 0.0;
  spec.baths.kappa_rl = 0.0;
  std::set<std::string> seen;
  std::optional<SweepAxis> sweep1, sweep2;
  std::optional<RunMode> mode;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (!seen.insert(key).second)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");

    if (key == "omega_l") spec.system.omega_l = detail::parse_number(key, value, line_no);
    else if (key == "omega_r") spec.system.omega_r = detail::parse_number(key, value, line_no);
    else if (key == "g") spec.system.g = detail::parse_number(key, value, line_no);
    else if (key == "t_l") spec.baths.t_left = detail::parse_number(key, value, line_no);
    else if (key == "t_r") spec.baths.t_right = detail::parse_number(key, value, line_no);
    else if (key == "kappa_ll") spec.baths.kappa_ll = detail::parse_number(key, value, line_no);
    else if (key == "kappa_rr") spec.baths.kappa_rr = detail::parse_number(key, value, line_no);
    else if (key == "kappa_lr") spec.baths.kappa_lr = detail::parse_number(key, value, line_no);
    else if (key == "kappa_rl") spec.baths.kappa_rl = detail::parse_number(key, value, line_no);
    else if (key == "spectrum") {
      try {
        spec.baths.kind = parse_spectral_density(value);
      } catch (const std::exception& e) {
        throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
      }
    } else if (key == "mode") {
      if (value == "single") mode = RunMode::single;
      else if (value == "sweep") mode = RunMode::sweep;
      else if (value == "rectification_map") mode = RunMode::rectification_map;
      else
        throw ConfigError("line " + std::to_string(line_no) +
                          ": mode must be single, sweep or rectification_map");
    } else if (key == "sweep1") {
      sweep1 = detail::parse_axis(key, value, line_no);
    } else if (key == "sweep2") {
      sweep2 = detail::parse_axis(key, value, line_no);
    } else if (key == "output") {
      spec.output = value;
    } else if (key == "format") {
      if (value == "csv") spec.format = OutputFormat::csv;
      else if (value == "json") spec.format = OutputFormat::json;
      else throw ConfigError("line " + std::to_string(line_no) + ": format must be csv or json");
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }

  for (const char* required : {"omega_l", "omega_r", "g", "t_l", "t_r", "kappa_ll", "kappa_rr"})
    if (!seen.count(required)) throw ConfigError(std::string("missing required key '") + required + "'");
  if (sweep2 && !sweep1) throw ConfigError("sweep2 given without sweep1");
  if (sweep1) spec.axes.push_back(*sweep1);
  if (sweep2) spec.axes.push_back(*sweep2);
  spec.mode = mode.value_or(spec.axes.empty() ? RunMode::single : RunMode::sweep);
  spec.validate();
  return spec;
}

inline RunSpec parse_config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

// ---------------------------------------------------------------------------
// Figure presets.  fig4*: temperature maps of the symmetric resonant diode;
// fig5*: frequency-plane maps under two thermal biases; fig6*: frequency-
// plane maps with growing bath cross coupling.  Grids default to 101x101.
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig4a", "fig4b", "fig4c", "fig4d", "fig5a",
                                              "fig5b", "fig5c", "fig5d", "fig6a", "fig6b",
                                              "fig6c"};
  return names;
}

inline RunSpec preset(const std::string& name, std::vector<std::string>* warnings = nullptr) {
  RunSpec spec;
  spec.system = SystemSpec{1.0, 1.0, 1.0};
  spec.baths = BathSpec{};
  spec.baths.kappa_ll = 0.01;
  spec.baths.kappa_rr = 0.01;
  spec.baths.kind = SpectralDensity::flat;

  auto temp_axes = [] {
    return std::vector<SweepAxis>{{"t_l", 0.01, 10.0, 101}, {"t_r", 0.01, 10.0, 101}};
  };
  auto freq_axes = [] {
    return std::vector<SweepAxis>{{"omega_l", 0.05, 4.0, 101}, {"omega_r", 0.05, 4.0, 101}};
  };
  auto fig5_warning = [&](const std::string& who) {
    if (warnings)
      warnings->push_back(who +
                          ": the reference figure's caption and body text disagree on the "
                          "weak-coupling value of g (0.5 vs 0.01); using the caption values "
                          "(g = 0.5 for fig5a/fig5c, g = 1 for fig5b/fig5d). Run a config "
                          "file to reproduce the text values instead.");
  };

  if (name == "fig4a" || name == "fig4b" || name == "fig4c" || name == "fig4d") {
    spec.system.g = (name == "fig4a" || name == "fig4c") ? 0.01 : 1.0;
    spec.axes = temp_axes();
    spec.mode = (name == "fig4a" || name == "fig4b") ? RunMode::sweep : RunMode::rectification_map;
  } else if (name == "fig5a" || name == "fig5b" || name == "fig5c" || name == "fig5d") {
    spec.system.g = (name == "fig5a" || name == "fig5c") ? 0.5 : 1.0;
    const bool strong_bias = name == "fig5c" || name == "fig5d";
    spec.baths.t_left = strong_bias ? 200.0 : 2.0;
    spec.baths.t_right = strong_bias ? 10.0 : 1.0;
    spec.axes = freq_axes();
    spec.mode = RunMode::rectification_map;
    fig5_warning(name);
  } else if (name == "fig6a" || name == "fig6b" || name == "fig6c") {
    spec.baths.t_left = 10.0;
    spec.baths.t_right = 0.5;
    spec.baths.kappa_lr = name == "fig6a" ? 0.0 : (name == "fig6b" ? 0.005 : 0.01);
    spec.baths.kappa_rl = spec.baths.kappa_lr;
    spec.axes = freq_axes();
    spec.mode = RunMode::rectification_map;
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
  }
  return spec;
}

inline void override_grid(RunSpec& spec, int points) {
  if (points < 1) throw ConfigError("grid override must be >= 1");
  for (auto& axis : spec.axes) axis.points = points;
}

}  // namespace qdiode

#endif  // QDIODE_SWEEP_HPP
