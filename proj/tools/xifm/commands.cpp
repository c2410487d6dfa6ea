#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "handles.hpp"

namespace xifm::cli {

namespace {

constexpr double kMicro = 1e-6;

struct InterferometerConfig {
  double reflectance = 0.5;
  double tau = 1.0;
  double phase = 0.0;
  bool object = true;
  int input_port = 1;
};

InterferometerConfig read_interferometer(const Section& root) {
  const Section s = root.child("interferometer");
  s.only({"reflectance", "tau", "phase", "phase_pi", "object", "input_port"});
  InterferometerConfig out;
  out.reflectance = s.number("reflectance");
  out.tau = s.number("tau");
  if (s.has("phase") && s.has("phase_pi")) {
    throw ConfigError("'interferometer' sets both 'phase' and 'phase_pi'");
  }
  out.phase = s.has("phase_pi") ? s.number("phase_pi") * std::numbers::pi : s.number("phase", 0.0);
  out.object = s.boolean("object", true);
  const auto port = s.integer("input_port", 1);
  if (port != 1 && port != 2) throw ConfigError("'interferometer.input_port' must be 1 or 2");
  out.input_port = static_cast<int>(port);
  return out;
}

std::vector<std::string> interferometer_columns() {
  return {"reflectance", "tau",        "phase",      "object",     "input_port", "r_tilde",
          "t_tilde",     "mean_port3", "mean_port1", "mean_port2", "mean_port4", "var_port3",
          "var_port1",   "var_port2",  "var_port4",  "p_abs_object", "p_loss_env", "dark_port",
          "leakage",     "p_det",      "p_abs",      "eta"};
}

std::vector<Cell> interferometer_row(const InterferometerConfig& c) {
  const Interferometer device(c.reflectance, c.tau, c.phase, c.object, c.input_port);
  const auto params = device.params();
  const auto stats = device.engine();
  const auto dark = device.dark_port();

  std::vector<Cell> row{params.reflectance, params.tau, params.phase, params.object_present != 0,
                        std::int64_t{c.input_port}, params.r_tilde, params.t_tilde};
  for (double m : stats.mean) row.emplace_back(m);
  for (double v : stats.variance) row.emplace_back(v);
  row.emplace_back(stats.p_abs_object);
  row.emplace_back(stats.p_loss_env);
  row.emplace_back(std::int64_t{dark.dark_port == XIFM_PORT1 ? 1 : 2});
  row.emplace_back(dark.leakage);
  row.emplace_back(dark.metrics.p_det);
  row.emplace_back(dark.metrics.p_abs);
  row.emplace_back(dark.metrics.eta_defined ? Cell{dark.metrics.eta} : Cell{});
  return row;
}

struct CrystalSetup {
  Crystal crystal;
  double z0_um = 0.0;
  double g_magnitude = 0.0;
};

CrystalSetup read_crystal(const Section& root) {
  const Section s = root.child("laue");
  s.only({"z0_um", "photon_energy_kev", "omega_rad_per_s", "material", "direct"});
  const double z0_um = s.number("z0_um");
  const double z0 = z0_um * kMicro;
  const bool material = s.has("material");
  if (material == s.has("direct")) {
    throw ConfigError("'laue' needs exactly one of 'material' or 'direct'");
  }

  if (!material) {
    const Section d = s.child("direct");
    d.only({"kappa_per_m", "g_per_m", "alpha_per_m", "tau"});
    if (d.has("alpha_per_m") == d.has("tau")) {
      throw ConfigError("'laue.direct' needs exactly one of 'alpha_per_m' or 'tau'");
    }
    double alpha = 0.0;
    if (d.has("tau")) {
      check(xifm_laue_calibrate_alpha(z0, d.number("tau"), &alpha), "laue.direct.tau");
    } else {
      alpha = d.number("alpha_per_m");
    }
    const double g = d.number("g_per_m");
    return {Crystal::direct(alpha, d.number("kappa_per_m"), g, z0), z0_um, g};
  }

  if (s.has("photon_energy_kev") == s.has("omega_rad_per_s")) {
    throw ConfigError("'laue' with a material needs exactly one of 'photon_energy_kev' or 'omega_rad_per_s'");
  }
  double omega = 0.0;
  if (s.has("photon_energy_kev")) {
    check(xifm_omega_from_energy_kev(s.number("photon_energy_kev"), &omega), "laue.photon_energy_kev");
  } else {
    omega = s.number("omega_rad_per_s");
  }

  const Section m = s.child("material");
  m.only({"rho_0", "rho_G", "g_per_m", "omega_0", "gamma", "refraction_n", "bragg_theta"});
  xifm_material params{};
  params.rho_0 = m.number("rho_0");
  const auto rho_g = m.numbers("rho_G");
  if (rho_g.size() != 2) throw ConfigError("'laue.material.rho_G' must be [real, imaginary]");
  params.rho_G_re = rho_g[0];
  params.rho_G_im = rho_g[1];
  params.g_magnitude = m.number("g_per_m");
  params.omega_0 = m.number("omega_0");
  params.gamma_damping = m.number("gamma");
  params.refraction_n = m.number("refraction_n", 1.0);
  params.bragg_theta = m.number("bragg_theta");
  return {Crystal::from_material(params, omega, z0), z0_um, params.g_magnitude};
}

// Crystal inputs echoed on every Laue row.
std::vector<Cell> crystal_echo(const CrystalSetup& setup) {
  const auto p = setup.crystal.at(0.0);
  return {setup.z0_um, p.alpha, p.kappa, setup.g_magnitude};
}

const std::vector<std::string> kCrystalEcho{"z0_um", "alpha_per_m", "kappa_per_m", "g_per_m"};

double grid_value(double from, double to, std::size_t points, std::size_t i) {
  if (points == 1) return from;
  // Weighted form keeps grids such as -20..20 in 801 points exact.
  const auto n = static_cast<double>(points - 1);
  const auto k = static_cast<double>(i);
  return (from * (n - k) + to * k) / n;
}

Table laue_sweep(const Section& root, const Section& sweep, double from, double to, std::size_t points) {
  if (sweep.has("configuration")) {
    throw ConfigError("'sweep.configuration' applies to interferometer variables only");
  }
  const CrystalSetup setup = read_crystal(root);
  std::vector<std::string> columns{"delta_urad"};
  columns.insert(columns.end(), kCrystalEcho.begin(), kCrystalEcho.end());
  columns.insert(columns.end(), {"delta_kz_per_m", "reflectance", "transmittance", "tau"});
  Table table(columns);

  const auto echo = crystal_echo(setup);
  for (std::size_t i = 0; i < points; ++i) {
    const double delta_urad = grid_value(from, to, points, i);
    const auto params = setup.crystal.at(delta_urad * kMicro);
    const auto transfer = laue_transfer(params);
    std::vector<Cell> row{delta_urad};
    row.insert(row.end(), echo.begin(), echo.end());
    row.emplace_back(params.delta_kz);
    row.emplace_back(transfer.r * transfer.r);
    row.emplace_back(transfer.t_re * transfer.t_re + transfer.t_im * transfer.t_im);
    row.emplace_back(transfer.tau);
    table.add_row(std::move(row));
  }
  return table;
}

}  // namespace

Table run_simulate(const RunConfig& config) {
  const Section root(config.tree, "");
  Table table(interferometer_columns());
  table.add_row(interferometer_row(read_interferometer(root)));
  return table;
}

Table run_sweep(const RunConfig& config) {
  const Section root(config.tree, "");
  const Section sweep = root.child("sweep");
  sweep.only({"variable", "from", "to", "points", "configuration"});
  const std::string variable = sweep.string("variable");
  const double from = sweep.number("from");
  const double to = sweep.number("to");
  const auto points = sweep.integer("points", 101);
  if (points < 1) throw ConfigError("'sweep.points' must be at least 1");
  if (!std::isfinite(from) || !std::isfinite(to)) throw ConfigError("'sweep' range must be finite");
  const auto n = static_cast<std::size_t>(points);

  if (variable == "delta_urad") return laue_sweep(root, sweep, from, to, n);
  if (variable != "tau" && variable != "reflectance" && variable != "phase") {
    throw ConfigError("'sweep.variable' must be tau, reflectance, phase or delta_urad, found \"" +
                      variable + "\"");
  }

  InterferometerConfig base = read_interferometer(root);
  const std::string configuration = sweep.string("configuration", "as-is");
  if (configuration == "symmetric") {
    if (variable != "tau") throw ConfigError("a symmetric sweep fixes R and phase; sweep 'tau' instead");
    base.reflectance = 0.5;
    base.phase = 0.0;
  } else if (configuration == "asymmetric") {
    if (variable == "phase") throw ConfigError("an asymmetric sweep fixes the phase at pi");
    base.phase = std::numbers::pi;
  } else if (configuration != "as-is") {
    throw ConfigError("'sweep.configuration' must be symmetric, asymmetric or as-is, found \"" +
                      configuration + "\"");
  }

  Table table(interferometer_columns());
  for (std::size_t i = 0; i < n; ++i) {
    InterferometerConfig point = base;
    const double value = grid_value(from, to, n, i);
    if (variable == "tau") point.tau = value;
    if (variable == "reflectance") point.reflectance = value;
    if (variable == "phase") point.phase = value;
    table.add_row(interferometer_row(point));
  }
  return table;
}

Table run_design(const RunConfig& config) {
  const Section root(config.tree, "");
  const Section design = root.child("design");
  design.only({"target_R", "window_urad"});
  const double target = design.number("target_R");
  const auto window = design.numbers("window_urad");
  if (window.size() != 2) throw ConfigError("'design.window_urad' must be [min, max]");

  const CrystalSetup setup = read_crystal(root);
  const auto [delta, achieved] = setup.crystal.design(target, window[0] * kMicro, window[1] * kMicro);
  const auto transfer = laue_transfer(setup.crystal.at(delta));

  std::vector<std::string> columns{"target_R", "window_min_urad", "window_max_urad"};
  columns.insert(columns.end(), kCrystalEcho.begin(), kCrystalEcho.end());
  columns.insert(columns.end(), {"delta_urad", "achieved_R", "transmittance", "tau"});
  Table table(columns);
  std::vector<Cell> row{target, window[0], window[1]};
  const auto echo = crystal_echo(setup);
  row.insert(row.end(), echo.begin(), echo.end());
  row.emplace_back(delta / kMicro);
  row.emplace_back(achieved);
  row.emplace_back(transfer.t_re * transfer.t_re + transfer.t_im * transfer.t_im);
  row.emplace_back(transfer.tau);
  table.add_row(std::move(row));
  return table;
}

namespace {

struct Measurements {
  std::array<double, 4> input1{};
  std::array<double, 4> input2{};
  std::size_t rows1 = 0;
  std::size_t rows2 = 0;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

// Rows for the same input are averaged; the "input" column defaults to 1.
Measurements read_measurements(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open measurement file '" + path.string() + "'");

  const std::array<std::string, 4> names{"port3", "port1", "port2", "port4"};
  std::array<std::size_t, 4> index{};
  std::optional<std::size_t> input_index;
  std::size_t width = 0;
  bool have_header = false;
  Measurements out;

  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    const auto origin = path.string() + ":" + std::to_string(line_no) + ": ";
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const auto fields = split_csv_line(line);

    if (!have_header) {
      width = fields.size();
      for (std::size_t k = 0; k < 4; ++k) {
        const auto it = std::find(fields.begin(), fields.end(), names[k]);
        if (it == fields.end()) throw ConfigError(origin + "header lacks column '" + names[k] + "'");
        index[k] = static_cast<std::size_t>(it - fields.begin());
      }
      if (const auto it = std::find(fields.begin(), fields.end(), "input"); it != fields.end()) {
        input_index = static_cast<std::size_t>(it - fields.begin());
      }
      have_header = true;
      continue;
    }

    if (fields.size() != width) {
      throw ConfigError(origin + "expected " + std::to_string(width) + " fields, found " +
                        std::to_string(fields.size()));
    }
    const auto parse = [&](std::size_t column) {
      const auto& text = fields[column];
      double value = 0.0;
      const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
      if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
        throw ConfigError(origin + "'" + text + "' is not a number");
      }
      return value;
    };

    int input = 1;
    if (input_index) {
      const double value = parse(*input_index);
      if (value != 1.0 && value != 2.0) throw ConfigError(origin + "input must be 1 or 2");
      input = static_cast<int>(value);
    }
    auto& sums = input == 1 ? out.input1 : out.input2;
    for (std::size_t k = 0; k < 4; ++k) sums[k] += parse(index[k]);
    ++(input == 1 ? out.rows1 : out.rows2);
  }

  if (!have_header) throw ConfigError(path.string() + ": empty measurement file");
  if (out.rows1 == 0) throw ConfigError(path.string() + ": no rows for input 1");
  for (auto& v : out.input1) v /= static_cast<double>(out.rows1);
  if (out.rows2 > 0) {
    for (auto& v : out.input2) v /= static_cast<double>(out.rows2);
  }
  return out;
}

}  // namespace

Table run_characterize(const RunConfig& config) {
  const Section root(config.tree, "");
  const Section block = root.child("characterize");
  block.only({"measurements"});
  std::filesystem::path path = block.string("measurements");
  if (path.is_relative()) path = config.base_dir / path;

  const Measurements data = read_measurements(path);
  xifm_characterization result{};
  check(xifm_characterize(data.input1.data(), data.rows2 > 0 ? data.input2.data() : nullptr, &result),
        "characterize");

  Table table({"rows_input1", "rows_input2", "mean_port3", "mean_port1", "mean_port2", "mean_port4",
               "r_tilde", "t_tilde", "cos2_half_phi", "phase_estimate", "clamped", "residual"});
  std::vector<Cell> row{static_cast<std::int64_t>(data.rows1), static_cast<std::int64_t>(data.rows2)};
  for (double m : data.input1) row.emplace_back(m);
  row.emplace_back(result.r_tilde);
  row.emplace_back(result.t_tilde);
  row.emplace_back(result.cos2_half_phi);
  // Only |cos(phi/2)| is observable, so the estimate lies in [0, pi].
  row.emplace_back(2.0 * std::acos(std::sqrt(result.cos2_half_phi)));
  row.emplace_back(result.clamped != 0);
  row.emplace_back(result.residual);
  table.add_row(std::move(row));
  return table;
}

}  // namespace xifm::cli
