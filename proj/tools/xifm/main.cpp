// xifm command-line front end. Exit status: 0 success, 1 validation breach,
// 2 malformed command line, config or input data.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "handles.hpp"
#include "table.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBreach = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config_path;
  std::string output_path;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
};

void add_common_options(CLI::App& app, Options& options) {
  app.add_option("-c,--config", options.config_path, "JSON config file (comments allowed)");
  app.add_option("-o,--output", options.output_path, "output file; standard output when omitted");
  app.add_option("-f,--format", options.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("-s,--seed", options.seed, "seed for randomized grids");
  app.add_option("--set", options.overrides, "override a config value, e.g. interferometer.tau=0.9")
      ->type_name("KEY=VALUE")
      ->allow_extra_args(false);
}

int run(const Options& options, std::optional<xifm::cli::Mode> mode) {
  using namespace xifm::cli;

  Json tree = Json::object();
  std::filesystem::path base_dir = std::filesystem::current_path();
  if (!options.config_path.empty()) {
    tree = load_config(options.config_path);
    base_dir = std::filesystem::absolute(options.config_path).parent_path();
  }
  for (const auto& assignment : options.overrides) apply_override(tree, assignment);
  if (options.seed) tree["seed"] = *options.seed;
  if (!options.output_path.empty()) tree["output"]["path"] = options.output_path;
  if (!options.format.empty()) tree["output"]["format"] = options.format;

  const RunConfig config = make_run_config(std::move(tree), mode, base_dir);

  bool breach = false;
  Table table({});
  switch (config.mode) {
    case Mode::Simulate: table = run_simulate(config); break;
    case Mode::Sweep: table = run_sweep(config); break;
    case Mode::Design: table = run_design(config); break;
    case Mode::Characterize: table = run_characterize(config); break;
    case Mode::Validate: {
      auto report = run_validate(config);
      breach = !report.passed;
      table = std::move(report.table);
      break;
    }
  }

  const auto command = mode_name(config.mode);
  if (config.output) {
    std::ofstream out(*config.output, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write output file '" + config.output->string() + "'");
    write_table(out, table, config.format, command);
    if (!out.flush()) throw ConfigError("failed writing '" + config.output->string() + "'");
  } else {
    write_table(std::cout, table, config.format, command);
  }

  if (breach) {
    std::cerr << "xifm: validation failed; see rows with pass=false\n";
    return kExitBreach;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interaction-free measurement and Laue interferometer toolkit"};
  app.set_version_flag("--version", std::string(xifm_version()));
  app.require_subcommand(0, 1);

  Options options;
  add_common_options(app, options);

  struct Entry {
    const char* name;
    const char* help;
    xifm::cli::Mode mode;
    CLI::App* app = nullptr;
  };
  std::vector<Entry> entries{
      {"simulate", "port statistics and IFM metrics for one configuration", xifm::cli::Mode::Simulate},
      {"sweep", "one row per grid point of an interferometer or Laue variable", xifm::cli::Mode::Sweep},
      {"design", "solve for the tilt giving a target reflectance", xifm::cli::Mode::Design},
      {"characterize", "recover R~, T~ and cos^2(phi/2) from measured means",
       xifm::cli::Mode::Characterize},
      {"validate", "randomized cross-check suite; exits 1 on any breach", xifm::cli::Mode::Validate},
  };
  for (auto& entry : entries) {
    entry.app = app.add_subcommand(entry.name, entry.help);
    add_common_options(*entry.app, options);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  std::optional<xifm::cli::Mode> mode;
  for (const auto& entry : entries) {
    if (entry.app->parsed()) mode = entry.mode;
  }

  try {
    return run(options, mode);
  } catch (const xifm::cli::ConfigError& e) {
    std::cerr << "xifm: config error: " << e.what() << '\n';
  } catch (const xifm::cli::LibraryError& e) {
    std::cerr << "xifm: invalid parameters: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "xifm: " << e.what() << '\n';
  }
  return kExitConfig;
}
