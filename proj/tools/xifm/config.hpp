#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace xifm::cli {

using Json = nlohmann::json;

/// Anything wrong with the configuration itself; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a JSON document that may contain // and /* */ comments. Syntax
/// errors are reported as "<origin>:<line>:<column>: <message>".
Json parse_config_text(const std::string& text, const std::string& origin);
Json load_config(const std::filesystem::path& path);

/// Applies a dotted assignment such as "interferometer.tau=0.9". The value is
/// read as JSON when possible and kept as a plain string otherwise.
void apply_override(Json& root, const std::string& assignment);

/// Read-only view of one object in the tree that reports errors with the
/// full dotted path of the offending key.
class Section {
 public:
  Section(const Json& node, std::string path);

  const std::string& path() const { return path_; }
  bool has(std::string_view key) const;

  Section child(std::string_view key) const;
  std::optional<Section> optional_child(std::string_view key) const;

  double number(std::string_view key) const;
  double number(std::string_view key, double fallback) const;
  std::optional<double> optional_number(std::string_view key) const;
  std::int64_t integer(std::string_view key, std::int64_t fallback) const;
  bool boolean(std::string_view key, bool fallback) const;
  std::string string(std::string_view key) const;
  std::string string(std::string_view key, std::string fallback) const;
  std::vector<double> numbers(std::string_view key) const;

  /// Rejects keys outside `allowed`, which catches misspelled fields.
  void only(std::initializer_list<std::string_view> allowed) const;

 private:
  const Json& at(std::string_view key) const;
  std::string qualified(std::string_view key) const;

  const Json* node_;
  std::string path_;
};

enum class Mode { Simulate, Sweep, Design, Characterize, Validate };
enum class Format { Csv, Json };

std::optional<Mode> parse_mode(std::string_view name);
std::string_view mode_name(Mode mode);

struct RunConfig {
  Mode mode = Mode::Simulate;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> output;
  Format format = Format::Csv;
  // Directory used to resolve relative paths named inside the config.
  std::filesystem::path base_dir;
  Json tree;
};

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Validates the top level of `tree` and extracts the run-wide settings.
/// `mode` comes from the subcommand when given and from the "mode" key
/// otherwise.
RunConfig make_run_config(Json tree, std::optional<Mode> mode, std::filesystem::path base_dir);

}  // namespace xifm::cli
