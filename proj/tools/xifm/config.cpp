#include "config.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace xifm::cli {

namespace {

std::string describe(const Json& value) {
  switch (value.type()) {
    case Json::value_t::null: return "null";
    case Json::value_t::boolean: return "a boolean";
    case Json::value_t::string: return "a string";
    case Json::value_t::array: return "an array";
    case Json::value_t::object: return "an object";
    default: return "a number";
  }
}

}  // namespace

Json parse_config_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    // e.byte is one past the offending character.
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string message = e.what();
    if (const auto colon = message.find(": "); colon != std::string::npos) {
      message = message.substr(colon + 2);
    }
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                      message);
  }
}

Json load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  Json tree = parse_config_text(buffer.str(), path.string());
  if (!tree.is_object()) throw ConfigError(path.string() + ": top level must be an object");
  return tree;
}

void apply_override(Json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--set expects key=value, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  Json value;
  try {
    value = Json::parse(raw);
  } catch (const Json::parse_error&) {
    value = raw;
  }

  Json* node = &root;
  std::string walked;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("--set: empty path component in '" + key + "'");
    if (!node->is_object()) {
      throw ConfigError("--set: '" + walked + "' is " + describe(*node) + ", not an object");
    }
    walked += (walked.empty() ? "" : ".") + part;
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    if (node->is_null()) *node = Json::object();
    start = dot + 1;
  }
  *node = std::move(value);
}

Section::Section(const Json& node, std::string path) : node_(&node), path_(std::move(path)) {
  if (!node.is_object()) {
    throw ConfigError("'" + path_ + "' must be an object, found " + describe(node));
  }
}

std::string Section::qualified(std::string_view key) const {
  return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
}

bool Section::has(std::string_view key) const {
  const auto it = node_->find(key);
  return it != node_->end() && !it->is_null();
}

const Json& Section::at(std::string_view key) const {
  const auto it = node_->find(key);
  if (it == node_->end() || it->is_null()) {
    throw ConfigError("missing required key '" + qualified(key) + "'");
  }
  return *it;
}

Section Section::child(std::string_view key) const { return Section(at(key), qualified(key)); }

std::optional<Section> Section::optional_child(std::string_view key) const {
  if (!has(key)) return std::nullopt;
  return child(key);
}

double Section::number(std::string_view key) const {
  const Json& v = at(key);
  if (!v.is_number()) {
    throw ConfigError("'" + qualified(key) + "' must be a number, found " + describe(v));
  }
  return v.get<double>();
}

double Section::number(std::string_view key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::optional<double> Section::optional_number(std::string_view key) const {
  if (!has(key)) return std::nullopt;
  return number(key);
}

std::int64_t Section::integer(std::string_view key, std::int64_t fallback) const {
  if (!has(key)) return fallback;
  const Json& v = at(key);
  if (!v.is_number_integer()) {
    throw ConfigError("'" + qualified(key) + "' must be an integer, found " + describe(v));
  }
  return v.get<std::int64_t>();
}

bool Section::boolean(std::string_view key, bool fallback) const {
  if (!has(key)) return fallback;
  const Json& v = at(key);
  if (!v.is_boolean()) {
    throw ConfigError("'" + qualified(key) + "' must be true or false, found " + describe(v));
  }
  return v.get<bool>();
}

std::string Section::string(std::string_view key) const {
  const Json& v = at(key);
  if (!v.is_string()) {
    throw ConfigError("'" + qualified(key) + "' must be a string, found " + describe(v));
  }
  return v.get<std::string>();
}

std::string Section::string(std::string_view key, std::string fallback) const {
  return has(key) ? string(key) : fallback;
}

std::vector<double> Section::numbers(std::string_view key) const {
  const Json& v = at(key);
  if (!v.is_array()) {
    throw ConfigError("'" + qualified(key) + "' must be an array, found " + describe(v));
  }
  std::vector<double> out;
  for (const auto& item : v) {
    if (!item.is_number()) {
      throw ConfigError("'" + qualified(key) + "' must contain only numbers");
    }
    out.push_back(item.get<double>());
  }
  return out;
}

void Section::only(std::initializer_list<std::string_view> allowed) const {
  for (const auto& [key, value] : node_->items()) {
    bool known = false;
    for (auto name : allowed) known = known || key == name;
    if (!known) throw ConfigError("unknown key '" + qualified(key) + "'");
  }
}

std::optional<Mode> parse_mode(std::string_view name) {
  if (name == "simulate") return Mode::Simulate;
  if (name == "sweep") return Mode::Sweep;
  if (name == "design") return Mode::Design;
  if (name == "characterize") return Mode::Characterize;
  if (name == "validate") return Mode::Validate;
  return std::nullopt;
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::Simulate: return "simulate";
    case Mode::Sweep: return "sweep";
    case Mode::Design: return "design";
    case Mode::Characterize: return "characterize";
    case Mode::Validate: return "validate";
  }
  return "unknown";
}

RunConfig make_run_config(Json tree, std::optional<Mode> mode, std::filesystem::path base_dir) {
  if (tree.is_null()) tree = Json::object();
  const Section root(tree, "");
  root.only({"mode", "seed", "output", "interferometer", "laue", "sweep", "design", "characterize",
             "validate"});

  RunConfig config;
  if (root.has("mode")) {
    const auto named = parse_mode(root.string("mode"));
    if (!named) throw ConfigError("unknown mode '" + root.string("mode") + "'");
    if (mode && *mode != *named) {
      throw ConfigError("subcommand '" + std::string(mode_name(*mode)) +
                        "' contradicts config mode '" + root.string("mode") + "'");
    }
    mode = named;
  }
  if (!mode) throw ConfigError("no subcommand given and the config has no 'mode'");
  config.mode = *mode;

  if (root.has("seed")) {
    const Json& seed = tree["seed"];
    if (!seed.is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
    config.seed = seed.get<std::uint64_t>();
  } else {
    config.seed = kDefaultSeed;
  }

  if (const auto output = root.optional_child("output")) {
    output->only({"path", "format"});
    if (output->has("path")) config.output = output->string("path");
    const std::string format = output->string("format", "csv");
    if (format == "csv") {
      config.format = Format::Csv;
    } else if (format == "json") {
      config.format = Format::Json;
    } else {
      throw ConfigError("'output.format' must be \"csv\" or \"json\", found \"" + format + "\"");
    }
  }

  config.base_dir = std::move(base_dir);
  config.tree = std::move(tree);
  return config;
}

}  // namespace xifm::cli
