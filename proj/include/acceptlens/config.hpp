// Copyright 2026 The acceptlens Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ACCEPTLENS_CONFIG_HPP
#define ACCEPTLENS_CONFIG_HPP

#include <yaml-cpp/yaml.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "acceptlens/task_parser.hpp"

namespace acceptlens {

enum class Cohort { Returning, All };

struct Config {
  DirectiveSet directives;
  /// Sets of module short names that users treat as interchangeable.
  std::vector<std::set<std::string>> similar_modules = default_similar_modules();
  std::chrono::seconds dedup_window{10};
  /// Accepted suggestions edited by at least this fraction are major edits.
  double edit_threshold = 0.5;
  /// Minimum similarity for matching a renamed task in the committed file.
  double rename_match_floor = 0.3;
  int retention_horizon = 30;
  /// Population for the edit and acceptance analysis.
  Cohort cohort = Cohort::Returning;

  static std::vector<std::set<std::string>> default_similar_modules() {
    return {{"apt", "yum", "dnf", "package"},
            {"service", "systemd", "systemd_service", "sysvinit"},
            {"copy", "template"},
            {"get_url", "uri"},
            {"lineinfile", "blockinfile", "replace"},
            {"include_tasks", "import_tasks"}};
  }
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key_path, const std::string& message)
      : std::runtime_error("bad config at '" + key_path + "': " + message), key_path_(std::move(key_path)) {}

  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

namespace detail {

template <class T>
T config_scalar(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, "wrong type");
  }
}

inline std::set<std::string> config_string_set(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) throw ConfigError(path, "expected a list");
  std::set<std::string> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.insert(config_scalar<std::string>(node[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace detail

/// Parses the YAML configuration text. Absent keys keep their defaults;
/// unknown keys are rejected so typos do not go unnoticed.
inline Config parse_config(std::string_view text) {
  Config cfg;
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("<root>", e.what());
  }
  if (root.IsNull()) return cfg;
  if (!root.IsMap()) throw ConfigError("<root>", "expected a mapping");

  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    const auto& v = kv.second;
    if (key == "directives") {
      cfg.directives = DirectiveSet(detail::config_string_set(v, key));
    } else if (key == "similar_modules") {
      if (!v.IsSequence()) throw ConfigError(key, "expected a list of lists");
      cfg.similar_modules.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto path = key + "[" + std::to_string(i) + "]";
        auto cls = detail::config_string_set(v[i], path);
        if (cls.size() < 2) throw ConfigError(path, "a class needs at least two modules");
        cfg.similar_modules.push_back(std::move(cls));
      }
    } else if (key == "dedup_window_seconds") {
      const auto secs = detail::config_scalar<long long>(v, key);
      if (secs < 0) throw ConfigError(key, "must be >= 0");
      cfg.dedup_window = std::chrono::seconds{secs};
    } else if (key == "edit_threshold") {
      cfg.edit_threshold = detail::config_scalar<double>(v, key);
      if (!(cfg.edit_threshold > 0.0 && cfg.edit_threshold < 1.0)) throw ConfigError(key, "must be in (0, 1)");
    } else if (key == "rename_match_floor") {
      cfg.rename_match_floor = detail::config_scalar<double>(v, key);
      if (!(cfg.rename_match_floor >= 0.0 && cfg.rename_match_floor <= 1.0)) {
        throw ConfigError(key, "must be in [0, 1]");
      }
    } else if (key == "retention_horizon") {
      cfg.retention_horizon = detail::config_scalar<int>(v, key);
      if (cfg.retention_horizon < 1) throw ConfigError(key, "must be >= 1");
    } else if (key == "cohort") {
      const auto c = detail::config_scalar<std::string>(v, key);
      if (c == "returning") {
        cfg.cohort = Cohort::Returning;
      } else if (c == "all") {
        cfg.cohort = Cohort::All;
      } else {
        throw ConfigError(key, "expected 'returning' or 'all'");
      }
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  return cfg;
}

/// Loads the configuration file, or the defaults when no path is given or
/// the file does not exist.
inline Config load_config(const std::optional<std::filesystem::path>& path) {
  if (!path || !std::filesystem::exists(*path)) return Config{};
  std::ifstream in(*path);
  if (!in) throw ConfigError("<file>", "cannot read " + path->string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace acceptlens

#endif  // ACCEPTLENS_CONFIG_HPP
