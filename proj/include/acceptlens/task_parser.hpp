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

#ifndef ACCEPTLENS_TASK_PARSER_HPP
#define ACCEPTLENS_TASK_PARSER_HPP

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acceptlens/gestalt_diff.hpp"
#include "json.hpp"

namespace acceptlens {

/// Canonical structured value: mapping keys sorted, plain scalars typed.
using Value = nlohmann::json;
using KeyValueList = std::vector<std::pair<std::string, Value>>;

enum class TaskParseErrorKind { YamlSyntax, NotATaskShape, BadModuleKey };

class TaskParseError : public std::runtime_error {
 public:
  TaskParseError(TaskParseErrorKind kind, const std::string& what, int line = 0)
      : std::runtime_error(what), kind_(kind), line_(line) {}

  TaskParseErrorKind kind() const { return kind_; }
  /// 1-based source line, 0 when not applicable.
  int line() const { return line_; }

 private:
  TaskParseErrorKind kind_;
  int line_;
};

struct ModuleName {
  std::vector<std::string> segments;

  bool is_fqcn() const { return segments.size() == 3; }

  std::string str() const {
    std::string out;
    for (const auto& s : segments) {
      if (!out.empty()) out += '.';
      out += s;
    }
    return out;
  }

  friend bool operator==(const ModuleName&, const ModuleName&) = default;
};

/// Splits a module key on '.'. Accepts the short form (one segment) and the
/// fully qualified collection name (namespace.collection.module).
inline ModuleName parse_module_name(std::string_view key) {
  ModuleName m;
  std::size_t pos = 0;
  while (true) {
    const auto dot = key.find('.', pos);
    m.segments.emplace_back(key.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos));
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  const bool empty_segment =
      std::any_of(m.segments.begin(), m.segments.end(), [](const std::string& s) { return s.empty(); });
  if (empty_segment || (m.segments.size() != 1 && m.segments.size() != 3)) {
    throw TaskParseError(TaskParseErrorKind::BadModuleKey, "bad module key '" + std::string(key) + "'");
  }
  return m;
}

inline const std::string& short_name(const ModuleName& m) { return m.segments.back(); }

/// Task-level keywords. Any key in this set is a sibling of the module key,
/// never the module itself. Keys starting with "with_" (legacy loops) are
/// directives as well.
class DirectiveSet {
 public:
  DirectiveSet() : keys_(default_keys()) {}
  explicit DirectiveSet(std::set<std::string> keys) : keys_(std::move(keys)) {
    // "tag" and "tags" are aliases.
    if (keys_.count("tags")) keys_.insert("tag");
    if (keys_.count("tag")) keys_.insert("tags");
    keys_.insert("name");
  }

  bool contains(std::string_view key) const {
    return keys_.count(std::string(key)) > 0 || key.substr(0, 5) == "with_";
  }

  const std::set<std::string>& keys() const { return keys_; }

  static std::set<std::string> default_keys() {
    return {"block",        "tags",          "tag",         "register",     "loop",        "become",
            "when",         "vars",          "delegate_to", "notify",       "environment", "ignore_errors",
            "until",        "retries",       "delay",       "changed_when", "failed_when", "become_user",
            "name",         "args",          "rescue",      "always",       "loop_control", "no_log",
            "run_once",     "check_mode",    "diff",        "async",        "poll",        "connection",
            "listen",       "throttle",      "timeout",     "become_method", "become_flags", "delegate_facts",
            "any_errors_fatal", "collections", "module_defaults", "debugger", "ignore_unreachable",
            "remote_user",  "port",          "vars_files"};
  }

 private:
  std::set<std::string> keys_;
};

/// Directive keys that signal the user restructured the surrounding YAML.
inline const std::set<std::string>& reorganization_keys() {
  static const std::set<std::string> keys{"block", "tags", "tag", "register", "loop", "become"};
  return keys;
}

struct AnsibleTask {
  std::optional<std::string> name;
  std::optional<ModuleName> module;
  /// The module's own arguments. A free-form scalar argument is stored
  /// under "_raw_params".
  KeyValueList options;
  /// Task-level keys other than the name and the module.
  KeyValueList directives;
  /// Source lines of the task, verbatim.
  std::vector<std::string> raw_lines;
  /// Diff elements: the task minus its `name` entry, indentation made
  /// relative to the task's own key column, trailing whitespace and blank
  /// lines dropped.
  std::vector<std::string> body_lines;
  /// Tasks nested under block / rescue / always.
  std::vector<AnsibleTask> children;
  /// Nesting depth below the enclosing task list; > 0 inside a block.
  int depth = 0;

  bool has_directive(std::string_view key) const {
    return std::any_of(directives.begin(), directives.end(), [&](const auto& kv) { return kv.first == key; });
  }

  bool is_block() const { return has_directive("block"); }
};

/// Structural equality: everything except the source text.
inline bool same_structure(const AnsibleTask& a, const AnsibleTask& b) {
  if (a.name != b.name || a.module != b.module || a.options != b.options || a.directives != b.directives ||
      a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!same_structure(a.children[i], b.children[i])) return false;
  }
  return true;
}

struct TaskParts {
  std::optional<ModuleName> module;
  std::vector<std::string> option_keys;
  std::vector<Value> option_values;
  std::vector<std::string> directive_keys;
};

inline TaskParts task_parts(const AnsibleTask& t) {
  TaskParts p;
  p.module = t.module;
  for (const auto& [k, v] : t.options) {
    p.option_keys.push_back(k);
    p.option_values.push_back(v);
  }
  for (const auto& [k, _] : t.directives) p.directive_keys.push_back(k);
  return p;
}

namespace detail {

inline bool is_null_word(const std::string& s) {
  return s.empty() || s == "~" || s == "null" || s == "Null" || s == "NULL";
}

inline std::optional<bool> bool_word(const std::string& s) {
  static const std::set<std::string> yes{"true", "True", "TRUE", "yes", "Yes", "YES", "on", "On", "ON"};
  static const std::set<std::string> no{"false", "False", "FALSE", "no", "No", "NO", "off", "Off", "OFF"};
  if (yes.count(s)) return true;
  if (no.count(s)) return false;
  return std::nullopt;
}

inline bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// [-+]?(0|[1-9][0-9]*)
inline bool looks_like_int(std::string_view s) {
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
  return all_digits(s) && (s.size() == 1 || s[0] != '0');
}

// [-+]?(digits.digits?|.digits)([eE][-+]?digits)? or digits[eE][-+]?digits
inline bool looks_like_float(std::string_view s) {
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
  std::string_view exponent;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    exponent = s.substr(e + 1);
    s = s.substr(0, e);
    if (!exponent.empty() && (exponent[0] == '-' || exponent[0] == '+')) exponent.remove_prefix(1);
    if (!all_digits(exponent)) return false;
  }
  const auto dot = s.find('.');
  if (dot == std::string_view::npos) return !exponent.empty() && all_digits(s);
  const auto whole = s.substr(0, dot);
  const auto frac = s.substr(dot + 1);
  if (!whole.empty() && !all_digits(whole)) return false;
  if (!frac.empty() && !all_digits(frac)) return false;
  return !whole.empty() || !frac.empty();
}

inline Value canonical_plain_scalar(const std::string& s) {
  if (is_null_word(s)) return nullptr;
  if (auto b = bool_word(s)) return *b;
  if (looks_like_int(s)) {
    std::int64_t v = 0;
    const char* first = s.data() + (s[0] == '+' ? 1 : 0);
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return v;
    return s;
  }
  if (looks_like_float(s)) {
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      return s;
    }
  }
  // Everything else, including zero-padded numbers such as file modes,
  // stays a string so quoting style does not matter.
  return s;
}

inline std::string key_text(const YAML::Node& key);

inline Value canonical_value(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Undefined:
    case YAML::NodeType::Null:
      return nullptr;
    case YAML::NodeType::Scalar: {
      const auto& text = node.Scalar();
      if (node.Tag() == "?") return canonical_plain_scalar(text);
      if (node.Tag() == "!" || node.Tag() == "tag:yaml.org,2002:str") return text;
      return node.Tag() + " " + text;
    }
    case YAML::NodeType::Sequence: {
      Value arr = Value::array();
      for (const auto& item : node) arr.push_back(canonical_value(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      Value obj = Value::object();
      for (const auto& kv : node) obj[key_text(kv.first)] = canonical_value(kv.second);
      return obj;
    }
  }
  return nullptr;
}

inline std::string key_text(const YAML::Node& key) {
  if (key.IsScalar()) return key.Scalar();
  return canonical_value(key).dump();
}

inline std::vector<std::string> split_raw(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    std::string line(text.substr(pos, end - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

inline bool is_blank_or_comment(const std::string& line) {
  const auto first = line.find_first_not_of(" \t");
  return first == std::string::npos || line[first] == '#';
}

inline std::size_t indent_of(const std::string& line) {
  const auto first = line.find_first_not_of(' ');
  return first == std::string::npos ? line.size() : first;
}

inline bool is_document_marker(const std::string& line) {
  return line.rfind("---", 0) == 0 || line.rfind("...", 0) == 0;
}

class TaskBuilder {
 public:
  TaskBuilder(const std::vector<std::string>& lines, const DirectiveSet& directives)
      : lines_(lines), directives_(directives) {}

  /// Adds the tasks of a task list (sequence node) to `out`.
  void collect_task_list(const YAML::Node& seq, int depth, std::vector<AnsibleTask>& out) const {
    for (const auto& item : seq) {
      if (!item.IsMap()) {
        throw TaskParseError(TaskParseErrorKind::NotATaskShape, "task list item is not a mapping",
                             item.Mark().line + 1);
      }
      if (auto t = build_task(item, depth)) out.push_back(std::move(*t));
    }
  }

  static bool is_play(const YAML::Node& map) {
    for (const char* k : {"hosts", "tasks", "pre_tasks", "post_tasks", "handlers", "roles", "import_playbook"}) {
      if (map[k]) return true;
    }
    return false;
  }

  void collect_play(const YAML::Node& play, std::vector<AnsibleTask>& out) const {
    for (const auto& kv : play) {
      const auto key = key_text(kv.first);
      if (key == "pre_tasks" || key == "tasks" || key == "post_tasks" || key == "handlers") {
        if (kv.second.IsSequence()) collect_task_list(kv.second, 0, out);
      }
    }
  }

  /// Returns nullopt for a mapping that has neither a module nor a block
  /// (for example a task whose name was typed but whose body was not).
  std::optional<AnsibleTask> build_task(const YAML::Node& map, int depth) const {
    AnsibleTask t;
    t.depth = depth;
    std::vector<std::pair<int, std::string>> key_lines;
    for (const auto& kv : map) {
      if (!kv.first.IsScalar()) {
        throw TaskParseError(TaskParseErrorKind::NotATaskShape, "non-scalar task key", kv.first.Mark().line + 1);
      }
      const auto key = kv.first.Scalar();
      key_lines.emplace_back(kv.first.Mark().line, key);
      if (key == "name") {
        if (!kv.second.IsScalar() && !kv.second.IsNull()) {
          throw TaskParseError(TaskParseErrorKind::NotATaskShape, "task name is not a scalar",
                               kv.second.Mark().line + 1);
        }
        t.name = kv.second.IsNull() ? std::string{} : kv.second.Scalar();
      } else if (!t.module && !directives_.contains(key)) {
        try {
          t.module = parse_module_name(key);
        } catch (const TaskParseError& e) {
          throw TaskParseError(e.kind(), e.what(), kv.first.Mark().line + 1);
        }
        if (kv.second.IsMap()) {
          for (const auto& opt : kv.second) t.options.emplace_back(key_text(opt.first), canonical_value(opt.second));
        } else if (!kv.second.IsNull()) {
          t.options.emplace_back("_raw_params", canonical_value(kv.second));
        }
      } else {
        // Further unknown keys are kept as siblings of the module.
        t.directives.emplace_back(key, canonical_value(kv.second));
        if ((key == "block" || key == "rescue" || key == "always") && kv.second.IsSequence()) {
          collect_task_list(kv.second, depth + 1, t.children);
        }
      }
    }
    if (!t.module && !t.is_block()) return std::nullopt;
    extract_lines(map, key_lines, t);
    return t;
  }

 private:
  void extract_lines(const YAML::Node& map, const std::vector<std::pair<int, std::string>>& key_lines,
                     AnsibleTask& t) const {
    const auto start = static_cast<std::size_t>(map.Mark().line);
    const auto key_col = static_cast<std::size_t>(map.Mark().column);
    std::size_t end = start + 1;
    for (std::size_t i = start + 1; i < lines_.size(); ++i) {
      const auto& line = lines_[i];
      if (is_document_marker(line)) break;
      if (!is_blank_or_comment(line) && indent_of(line) < key_col) break;
      end = i + 1;
    }
    // Trailing blank lines and comments belong to whatever follows.
    while (end > start + 1 && is_blank_or_comment(lines_[end - 1])) --end;
    t.raw_lines.assign(lines_.begin() + static_cast<std::ptrdiff_t>(start),
                       lines_.begin() + static_cast<std::ptrdiff_t>(end));

    // Lines owned by the top-level `name` key.
    std::size_t name_begin = end, name_end = end;
    auto sorted = key_lines;
    std::sort(sorted.begin(), sorted.end());
    const bool single_line = !sorted.empty() && sorted.front().first == sorted.back().first;
    for (std::size_t i = 0; i < sorted.size() && !single_line; ++i) {
      if (sorted[i].second != "name") continue;
      name_begin = static_cast<std::size_t>(sorted[i].first);
      name_end = i + 1 < sorted.size() ? static_cast<std::size_t>(sorted[i + 1].first) : end;
    }
    for (std::size_t i = start; i < end; ++i) {
      if (i >= name_begin && i < name_end) continue;
      std::string line = lines_[i];
      if (i == start) {
        // Blank out the list marker ("- ") in front of the first key.
        for (std::size_t c = 0; c < std::min(key_col, line.size()); ++c) line[c] = ' ';
      }
      const auto strip = std::min(key_col, indent_of(line));
      const auto trimmed = rtrim(std::string_view(line).substr(strip));
      if (trimmed.empty()) continue;
      t.body_lines.emplace_back(trimmed);
    }
  }

  const std::vector<std::string>& lines_;
  const DirectiveSet& directives_;
};

}  // namespace detail

/// Parses every task in `yaml_text`: a bare task list, the task sections of
/// one or more plays, or a single task mapping. Source order is preserved.
/// Throws TaskParseError(YamlSyntax) for text that is not YAML and
/// TaskParseError(NotATaskShape) for YAML that does not look like tasks.
inline std::vector<AnsibleTask> parse_tasks(std::string_view yaml_text, const DirectiveSet& directives = {}) {
  std::vector<YAML::Node> docs;
  try {
    docs = YAML::LoadAll(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw TaskParseError(TaskParseErrorKind::YamlSyntax, e.what(), e.mark.line + 1);
  }
  const auto lines = detail::split_raw(yaml_text);
  detail::TaskBuilder builder(lines, directives);
  std::vector<AnsibleTask> out;
  for (const auto& doc : docs) {
    if (doc.IsNull()) continue;
    if (doc.IsSequence()) {
      for (const auto& item : doc) {
        if (item.IsMap() && detail::TaskBuilder::is_play(item)) {
          builder.collect_play(item, out);
        } else {
          if (!item.IsMap()) {
            throw TaskParseError(TaskParseErrorKind::NotATaskShape, "list item is not a mapping",
                                 item.Mark().line + 1);
          }
          if (auto t = builder.build_task(item, 0)) out.push_back(std::move(*t));
        }
      }
    } else if (doc.IsMap()) {
      if (detail::TaskBuilder::is_play(doc)) {
        builder.collect_play(doc, out);
      } else if (auto t = builder.build_task(doc, 0)) {
        out.push_back(std::move(*t));
      }
    } else {
      throw TaskParseError(TaskParseErrorKind::NotATaskShape, "document is a scalar", doc.Mark().line + 1);
    }
  }
  return out;
}

/// Tasks and their block descendants in document order (pre-order).
inline std::vector<const AnsibleTask*> flatten_tasks(const std::vector<AnsibleTask>& tasks) {
  std::vector<const AnsibleTask*> out;
  auto visit = [&](auto& self, const AnsibleTask& t) -> void {
    out.push_back(&t);
    for (const auto& c : t.children) self(self, c);
  };
  for (const auto& t : tasks) visit(visit, t);
  return out;
}

namespace detail {

inline void emit_value(YAML::Emitter& out, const Value& v) {
  switch (v.type()) {
    case Value::value_t::null:
      out << YAML::Null;
      break;
    case Value::value_t::boolean:
      out << (v.get<bool>() ? "true" : "false");
      break;
    case Value::value_t::number_integer:
    case Value::value_t::number_unsigned:
    case Value::value_t::number_float:
      out << v.dump();
      break;
    case Value::value_t::string:
      out << YAML::DoubleQuoted << v.get<std::string>();
      break;
    case Value::value_t::array:
      out << YAML::BeginSeq;
      for (const auto& item : v) emit_value(out, item);
      out << YAML::EndSeq;
      break;
    case Value::value_t::object:
      out << YAML::BeginMap;
      for (const auto& [k, item] : v.items()) {
        out << YAML::Key << YAML::DoubleQuoted << k << YAML::Value;
        emit_value(out, item);
      }
      out << YAML::EndMap;
      break;
    default:
      out << YAML::Null;
  }
}

}  // namespace detail

/// Writes tasks back as a YAML task list. Source formatting is not kept;
/// parse_tasks(serialize_tasks(x)) is structurally equal to x.
inline std::string serialize_tasks(const std::vector<AnsibleTask>& tasks) {
  if (tasks.empty()) return "[]\n";
  YAML::Emitter out;
  out << YAML::BeginSeq;
  for (const auto& t : tasks) {
    out << YAML::BeginMap;
    if (t.name) out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << *t.name;
    if (t.module) {
      out << YAML::Key << t.module->str() << YAML::Value;
      if (t.options.size() == 1 && t.options.front().first == "_raw_params") {
        detail::emit_value(out, t.options.front().second);
      } else if (t.options.empty()) {
        out << YAML::Null;
      } else {
        out << YAML::BeginMap;
        for (const auto& [k, v] : t.options) {
          out << YAML::Key << YAML::DoubleQuoted << k << YAML::Value;
          detail::emit_value(out, v);
        }
        out << YAML::EndMap;
      }
    }
    for (const auto& [k, v] : t.directives) {
      out << YAML::Key << k << YAML::Value;
      detail::emit_value(out, v);
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  return std::string(out.c_str()) + "\n";
}

}  // namespace acceptlens

#endif  // ACCEPTLENS_TASK_PARSER_HPP
