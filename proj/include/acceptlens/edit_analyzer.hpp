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

// Joins shown suggestions with the user's decision and the document the user
// later committed, then measures and categorizes what the user changed.

#ifndef ACCEPTLENS_EDIT_ANALYZER_HPP
#define ACCEPTLENS_EDIT_ANALYZER_HPP

#include <algorithm>
#include <array>
#include <bitset>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "acceptlens/config.hpp"
#include "acceptlens/event_model.hpp"
#include "acceptlens/gestalt_diff.hpp"
#include "acceptlens/task_parser.hpp"

namespace acceptlens {

enum class OutcomeCategory {
  FullyAccepted,
  MinorEdit,
  MajorEdit,
  DeletedAfterAccept,
  /// Accepted, but what happened afterwards cannot be determined.
  Unresolved,
  Rejected,
  Ignored,
};

inline std::string_view to_string(OutcomeCategory c) {
  switch (c) {
    case OutcomeCategory::FullyAccepted: return "fully_accepted";
    case OutcomeCategory::MinorEdit: return "minor_edit";
    case OutcomeCategory::MajorEdit: return "major_edit";
    case OutcomeCategory::DeletedAfterAccept: return "deleted_after_accept";
    case OutcomeCategory::Unresolved: return "unresolved";
    case OutcomeCategory::Rejected: return "rejected";
    case OutcomeCategory::Ignored: return "ignored";
  }
  return "?";
}

enum class UnresolvedReason { None, NoContent, UnparseableSuggestion, UnparseableDocument };

enum class MinorSubcategory { ValueOnly, KeyOnly, KeyAndValue, OptionAdded, OptionRemoved, Mixed };

inline constexpr std::array<MinorSubcategory, 6> kMinorSubcategories{
    MinorSubcategory::ValueOnly,    MinorSubcategory::KeyOnly,       MinorSubcategory::KeyAndValue,
    MinorSubcategory::OptionAdded,  MinorSubcategory::OptionRemoved, MinorSubcategory::Mixed};

inline std::string_view to_string(MinorSubcategory c) {
  switch (c) {
    case MinorSubcategory::ValueOnly: return "value_only";
    case MinorSubcategory::KeyOnly: return "key_only";
    case MinorSubcategory::KeyAndValue: return "key_and_value";
    case MinorSubcategory::OptionAdded: return "option_added";
    case MinorSubcategory::OptionRemoved: return "option_removed";
    case MinorSubcategory::Mixed: return "mixed";
  }
  return "?";
}

enum class ModuleEditTag { FqcnShortened, Reorganization, CommandShell, SimilarModule, Other };

inline constexpr std::array<ModuleEditTag, 5> kModuleEditTags{ModuleEditTag::FqcnShortened,
                                                               ModuleEditTag::Reorganization,
                                                               ModuleEditTag::CommandShell,
                                                               ModuleEditTag::SimilarModule, ModuleEditTag::Other};

inline std::string_view to_string(ModuleEditTag t) {
  switch (t) {
    case ModuleEditTag::FqcnShortened: return "fqcn_shortened";
    case ModuleEditTag::Reorganization: return "reorganization";
    case ModuleEditTag::CommandShell: return "command_shell";
    case ModuleEditTag::SimilarModule: return "similar_module";
    case ModuleEditTag::Other: return "other";
  }
  return "?";
}

/// Small set of ModuleEditTag values.
class TagSet {
 public:
  void insert(ModuleEditTag t) { bits_.set(static_cast<std::size_t>(t)); }
  bool contains(ModuleEditTag t) const { return bits_.test(static_cast<std::size_t>(t)); }
  bool empty() const { return bits_.none(); }
  std::size_t size() const { return bits_.count(); }
  friend bool operator==(const TagSet&, const TagSet&) = default;

 private:
  std::bitset<kModuleEditTags.size()> bits_;
};

struct SuggestionOutcome {
  std::string suggestion_id;
  std::string user_id;
  Timestamp shown_at;
  int line_count = 0;
  int token_count = 0;
  std::string suggestion_text;
  /// Prompt of the completion request that produced the suggestion.
  std::optional<std::string> prompt;
  Decision decision = Decision::Ignored;
  /// Document of the first content event after acceptance.
  std::optional<std::string> committed_document;

  // Filled in by classify_outcome.
  std::optional<AnsibleTask> shown_task;
  std::optional<AnsibleTask> committed_task;
  std::optional<double> edit_fraction;
  OutcomeCategory category = OutcomeCategory::Ignored;
  UnresolvedReason unresolved_reason = UnresolvedReason::None;
  bool module_changed = false;
  std::optional<MinorSubcategory> minor_subcategory;
  TagSet module_edit_tags;
};

struct PairingStats {
  std::size_t orphan_actions = 0;
  /// Second and later actions for the same suggestion.
  std::size_t repeated_actions = 0;
};

/// The prompt as the user typed it, without list marker, `name:` or quotes.
inline std::string normalize_task_name(std::string_view prompt) {
  auto trim = [](std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return std::string_view{};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  };
  auto s = trim(prompt);
  if (s.size() >= 1 && s[0] == '-') s = trim(s.substr(1));
  if (s.substr(0, 5) == "name:") s = trim(s.substr(5));
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

/// Joins each Suggestion event of one user with its Action (by suggestion
/// id) and, for accepted suggestions, the nearest later Content event that
/// is either untagged or tagged with the same suggestion id. Suggestions
/// without an action are Ignored.
inline std::vector<SuggestionOutcome> pair_outcomes(const UserTimeline& t, PairingStats& stats) {
  std::vector<SuggestionOutcome> out;
  std::unordered_map<std::string, std::size_t> by_id;
  std::unordered_map<std::string, std::string> prompts;
  std::vector<const RawEvent*> contents;
  std::vector<std::optional<Instant>> action_time;

  for (const auto& e : t.events) {
    switch (e.kind()) {
      case EventKind::Completion: {
        const auto& c = e.as<CompletionPayload>();
        prompts.emplace(c.suggestion_id, c.prompt);
        break;
      }
      case EventKind::Suggestion: {
        const auto& s = e.as<SuggestionPayload>();
        if (by_id.count(s.suggestion_id)) break;
        by_id.emplace(s.suggestion_id, out.size());
        SuggestionOutcome o;
        o.suggestion_id = s.suggestion_id;
        o.user_id = t.user_id;
        o.shown_at = e.timestamp;
        o.line_count = s.line_count;
        o.token_count = s.token_count;
        o.suggestion_text = s.suggestion_text;
        out.push_back(std::move(o));
        action_time.emplace_back();
        break;
      }
      case EventKind::Content:
        contents.push_back(&e);
        break;
      default:
        break;
    }
  }

  for (const auto& e : t.events) {
    if (e.kind() != EventKind::Action) continue;
    const auto& a = e.as<ActionPayload>();
    const auto it = by_id.find(a.suggestion_id);
    if (it == by_id.end()) {
      ++stats.orphan_actions;
      continue;
    }
    if (action_time[it->second]) {
      ++stats.repeated_actions;
      continue;
    }
    action_time[it->second] = e.timestamp.utc;
    out[it->second].decision = a.action;
  }

  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& o = out[i];
    if (auto p = prompts.find(o.suggestion_id); p != prompts.end()) o.prompt = p->second;
    if (o.decision != Decision::Accepted) continue;
    const Instant after = *action_time[i];
    auto c = std::lower_bound(contents.begin(), contents.end(), after,
                              [](const RawEvent* ev, Instant v) { return ev->timestamp.utc < v; });
    for (; c != contents.end(); ++c) {
      const auto& doc = (*c)->as<ContentPayload>();
      if (!doc.suggestion_id || *doc.suggestion_id == o.suggestion_id) {
        o.committed_document = doc.document_text;
        break;
      }
    }
  }
  return out;
}

/// Finds the committed form of `shown` in a parsed document: the task with
/// the same name if there is one, otherwise the most similar task body if
/// its similarity reaches `floor`.
inline const AnsibleTask* match_committed_task(const AnsibleTask& shown, const std::vector<AnsibleTask>& doc,
                                               double floor = 0.3) {
  const auto candidates = flatten_tasks(doc);
  if (shown.name && !shown.name->empty()) {
    for (const auto* t : candidates) {
      if (t->is_block() == shown.is_block() && t->name == shown.name) return t;
    }
  }
  const AnsibleTask* best = nullptr;
  double best_ratio = -1.0;
  for (const auto* t : candidates) {
    if (t->is_block() != shown.is_block()) continue;
    const double r = similarity_ratio(shown.body_lines, t->body_lines).value;
    if (r > best_ratio) {
      best_ratio = r;
      best = t;
    }
  }
  return best && best_ratio >= floor ? best : nullptr;
}

/// Module comparison on short names, so FQCN rewrites are not a change.
inline bool module_changed(const AnsibleTask& shown, const AnsibleTask& committed) {
  if (!shown.module || !committed.module) return shown.module.has_value() != committed.module.has_value();
  return short_name(*shown.module) != short_name(*committed.module);
}

/// What kind of option edit turned `shown` into `committed`. Meaningful for
/// minor edits that keep the module.
inline MinorSubcategory minor_subcategory(const AnsibleTask& shown, const AnsibleTask& committed) {
  std::map<std::string, const Value*> before, after;
  for (const auto& [k, v] : shown.options) before.emplace(k, &v);
  for (const auto& [k, v] : committed.options) after.emplace(k, &v);

  std::vector<std::string> removed_values, added_values;
  bool common_value_changed = false;
  for (const auto& [k, v] : before) {
    auto it = after.find(k);
    if (it == after.end()) {
      removed_values.push_back(v->dump());
    } else if (*it->second != *v) {
      common_value_changed = true;
    }
  }
  for (const auto& [k, v] : after) {
    if (!before.count(k)) added_values.push_back(v->dump());
  }

  if (removed_values.empty() && added_values.empty()) {
    return common_value_changed ? MinorSubcategory::ValueOnly : MinorSubcategory::Mixed;
  }
  if (common_value_changed) return MinorSubcategory::Mixed;
  if (removed_values.empty()) return MinorSubcategory::OptionAdded;
  if (added_values.empty()) return MinorSubcategory::OptionRemoved;
  if (removed_values.size() == added_values.size()) {
    std::sort(removed_values.begin(), removed_values.end());
    std::sort(added_values.begin(), added_values.end());
    return removed_values == added_values ? MinorSubcategory::KeyOnly : MinorSubcategory::KeyAndValue;
  }
  return MinorSubcategory::Mixed;
}

/// Tags describing a module-level edit. Several tags may apply at once;
/// Other is used only when the module changed and nothing else explains it.
inline TagSet module_edit_tags(const AnsibleTask& shown, const AnsibleTask& committed, const Config& config) {
  TagSet tags;
  const bool changed = module_changed(shown, committed);
  const bool form_changed = shown.module && committed.module && shown.module != committed.module;
  if (!changed && !form_changed) return tags;

  if (shown.module && committed.module && shown.module->is_fqcn() &&
      committed.module->segments == std::vector<std::string>{short_name(*shown.module)}) {
    tags.insert(ModuleEditTag::FqcnShortened);
  }

  bool added_reorg_key = committed.depth > 0 && shown.depth == 0;
  for (const auto& [k, _] : committed.directives) {
    if (reorganization_keys().count(k) && !shown.has_directive(k)) added_reorg_key = true;
  }
  if (added_reorg_key) tags.insert(ModuleEditTag::Reorganization);

  if (changed && shown.module && committed.module) {
    const auto& a = short_name(*shown.module);
    const auto& b = short_name(*committed.module);
    auto is_cmd = [](const std::string& s) { return s == "command" || s == "shell"; };
    if (is_cmd(a) || is_cmd(b)) {
      tags.insert(ModuleEditTag::CommandShell);
    } else {
      for (const auto& cls : config.similar_modules) {
        if (cls.count(a) && cls.count(b)) {
          tags.insert(ModuleEditTag::SimilarModule);
          break;
        }
      }
    }
  }

  if (changed && tags.empty()) tags.insert(ModuleEditTag::Other);
  return tags;
}

/// Parses the shown suggestion and its committed document, measures the
/// edit and assigns the outcome category.
inline SuggestionOutcome classify_outcome(SuggestionOutcome o, const Config& config) {
  o.shown_task.reset();
  o.committed_task.reset();
  o.edit_fraction.reset();
  o.minor_subcategory.reset();
  o.module_edit_tags = {};
  o.module_changed = false;
  o.unresolved_reason = UnresolvedReason::None;

  if (o.decision == Decision::Rejected) {
    o.category = OutcomeCategory::Rejected;
    return o;
  }
  if (o.decision == Decision::Ignored) {
    o.category = OutcomeCategory::Ignored;
    return o;
  }

  auto unresolved = [&](UnresolvedReason why) {
    o.category = OutcomeCategory::Unresolved;
    o.unresolved_reason = why;
    return o;
  };

  try {
    auto shown = parse_tasks(o.suggestion_text, config.directives);
    if (shown.empty()) return unresolved(UnresolvedReason::UnparseableSuggestion);
    o.shown_task = std::move(shown.front());
  } catch (const TaskParseError&) {
    return unresolved(UnresolvedReason::UnparseableSuggestion);
  }
  if (!o.shown_task->name && o.prompt) {
    auto name = normalize_task_name(*o.prompt);
    if (!name.empty()) o.shown_task->name = std::move(name);
  }

  if (!o.committed_document) return unresolved(UnresolvedReason::NoContent);
  std::vector<AnsibleTask> doc;
  try {
    doc = parse_tasks(*o.committed_document, config.directives);
  } catch (const TaskParseError&) {
    return unresolved(UnresolvedReason::UnparseableDocument);
  }

  const auto* committed = match_committed_task(*o.shown_task, doc, config.rename_match_floor);
  if (!committed) {
    o.category = OutcomeCategory::DeletedAfterAccept;
    return o;
  }
  o.committed_task = *committed;
  // Children are not needed once matched.
  o.committed_task->children.clear();

  const double fraction = edit_fraction(o.shown_task->body_lines, o.committed_task->body_lines);
  o.edit_fraction = fraction;
  if (fraction == 0.0) {
    o.category = OutcomeCategory::FullyAccepted;
  } else if (fraction < config.edit_threshold) {
    o.category = OutcomeCategory::MinorEdit;
  } else {
    o.category = OutcomeCategory::MajorEdit;
  }
  o.module_changed = module_changed(*o.shown_task, *o.committed_task);
  if (o.category == OutcomeCategory::MinorEdit && !o.module_changed) {
    o.minor_subcategory = minor_subcategory(*o.shown_task, *o.committed_task);
  }
  o.module_edit_tags = module_edit_tags(*o.shown_task, *o.committed_task, config);
  return o;
}

/// pair_outcomes followed by classify_outcome for one user.
inline std::vector<SuggestionOutcome> analyze_timeline(const UserTimeline& t, const Config& config,
                                                       PairingStats& stats) {
  auto outcomes = pair_outcomes(t, stats);
  for (auto& o : outcomes) o = classify_outcome(std::move(o), config);
  return outcomes;
}

}  // namespace acceptlens

#endif  // ACCEPTLENS_EDIT_ANALYZER_HPP
