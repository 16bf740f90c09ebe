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

#ifndef ACCEPTLENS_METRICS_HPP
#define ACCEPTLENS_METRICS_HPP

#include <array>
#include <chrono>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "acceptlens/edit_analyzer.hpp"
#include "acceptlens/event_model.hpp"

namespace acceptlens {

inline double safe_ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

struct AcceptanceSummary {
  std::size_t total_suggestions = 0;
  std::size_t initially_accepted = 0;
  std::size_t fully_accepted = 0;
  std::size_t minor_edits = 0;
  std::size_t major_edits = 0;
  std::size_t deleted_after_accept = 0;
  /// Minor edits whose module short name changed.
  std::size_t module_changed_minor = 0;
  std::size_t unresolved = 0;
  std::size_t rejected = 0;
  std::size_t ignored = 0;
  double avg_lines_per_suggestion = 0.0;
  double avg_tokens_per_suggestion = 0.0;
  double initial_rate = 0.0;
  double strong_rate = 0.0;
};

class MetricsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Share of shown suggestions that were accepted, stayed in the file, were
/// edited by less than the threshold and kept their module.
inline double strong_acceptance_rate(const AcceptanceSummary& s) {
  const auto removed = s.deleted_after_accept + s.major_edits + s.module_changed_minor;
  if (removed > s.initially_accepted) {
    throw MetricsError("inconsistent counts: strong acceptance numerator is negative");
  }
  return safe_ratio(s.initially_accepted - removed, s.total_suggestions);
}

inline AcceptanceSummary acceptance_summary(std::span<const SuggestionOutcome> outcomes) {
  AcceptanceSummary s;
  s.total_suggestions = outcomes.size();
  double lines = 0.0, tokens = 0.0;
  for (const auto& o : outcomes) {
    lines += o.line_count;
    tokens += o.token_count;
    if (o.decision == Decision::Accepted) ++s.initially_accepted;
    switch (o.category) {
      case OutcomeCategory::FullyAccepted: ++s.fully_accepted; break;
      case OutcomeCategory::MinorEdit:
        ++s.minor_edits;
        if (o.module_changed) ++s.module_changed_minor;
        break;
      case OutcomeCategory::MajorEdit: ++s.major_edits; break;
      case OutcomeCategory::DeletedAfterAccept: ++s.deleted_after_accept; break;
      case OutcomeCategory::Unresolved: ++s.unresolved; break;
      case OutcomeCategory::Rejected: ++s.rejected; break;
      case OutcomeCategory::Ignored: ++s.ignored; break;
    }
  }
  if (!outcomes.empty()) {
    s.avg_lines_per_suggestion = lines / static_cast<double>(outcomes.size());
    s.avg_tokens_per_suggestion = tokens / static_cast<double>(outcomes.size());
  }
  s.initial_rate = safe_ratio(s.initially_accepted, s.total_suggestions);
  s.strong_rate = strong_acceptance_rate(s);
  return s;
}

/// Minor-edit subcategories and module-edit tags (tags may overlap, so the
/// tag counts can sum to more than `module_edited`).
struct EditBreakdown {
  std::map<MinorSubcategory, std::size_t> minor_subcategories;
  std::size_t module_edited = 0;
  std::map<ModuleEditTag, std::size_t> tag_counts;
};

inline EditBreakdown edit_breakdown(std::span<const SuggestionOutcome> outcomes) {
  EditBreakdown b;
  for (auto c : kMinorSubcategories) b.minor_subcategories[c] = 0;
  for (auto t : kModuleEditTags) b.tag_counts[t] = 0;
  for (const auto& o : outcomes) {
    if (o.minor_subcategory) ++b.minor_subcategories[*o.minor_subcategory];
    if (o.module_edit_tags.empty()) continue;
    ++b.module_edited;
    for (auto t : kModuleEditTags) {
      if (o.module_edit_tags.contains(t)) ++b.tag_counts[t];
    }
  }
  return b;
}

/// Users active on at least two distinct local dates.
inline std::set<std::string> returning_user_cohort(std::span<const UserTimeline> timelines) {
  std::set<std::string> out;
  for (const auto& t : timelines) {
    if (t.active_days.size() >= 2) out.insert(t.user_id);
  }
  return out;
}

struct RetentionDay {
  int day = 0;
  std::size_t eligible = 0;
  std::size_t returned = 0;
  double share() const { return safe_ratio(returned, eligible); }
};

struct RetentionCurve {
  Date window_end{};
  std::vector<RetentionDay> days;
};

/// Day-N retention on calendar days. A user is eligible for day N when the
/// window still covers first_day + N, and has returned when active on that
/// exact date.
inline RetentionCurve retention_curve(std::span<const UserTimeline> timelines, int horizon, Date window_end) {
  if (horizon < 1) throw MetricsError("retention horizon must be >= 1");
  RetentionCurve curve;
  curve.window_end = window_end;
  curve.days.resize(static_cast<std::size_t>(horizon) + 1);
  for (int n = 0; n <= horizon; ++n) curve.days[static_cast<std::size_t>(n)].day = n;
  for (const auto& t : timelines) {
    if (t.active_days.empty()) continue;
    const Date first = t.first_day();
    for (int n = 0; n <= horizon; ++n) {
      const Date target = first + std::chrono::days{n};
      if (target > window_end) break;
      auto& d = curve.days[static_cast<std::size_t>(n)];
      ++d.eligible;
      if (t.active_days.count(target)) ++d.returned;
    }
  }
  if (curve.days.front().eligible == 0) throw MetricsError("empty retention window");
  return curve;
}

struct TemporalProfile {
  Date window_start{};
  Date window_end{};
  /// Every date of the window, zero-filled.
  std::map<Date, std::size_t> daily;
  /// Monday first.
  std::array<double, 7> weekday_means{};
  std::array<std::size_t, 7> weekday_dates{};
};

/// 0 = Monday ... 6 = Sunday.
inline unsigned iso_weekday_index(Date d) { return std::chrono::weekday{d}.iso_encoding() - 1; }

inline constexpr std::array<const char*, 7> kWeekdayNames{"Monday", "Tuesday",  "Wednesday", "Thursday",
                                                          "Friday", "Saturday", "Sunday"};

/// Completion requests per local date in [window_start, window_end] and the
/// mean per weekday. Non-completion events are ignored.
inline TemporalProfile temporal_profile(std::span<const RawEvent> events, Date window_start, Date window_end) {
  TemporalProfile p;
  p.window_start = window_start;
  p.window_end = window_end;
  for (Date d = window_start; d <= window_end; d += std::chrono::days{1}) {
    p.daily[d] = 0;
    ++p.weekday_dates[iso_weekday_index(d)];
  }
  for (const auto& e : events) {
    if (e.kind() != EventKind::Completion) continue;
    const Date d = local_date(e);
    if (d < window_start || d > window_end) continue;
    ++p.daily[d];
  }
  std::array<std::size_t, 7> sums{};
  for (const auto& [d, n] : p.daily) sums[iso_weekday_index(d)] += n;
  for (std::size_t i = 0; i < 7; ++i) p.weekday_means[i] = safe_ratio(sums[i], p.weekday_dates[i]);
  return p;
}

}  // namespace acceptlens

#endif  // ACCEPTLENS_METRICS_HPP
