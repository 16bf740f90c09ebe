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

#ifndef ACCEPTLENS_PIPELINE_HPP
#define ACCEPTLENS_PIPELINE_HPP

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "acceptlens/config.hpp"
#include "acceptlens/edit_analyzer.hpp"
#include "acceptlens/event_model.hpp"
#include "acceptlens/feedback.hpp"
#include "acceptlens/metrics.hpp"

namespace acceptlens {

struct DataQuality {
  std::size_t lines_read = 0;
  std::size_t blank_lines = 0;
  std::map<ParseErrorKind, std::size_t> malformed;
  std::size_t malformed_total = 0;
  std::size_t outside_window = 0;
  std::size_t duplicates_removed = 0;
  std::size_t orphan_actions = 0;
  std::size_t repeated_actions = 0;
  std::map<UnresolvedReason, std::size_t> unresolved;
};

struct AnalysisReport {
  std::size_t events_analyzed = 0;
  std::size_t users_total = 0;
  std::size_t returning_users = 0;
  /// Users whose suggestions feed the acceptance and edit sections.
  std::size_t analyzed_users = 0;
  Cohort cohort = Cohort::Returning;
  AcceptanceSummary acceptance;
  EditBreakdown edits;
  RetentionCurve retention;
  TemporalProfile temporal;      // deduplicated events
  TemporalProfile temporal_raw;  // before deduplication
  FeedbackSummary feedback;
  DataQuality quality;
};

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineOptions {
  std::optional<Date> window_start;
  std::optional<Date> window_end;
  /// Worker threads for the per-user analysis; the report does not depend
  /// on this value.
  unsigned jobs = 1;
};

/// Per-user edit analysis, fanned out over `jobs` threads. Results are
/// stored by timeline index, so the merge order is fixed.
inline std::vector<SuggestionOutcome> analyze_users(const std::vector<const UserTimeline*>& users,
                                                    const Config& config, unsigned jobs, PairingStats& stats) {
  std::vector<std::vector<SuggestionOutcome>> per_user(users.size());
  std::vector<PairingStats> per_user_stats(users.size());
  auto work = [&](std::atomic<std::size_t>& next) {
    for (std::size_t i = next++; i < users.size(); i = next++) {
      per_user[i] = analyze_timeline(*users[i], config, per_user_stats[i]);
    }
  };
  std::atomic<std::size_t> next{0};
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(users.size())));
  if (n <= 1) {
    work(next);
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(work, std::ref(next));
    for (auto& t : pool) t.join();
  }

  std::vector<SuggestionOutcome> out;
  for (std::size_t i = 0; i < users.size(); ++i) {
    stats.orphan_actions += per_user_stats[i].orphan_actions;
    stats.repeated_actions += per_user_stats[i].repeated_actions;
    for (auto& o : per_user[i]) out.push_back(std::move(o));
  }
  return out;
}

/// Runs the full analysis over already decoded events.
inline AnalysisReport run_pipeline(std::vector<RawEvent> raw, const IngestStats& ingest, const Config& config,
                                   const PipelineOptions& options = {}) {
  AnalysisReport r;
  r.cohort = config.cohort;
  r.quality.lines_read = ingest.lines_read;
  r.quality.blank_lines = ingest.blank_lines;
  r.quality.malformed = ingest.malformed;
  r.quality.malformed_total = ingest.malformed_total();
  if (raw.empty()) throw PipelineError("no parseable events in input");

  Date lo = Date::max(), hi = Date::min();
  for (const auto& e : raw) {
    const auto d = local_date(e);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  const Date start = options.window_start.value_or(lo);
  const Date end = options.window_end.value_or(hi);
  if (start > end) throw PipelineError("window start is after window end");

  const auto before = raw.size();
  std::erase_if(raw, [&](const RawEvent& e) {
    const auto d = local_date(e);
    return d < start || d > end;
  });
  r.quality.outside_window = before - raw.size();
  if (raw.empty()) throw PipelineError("no events inside the analysis window");

  r.temporal_raw = temporal_profile(raw, start, end);
  const auto in_window = raw.size();
  auto events = deduplicate(std::move(raw), config.dedup_window);
  r.quality.duplicates_removed = in_window - events.size();
  r.events_analyzed = events.size();
  r.temporal = temporal_profile(events, start, end);
  r.feedback = summarize_feedback(events);

  const auto timelines = build_timelines(std::move(events));
  r.users_total = timelines.size();
  const auto returning = returning_user_cohort(timelines);
  r.returning_users = returning.size();
  r.retention = retention_curve(timelines, config.retention_horizon, end);

  std::vector<const UserTimeline*> analyzed;
  for (const auto& t : timelines) {
    if (config.cohort == Cohort::All || returning.count(t.user_id)) analyzed.push_back(&t);
  }
  r.analyzed_users = analyzed.size();

  PairingStats pairing;
  const auto outcomes = analyze_users(analyzed, config, options.jobs, pairing);
  r.quality.orphan_actions = pairing.orphan_actions;
  r.quality.repeated_actions = pairing.repeated_actions;
  for (const auto& o : outcomes) {
    if (o.category == OutcomeCategory::Unresolved) ++r.quality.unresolved[o.unresolved_reason];
  }
  r.acceptance = acceptance_summary(outcomes);
  r.edits = edit_breakdown(outcomes);
  return r;
}

/// Reads every JSONL log and runs the analysis. Unreadable files and a log
/// without a single valid event are errors; bad lines are only counted.
inline AnalysisReport run_pipeline(const std::vector<std::filesystem::path>& event_paths, const Config& config,
                                   const PipelineOptions& options = {}) {
  IngestStats stats;
  std::vector<RawEvent> raw;
  for (const auto& p : event_paths) {
    std::ifstream in(p);
    if (!in) throw PipelineError("cannot read " + p.string());
    auto part = read_event_log(in, stats);
    raw.insert(raw.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return run_pipeline(std::move(raw), stats, config, options);
}

}  // namespace acceptlens

#endif  // ACCEPTLENS_PIPELINE_HPP
