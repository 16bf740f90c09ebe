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

// Report serialization. Output is a pure function of the AnalysisReport:
// keys are emitted in a fixed order, percentages are rounded half-to-even
// to two decimals, and raw counts are always included.

#ifndef ACCEPTLENS_REPORT_HPP
#define ACCEPTLENS_REPORT_HPP

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "acceptlens/pipeline.hpp"
#include "json.hpp"

namespace acceptlens {

/// Rounds half-to-even at two decimals.
inline double round2(double v) { return std::nearbyint(v * 100.0) / 100.0; }

/// Fraction in [0, 1] as a percentage with two decimals.
inline double percent(double fraction) { return round2(fraction * 100.0); }

inline std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", round2(v));
  return buf;
}

inline std::string_view to_string(UnresolvedReason r) {
  switch (r) {
    case UnresolvedReason::None: return "none";
    case UnresolvedReason::NoContent: return "no_content";
    case UnresolvedReason::UnparseableSuggestion: return "unparseable_suggestion";
    case UnresolvedReason::UnparseableDocument: return "unparseable_document";
  }
  return "?";
}

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RenderedFile {
  std::string name;
  std::string content;
};

namespace detail {

using nlohmann::ordered_json;

inline ordered_json count_share(std::size_t count, std::size_t of) {
  ordered_json j;
  j["count"] = count;
  j["share"] = percent(safe_ratio(count, of));
  return j;
}

struct CategoryRow {
  std::string name;
  std::size_t count;
};

inline std::vector<CategoryRow> accepted_rows(const AcceptanceSummary& a) {
  return {{"fully_accepted", a.fully_accepted},
          {"minor_edit", a.minor_edits},
          {"major_edit", a.major_edits},
          {"deleted_after_accept", a.deleted_after_accept},
          {"unresolved", a.unresolved},
          {"module_changed_minor", a.module_changed_minor}};
}

inline ordered_json to_json(const AnalysisReport& r) {
  ordered_json j;
  const auto& a = r.acceptance;

  auto& users = j["users"];
  users["total"] = r.users_total;
  users["returning"] = r.returning_users;
  users["returning_share"] = percent(safe_ratio(r.returning_users, r.users_total));
  users["analysis_cohort"] = r.cohort == Cohort::Returning ? "returning" : "all";
  users["analyzed"] = r.analyzed_users;

  auto& acc = j["acceptance"];
  acc["total_suggestions"] = a.total_suggestions;
  acc["initially_accepted"] = a.initially_accepted;
  acc["fully_accepted"] = a.fully_accepted;
  acc["minor_edits"] = a.minor_edits;
  acc["major_edits"] = a.major_edits;
  acc["deleted_after_accept"] = a.deleted_after_accept;
  acc["module_changed_minor"] = a.module_changed_minor;
  acc["unresolved"] = a.unresolved;
  acc["rejected"] = a.rejected;
  acc["ignored"] = a.ignored;
  acc["avg_lines_per_suggestion"] = round2(a.avg_lines_per_suggestion);
  acc["avg_tokens_per_suggestion"] = round2(a.avg_tokens_per_suggestion);
  acc["initial_rate"] = percent(a.initial_rate);
  acc["strong_rate"] = percent(a.strong_rate);

  auto& dist = j["edit_distribution"];
  dist["accepted"] = a.initially_accepted;
  for (const auto& row : accepted_rows(a)) dist[row.name] = count_share(row.count, a.initially_accepted);

  auto& minor = j["minor_subcategories"];
  std::size_t minor_total = 0;
  for (const auto& [_, n] : r.edits.minor_subcategories) minor_total += n;
  minor["classified"] = minor_total;
  for (const auto& [c, n] : r.edits.minor_subcategories) minor[std::string(to_string(c))] = count_share(n, minor_total);

  auto& mod = j["module_edits"];
  mod["edited_suggestions"] = r.edits.module_edited;
  for (const auto& [t, n] : r.edits.tag_counts) mod[std::string(to_string(t))] = count_share(n, r.edits.module_edited);

  auto& ret = j["retention"];
  ret["window_end"] = format_date(r.retention.window_end);
  ret["eligibility"] = "first_day + N <= window_end";
  auto& days = ret["days"];
  days = ordered_json::array();
  for (const auto& d : r.retention.days) {
    ordered_json row;
    row["day"] = d.day;
    row["eligible"] = d.eligible;
    row["returned"] = d.returned;
    row["percentage"] = percent(d.share());
    days.push_back(std::move(row));
  }

  auto profile = [](const TemporalProfile& p) {
    ordered_json t;
    auto& daily = t["daily"];
    daily = ordered_json::array();
    for (const auto& [d, n] : p.daily) {
      ordered_json row;
      row["date"] = format_date(d);
      row["count"] = n;
      daily.push_back(std::move(row));
    }
    auto& means = t["weekday_means"];
    for (std::size_t i = 0; i < 7; ++i) means[kWeekdayNames[i]] = round2(p.weekday_means[i]);
    return t;
  };
  auto& temporal = j["temporal"];
  temporal["window_start"] = format_date(r.temporal.window_start);
  temporal["window_end"] = format_date(r.temporal.window_end);
  temporal["deduplicated"] = profile(r.temporal);
  temporal["raw"] = profile(r.temporal_raw);

  auto& fb = j["feedback"];
  const auto& s = r.feedback.stars;
  fb["ratings"] = s.total;
  auto& hist = fb["star_histogram"];
  for (std::size_t k = 0; k < 5; ++k) hist[std::to_string(k + 1)] = s.star_histogram[k];
  fb["satisfied_share"] = percent(s.satisfied_share);
  fb["neutral_share"] = percent(s.neutral_share);
  fb["dissatisfied_share"] = percent(s.dissatisfied_share);
  auto labels = [](const LabelDistribution& d) {
    ordered_json l;
    l["labeled"] = d.labeled;
    l["unlabeled"] = d.unlabeled;
    auto& by = l["labels"];
    by = ordered_json::object();
    for (const auto& [label, n] : d.counts) by[label] = count_share(n, d.labeled);
    return l;
  };
  fb["negative"] = labels(r.feedback.negative);
  fb["positive"] = labels(r.feedback.positive);

  auto& q = j["data_quality"];
  q["lines_read"] = r.quality.lines_read;
  q["blank_lines"] = r.quality.blank_lines;
  q["malformed_lines"] = r.quality.malformed_total;
  auto& mk = q["malformed_by_kind"];
  mk = ordered_json::object();
  for (const auto& [k, n] : r.quality.malformed) mk[std::string(to_string(k))] = n;
  q["outside_window"] = r.quality.outside_window;
  q["duplicates_removed"] = r.quality.duplicates_removed;
  q["events_analyzed"] = r.events_analyzed;
  q["orphan_actions"] = r.quality.orphan_actions;
  q["repeated_actions"] = r.quality.repeated_actions;
  auto& un = q["unresolved_by_reason"];
  un = ordered_json::object();
  for (const auto& [k, n] : r.quality.unresolved) un[std::string(to_string(k))] = n;
  return j;
}

class Csv {
 public:
  explicit Csv(std::initializer_list<std::string_view> header) { row(header); }

  void row(std::initializer_list<std::string_view> cells) {
    bool first = true;
    for (auto c : cells) {
      if (!first) out_ << ',';
      first = false;
      if (c.find_first_of(",\"\n") != std::string_view::npos) {
        out_ << '"';
        for (char ch : c) {
          if (ch == '"') out_ << '"';
          out_ << ch;
        }
        out_ << '"';
      } else {
        out_ << c;
      }
    }
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

inline std::vector<RenderedFile> to_csv(const AnalysisReport& r) {
  const auto& a = r.acceptance;
  std::vector<RenderedFile> files;
  auto n = [](std::size_t v) { return std::to_string(v); };

  {
    Csv c{"metric", "value"};
    c.row({"users_total", n(r.users_total)});
    c.row({"returning_users", n(r.returning_users)});
    c.row({"returning_share", fixed2(percent(safe_ratio(r.returning_users, r.users_total)))});
    c.row({"total_suggestions", n(a.total_suggestions)});
    c.row({"initially_accepted", n(a.initially_accepted)});
    c.row({"rejected", n(a.rejected)});
    c.row({"ignored", n(a.ignored)});
    c.row({"avg_lines_per_suggestion", fixed2(a.avg_lines_per_suggestion)});
    c.row({"avg_tokens_per_suggestion", fixed2(a.avg_tokens_per_suggestion)});
    c.row({"initial_rate", fixed2(percent(a.initial_rate))});
    c.row({"strong_rate", fixed2(percent(a.strong_rate))});
    files.push_back({"acceptance.csv", c.str()});
  }
  {
    Csv c{"category", "count", "share_of_accepted"};
    for (const auto& row : accepted_rows(a)) {
      c.row({row.name, n(row.count), fixed2(percent(safe_ratio(row.count, a.initially_accepted)))});
    }
    files.push_back({"edit_distribution.csv", c.str()});
  }
  {
    std::size_t total = 0;
    for (const auto& [_, v] : r.edits.minor_subcategories) total += v;
    Csv c{"subcategory", "count", "share"};
    for (const auto& [k, v] : r.edits.minor_subcategories) {
      c.row({to_string(k), n(v), fixed2(percent(safe_ratio(v, total)))});
    }
    files.push_back({"minor_subcategories.csv", c.str()});
  }
  {
    Csv c{"tag", "count", "share_of_module_edited"};
    for (const auto& [k, v] : r.edits.tag_counts) {
      c.row({to_string(k), n(v), fixed2(percent(safe_ratio(v, r.edits.module_edited)))});
    }
    files.push_back({"module_edit_tags.csv", c.str()});
  }
  {
    Csv c{"day", "eligible", "returned", "percentage"};
    for (const auto& d : r.retention.days) {
      c.row({std::to_string(d.day), n(d.eligible), n(d.returned), fixed2(percent(d.share()))});
    }
    files.push_back({"retention.csv", c.str()});
  }
  {
    Csv c{"date", "weekday", "raw_count", "dedup_count"};
    for (const auto& [d, v] : r.temporal.daily) {
      const auto raw = r.temporal_raw.daily.count(d) ? r.temporal_raw.daily.at(d) : 0;
      c.row({format_date(d), kWeekdayNames[iso_weekday_index(d)], n(raw), n(v)});
    }
    files.push_back({"temporal_daily.csv", c.str()});
  }
  {
    Csv c{"weekday", "dates", "raw_mean", "dedup_mean"};
    for (std::size_t i = 0; i < 7; ++i) {
      c.row({kWeekdayNames[i], n(r.temporal.weekday_dates[i]), fixed2(r.temporal_raw.weekday_means[i]),
             fixed2(r.temporal.weekday_means[i])});
    }
    files.push_back({"temporal_weekday.csv", c.str()});
  }
  {
    const auto& s = r.feedback.stars;
    Csv c{"stars", "count", "share"};
    for (std::size_t k = 0; k < 5; ++k) {
      c.row({std::to_string(k + 1), n(s.star_histogram[k]), fixed2(percent(safe_ratio(s.star_histogram[k], s.total)))});
    }
    files.push_back({"feedback_stars.csv", c.str()});
  }
  {
    Csv c{"polarity", "label", "count", "share"};
    for (const auto* d : {&r.feedback.negative, &r.feedback.positive}) {
      const std::string_view pol = d->polarity == Polarity::Negative ? "negative" : "positive";
      for (const auto& [label, v] : d->counts) c.row({pol, label, n(v), fixed2(percent(safe_ratio(v, d->labeled)))});
      c.row({pol, "(unlabeled)", n(d->unlabeled), ""});
    }
    files.push_back({"feedback_labels.csv", c.str()});
  }
  {
    const auto& q = r.quality;
    Csv c{"metric", "value"};
    c.row({"lines_read", n(q.lines_read)});
    c.row({"blank_lines", n(q.blank_lines)});
    c.row({"malformed_lines", n(q.malformed_total)});
    for (const auto& [k, v] : q.malformed) c.row({"malformed_" + std::string(to_string(k)), n(v)});
    c.row({"outside_window", n(q.outside_window)});
    c.row({"duplicates_removed", n(q.duplicates_removed)});
    c.row({"events_analyzed", n(r.events_analyzed)});
    c.row({"orphan_actions", n(q.orphan_actions)});
    c.row({"repeated_actions", n(q.repeated_actions)});
    for (const auto& [k, v] : q.unresolved) c.row({"unresolved_" + std::string(to_string(k)), n(v)});
    files.push_back({"data_quality.csv", c.str()});
  }
  return files;
}

inline std::string pad(std::string_view s, std::size_t width, bool right = false) {
  std::string out(s);
  if (out.size() >= width) return out;
  const std::string fill(width - out.size(), ' ');
  return right ? fill + out : out + fill;
}

inline std::string to_table(const AnalysisReport& r) {
  std::ostringstream o;
  const auto& a = r.acceptance;
  auto line = [&](std::string_view label, const std::string& value, const std::string& extra = "") {
    o << "  " << pad(label, 34) << pad(value, 10, true) << (extra.empty() ? "" : "  " + extra) << '\n';
  };
  auto pct = [](double fraction) { return fixed2(percent(fraction)) + "%"; };

  o << "Users\n";
  line("total", std::to_string(r.users_total));
  line("returning (>= 2 active days)", std::to_string(r.returning_users), pct(safe_ratio(r.returning_users, r.users_total)));
  line("analyzed for acceptance", std::to_string(r.analyzed_users),
       r.cohort == Cohort::Returning ? "(returning cohort)" : "(all users)");

  o << "\nAcceptance\n";
  line("total suggestions", std::to_string(a.total_suggestions));
  line("initially accepted", std::to_string(a.initially_accepted), pct(a.initial_rate));
  line("strong acceptance rate", pct(a.strong_rate));
  line("avg lines per suggestion", fixed2(a.avg_lines_per_suggestion));
  line("avg tokens per suggestion", fixed2(a.avg_tokens_per_suggestion));

  o << "\nAccepted suggestions by outcome\n";
  for (const auto& row : accepted_rows(a)) {
    line(row.name, std::to_string(row.count), pct(safe_ratio(row.count, a.initially_accepted)));
  }

  o << "\nMinor edits by kind (module unchanged)\n";
  std::size_t minor_total = 0;
  for (const auto& [_, v] : r.edits.minor_subcategories) minor_total += v;
  for (const auto& [k, v] : r.edits.minor_subcategories) line(to_string(k), std::to_string(v), pct(safe_ratio(v, minor_total)));

  o << "\nModule-level edits (" << r.edits.module_edited << " suggestions, tags overlap)\n";
  for (const auto& [k, v] : r.edits.tag_counts) line(to_string(k), std::to_string(v), pct(safe_ratio(v, r.edits.module_edited)));

  o << "\nRetention (window end " << format_date(r.retention.window_end) << ")\n";
  o << "  " << pad("day", 6) << pad("eligible", 10, true) << pad("returned", 10, true) << pad("percent", 10, true) << '\n';
  for (const auto& d : r.retention.days) {
    o << "  " << pad(std::to_string(d.day), 6) << pad(std::to_string(d.eligible), 10, true)
      << pad(std::to_string(d.returned), 10, true) << pad(pct(d.share()), 10, true) << '\n';
  }

  o << "\nCompletion requests per weekday (" << format_date(r.temporal.window_start) << " .. "
    << format_date(r.temporal.window_end) << ")\n";
  o << "  " << pad("weekday", 12) << pad("dates", 8, true) << pad("mean", 10, true) << pad("raw mean", 10, true) << '\n';
  for (std::size_t i = 0; i < 7; ++i) {
    o << "  " << pad(kWeekdayNames[i], 12) << pad(std::to_string(r.temporal.weekday_dates[i]), 8, true)
      << pad(fixed2(r.temporal.weekday_means[i]), 10, true) << pad(fixed2(r.temporal_raw.weekday_means[i]), 10, true)
      << '\n';
  }

  const auto& s = r.feedback.stars;
  o << "\nFeedback (" << s.total << " ratings)\n";
  for (std::size_t k = 0; k < 5; ++k) {
    line(std::to_string(k + 1) + " star", std::to_string(s.star_histogram[k]), pct(safe_ratio(s.star_histogram[k], s.total)));
  }
  line("satisfied (4-5)", pct(s.satisfied_share));
  line("neutral (3)", pct(s.neutral_share));
  line("dissatisfied (1-2)", pct(s.dissatisfied_share));
  for (const auto* d : {&r.feedback.negative, &r.feedback.positive}) {
    o << "  " << (d->polarity == Polarity::Negative ? "negative" : "positive") << " comments (" << d->labeled
      << " labeled, " << d->unlabeled << " unlabeled)\n";
    for (const auto& [label, v] : d->counts) line("  " + label, std::to_string(v), pct(safe_ratio(v, d->labeled)));
  }

  const auto& q = r.quality;
  o << "\nData quality\n";
  line("lines read", std::to_string(q.lines_read));
  line("malformed lines", std::to_string(q.malformed_total));
  line("outside window", std::to_string(q.outside_window));
  line("duplicates removed", std::to_string(q.duplicates_removed));
  line("orphan actions", std::to_string(q.orphan_actions));
  line("repeated actions", std::to_string(q.repeated_actions));
  for (const auto& [k, v] : q.unresolved) line("unresolved: " + std::string(to_string(k)), std::to_string(v));
  return o.str();
}

}  // namespace detail

/// Canonical JSON form of the report.
inline std::string report_json(const AnalysisReport& r) { return detail::to_json(r).dump(2) + "\n"; }

/// Renders `r` as "json" (one file), "csv" (one file per section) or
/// "table" (aligned text). Throws ReportError for any other format.
inline std::vector<RenderedFile> render_report(const AnalysisReport& r, std::string_view format) {
  if (format == "json") return {{"report.json", report_json(r)}};
  if (format == "csv") return detail::to_csv(r);
  if (format == "table") return {{"report.txt", detail::to_table(r)}};
  throw ReportError("unknown report format '" + std::string(format) + "'");
}

}  // namespace acceptlens

#endif  // ACCEPTLENS_REPORT_HPP
