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

#ifndef ACCEPTLENS_EVENT_MODEL_HPP
#define ACCEPTLENS_EVENT_MODEL_HPP

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "json.hpp"

namespace acceptlens {

using Date = std::chrono::sys_days;
using Instant = std::chrono::sys_time<std::chrono::milliseconds>;

/// A point in time together with the UTC offset it was recorded in. The
/// offset is kept so that calendar bucketing happens on the user's wall clock.
struct Timestamp {
  Instant utc{};
  std::chrono::minutes offset{0};

  /// Wall-clock time in the recorded offset.
  Instant local() const { return utc + offset; }

  friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

inline std::string format_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

namespace detail {

inline bool read_digits(std::string_view s, std::size_t pos, std::size_t n, int& out) {
  if (pos + n > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

}  // namespace detail

/// Parses "YYYY-MM-DD". Returns nullopt on anything else.
inline std::optional<Date> parse_date(std::string_view s) {
  int y, m, d;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!detail::read_digits(s, 0, 4, y) || !detail::read_digits(s, 5, 2, m) ||
      !detail::read_digits(s, 8, 2, d)) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

/// Parses an RFC 3339 date-time. An explicit offset ("Z" or "+hh:mm") is
/// mandatory; fractional seconds are kept to millisecond precision.
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
  if (s.size() < 20) return std::nullopt;
  const auto date = parse_date(s.substr(0, 10));
  if (!date) return std::nullopt;
  if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') return std::nullopt;
  int hh, mm, ss;
  if (!detail::read_digits(s, 11, 2, hh) || s[13] != ':' || !detail::read_digits(s, 14, 2, mm) ||
      s[16] != ':' || !detail::read_digits(s, 17, 2, ss)) {
    return std::nullopt;
  }
  // Leap seconds are accepted and folded into the next second.
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  std::size_t pos = 19;
  int millis = 0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      if (digits < 3) millis = millis * 10 + (s[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) return std::nullopt;
    for (std::size_t i = digits; i < 3; ++i) millis *= 10;
  }
  if (pos >= s.size()) return std::nullopt;
  int offset_minutes = 0;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    int oh, om;
    if (!detail::read_digits(s, pos + 1, 2, oh) || pos + 3 >= s.size() || s[pos + 3] != ':' ||
        !detail::read_digits(s, pos + 4, 2, om) || oh > 23 || om > 59) {
      return std::nullopt;
    }
    offset_minutes = (oh * 60 + om) * (s[pos] == '-' ? -1 : 1);
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;

  using namespace std::chrono;
  const auto local = Instant{*date} + hours{hh} + minutes{mm} + seconds{ss} + milliseconds{millis};
  return Timestamp{local - minutes{offset_minutes}, minutes{offset_minutes}};
}

enum class EventKind { Completion, Suggestion, Action, Content, Feedback };

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Completion: return "completion";
    case EventKind::Suggestion: return "suggestion";
    case EventKind::Action: return "action";
    case EventKind::Content: return "content";
    case EventKind::Feedback: return "feedback";
  }
  return "?";
}

enum class Decision { Accepted, Rejected, Ignored };

inline std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Accepted: return "accepted";
    case Decision::Rejected: return "rejected";
    case Decision::Ignored: return "ignored";
  }
  return "?";
}

struct CompletionPayload {
  std::string suggestion_id;
  std::string prompt;
  std::string context;
  friend bool operator==(const CompletionPayload&, const CompletionPayload&) = default;
};

struct SuggestionPayload {
  std::string suggestion_id;
  std::string suggestion_text;
  int line_count = 1;
  int token_count = 1;
  friend bool operator==(const SuggestionPayload&, const SuggestionPayload&) = default;
};

struct ActionPayload {
  std::string suggestion_id;
  Decision action = Decision::Ignored;
  friend bool operator==(const ActionPayload&, const ActionPayload&) = default;
};

struct ContentPayload {
  std::optional<std::string> suggestion_id;
  std::string document_text;
  friend bool operator==(const ContentPayload&, const ContentPayload&) = default;
};

struct FeedbackPayload {
  int stars = 0;
  std::string comment;
  std::optional<std::string> sentiment_label;
  friend bool operator==(const FeedbackPayload&, const FeedbackPayload&) = default;
};

// Alternative order matches EventKind.
using Payload =
    std::variant<CompletionPayload, SuggestionPayload, ActionPayload, ContentPayload, FeedbackPayload>;

struct RawEvent {
  std::string event_id;
  std::string user_id;
  Timestamp timestamp;
  Payload payload;

  EventKind kind() const { return static_cast<EventKind>(payload.index()); }

  template <class T>
  const T& as() const {
    return std::get<T>(payload);
  }

  friend bool operator==(const RawEvent&, const RawEvent&) = default;
};

/// Number of newline-delimited lines; a trailing newline does not open a
/// new line and the empty string has zero lines.
inline int count_lines(std::string_view text) {
  if (text.empty()) return 0;
  int n = static_cast<int>(std::count(text.begin(), text.end(), '\n'));
  if (text.back() != '\n') ++n;
  return n;
}

enum class ParseErrorKind { MalformedJson, MissingField, InvalidField, BadTimestamp, UnknownKind };

inline std::string_view to_string(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::MalformedJson: return "malformed_json";
    case ParseErrorKind::MissingField: return "missing_field";
    case ParseErrorKind::InvalidField: return "invalid_field";
    case ParseErrorKind::BadTimestamp: return "bad_timestamp";
    case ParseErrorKind::UnknownKind: return "unknown_kind";
  }
  return "?";
}

class EventParseError : public std::runtime_error {
 public:
  EventParseError(ParseErrorKind kind, std::string field, std::size_t line_number = 0)
      : std::runtime_error(std::string(to_string(kind)) + (field.empty() ? "" : "(" + field + ")") +
                           (line_number ? " at line " + std::to_string(line_number) : "")),
        kind_(kind),
        field_(std::move(field)),
        line_number_(line_number) {}

  ParseErrorKind kind() const { return kind_; }
  const std::string& field() const { return field_; }
  /// 1-based line number in the source log, 0 when unknown.
  std::size_t line_number() const { return line_number_; }

 private:
  ParseErrorKind kind_;
  std::string field_;
  std::size_t line_number_;
};

namespace detail {

using nlohmann::json;

inline const json& require(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) throw EventParseError(ParseErrorKind::MissingField, name);
  return *it;
}

inline std::string require_string(const json& obj, const char* name, bool non_empty = false) {
  const json& v = require(obj, name);
  if (!v.is_string()) throw EventParseError(ParseErrorKind::InvalidField, name);
  std::string s = v.get<std::string>();
  if (non_empty && s.empty()) throw EventParseError(ParseErrorKind::MissingField, name);
  return s;
}

inline std::optional<std::string> optional_string(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw EventParseError(ParseErrorKind::InvalidField, name);
  return it->get<std::string>();
}

inline std::int64_t require_int(const json& obj, const char* name) {
  const json& v = require(obj, name);
  if (!v.is_number_integer()) throw EventParseError(ParseErrorKind::InvalidField, name);
  return v.get<std::int64_t>();
}

inline Payload parse_payload(const json& obj, std::string_view type) {
  if (type == "completion") {
    return CompletionPayload{require_string(obj, "suggestion_id", true), require_string(obj, "prompt"),
                             require_string(obj, "context")};
  }
  if (type == "suggestion") {
    SuggestionPayload p;
    p.suggestion_id = require_string(obj, "suggestion_id", true);
    p.suggestion_text = require_string(obj, "text");
    const auto lines = require_int(obj, "lines");
    const auto tokens = require_int(obj, "tokens");
    if (lines < 1 || lines != count_lines(p.suggestion_text)) {
      throw EventParseError(ParseErrorKind::InvalidField, "lines");
    }
    if (tokens < 1 || tokens > INT32_MAX) throw EventParseError(ParseErrorKind::InvalidField, "tokens");
    p.line_count = static_cast<int>(lines);
    p.token_count = static_cast<int>(tokens);
    return p;
  }
  if (type == "action") {
    ActionPayload p;
    p.suggestion_id = require_string(obj, "suggestion_id", true);
    const auto action = require_string(obj, "action");
    if (action == "accepted") {
      p.action = Decision::Accepted;
    } else if (action == "rejected") {
      p.action = Decision::Rejected;
    } else if (action == "ignored") {
      p.action = Decision::Ignored;
    } else {
      throw EventParseError(ParseErrorKind::InvalidField, "action");
    }
    return p;
  }
  if (type == "content") {
    return ContentPayload{optional_string(obj, "suggestion_id"), require_string(obj, "document")};
  }
  if (type == "feedback") {
    const auto stars = require_int(obj, "stars");
    if (stars < 1 || stars > 5) throw EventParseError(ParseErrorKind::InvalidField, "stars");
    return FeedbackPayload{static_cast<int>(stars), require_string(obj, "comment"), optional_string(obj, "label")};
  }
  throw EventParseError(ParseErrorKind::UnknownKind, std::string(type));
}

}  // namespace detail

/// Decodes one JSONL record. Unknown fields are ignored. Throws
/// EventParseError carrying `line_number` on any schema violation.
inline RawEvent parse_event_line(std::string_view line, std::size_t line_number = 0) {
  using nlohmann::json;
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error&) {
    throw EventParseError(ParseErrorKind::MalformedJson, "", line_number);
  }
  if (!obj.is_object()) throw EventParseError(ParseErrorKind::MalformedJson, "", line_number);
  try {
    RawEvent e;
    e.event_id = detail::require_string(obj, "event_id", true);
    e.user_id = detail::require_string(obj, "user_id", true);
    const auto ts = detail::require_string(obj, "ts");
    const auto parsed = parse_timestamp(ts);
    if (!parsed) throw EventParseError(ParseErrorKind::BadTimestamp, "ts");
    e.timestamp = *parsed;
    e.payload = detail::parse_payload(obj, detail::require_string(obj, "type"));
    return e;
  } catch (const EventParseError& err) {
    throw EventParseError(err.kind(), err.field(), line_number);
  }
}

/// Inverse of parse_event_line for the fields the schema defines. The
/// timestamp is written in its original offset.
inline std::string serialize_event(const RawEvent& e) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["event_id"] = e.event_id;
  j["user_id"] = e.user_id;
  {
    using namespace std::chrono;
    const auto local = e.timestamp.local();
    const auto day = floor<days>(local);
    const hh_mm_ss<milliseconds> tod{local - day};
    char buf[48];
    const int off = static_cast<int>(e.timestamp.offset.count());
    const int aoff = off < 0 ? -off : off;
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02d.%03d%c%02d:%02d", format_date(day).c_str(),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()), static_cast<int>(tod.subseconds().count()),
                  off < 0 ? '-' : '+', aoff / 60, aoff % 60);
    j["ts"] = buf;
  }
  j["type"] = to_string(e.kind());
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CompletionPayload>) {
          j["suggestion_id"] = p.suggestion_id;
          j["prompt"] = p.prompt;
          j["context"] = p.context;
        } else if constexpr (std::is_same_v<T, SuggestionPayload>) {
          j["suggestion_id"] = p.suggestion_id;
          j["text"] = p.suggestion_text;
          j["lines"] = p.line_count;
          j["tokens"] = p.token_count;
        } else if constexpr (std::is_same_v<T, ActionPayload>) {
          j["suggestion_id"] = p.suggestion_id;
          j["action"] = to_string(p.action);
        } else if constexpr (std::is_same_v<T, ContentPayload>) {
          if (p.suggestion_id) j["suggestion_id"] = *p.suggestion_id;
          j["document"] = p.document_text;
        } else {
          j["stars"] = p.stars;
          j["comment"] = p.comment;
          if (p.sentiment_label) j["label"] = *p.sentiment_label;
        }
      },
      e.payload);
  return j.dump();
}

/// Calendar date on the event's own wall clock.
inline Date local_date(const RawEvent& e) {
  return std::chrono::floor<std::chrono::days>(e.timestamp.local());
}

/// Canonical text of the kind-specific payload. Two events with equal
/// content keys carry the same payload.
inline std::string payload_content_key(const RawEvent& e) {
  // Serialize payload only; identity and timestamp fields are excluded.
  RawEvent stripped{"", "", Timestamp{}, e.payload};
  return serialize_event(stripped);
}

struct IngestStats {
  std::size_t lines_read = 0;
  std::size_t blank_lines = 0;
  std::size_t parsed = 0;
  std::map<ParseErrorKind, std::size_t> malformed;
  /// First few errors, for diagnostics.
  std::vector<EventParseError> samples;

  std::size_t malformed_total() const {
    std::size_t n = 0;
    for (const auto& [_, c] : malformed) n += c;
    return n;
  }
};

/// Reads a JSONL stream, skipping and counting bad lines.
inline std::vector<RawEvent> read_event_log(std::istream& in, IngestStats& stats,
                                            std::size_t max_samples = 10) {
  std::vector<RawEvent> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++stats.lines_read;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      ++stats.blank_lines;
      continue;
    }
    try {
      out.push_back(parse_event_line(line, line_number));
      ++stats.parsed;
    } catch (const EventParseError& err) {
      ++stats.malformed[err.kind()];
      if (stats.samples.size() < max_samples) stats.samples.push_back(err);
    }
  }
  return out;
}

inline bool event_order(const RawEvent& a, const RawEvent& b) {
  if (a.user_id != b.user_id) return a.user_id < b.user_id;
  if (a.timestamp.utc != b.timestamp.utc) return a.timestamp.utc < b.timestamp.utc;
  return a.event_id < b.event_id;
}

/// Drops an event when it repeats the (user, kind, payload) of the most
/// recently kept such event no more than `window` later. The output is
/// sorted by (user_id, timestamp, event_id).
inline std::vector<RawEvent> deduplicate(std::vector<RawEvent> events,
                                         std::chrono::milliseconds window = std::chrono::seconds{10}) {
  std::sort(events.begin(), events.end(), event_order);
  std::vector<RawEvent> out;
  out.reserve(events.size());
  // Per user: content key -> timestamp of the last kept occurrence.
  std::unordered_map<std::string, Instant> last_kept;
  std::optional<std::string> current_user;
  for (auto& e : events) {
    if (current_user != e.user_id) {
      last_kept.clear();
      current_user = e.user_id;
    }
    auto key = payload_content_key(e);
    auto it = last_kept.find(key);
    if (it != last_kept.end() && e.timestamp.utc - it->second <= window) {
      continue;
    }
    last_kept.insert_or_assign(std::move(key), e.timestamp.utc);
    out.push_back(std::move(e));
  }
  return out;
}

struct UserTimeline {
  std::string user_id;
  std::vector<RawEvent> events;
  std::set<Date> active_days;

  Date first_day() const { return *active_days.begin(); }
};

/// Distinct local dates with at least one event.
inline std::set<Date> active_days(const UserTimeline& t) {
  std::set<Date> days;
  for (const auto& e : t.events) days.insert(local_date(e));
  return days;
}

/// Partitions events by user. Timelines come out ordered by user_id, each
/// internally ordered by time.
inline std::vector<UserTimeline> build_timelines(std::vector<RawEvent> events) {
  std::stable_sort(events.begin(), events.end(), event_order);
  std::vector<UserTimeline> out;
  for (auto& e : events) {
    if (out.empty() || out.back().user_id != e.user_id) {
      out.push_back(UserTimeline{e.user_id, {}, {}});
    }
    out.back().events.push_back(std::move(e));
  }
  for (auto& t : out) t.active_days = active_days(t);
  return out;
}

}  // namespace acceptlens

#endif  // ACCEPTLENS_EVENT_MODEL_HPP
