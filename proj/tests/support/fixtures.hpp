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

// Synthetic telemetry generators with planted, exactly known outcomes.

#ifndef ACCEPTLENS_TESTS_FIXTURES_HPP
#define ACCEPTLENS_TESTS_FIXTURES_HPP

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "acceptlens/event_model.hpp"

namespace fixtures {

using namespace acceptlens;
using namespace std::chrono;

inline Date base_date() { return Date{year{2023} / June / day{5}}; }  // a Monday

inline Timestamp at(Date d, seconds time_of_day, minutes offset = minutes{0}) {
  return Timestamp{Instant{d} + time_of_day - offset, offset};
}

class LogBuilder {
 public:
  void completion(const std::string& user, Timestamp ts, const std::string& sid, const std::string& prompt) {
    push(user, ts, CompletionPayload{sid, prompt, ""});
  }
  void suggestion(const std::string& user, Timestamp ts, const std::string& sid, const std::string& text,
                  int tokens = 20) {
    push(user, ts, SuggestionPayload{sid, text, count_lines(text), tokens});
  }
  void action(const std::string& user, Timestamp ts, const std::string& sid, Decision d) {
    push(user, ts, ActionPayload{sid, d});
  }
  void content(const std::string& user, Timestamp ts, std::optional<std::string> sid, const std::string& doc) {
    push(user, ts, ContentPayload{std::move(sid), doc});
  }
  void feedback(const std::string& user, Timestamp ts, int stars, std::optional<std::string> label) {
    push(user, ts, FeedbackPayload{stars, "comment", std::move(label)});
  }

  const std::vector<RawEvent>& events() const { return events_; }
  std::vector<RawEvent> take() { return std::move(events_); }

  std::string jsonl() const {
    std::string out;
    for (const auto& e : events_) out += serialize_event(e) + "\n";
    return out;
  }

 private:
  void push(const std::string& user, Timestamp ts, Payload p) {
    events_.push_back(RawEvent{"ev" + std::to_string(next_id_++), user, ts, std::move(p)});
  }

  std::vector<RawEvent> events_;
  std::size_t next_id_ = 0;
};

/// Indents every line of `body` by `n` spaces.
inline std::string indent(const std::string& body, int n) {
  std::string out, pad(static_cast<std::size_t>(n), ' ');
  std::size_t pos = 0;
  while (pos < body.size()) {
    auto nl = body.find('\n', pos);
    if (nl == std::string::npos) nl = body.size();
    out += pad + body.substr(pos, nl - pos) + "\n";
    pos = nl + 1;
  }
  return out;
}

/// A document holding a single named task.
inline std::string task_doc(const std::string& name, const std::string& body) {
  return "---\n- name: " + name + "\n" + indent(body, 2);
}

/// Six-line copy task; `k` makes it unique.
inline std::string copy_body(std::size_t k, const std::string& module = "ansible.builtin.copy") {
  const auto id = std::to_string(k);
  return module + ":\n  src: files/app" + id + ".conf\n  dest: /etc/app" + id +
         ".conf\n  owner: root\n  group: root\n  mode: '0644'\n";
}

enum class Plant { Full, MinorValue, MinorModule, Major, Deleted, Unresolved, Rejected, Ignored };

/// Emits one suggestion and everything the user did with it.
inline void plant_suggestion(LogBuilder& log, const std::string& user, Timestamp t0, std::size_t k, Plant plant) {
  const auto sid = "s" + std::to_string(k);
  const auto name = "Deploy config " + std::to_string(k);
  const auto shown = copy_body(k);
  auto after = [&](int s) { return Timestamp{t0.utc + seconds{s}, t0.offset}; };

  log.completion(user, t0, sid, "- name: " + name);
  log.suggestion(user, after(1), sid, shown, 20 + static_cast<int>(k % 3));
  if (plant == Plant::Ignored) return;
  if (plant == Plant::Rejected) {
    log.action(user, after(2), sid, Decision::Rejected);
    return;
  }
  log.action(user, after(2), sid, Decision::Accepted);
  std::string committed;
  switch (plant) {
    case Plant::Full:
      committed = task_doc(name, shown);
      break;
    case Plant::MinorValue: {
      auto body = shown;
      const auto pos = body.find("  dest: ");
      body.insert(body.find('\n', pos), ".bak");
      committed = task_doc(name, body);
      break;
    }
    case Plant::MinorModule:
      committed = task_doc(name, copy_body(k, "ansible.builtin.template"));
      break;
    case Plant::Major:
      committed = task_doc(name, "ansible.builtin.debug:\n  msg: replaced " + std::to_string(k) + "\n");
      break;
    case Plant::Deleted:
      committed = task_doc("Something else", "ansible.builtin.ping:\n");
      break;
    case Plant::Unresolved:
      return;
    default:
      break;
  }
  // Alternate tagged and untagged content events.
  log.content(user, after(20), k % 2 ? std::optional<std::string>(sid) : std::nullopt, committed);
}

struct Table1Counts {
  std::size_t total = 62099;
  std::size_t fully = 24811;
  std::size_t minor = 5672;
  std::size_t module_changed_minor = 306;
  std::size_t major = 2713;
  std::size_t deleted = 7436;
  std::size_t unresolved = 306;
  std::size_t rejected = 15000;
  std::size_t accepted() const { return fully + minor + major + deleted + unresolved; }
};

/// A log whose classified outcomes total exactly `c`. Every user is active
/// on at least two local dates, so all of them are returning users.
inline std::vector<RawEvent> table1_log(const Table1Counts& c = {}, std::size_t users = 3910) {
  std::vector<Plant> plan;
  plan.reserve(c.total);
  plan.insert(plan.end(), c.fully, Plant::Full);
  plan.insert(plan.end(), c.minor - c.module_changed_minor, Plant::MinorValue);
  plan.insert(plan.end(), c.module_changed_minor, Plant::MinorModule);
  plan.insert(plan.end(), c.major, Plant::Major);
  plan.insert(plan.end(), c.deleted, Plant::Deleted);
  plan.insert(plan.end(), c.unresolved, Plant::Unresolved);
  plan.insert(plan.end(), c.rejected, Plant::Rejected);
  plan.insert(plan.end(), c.total - plan.size(), Plant::Ignored);

  LogBuilder log;
  const minutes offsets[] = {minutes{120}, minutes{-300}, minutes{0}, minutes{330}};
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const std::size_t u = i % users;
    const std::size_t round = i / users;
    const Date d = base_date() + days{static_cast<int>(round % 40)};
    const auto t0 = at(d, hours{8} + minutes{static_cast<int>(u % 480)}, offsets[u % 4]);
    plant_suggestion(log, "user" + std::to_string(u), t0, i, plan[i]);
  }
  return log.take();
}

struct TagPlan {
  std::size_t fqcn_only = 225;
  std::size_t fqcn_and_reorg = 121;
  std::size_t reorg_module_changed = 90;
  std::size_t command_shell = 352;
  std::size_t similar = 336;
  std::size_t other = 586;
  std::size_t untouched = 400;
  std::size_t value_edits = 200;
};

/// Accepted suggestions carrying planted module-level edits.
inline std::vector<RawEvent> module_tag_log(const TagPlan& p = {}, std::size_t users = 200) {
  LogBuilder log;
  std::size_t k = 0;
  auto emit = [&](std::size_t count, const std::string& shown_module, const std::string& committed_module,
                  const std::string& extra_directive) {
    for (std::size_t n = 0; n < count; ++n, ++k) {
      const std::size_t u = k % users;
      const Date d = base_date() + days{static_cast<int>((k / users) % 20)};
      const auto t0 = at(d, hours{9} + minutes{static_cast<int>(u % 400)});
      const auto sid = "m" + std::to_string(k);
      const auto name = "Module task " + std::to_string(k);
      const auto user = "user" + std::to_string(u);
      const auto shown = copy_body(k, shown_module);
      auto committed_body = copy_body(k, committed_module);
      if (committed_module == "value-edit") {
        committed_body = shown;
        committed_body.replace(committed_body.find("owner: root"), 11, "owner: app");
      }
      committed_body += extra_directive;
      log.completion(user, t0, sid, name);
      log.suggestion(user, Timestamp{t0.utc + seconds{1}, t0.offset}, sid, shown);
      log.action(user, Timestamp{t0.utc + seconds{2}, t0.offset}, sid, Decision::Accepted);
      log.content(user, Timestamp{t0.utc + seconds{30}, t0.offset}, sid, task_doc(name, committed_body));
    }
  };
  emit(p.fqcn_only, "ansible.builtin.debug", "debug", "");
  emit(p.fqcn_and_reorg, "ansible.builtin.debug", "debug", "register: result\n");
  emit(p.reorg_module_changed, "ansible.builtin.copy", "ansible.builtin.stat", "register: st\n");
  emit(p.command_shell / 2, "ansible.builtin.command", "ansible.builtin.shell", "");
  emit(p.command_shell - p.command_shell / 2, "ansible.builtin.lineinfile", "shell", "");
  emit(p.similar, "ansible.builtin.yum", "ansible.builtin.dnf", "");
  emit(p.other, "ansible.builtin.copy", "ansible.builtin.stat", "");
  emit(p.untouched, "ansible.builtin.copy", "ansible.builtin.copy", "");
  emit(p.value_edits, "ansible.builtin.copy", "value-edit", "");
  return log.take();
}

/// `users` users starting on the same day; `day1_returners` of them come
/// back on day 1 and every tenth user is also active on day 7.
inline std::vector<RawEvent> retention_log(std::size_t users, std::size_t day1_returners,
                                           const std::string& prefix = "r") {
  LogBuilder log;
  for (std::size_t u = 0; u < users; ++u) {
    const auto user = prefix + std::to_string(u);
    const auto t = hours{10} + seconds{static_cast<int>(u % 3600)};
    log.completion(user, at(base_date(), t), "c" + std::to_string(u), "p");
    if (u < day1_returners) log.completion(user, at(base_date() + days{1}, t), "d" + std::to_string(u), "p");
    if (u % 10 == 0) log.completion(user, at(base_date() + days{7}, t), "w" + std::to_string(u), "p");
  }
  return log.take();
}

/// `users` users of whom `returning` have two active days; the others have
/// two events on a single day.
inline std::vector<RawEvent> cohort_log(std::size_t users, std::size_t returning) {
  LogBuilder log;
  for (std::size_t u = 0; u < users; ++u) {
    const auto user = "c" + std::to_string(u);
    const Date d = base_date() + days{static_cast<int>(u % 14)};
    log.completion(user, at(d, hours{9}), "a" + std::to_string(u), "p");
    const Date second = u < returning ? d + days{1 + static_cast<int>(u % 5)} : d;
    log.completion(user, at(second, hours{15}), "b" + std::to_string(u), "p");
  }
  return log.take();
}

struct LabelCount {
  std::string label;
  std::size_t count;
};

/// Feedback with a planted star split and planted comment labels.
inline std::vector<RawEvent> feedback_log() {
  LogBuilder log;
  std::size_t n = 0;
  auto add = [&](int stars, std::optional<std::string> label) {
    log.feedback("f" + std::to_string(n % 997), at(base_date() + days{static_cast<int>(n % 30)}, seconds{n % 86000}),
                 stars, std::move(label));
    ++n;
  };
  // 40,000 ratings: 57% 4-5 stars, 15.8% 3 stars, 27.2% 1-2 stars.
  const std::vector<LabelCount> negative{{"not_working", 6649}, {"poor_suggestions", 1571},
                                         {"overall_experience", 579}, {"not_informative", 1204}};
  const std::vector<LabelCount> positive{{"productivity", 4270}, {"accuracy", 3370},
                                         {"ease_of_use", 1970}, {"other", 390}};
  std::size_t neg = 0, pos = 0;
  for (const auto& [label, count] : negative) {
    for (std::size_t i = 0; i < count; ++i, ++neg) add(neg % 2 ? 1 : 2, label);
  }
  for (; neg < 10880; ++neg) add(1, std::nullopt);
  for (std::size_t i = 0; i < 6320; ++i) add(3, i % 2 ? std::optional<std::string>("neutral") : std::nullopt);
  for (const auto& [label, count] : positive) {
    for (std::size_t i = 0; i < count; ++i, ++pos) add(pos % 3 ? 5 : 4, label);
  }
  for (; pos < 22800; ++pos) add(5, std::nullopt);
  return log.take();
}

/// A mixed log of roughly `target_events` events with every event kind,
/// duplicate bursts and a few malformed lines.
inline std::string scale_log_jsonl(std::size_t target_events) {
  LogBuilder log;
  const Plant cycle[] = {Plant::Full,   Plant::Rejected,   Plant::MinorValue, Plant::Full,    Plant::Ignored,
                         Plant::Major,  Plant::Deleted,    Plant::Full,       Plant::MinorModule, Plant::Unresolved};
  std::size_t k = 0;
  const std::size_t users = 1500;
  while (log.events().size() < target_events) {
    const std::size_t u = k % users;
    const Date d = base_date() + days{static_cast<int>((k / users) % 45)};
    const auto t0 = at(d, hours{7} + minutes{static_cast<int>((k * 7) % 600)}, minutes{static_cast<int>(u % 5) * 60 - 120});
    plant_suggestion(log, "user" + std::to_string(u), t0, k, cycle[k % 10]);
    if (k % 50 == 0) log.feedback("user" + std::to_string(u), t0, 1 + static_cast<int>(k % 5), "label" + std::to_string(k % 3));
    ++k;
  }
  std::string out = log.jsonl();
  // Network retries: re-send every 97th line with a fresh event id.
  std::istringstream lines(out);
  std::string line, dup;
  std::size_t i = 0;
  while (std::getline(lines, line)) {
    if (++i % 97 == 0) {
      const auto pos = line.find("\"event_id\":\"");
      dup += line.substr(0, pos + 12) + "dup" + line.substr(pos + 12) + "\n";
    }
  }
  out += dup;
  out += "{broken json\n";
  out += R"({"event_id":"x","user_id":"u","ts":"yesterday","type":"completion"})" "\n";
  return out;
}

}  // namespace fixtures

#endif  // ACCEPTLENS_TESTS_FIXTURES_HPP
