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

// acceptlens: batch analytics over code-completion telemetry logs.
//
//   acceptlens ingest  --events log.jsonl...            validate + dedup stats
//   acceptlens analyze --events log.jsonl... [-o FILE]  full report as JSON
//   acceptlens report  --events log.jsonl... --format {json,csv,table}
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "acceptlens/config.hpp"
#include "acceptlens/event_model.hpp"
#include "acceptlens/pipeline.hpp"
#include "acceptlens/report.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace acceptlens;

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct CommonArgs {
  std::vector<std::string> events;
  std::string config;
  std::string window_start;
  std::string window_end;
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--events", args.events, "JSONL event logs")->required()->expected(1, -1);
  cmd->add_option("--config", args.config, "configuration file (YAML)");
  cmd->add_option("--window-start", args.window_start, "first local date to analyze (YYYY-MM-DD)");
  cmd->add_option("--window-end", args.window_end, "last local date to analyze (YYYY-MM-DD)");
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::optional<Date> date_arg(const std::string& text, const char* flag) {
  if (text.empty()) return std::nullopt;
  // Accept a full RFC 3339 timestamp too; only its date part matters.
  const auto d = parse_date(std::string_view(text).substr(0, 10));
  if (!d) throw UsageError(std::string("invalid date for ") + flag + ": " + text);
  return d;
}

Config config_arg(const CommonArgs& args) {
  if (args.config.empty()) return Config{};
  if (!fs::exists(args.config)) throw UsageError("config file not found: " + args.config);
  return load_config(fs::path(args.config));
}

PipelineOptions options_arg(const CommonArgs& args) {
  PipelineOptions o;
  o.window_start = date_arg(args.window_start, "--window-start");
  o.window_end = date_arg(args.window_end, "--window-end");
  o.jobs = args.jobs;
  return o;
}

std::vector<fs::path> paths(const CommonArgs& args) { return {args.events.begin(), args.events.end()}; }

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << content;
}

int run_ingest(const CommonArgs& args) {
  const auto config = config_arg(args);
  const auto window = options_arg(args);
  IngestStats stats;
  std::vector<RawEvent> raw;
  for (const auto& p : paths(args)) {
    std::ifstream in(p);
    if (!in) {
      std::cerr << "error: cannot read " << p.string() << '\n';
      return kDataError;
    }
    auto part = read_event_log(in, stats);
    raw.insert(raw.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  for (const auto& e : stats.samples) std::cerr << "skipped: " << e.what() << '\n';

  std::size_t outside = 0;
  if (window.window_start || window.window_end) {
    const auto before = raw.size();
    std::erase_if(raw, [&](const RawEvent& e) {
      const auto d = local_date(e);
      return (window.window_start && d < *window.window_start) || (window.window_end && d > *window.window_end);
    });
    outside = before - raw.size();
  }
  const auto parsed = raw.size();
  const auto kept = deduplicate(std::move(raw), config.dedup_window);
  std::map<EventKind, std::size_t> by_kind;
  std::set<std::string> users;
  for (const auto& e : kept) {
    ++by_kind[e.kind()];
    users.insert(e.user_id);
  }

  nlohmann::ordered_json j;
  j["lines_read"] = stats.lines_read;
  j["blank_lines"] = stats.blank_lines;
  j["parsed"] = stats.parsed;
  j["malformed_lines"] = stats.malformed_total();
  auto& mk = j["malformed_by_kind"];
  mk = nlohmann::ordered_json::object();
  for (const auto& [k, n] : stats.malformed) mk[std::string(to_string(k))] = n;
  j["outside_window"] = outside;
  j["duplicates_removed"] = parsed - kept.size();
  j["events_kept"] = kept.size();
  j["users"] = users.size();
  auto& bk = j["events_by_kind"];
  bk = nlohmann::ordered_json::object();
  for (const auto& [k, n] : by_kind) bk[std::string(to_string(k))] = n;
  std::cout << j.dump(2) << '\n';
  return stats.parsed == 0 ? kDataError : 0;
}

int run_analyze(const CommonArgs& args, const std::string& output) {
  const auto report = run_pipeline(paths(args), config_arg(args), options_arg(args));
  write_text(output, report_json(report));
  return 0;
}

int run_report(const CommonArgs& args, const std::string& format, const std::string& output_dir) {
  const auto config = config_arg(args);
  const auto options = options_arg(args);
  if (format != "json" && format != "csv" && format != "table") {
    throw UsageError("unknown report format '" + format + "'");
  }
  const auto report = run_pipeline(paths(args), config, options);
  const auto files = render_report(report, format);
  if (output_dir.empty()) {
    for (const auto& f : files) {
      if (files.size() > 1) std::cout << "# " << f.name << '\n';
      std::cout << f.content;
    }
    return 0;
  }
  fs::create_directories(output_dir);
  for (const auto& f : files) write_text((fs::path(output_dir) / f.name).string(), f.content);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptlens: acceptance, edit, retention and feedback analytics for completion telemetry"};
  app.require_subcommand(1);

  CommonArgs ingest_args, analyze_args, report_args;
  std::string analyze_output, report_format = "table", report_dir;

  auto* ingest = app.add_subcommand("ingest", "validate logs and report parse and deduplication statistics");
  add_common(ingest, ingest_args);

  auto* analyze = app.add_subcommand("analyze", "run the full analysis and write the JSON report");
  add_common(analyze, analyze_args);
  analyze->add_option("-o,--output", analyze_output, "output file (default: stdout)");
  analyze->add_option("-j,--jobs", analyze_args.jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "run the analysis and render it");
  add_common(report, report_args);
  report->add_option("--format", report_format, "json, csv or table");
  report->add_option("--output-dir", report_dir, "write report files into this directory");
  report->add_option("-j,--jobs", report_args.jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*ingest) return run_ingest(ingest_args);
    if (*analyze) return run_analyze(analyze_args, analyze_output);
    if (*report) return run_report(report_args, report_format, report_dir);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ReportError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const PipelineError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const MetricsError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}
