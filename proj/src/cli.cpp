#include "botcorr/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "botcorr/errors.hpp"
#include "botcorr/report.hpp"
#include "botcorr/simulator.hpp"
#include "botcorr/trace_io.hpp"

namespace botcorr::cli {
namespace {

struct SimulateOptions {
  std::string scenario;
  std::uint64_t seed = 1;
  std::uint64_t duration_ms = 900'000;
  std::string out = "-";
  bool background = false;
};

struct AnalyzeOptions {
  std::string trace;
  std::uint64_t window_ms = kDefaultWindowMs;
  double threshold = 0.5;
  std::string idle_policy = "both-zero";
  std::string method = "rank-pearson";
  std::string set = "s2";
  std::string key_signal = "GetAsyncKeyState";
  std::string comm_signal = "bytes-sent";
  std::string file_signal = "WriteFile";
  std::vector<std::string> markers;
  std::string report;
  bool dump_series = false;
};

struct ReportOptions {
  std::vector<std::string> reports;
  std::string out;
};

/// Thrown for argument values CLI11 cannot validate on its own.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string scenario_list() {
  std::string names;
  for (auto scenario : kAllScenarios) {
    if (!names.empty()) names += ", ";
    names += to_string(scenario);
  }
  return names;
}

DetectorConfig to_config(const AnalyzeOptions& options) {
  DetectorConfig config;
  config.window_ms = options.window_ms;
  config.threshold = options.threshold;
  config.idle = options.idle_policy == "either-zero" ? IdlePolicy::EitherZero : IdlePolicy::BothZero;
  config.method =
      options.method == "classic-d2" ? SpearmanMethod::ClassicD2 : SpearmanMethod::RankPearson;
  config.correlation_set = options.set == "s1" ? CorrelationSet::S1 : CorrelationSet::S2;
  try {
    config.keyboard = parse_signal_source(options.key_signal);
    config.comm = parse_signal_source(options.comm_signal);
    config.file = parse_signal_source(options.file_signal);
    if (!options.markers.empty()) {
      config.keylog_markers.clear();
      for (const auto& marker : options.markers) {
        config.keylog_markers.push_back(CallName::from_string(marker));
      }
    }
    config.validate();
  } catch (const ContractError& e) {
    throw UsageError(e.what());
  }
  return config;
}

/// Opens `path` for writing, or hands back `fallback` for "-".
class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path == "-") {
      stream_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw IoError("cannot open '" + path + "' for writing");
    stream_ = &file_;
  }

  std::ostream& stream() { return *stream_; }

  void finish() {
    stream_->flush();
    if (!*stream_) throw IoError("failed writing '" + path_ + "'");
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
  auto scenario = parse_scenario(options.scenario);
  if (!scenario) {
    err << "error: unknown scenario '" << options.scenario << "'; expected one of "
        << scenario_list() << "\n";
    return kExitUsage;
  }
  auto spec = ScenarioSpec::defaults(*scenario, options.seed);
  spec.duration_ms = options.duration_ms;
  spec.background_process = options.background;
  try {
    spec.validate();
  } catch (const ContractError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto trace = generate(spec);
  OutputTarget target(options.out, out);
  write_trace(trace, target.stream());
  target.finish();

  std::ostream& summary = options.out == "-" ? err : out;
  std::ostringstream header;
  write_trace(Trace(trace.duration_ms(), {}, trace.metadata()), header);
  summary << "events: " << trace.events().size() << "\n";
  summary << "header: " << header.str();
  return kExitOk;
}

int cmd_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err) {
  const auto config = to_config(options);

  std::ifstream in(options.trace, std::ios::binary);
  if (!in) throw IoError("cannot open trace '" + options.trace + "'");
  Trace trace = [&] {
    try {
      return read_trace(in);
    } catch (const Error& e) {
      throw DataError(options.trace + ": " + e.what());
    }
  }();

  const auto verdicts = detect(trace, config);

  std::vector<ReportRow> rows;
  std::ostringstream records;
  for (const auto& verdict : verdicts) {
    std::optional<SeriesDump> series;
    if (options.dump_series) series = dump_series(trace, verdict.process_id, config);
    const auto line = verdict_to_json(verdict, trace.metadata(), series).dump();
    records << line << "\n";
    std::istringstream parsed(line);
    auto decoded = read_report(parsed);
    rows.insert(rows.end(), decoded.begin(), decoded.end());
  }

  std::ostream* table = &out;
  if (!options.report.empty()) {
    OutputTarget target(options.report, out);
    target.stream() << records.str();
    target.finish();
    if (options.report == "-") table = &err;
  }
  const std::string key = to_string(config.keyboard);
  print_table(*table, rows, key + ", " + to_string(config.comm),
              key + ", " + to_string(config.file));

  const bool detected = std::any_of(verdicts.begin(), verdicts.end(), [](const auto& v) {
    return v.confidence != Confidence::NoDetection;
  });
  return detected ? kExitDetection : kExitOk;
}

int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err) {
  if (options.reports.empty()) {
    err << "error: report needs at least one analysis report file\n";
    return kExitUsage;
  }

  std::vector<ReportRow> rows;
  for (const auto& path : options.reports) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open report '" + path + "'");
    try {
      auto file_rows = read_report(in);
      rows.insert(rows.end(), std::make_move_iterator(file_rows.begin()),
                  std::make_move_iterator(file_rows.end()));
    } catch (const Error& e) {
      throw DataError(path + ": " + e.what());
    }
  }

  std::vector<nlohmann::json> configs;
  std::vector<std::size_t> config_ids;
  for (const auto& row : rows) {
    auto it = std::find(configs.begin(), configs.end(), row.config);
    if (it == configs.end()) {
      configs.push_back(row.config);
      it = configs.end() - 1;
    }
    config_ids.push_back(static_cast<std::size_t>(it - configs.begin()) + 1);
  }
  if (configs.size() > 1) {
    err << "warning: reports were produced with " << configs.size()
        << " different configurations; see the Config column\n";
    for (std::size_t i = 0; i < configs.size(); ++i) {
      err << "  #" << i + 1 << " " << configs[i].dump() << "\n";
    }
  } else {
    config_ids.clear();
  }

  auto label = [&](const char* field) {
    if (configs.empty()) return std::string(field);
    auto it = configs.front().find(field);
    return it != configs.front().end() && it->is_string() ? it->get<std::string>()
                                                          : std::string("?");
  };
  const std::string key = label("key_signal");
  print_table(out, rows, key + ", " + label("comm_signal"), key + ", " + label("file_signal"),
              config_ids);

  if (!options.out.empty()) {
    OutputTarget target(options.out, out);
    for (const auto& row : rows) target.stream() << row.line << "\n";
    target.finish();
  }
  return kExitOk;
}

}  // namespace

std::vector<std::string> config_to_args(const DetectorConfig& config) {
  std::ostringstream threshold;
  threshold.precision(17);
  threshold << config.threshold;

  std::vector<std::string> args = {
      "--window",      std::to_string(config.window_ms),
      "--threshold",   threshold.str(),
      "--idle-policy", std::string(to_string(config.idle)),
      "--method",      std::string(to_string(config.method)),
      "--set",         std::string(to_string(config.correlation_set)),
      "--key-signal",  to_string(config.keyboard),
      "--comm-signal", to_string(config.comm),
      "--file-signal", to_string(config.file),
  };
  std::string markers;
  for (const auto& marker : config.keylog_markers) {
    if (!markers.empty()) markers += ",";
    markers += marker.name();
  }
  args.push_back("--markers");
  args.push_back(markers);
  return args;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Keylogging bot detection by correlating API-call activity"};
  app.name("botcorr");
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic experiment trace");
  simulate->add_option("--scenario", sim.scenario, "E1, E2, E3.1, E3.2, E4.1, E4.2 or E5")
      ->required();
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("--duration-ms", sim.duration_ms, "Trace length in milliseconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--out", sim.out, "Output trace file, '-' for stdout")
      ->capture_default_str();
  simulate->add_flag("--background", sim.background, "Overlay a benign background process");

  AnalyzeOptions ana;
  auto* analyze = app.add_subcommand("analyze", "Correlate a trace and classify each process");
  analyze->add_option("--trace", ana.trace, "Trace file")->required();
  analyze->add_option("--window", ana.window_ms, "Window width in milliseconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  analyze->add_option("--threshold", ana.threshold, "High-correlation threshold, in (0, 1)")
      ->capture_default_str();
  analyze->add_option("--idle-policy", ana.idle_policy, "Idle windows to drop for S2")
      ->capture_default_str()
      ->check(CLI::IsMember({"both-zero", "either-zero"}));
  analyze->add_option("--method", ana.method, "Spearman variant")
      ->capture_default_str()
      ->check(CLI::IsMember({"rank-pearson", "classic-d2"}));
  analyze->add_option("--set", ana.set, "Correlation set used for the verdict")
      ->capture_default_str()
      ->check(CLI::IsMember({"s1", "s2"}));
  analyze->add_option("--key-signal", ana.key_signal, "Keyboard-side signal")
      ->capture_default_str();
  analyze->add_option("--comm-signal", ana.comm_signal, "Signal of the first pair")
      ->capture_default_str();
  analyze->add_option("--file-signal", ana.file_signal, "Signal of the second pair")
      ->capture_default_str();
  analyze->add_option("--markers", ana.markers, "Keylogging marker calls (comma separated)")
      ->delimiter(',');
  analyze->add_option("--report", ana.report, "Write the line-delimited report here ('-': stdout)");
  analyze->add_flag("--dump-series", ana.dump_series, "Include per-window series in the report");

  ReportOptions rep;
  auto* report = app.add_subcommand("report", "Merge analysis reports into one table");
  report->add_option("--report,reports", rep.reports, "Analysis report files");
  report->add_option("--out", rep.out, "Write the merged line-delimited report here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim, out, err);
    if (*analyze) return cmd_analyze(ana, out, err);
    return cmd_report(rep, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
}

}  // namespace botcorr::cli
