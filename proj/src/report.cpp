#include "botcorr/report.hpp"

#include <initializer_list>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "botcorr/errors.hpp"

namespace botcorr {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& value) {
  return value ? ordered_json(*value) : ordered_json(nullptr);
}

std::string require_string(const nlohmann::json& record, const char* key) {
  auto it = record.find(key);
  if (it == record.end() || !it->is_string()) {
    throw DataError(std::string("config field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

template <class Enum>
Enum parse_enum(const std::string& text, std::initializer_list<Enum> values, const char* what) {
  for (auto value : values) {
    if (to_string(value) == text) return value;
  }
  throw DataError(std::string("unknown ") + what + " '" + text + "'");
}

std::string format_rho(const std::optional<double>& rho) {
  if (!rho) return "undef";
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << *rho;
  return out.str();
}

std::optional<double> read_rho(const nlohmann::json& record, const char* key, std::size_t line,
                               bool nullable) {
  auto it = record.find(key);
  if (it == record.end()) throw ParseError(line, std::string("missing field '") + key + "'");
  if (it->is_null() && nullable) return std::nullopt;
  if (!it->is_number()) throw ParseError(line, std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

}  // namespace

ordered_json config_to_json(const DetectorConfig& config) {
  ordered_json markers = ordered_json::array();
  for (const auto& marker : config.keylog_markers) markers.push_back(std::string(marker.name()));

  ordered_json out;
  out["window_ms"] = config.window_ms;
  out["threshold"] = config.threshold;
  out["idle_policy"] = std::string(to_string(config.idle));
  out["method"] = std::string(to_string(config.method));
  out["set"] = std::string(to_string(config.correlation_set));
  out["key_signal"] = to_string(config.keyboard);
  out["comm_signal"] = to_string(config.comm);
  out["file_signal"] = to_string(config.file);
  out["markers"] = std::move(markers);
  return out;
}

DetectorConfig config_from_json(const nlohmann::json& record) {
  if (!record.is_object()) throw DataError("config must be a JSON object");
  DetectorConfig config;
  try {
    auto window = record.find("window_ms");
    if (window == record.end() || !window->is_number_unsigned()) {
      throw DataError("config field 'window_ms' must be a positive integer");
    }
    config.window_ms = window->get<std::uint64_t>();
    auto threshold = record.find("threshold");
    if (threshold == record.end() || !threshold->is_number()) {
      throw DataError("config field 'threshold' must be a number");
    }
    config.threshold = threshold->get<double>();
    config.idle = parse_enum<IdlePolicy>(require_string(record, "idle_policy"),
                                         {IdlePolicy::BothZero, IdlePolicy::EitherZero},
                                         "idle policy");
    config.method = parse_enum<SpearmanMethod>(
        require_string(record, "method"),
        {SpearmanMethod::RankPearson, SpearmanMethod::ClassicD2}, "method");
    config.correlation_set = parse_enum<CorrelationSet>(
        require_string(record, "set"), {CorrelationSet::S1, CorrelationSet::S2},
        "correlation set");
    config.keyboard = parse_signal_source(require_string(record, "key_signal"));
    config.comm = parse_signal_source(require_string(record, "comm_signal"));
    config.file = parse_signal_source(require_string(record, "file_signal"));

    auto markers = record.find("markers");
    if (markers == record.end() || !markers->is_array()) {
      throw DataError("config field 'markers' must be an array");
    }
    config.keylog_markers.clear();
    for (const auto& marker : *markers) {
      if (!marker.is_string()) throw DataError("config markers must be strings");
      config.keylog_markers.push_back(CallName::from_string(marker.get<std::string>()));
    }
    config.validate();
  } catch (const ContractError& e) {
    throw DataError(std::string("invalid config: ") + e.what());
  }
  return config;
}

SeriesDump dump_series(const Trace& trace, std::uint32_t process_id,
                       const DetectorConfig& config) {
  const auto grid = WindowGrid::for_duration(trace.duration_ms(), config.window_ms);
  return SeriesDump{build_signal(trace, process_id, config.keyboard, grid).values,
                    build_signal(trace, process_id, config.comm, grid).values,
                    build_signal(trace, process_id, config.file, grid).values};
}

ordered_json verdict_to_json(const DetectionVerdict& verdict, const TraceMetadata& metadata,
                             const std::optional<SeriesDump>& series) {
  ordered_json n_without;
  n_without["comm"] = verdict.result_comm.n_without;
  n_without["file"] = verdict.result_file.n_without;

  ordered_json out;
  out["pid"] = verdict.process_id;
  out["proc"] = verdict.process_name;
  out["rho_comm_s1"] = verdict.result_comm.rho_with_zeros;
  out["rho_comm_s2"] = optional_number(verdict.result_comm.rho_without_zeros);
  out["rho_file_s1"] = verdict.result_file.rho_with_zeros;
  out["rho_file_s2"] = optional_number(verdict.result_file.rho_without_zeros);
  out["n_with"] = verdict.result_comm.n_with;
  out["n_without"] = std::move(n_without);
  out["keylog"] = verdict.keylogging_present;
  out["confidence"] = std::string(to_string(verdict.confidence));
  out["config"] = config_to_json(verdict.config);
  out["undefined_correlation"] = verdict.undefined_correlation;
  out["scenario"] = metadata.scenario ? ordered_json(*metadata.scenario) : ordered_json(nullptr);
  out["seed"] = metadata.seed ? ordered_json(*metadata.seed) : ordered_json(nullptr);
  if (series) {
    ordered_json dump;
    dump["keyboard"] = series->keyboard;
    dump["comm"] = series->comm;
    dump["file"] = series->file;
    out["series"] = std::move(dump);
  }
  return out;
}

std::vector<ReportRow> read_report(std::istream& source) {
  std::vector<ReportRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) throw ParseError(line_no, "report record must be a JSON object");

    ReportRow row;
    row.line = line;
    if (!line.empty() && line.back() == '\r') row.line.pop_back();
    auto pid = record.find("pid");
    if (pid == record.end() || !pid->is_number_unsigned()) {
      throw ParseError(line_no, "field 'pid' must be a positive integer");
    }
    row.pid = pid->get<std::uint32_t>();
    auto proc = record.find("proc");
    if (proc == record.end() || !proc->is_string()) {
      throw ParseError(line_no, "field 'proc' must be a string");
    }
    row.proc = proc->get<std::string>();
    row.rho_comm_s1 = *read_rho(record, "rho_comm_s1", line_no, false);
    row.rho_comm_s2 = read_rho(record, "rho_comm_s2", line_no, true);
    row.rho_file_s1 = *read_rho(record, "rho_file_s1", line_no, false);
    row.rho_file_s2 = read_rho(record, "rho_file_s2", line_no, true);
    auto keylog = record.find("keylog");
    if (keylog == record.end() || !keylog->is_boolean()) {
      throw ParseError(line_no, "field 'keylog' must be a boolean");
    }
    row.keylog = keylog->get<bool>();
    auto confidence = record.find("confidence");
    if (confidence == record.end() || !confidence->is_string()) {
      throw ParseError(line_no, "field 'confidence' must be a string");
    }
    row.confidence = confidence->get<std::string>();
    auto config = record.find("config");
    if (config == record.end() || !config->is_object()) {
      throw ParseError(line_no, "field 'config' must be an object");
    }
    row.config = *config;
    if (auto it = record.find("scenario"); it != record.end() && it->is_string()) {
      row.scenario = it->get<std::string>();
    }
    if (auto it = record.find("seed"); it != record.end() && it->is_number_unsigned()) {
      row.seed = it->get<std::uint64_t>();
    }
    rows.push_back(std::move(row));
  }
  if (source.bad()) throw IoError("failed reading report stream");
  return rows;
}

void print_table(std::ostream& out, const std::vector<ReportRow>& rows,
                 const std::string& comm_label, const std::string& file_label,
                 const std::vector<std::size_t>& config_ids) {
  const bool with_config = !config_ids.empty();
  auto experiment = [](const ReportRow& row) {
    std::string name = row.scenario.value_or("-");
    if (row.seed) name += "/" + std::to_string(*row.seed);
    return name;
  };

  std::size_t name_width = 10;
  std::size_t proc_width = 7;
  for (const auto& row : rows) {
    name_width = std::max(name_width, experiment(row).size());
    proc_width = std::max(proc_width, row.proc.size());
  }
  const std::string comm_head = "SRC(" + comm_label + ")";
  const std::string file_head = "SRC(" + file_label + ")";
  const std::size_t comm_width = std::max<std::size_t>(comm_head.size(), 15);
  const std::size_t file_width = std::max<std::size_t>(file_head.size(), 15);

  auto cell = [&out](const std::string& text, std::size_t width) {
    out << std::left << std::setw(static_cast<int>(width)) << text << "  ";
  };
  auto pair_cells = [](const std::string& s1, const std::string& s2, std::size_t width) {
    std::ostringstream text;
    text << std::left << std::setw(8) << s1 << s2;
    std::string s = text.str();
    if (s.size() < width) s.resize(width, ' ');
    return s;
  };

  cell("Experiment", name_width);
  cell("PID", 6);
  cell("Process", proc_width);
  cell(comm_head, comm_width);
  cell(file_head, file_width);
  cell("Keylog", 6);
  if (with_config) cell("Config", 6);
  out << "Confidence\n";

  cell("", name_width);
  cell("", 6);
  cell("", proc_width);
  cell(pair_cells("S1", "S2", comm_width), comm_width);
  cell(pair_cells("S1", "S2", file_width), file_width);
  cell("", 6);
  if (with_config) cell("", 6);
  out << "\n";

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    cell(experiment(row), name_width);
    cell(std::to_string(row.pid), 6);
    cell(row.proc, proc_width);
    cell(pair_cells(format_rho(row.rho_comm_s1), format_rho(row.rho_comm_s2), comm_width),
         comm_width);
    cell(pair_cells(format_rho(row.rho_file_s1), format_rho(row.rho_file_s2), file_width),
         file_width);
    cell(row.keylog ? "Yes" : "No", 6);
    if (with_config) cell("#" + std::to_string(config_ids[i]), 6);
    out << row.confidence << "\n";
  }
}

}  // namespace botcorr
