#include "botcorr/trace_io.hpp"

#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "botcorr/errors.hpp"
#include "json.hpp"

namespace botcorr {
namespace {

using ordered_json = nlohmann::ordered_json;

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

const nlohmann::json& require(const nlohmann::json& record, const char* key, std::size_t line) {
  auto it = record.find(key);
  if (it == record.end()) throw ParseError(line, std::string("missing field '") + key + "'");
  return *it;
}

std::uint64_t require_unsigned(const nlohmann::json& value, const char* key, std::size_t line) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer()) {
    throw ParseError(line, std::string("field '") + key + "' must not be negative");
  }
  throw ParseError(line, std::string("field '") + key + "' must be a non-negative integer");
}

nlohmann::json parse_object(const std::string& line, std::size_t line_no) {
  nlohmann::json record;
  try {
    record = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
  }
  if (!record.is_object()) throw ParseError(line_no, "record must be a JSON object");
  return record;
}

std::pair<std::uint64_t, TraceMetadata> parse_header(const std::string& line, std::size_t line_no) {
  auto record = parse_object(line, line_no);
  auto duration = require_unsigned(require(record, "duration_ms", line_no), "duration_ms", line_no);
  if (duration == 0) throw ParseError(line_no, "duration_ms must be positive");

  TraceMetadata metadata;
  if (auto it = record.find("scenario"); it != record.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError(line_no, "field 'scenario' must be a string or null");
    metadata.scenario = it->get<std::string>();
  }
  if (auto it = record.find("seed"); it != record.end() && !it->is_null()) {
    metadata.seed = require_unsigned(*it, "seed", line_no);
  }
  return {duration, std::move(metadata)};
}

ApiEvent parse_event(const std::string& line, std::size_t line_no, std::uint64_t duration) {
  auto record = parse_object(line, line_no);
  ApiEvent event;
  event.timestamp_ms = require_unsigned(require(record, "t", line_no), "t", line_no);

  auto pid = require_unsigned(require(record, "pid", line_no), "pid", line_no);
  if (pid == 0 || pid > std::numeric_limits<std::uint32_t>::max()) {
    throw ParseError(line_no, "field 'pid' must be a positive 32-bit integer");
  }
  event.process_id = static_cast<std::uint32_t>(pid);

  const auto& proc = require(record, "proc", line_no);
  if (!proc.is_string()) throw ParseError(line_no, "field 'proc' must be a string");
  event.process_name = proc.get<std::string>();

  const auto& call = require(record, "call", line_no);
  if (!call.is_string() || call.get_ref<const std::string&>().empty()) {
    throw ParseError(line_no, "field 'call' must be a non-empty string");
  }
  event.call = CallName::from_string(call.get_ref<const std::string&>());

  if (auto it = record.find("bytes"); it != record.end()) {
    event.bytes = require_unsigned(*it, "bytes", line_no);
    if (!carries_bytes(event.call)) {
      throw ParseError(line_no, "field 'bytes' is only valid on send/sendto/recv/recvfrom");
    }
  }

  if (event.timestamp_ms >= duration) {
    throw RangeError("line " + std::to_string(line_no) + ": timestamp " +
                     std::to_string(event.timestamp_ms) + " ms is not below duration_ms " +
                     std::to_string(duration));
  }
  return event;
}

}  // namespace

Trace read_trace(std::istream& source) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::pair<std::uint64_t, TraceMetadata>> header;
  std::vector<ApiEvent> events;

  while (std::getline(source, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    if (!header) {
      header = parse_header(line, line_no);
      continue;
    }
    events.push_back(parse_event(line, line_no, header->first));
  }
  if (source.bad()) throw IoError("failed reading trace stream");
  if (!header) throw ParseError(line_no + 1, "missing trace header");
  return Trace(header->first, std::move(events), std::move(header->second));
}

void write_trace(const Trace& trace, std::ostream& sink) {
  ordered_json header;
  header["duration_ms"] = trace.duration_ms();
  header["scenario"] = trace.metadata().scenario ? ordered_json(*trace.metadata().scenario)
                                                 : ordered_json(nullptr);
  header["seed"] =
      trace.metadata().seed ? ordered_json(*trace.metadata().seed) : ordered_json(nullptr);
  sink << header.dump() << '\n';

  for (const auto& event : trace.events()) {
    ordered_json record;
    record["t"] = event.timestamp_ms;
    record["pid"] = event.process_id;
    record["proc"] = event.process_name;
    record["call"] = std::string(event.call.name());
    if (event.bytes) record["bytes"] = *event.bytes;
    sink << record.dump() << '\n';
  }
  sink.flush();
  if (!sink) throw IoError("failed writing trace stream");
}

}  // namespace botcorr
