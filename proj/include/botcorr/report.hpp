#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "botcorr/detector.hpp"
#include "botcorr/trace.hpp"
#include "json.hpp"

namespace botcorr {

/// Analysis report: one JSON object per line and per process, carrying
/// `pid, proc, rho_comm_s1, rho_comm_s2, rho_file_s1, rho_file_s2, n_with, n_without,
/// keylog, confidence, config`, then `undefined_correlation`, the trace's `scenario` and
/// `seed`, and optionally the raw per-window `series`. Undefined rho values are null.

nlohmann::ordered_json config_to_json(const DetectorConfig& config);

/// Inverse of config_to_json. Throws DataError on missing or invalid fields.
DetectorConfig config_from_json(const nlohmann::json& record);

struct SeriesDump {
  std::vector<double> keyboard;
  std::vector<double> comm;
  std::vector<double> file;
};

nlohmann::ordered_json verdict_to_json(const DetectionVerdict& verdict,
                                       const TraceMetadata& metadata,
                                       const std::optional<SeriesDump>& series = std::nullopt);

/// Raw per-window series of the three configured signals for one process.
SeriesDump dump_series(const Trace& trace, std::uint32_t process_id,
                       const DetectorConfig& config);

/// Row of the comparison table, decoded from a report record.
struct ReportRow {
  std::optional<std::string> scenario;
  std::optional<std::uint64_t> seed;
  std::uint32_t pid = 0;
  std::string proc;
  double rho_comm_s1 = 0.0;
  std::optional<double> rho_comm_s2;
  double rho_file_s1 = 0.0;
  std::optional<double> rho_file_s2;
  bool keylog = false;
  std::string confidence;
  nlohmann::json config;
  /// Raw JSON line as read.
  std::string line;
};

/// Reads a report stream; blank lines are skipped. Throws ParseError naming the line.
std::vector<ReportRow> read_report(std::istream& source);

/// Comparison table: per row both rho values of both pairs
/// with and without idle windows, the keylogging flag and the confidence. `config_ids`,
/// when non-empty, adds a column naming which configuration each row was produced with.
void print_table(std::ostream& out, const std::vector<ReportRow>& rows,
                 const std::string& comm_label, const std::string& file_label,
                 const std::vector<std::size_t>& config_ids = {});

}  // namespace botcorr
