#include "botcorr/detector.hpp"

#include <algorithm>

#include "botcorr/errors.hpp"

namespace botcorr {
namespace {

bool exceeds(std::optional<double> rho, double threshold) {
  return rho.has_value() && *rho > threshold;
}

std::optional<double> selected(const CorrelationResult& result, CorrelationSet set) {
  if (set == CorrelationSet::S1) return result.rho_with_zeros;
  return result.rho_without_zeros;
}

}  // namespace

std::string_view to_string(Confidence confidence) noexcept {
  switch (confidence) {
    case Confidence::NoDetection: return "N/A";
    case Confidence::Weak: return "Weak";
    case Confidence::Normal: return "Normal";
    case Confidence::Strong: return "Strong";
  }
  return {};
}

std::string_view to_string(CorrelationSet set) noexcept {
  return set == CorrelationSet::S1 ? "s1" : "s2";
}

void DetectorConfig::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ContractError("threshold must lie in (0, 1), got " + std::to_string(threshold));
  }
  if (window_ms == 0) throw ContractError("window_ms must be positive");
  if (keylog_markers.empty()) throw ContractError("keylogging marker set is empty");
}

bool keylogging_present(const Trace& trace, std::uint32_t process_id,
                        std::span<const CallName> markers) {
  return std::any_of(trace.events().begin(), trace.events().end(), [&](const ApiEvent& e) {
    return e.process_id == process_id &&
           std::find(markers.begin(), markers.end(), e.call) != markers.end();
  });
}

Confidence classify(std::optional<double> rho_comm, std::optional<double> rho_file, bool keylog,
                    double threshold) {
  if (!keylog) return Confidence::NoDetection;
  const int high = int{exceeds(rho_comm, threshold)} + int{exceeds(rho_file, threshold)};
  switch (high) {
    case 2: return Confidence::Strong;
    case 1: return Confidence::Normal;
    default: return Confidence::Weak;
  }
}

std::vector<DetectionVerdict> detect(const Trace& trace, const DetectorConfig& config) {
  config.validate();
  const auto grid = WindowGrid::for_duration(trace.duration_ms(), config.window_ms);

  std::vector<DetectionVerdict> verdicts;
  for (auto pid : trace.process_ids()) {
    const auto keyboard = build_signal(trace, pid, config.keyboard, grid);
    const auto comm = build_signal(trace, pid, config.comm, grid);
    const auto file = build_signal(trace, pid, config.file, grid);

    DetectionVerdict verdict;
    verdict.process_id = pid;
    verdict.process_name = trace.process_name(pid);
    verdict.keylogging_present = keylogging_present(trace, pid, config.keylog_markers);
    verdict.result_comm = correlate_pair(SignalPair(keyboard, comm), config.method, config.idle);
    verdict.result_file = correlate_pair(SignalPair(keyboard, file), config.method, config.idle);

    const auto rho_comm = selected(verdict.result_comm, config.correlation_set);
    const auto rho_file = selected(verdict.result_file, config.correlation_set);
    verdict.confidence =
        classify(rho_comm, rho_file, verdict.keylogging_present, config.threshold);
    verdict.undefined_correlation =
        verdict.keylogging_present && (!rho_comm.has_value() || !rho_file.has_value());
    verdict.config = config;
    verdicts.push_back(std::move(verdict));
  }
  return verdicts;
}

}  // namespace botcorr
