#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "botcorr/correlation.hpp"
#include "botcorr/trace.hpp"
#include "botcorr/windowing.hpp"

namespace botcorr {

enum class Confidence { NoDetection, Weak, Normal, Strong };

/// Which correlation feeds the threshold test: S1 keeps idle windows, S2 drops them.
enum class CorrelationSet { S1, S2 };

std::string_view to_string(Confidence confidence) noexcept;
std::string_view to_string(CorrelationSet set) noexcept;

/// Knobs of the detector. Both correlated pairs share the keyboard-side signal.
struct DetectorConfig {
  double threshold = 0.5;
  CorrelationSet correlation_set = CorrelationSet::S2;
  SignalSource keyboard = CallSelector{CallName(KnownCall::GetAsyncKeyState)};
  SignalSource comm = BytesSent{};
  SignalSource file = CallSelector{CallName(KnownCall::WriteFile)};
  std::vector<CallName> keylog_markers = keylogging_markers();
  SpearmanMethod method = SpearmanMethod::RankPearson;
  IdlePolicy idle = IdlePolicy::BothZero;
  std::uint64_t window_ms = kDefaultWindowMs;

  /// Throws ContractError unless 0 < threshold < 1, window_ms > 0 and markers are non-empty.
  void validate() const;

  bool operator==(const DetectorConfig&) const = default;
};

struct DetectionVerdict {
  std::uint32_t process_id = 0;
  std::string process_name;
  bool keylogging_present = false;
  CorrelationResult result_comm;
  CorrelationResult result_file;
  Confidence confidence = Confidence::NoDetection;
  /// A selected rho was undefined and was treated as not exceeding the threshold.
  bool undefined_correlation = false;
  DetectorConfig config;
};

/// True iff the process made at least one call listed in `markers`.
bool keylogging_present(const Trace& trace, std::uint32_t process_id,
                        std::span<const CallName> markers);

/// Four-level decision: no marker call gives NoDetection; otherwise the number of rho values
/// strictly above `threshold` (an undefined rho never is) maps 0/1/2 to Weak/Normal/Strong.
Confidence classify(std::optional<double> rho_comm, std::optional<double> rho_file, bool keylog,
                    double threshold);

/// One verdict per process in the trace, ordered by process id.
std::vector<DetectionVerdict> detect(const Trace& trace, const DetectorConfig& config = {});

}  // namespace botcorr
