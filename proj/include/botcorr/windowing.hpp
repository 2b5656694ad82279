#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "botcorr/trace.hpp"

namespace botcorr {

inline constexpr std::uint64_t kDefaultWindowMs = 10'000;

/// Fixed, non-overlapping windows of `window_ms` starting at t = 0. The last window may be
/// partial when the duration is not a multiple of the width.
struct WindowGrid {
  std::uint64_t window_ms = kDefaultWindowMs;
  std::size_t window_count = 1;

  /// ceil(duration_ms / window_ms) windows. Throws ContractError on zero arguments.
  static WindowGrid for_duration(std::uint64_t duration_ms,
                                 std::uint64_t window_ms = kDefaultWindowMs);

  std::size_t index_of(std::uint64_t timestamp_ms) const noexcept {
    return static_cast<std::size_t>(timestamp_ms / window_ms);
  }

  bool operator==(const WindowGrid&) const = default;
};

/// Per-window values of one signal. Raw series hold integer counts or byte sums.
struct SignalSeries {
  std::string label;
  WindowGrid grid;
  std::vector<double> values;

  bool operator==(const SignalSeries&) const = default;
};

/// Two series over the same grid. Throws ContractError when grids or lengths differ.
class SignalPair {
 public:
  SignalPair(SignalSeries a, SignalSeries b);

  const SignalSeries& a() const noexcept { return a_; }
  const SignalSeries& b() const noexcept { return b_; }

 private:
  SignalSeries a_;
  SignalSeries b_;
};

/// The four keystroke-interception functions as one selector.
struct KeylogSet {
  bool operator==(const KeylogSet&) const = default;
};

/// Which events a count signal counts.
using CallSelector = std::variant<CallName, CallCategory, KeylogSet>;

bool matches(const CallSelector& selector, const CallName& call) noexcept;

/// Sum of payload bytes over send and sendto.
struct BytesSent {
  bool operator==(const BytesSent&) const = default;
};

using SignalSource = std::variant<CallSelector, BytesSent>;

/// Textual selector forms: a call name ("WriteFile"), "category:<Category>", "keylog",
/// and for sources additionally "bytes-sent".
std::string to_string(const CallSelector& selector);
std::string to_string(const SignalSource& source);
CallSelector parse_selector(std::string_view text);
SignalSource parse_signal_source(std::string_view text);

SignalSeries count_signal(const Trace& trace, std::uint32_t process_id,
                          const CallSelector& selector, const WindowGrid& grid);

/// Throws DataError for a send/sendto event without a byte count.
SignalSeries bytes_sent_signal(const Trace& trace, std::uint32_t process_id,
                               const WindowGrid& grid);

SignalSeries build_signal(const Trace& trace, std::uint32_t process_id,
                          const SignalSource& source, const WindowGrid& grid);

/// Divides by the series maximum; an all-zero series is returned unchanged.
SignalSeries normalize(const SignalSeries& series);

enum class IdlePolicy { BothZero, EitherZero };

std::string_view to_string(IdlePolicy policy) noexcept;

/// Drops idle windows from both series at once, keeping the survivors in order.
///
/// BothZero drops windows where both values are zero; EitherZero drops windows where either
/// is. The result grids keep the window width with window_count set to the survivor count,
/// which may be zero.
SignalPair remove_idle(const SignalPair& pair, IdlePolicy policy = IdlePolicy::BothZero);

}  // namespace botcorr
