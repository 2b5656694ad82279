#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace botcorr {

/// The three monitored API families, plus a bucket for everything else seen in a hook log.
enum class CallCategory { CommFunc, FileAccess, KeyboardState, Other };

/// Monitored API functions. Order groups them by category.
enum class KnownCall : std::uint8_t {
  // CommFunc
  Socket,
  Send,
  Recv,
  SendTo,
  RecvFrom,
  IcmpSendEcho,
  // FileAccess
  CreateFile,
  OpenFile,
  ReadFile,
  WriteFile,
  // KeyboardState
  GetKeyboardState,
  GetAsyncKeyState,
  GetKeyNameText,
  KeybdEvent,
};

inline constexpr std::size_t kKnownCallCount = 14;

inline constexpr std::array<KnownCall, kKnownCallCount> kAllKnownCalls = {
    KnownCall::Socket,           KnownCall::Send,           KnownCall::Recv,
    KnownCall::SendTo,           KnownCall::RecvFrom,       KnownCall::IcmpSendEcho,
    KnownCall::CreateFile,       KnownCall::OpenFile,       KnownCall::ReadFile,
    KnownCall::WriteFile,        KnownCall::GetKeyboardState, KnownCall::GetAsyncKeyState,
    KnownCall::GetKeyNameText,   KnownCall::KeybdEvent,
};

/// Exact API spelling as it appears in hook logs and trace files.
std::string_view spelling(KnownCall call) noexcept;

constexpr CallCategory category_of(KnownCall call) noexcept {
  switch (call) {
    case KnownCall::Socket:
    case KnownCall::Send:
    case KnownCall::Recv:
    case KnownCall::SendTo:
    case KnownCall::RecvFrom:
    case KnownCall::IcmpSendEcho:
      return CallCategory::CommFunc;
    case KnownCall::CreateFile:
    case KnownCall::OpenFile:
    case KnownCall::ReadFile:
    case KnownCall::WriteFile:
      return CallCategory::FileAccess;
    case KnownCall::GetKeyboardState:
    case KnownCall::GetAsyncKeyState:
    case KnownCall::GetKeyNameText:
    case KnownCall::KeybdEvent:
      return CallCategory::KeyboardState;
  }
  return CallCategory::Other;
}

/// Calls whose events may carry a payload byte count.
constexpr bool carries_bytes(KnownCall call) noexcept {
  return call == KnownCall::Send || call == KnownCall::SendTo || call == KnownCall::Recv ||
         call == KnownCall::RecvFrom;
}

std::string_view to_string(CallCategory category) noexcept;
std::optional<CallCategory> parse_category(std::string_view text) noexcept;

/// A function name from a hook log: one of the monitored calls, or any other name verbatim.
///
/// Construction from text is case-sensitive and canonical: a string equal to a monitored
/// spelling always yields the KnownCall alternative, so equality is by spelling.
class CallName {
 public:
  CallName(KnownCall call) noexcept : value_(call) {}  // NOLINT(google-explicit-constructor)

  static CallName from_string(std::string_view name);

  std::optional<KnownCall> known() const noexcept;
  std::string_view name() const noexcept;

  bool operator==(const CallName&) const = default;

 private:
  explicit CallName(std::string other) : value_(std::move(other)) {}

  std::variant<KnownCall, std::string> value_;
};

CallCategory category_of(const CallName& call) noexcept;
bool carries_bytes(const CallName& call) noexcept;

/// The four keystroke-interception functions.
const std::vector<CallName>& keylogging_markers();

struct ApiEvent {
  std::uint64_t timestamp_ms = 0;
  std::uint32_t process_id = 1;
  std::string process_name;
  CallName call = KnownCall::Socket;
  std::optional<std::uint64_t> bytes;

  bool operator==(const ApiEvent&) const = default;
};

struct TraceMetadata {
  std::optional<std::string> scenario;
  std::optional<std::uint64_t> seed;

  bool operator==(const TraceMetadata&) const = default;
};

/// Immutable, validated event log of a monitored run.
///
/// Events are stably sorted by timestamp on construction. Throws RangeError for a timestamp
/// at or past the duration and DataError for any other invariant violation.
class Trace {
 public:
  Trace(std::uint64_t duration_ms, std::vector<ApiEvent> events, TraceMetadata metadata = {});

  std::uint64_t duration_ms() const noexcept { return duration_ms_; }
  const std::vector<ApiEvent>& events() const noexcept { return events_; }
  const TraceMetadata& metadata() const noexcept { return metadata_; }

  /// Distinct process ids in ascending order.
  std::vector<std::uint32_t> process_ids() const;

  /// Name recorded on the first event of the process, empty when the process is absent.
  std::string process_name(std::uint32_t process_id) const;

  bool operator==(const Trace&) const = default;

 private:
  std::uint64_t duration_ms_;
  std::vector<ApiEvent> events_;
  TraceMetadata metadata_;
};

/// Throws RangeError for a timestamp outside [0, duration_ms), DataError for other violations.
void validate_event(const ApiEvent& event, std::uint64_t duration_ms);

}  // namespace botcorr
