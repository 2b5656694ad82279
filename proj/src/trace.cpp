#include "botcorr/trace.hpp"

#include <algorithm>

#include "botcorr/errors.hpp"

namespace botcorr {

std::string_view spelling(KnownCall call) noexcept {
  switch (call) {
    case KnownCall::Socket: return "socket";
    case KnownCall::Send: return "send";
    case KnownCall::Recv: return "recv";
    case KnownCall::SendTo: return "sendto";
    case KnownCall::RecvFrom: return "recvfrom";
    case KnownCall::IcmpSendEcho: return "IcmpSendEcho";
    case KnownCall::CreateFile: return "CreateFile";
    case KnownCall::OpenFile: return "OpenFile";
    case KnownCall::ReadFile: return "ReadFile";
    case KnownCall::WriteFile: return "WriteFile";
    case KnownCall::GetKeyboardState: return "GetKeyboardState";
    case KnownCall::GetAsyncKeyState: return "GetAsyncKeyState";
    case KnownCall::GetKeyNameText: return "GetKeyNameText";
    case KnownCall::KeybdEvent: return "keybd_event";
  }
  return {};
}

std::string_view to_string(CallCategory category) noexcept {
  switch (category) {
    case CallCategory::CommFunc: return "CommFunc";
    case CallCategory::FileAccess: return "FileAccess";
    case CallCategory::KeyboardState: return "KeyboardState";
    case CallCategory::Other: return "Other";
  }
  return {};
}

std::optional<CallCategory> parse_category(std::string_view text) noexcept {
  for (auto c : {CallCategory::CommFunc, CallCategory::FileAccess, CallCategory::KeyboardState,
                 CallCategory::Other}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

CallName CallName::from_string(std::string_view name) {
  for (auto call : kAllKnownCalls) {
    if (spelling(call) == name) return CallName(call);
  }
  return CallName(std::string(name));
}

std::optional<KnownCall> CallName::known() const noexcept {
  if (const auto* call = std::get_if<KnownCall>(&value_)) return *call;
  return std::nullopt;
}

std::string_view CallName::name() const noexcept {
  if (const auto* call = std::get_if<KnownCall>(&value_)) return spelling(*call);
  return std::get<std::string>(value_);
}

CallCategory category_of(const CallName& call) noexcept {
  auto known = call.known();
  return known ? category_of(*known) : CallCategory::Other;
}

bool carries_bytes(const CallName& call) noexcept {
  auto known = call.known();
  return known && carries_bytes(*known);
}

const std::vector<CallName>& keylogging_markers() {
  static const std::vector<CallName> markers = {KnownCall::GetKeyboardState,
                                                KnownCall::GetAsyncKeyState,
                                                KnownCall::GetKeyNameText, KnownCall::KeybdEvent};
  return markers;
}

void validate_event(const ApiEvent& event, std::uint64_t duration_ms) {
  if (event.timestamp_ms >= duration_ms) {
    throw RangeError("event timestamp " + std::to_string(event.timestamp_ms) +
                     " ms is outside the trace duration of " + std::to_string(duration_ms) +
                     " ms");
  }
  if (event.process_id == 0) throw DataError("process id must be positive");
  if (event.call.name().empty()) throw DataError("call name must not be empty");
  if (event.bytes && !carries_bytes(event.call)) {
    throw DataError("byte count on non-traffic call '" + std::string(event.call.name()) + "'");
  }
}

Trace::Trace(std::uint64_t duration_ms, std::vector<ApiEvent> events, TraceMetadata metadata)
    : duration_ms_(duration_ms), events_(std::move(events)), metadata_(std::move(metadata)) {
  if (duration_ms_ == 0) throw DataError("trace duration must be positive");
  for (const auto& event : events_) validate_event(event, duration_ms_);
  std::stable_sort(events_.begin(), events_.end(), [](const ApiEvent& lhs, const ApiEvent& rhs) {
    return lhs.timestamp_ms < rhs.timestamp_ms;
  });
}

std::vector<std::uint32_t> Trace::process_ids() const {
  std::vector<std::uint32_t> ids;
  ids.reserve(8);
  for (const auto& event : events_) ids.push_back(event.process_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::string Trace::process_name(std::uint32_t process_id) const {
  auto it = std::find_if(events_.begin(), events_.end(),
                         [&](const ApiEvent& e) { return e.process_id == process_id; });
  return it == events_.end() ? std::string{} : it->process_name;
}

}  // namespace botcorr
