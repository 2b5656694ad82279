#include "botcorr/windowing.hpp"

#include <algorithm>

#include "botcorr/errors.hpp"

namespace botcorr {
namespace {

constexpr std::string_view kCategoryPrefix = "category:";
constexpr std::string_view kKeylogToken = "keylog";
constexpr std::string_view kBytesSentToken = "bytes-sent";

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t checked_index(const WindowGrid& grid, std::uint64_t timestamp_ms) {
  auto index = grid.index_of(timestamp_ms);
  if (index >= grid.window_count) {
    throw ContractError("window grid of " + std::to_string(grid.window_count) + " x " +
                        std::to_string(grid.window_ms) + " ms does not cover t=" +
                        std::to_string(timestamp_ms));
  }
  return index;
}

void check_grid(const WindowGrid& grid) {
  if (grid.window_ms == 0) throw ContractError("window width must be positive");
}

}  // namespace

WindowGrid WindowGrid::for_duration(std::uint64_t duration_ms, std::uint64_t window_ms) {
  if (duration_ms == 0 || window_ms == 0) {
    throw ContractError("window grid needs a positive duration and width");
  }
  return WindowGrid{window_ms, static_cast<std::size_t>((duration_ms + window_ms - 1) / window_ms)};
}

SignalPair::SignalPair(SignalSeries a, SignalSeries b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.grid != b_.grid) throw ContractError("signal pair series use different window grids");
  if (a_.values.size() != a_.grid.window_count || b_.values.size() != b_.grid.window_count) {
    throw ContractError("signal series length does not match its window grid");
  }
}

bool matches(const CallSelector& selector, const CallName& call) noexcept {
  return std::visit(
      overloaded{
          [&](const CallName& name) { return name == call; },
          [&](CallCategory category) { return category_of(call) == category; },
          [&](KeylogSet) { return category_of(call) == CallCategory::KeyboardState; },
      },
      selector);
}

std::string to_string(const CallSelector& selector) {
  return std::visit(overloaded{
                        [](const CallName& name) { return std::string(name.name()); },
                        [](CallCategory category) {
                          return std::string(kCategoryPrefix) + std::string(to_string(category));
                        },
                        [](KeylogSet) { return std::string(kKeylogToken); },
                    },
                    selector);
}

std::string to_string(const SignalSource& source) {
  return std::visit(overloaded{
                        [](const CallSelector& selector) { return to_string(selector); },
                        [](BytesSent) { return std::string(kBytesSentToken); },
                    },
                    source);
}

CallSelector parse_selector(std::string_view text) {
  if (text.empty()) throw ContractError("empty signal selector");
  if (text == kKeylogToken) return KeylogSet{};
  if (text.starts_with(kCategoryPrefix)) {
    auto category = parse_category(text.substr(kCategoryPrefix.size()));
    if (!category) throw ContractError("unknown call category in '" + std::string(text) + "'");
    return *category;
  }
  return CallName::from_string(text);
}

SignalSource parse_signal_source(std::string_view text) {
  if (text == kBytesSentToken) return BytesSent{};
  return parse_selector(text);
}

SignalSeries count_signal(const Trace& trace, std::uint32_t process_id,
                          const CallSelector& selector, const WindowGrid& grid) {
  check_grid(grid);
  SignalSeries series{to_string(selector), grid, std::vector<double>(grid.window_count, 0.0)};
  for (const auto& event : trace.events()) {
    if (event.process_id != process_id || !matches(selector, event.call)) continue;
    series.values[checked_index(grid, event.timestamp_ms)] += 1.0;
  }
  return series;
}

SignalSeries bytes_sent_signal(const Trace& trace, std::uint32_t process_id,
                               const WindowGrid& grid) {
  check_grid(grid);
  SignalSeries series{std::string(kBytesSentToken), grid,
                      std::vector<double>(grid.window_count, 0.0)};
  for (const auto& event : trace.events()) {
    if (event.process_id != process_id) continue;
    auto call = event.call.known();
    if (call != KnownCall::Send && call != KnownCall::SendTo) continue;
    if (!event.bytes) {
      throw DataError(std::string(event.call.name()) + " event of pid " +
                      std::to_string(process_id) + " at t=" +
                      std::to_string(event.timestamp_ms) + " ms has no byte count");
    }
    series.values[checked_index(grid, event.timestamp_ms)] += static_cast<double>(*event.bytes);
  }
  return series;
}

SignalSeries build_signal(const Trace& trace, std::uint32_t process_id,
                          const SignalSource& source, const WindowGrid& grid) {
  return std::visit(overloaded{
                        [&](const CallSelector& selector) {
                          return count_signal(trace, process_id, selector, grid);
                        },
                        [&](BytesSent) { return bytes_sent_signal(trace, process_id, grid); },
                    },
                    source);
}

SignalSeries normalize(const SignalSeries& series) {
  SignalSeries out = series;
  if (out.values.empty()) return out;
  double max = *std::max_element(out.values.begin(), out.values.end());
  if (max <= 0.0) return out;
  for (auto& v : out.values) v /= max;
  return out;
}

std::string_view to_string(IdlePolicy policy) noexcept {
  switch (policy) {
    case IdlePolicy::BothZero: return "both-zero";
    case IdlePolicy::EitherZero: return "either-zero";
  }
  return {};
}

SignalPair remove_idle(const SignalPair& pair, IdlePolicy policy) {
  const auto& a = pair.a().values;
  const auto& b = pair.b().values;
  SignalSeries out_a{pair.a().label, pair.a().grid, {}};
  SignalSeries out_b{pair.b().label, pair.b().grid, {}};
  for (std::size_t w = 0; w < a.size(); ++w) {
    bool idle = policy == IdlePolicy::BothZero ? (a[w] == 0.0 && b[w] == 0.0)
                                               : (a[w] == 0.0 || b[w] == 0.0);
    if (idle) continue;
    out_a.values.push_back(a[w]);
    out_b.values.push_back(b[w]);
  }
  out_a.grid.window_count = out_a.values.size();
  out_b.grid.window_count = out_b.values.size();
  return SignalPair(std::move(out_a), std::move(out_b));
}

}  // namespace botcorr
