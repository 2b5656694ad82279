#include <numeric>
#include <random>

#include "botcorr/errors.hpp"
#include "botcorr/windowing.hpp"
#include "doctest.h"

using namespace botcorr;

namespace {

constexpr std::uint32_t kPid = 11;

ApiEvent at(std::uint64_t t, CallName call, std::optional<std::uint64_t> bytes = {},
            std::uint32_t pid = kPid) {
  return ApiEvent{t, pid, "p.exe", std::move(call), bytes};
}

std::vector<double> values_of(const SignalSeries& s) { return s.values; }

SignalSeries series(std::vector<double> values) {
  return SignalSeries{"s", WindowGrid{10'000, values.size()}, std::move(values)};
}

}  // namespace

TEST_CASE("window grid covers the duration") {
  CHECK(WindowGrid::for_duration(900'000).window_count == 90);
  CHECK(WindowGrid::for_duration(900'001).window_count == 91);
  CHECK(WindowGrid::for_duration(1).window_count == 1);
  CHECK(WindowGrid::for_duration(900'000, 60'000).window_count == 15);
  CHECK_THROWS_AS(WindowGrid::for_duration(0), ContractError);
  CHECK_THROWS_AS(WindowGrid::for_duration(10, 0), ContractError);
}

TEST_CASE("count_signal buckets by floor(t / window)") {
  const CallName key = KnownCall::GetAsyncKeyState;
  Trace trace(20'000, {at(500, key), at(3000, key), at(12'000, key)});
  auto grid = WindowGrid::for_duration(20'000);
  CHECK(values_of(count_signal(trace, kPid, key, grid)) == std::vector<double>{2, 1});

  Trace quiet(90'000, {at(10, KnownCall::Send, 4)});
  CHECK(values_of(count_signal(quiet, kPid, key, WindowGrid::for_duration(90'000))) ==
        std::vector<double>(9, 0.0));

  Trace edge(30'000, {at(10'000, key)});
  CHECK(values_of(count_signal(edge, kPid, key, WindowGrid::for_duration(30'000))) ==
        std::vector<double>{0, 1, 0});
}

TEST_CASE("count_signal selectors") {
  Trace trace(10'000, {at(1, KnownCall::GetAsyncKeyState), at(2, KnownCall::GetKeyboardState),
                       at(3, KnownCall::KeybdEvent),
                       at(4, KnownCall::WriteFile), at(5, CallName::from_string("Sleep")),
                       at(6, KnownCall::GetAsyncKeyState, {}, kPid + 1)});
  auto grid = WindowGrid::for_duration(10'000);
  CHECK(count_signal(trace, kPid, KeylogSet{}, grid).values[0] == 3);
  CHECK(count_signal(trace, kPid, CallCategory::KeyboardState, grid).values[0] == 3);
  CHECK(count_signal(trace, kPid, CallCategory::FileAccess, grid).values[0] == 1);
  CHECK(count_signal(trace, kPid, CallCategory::Other, grid).values[0] == 1);
  CHECK(count_signal(trace, kPid, CallName(KnownCall::GetAsyncKeyState), grid).values[0] == 1);
  CHECK(count_signal(trace, kPid + 1, KeylogSet{}, grid).values[0] == 1);
  CHECK(count_signal(trace, kPid, KeylogSet{}, grid).label == "keylog");
}

TEST_CASE("count_signal rejects a grid that does not cover the trace") {
  Trace trace(30'000, {at(25'000, KnownCall::Send, 1)});
  CHECK_THROWS_AS(count_signal(trace, kPid, CallCategory::CommFunc, WindowGrid{10'000, 2}),
                  ContractError);
}

TEST_CASE("bytes_sent_signal sums send and sendto payloads") {
  auto grid20 = WindowGrid::for_duration(20'000);
  Trace sends(20'000, {at(1000, KnownCall::Send, 100), at(9000, KnownCall::Send, 50),
                       at(9500, KnownCall::SendTo, 7)});
  CHECK(bytes_sent_signal(sends, kPid, grid20).values == std::vector<double>{157, 0});

  Trace receives(20'000, {at(1000, KnownCall::Recv, 400), at(15'000, KnownCall::RecvFrom, 400)});
  CHECK(bytes_sent_signal(receives, kPid, grid20).values == std::vector<double>{0, 0});

  Trace sparse(900'000, {at(25'000, KnownCall::Send, 512), at(55'000, KnownCall::Send, 512)});
  auto values = bytes_sent_signal(sparse, kPid, WindowGrid::for_duration(900'000)).values;
  REQUIRE(values.size() == 90);
  CHECK(std::count_if(values.begin(), values.end(), [](double v) { return v != 0; }) == 2);
  CHECK(values[2] == 512);
  CHECK(values[5] == 512);

  Trace missing(20'000, {at(1000, KnownCall::Send)});
  CHECK_THROWS_AS(bytes_sent_signal(missing, kPid, grid20), DataError);
  CHECK_NOTHROW(bytes_sent_signal(missing, kPid + 1, grid20));
}

TEST_CASE("normalize") {
  CHECK(normalize(series({0, 5, 10})).values == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(normalize(series({0, 0, 0})).values == std::vector<double>{0, 0, 0});
  CHECK(normalize(series({7})).values == std::vector<double>{1.0});
}

TEST_CASE("remove_idle") {
  SignalPair pair(series({0, 2, 0, 3}), series({0, 0, 1, 4}));
  auto both = remove_idle(pair, IdlePolicy::BothZero);
  CHECK(both.a().values == std::vector<double>{2, 0, 3});
  CHECK(both.b().values == std::vector<double>{0, 1, 4});
  CHECK(both.a().grid.window_count == 3);
  CHECK(both.a().grid == both.b().grid);

  auto either = remove_idle(pair, IdlePolicy::EitherZero);
  CHECK(either.a().values == std::vector<double>{3});
  CHECK(either.b().values == std::vector<double>{4});

  auto empty = remove_idle(SignalPair(series({0, 0, 0}), series({0, 0, 0})));
  CHECK(empty.a().values.empty());
  CHECK(empty.b().values.empty());
  CHECK(empty.a().grid.window_count == 0);
}

TEST_CASE("signal pairs require identical grids") {
  CHECK_THROWS_AS(SignalPair(series({1, 2}), series({1, 2, 3})), ContractError);
  auto other = series({1, 2});
  other.grid.window_ms = 60'000;
  CHECK_THROWS_AS(SignalPair(series({1, 2}), other), ContractError);
}

TEST_CASE("selector text forms round trip") {
  for (const char* text : {"WriteFile", "category:KeyboardState", "keylog", "Sleep"}) {
    CHECK(to_string(parse_selector(text)) == text);
  }
  CHECK(std::holds_alternative<BytesSent>(parse_signal_source("bytes-sent")));
  CHECK_THROWS_AS(parse_selector("category:Nope"), ContractError);
  CHECK_THROWS_AS(parse_selector(""), ContractError);
}

TEST_CASE("property: conservation, partition and idle removal on random traces") {
  std::mt19937_64 rng(77);
  const CallName key = KnownCall::GetAsyncKeyState;
  for (int iter = 0; iter < 1000; ++iter) {
    const std::uint64_t window = 1 + rng() % 20'000;
    const std::uint64_t duration = 1 + rng() % 300'000;
    const auto n = rng() % 200;
    std::vector<ApiEvent> events;
    for (std::uint64_t i = 0; i < n; ++i) {
      std::uint64_t t = rng() % 4 == 0 ? (rng() % (duration / window + 1)) * window : rng() % duration;
      if (t >= duration) t = duration - 1;
      const bool is_key = rng() % 2 == 0;
      events.push_back(at(t, is_key ? key : CallName(KnownCall::WriteFile), {},
                          1 + static_cast<std::uint32_t>(rng() % 2)));
    }
    Trace trace(duration, events);
    auto grid = WindowGrid::for_duration(duration, window);
    auto keys = count_signal(trace, kPid % 2 + 1, key, grid);
    auto files = count_signal(trace, kPid % 2 + 1, CallName(KnownCall::WriteFile), grid);

    const auto expected = std::count_if(events.begin(), events.end(), [&](const ApiEvent& e) {
      return e.process_id == kPid % 2 + 1 && e.call == key;
    });
    REQUIRE(std::accumulate(keys.values.begin(), keys.values.end(), 0.0) == double(expected));

    // Every event is counted in exactly one window, the one holding floor(t / window).
    std::vector<double> manual(grid.window_count, 0.0);
    for (const auto& e : trace.events()) {
      if (e.process_id == kPid % 2 + 1 && e.call == key) manual[e.timestamp_ms / window] += 1;
    }
    REQUIRE(manual == keys.values);

    SignalPair pair(keys, files);
    auto active = remove_idle(pair, IdlePolicy::BothZero);
    std::size_t cursor = 0;
    for (std::size_t w = 0; w < keys.values.size(); ++w) {
      const bool idle = keys.values[w] == 0 && files.values[w] == 0;
      if (idle) continue;
      REQUIRE(cursor < active.a().values.size());
      REQUIRE(active.a().values[cursor] == keys.values[w]);
      REQUIRE(active.b().values[cursor] == files.values[w]);
      ++cursor;
    }
    REQUIRE(cursor == active.a().values.size());
    for (std::size_t i = 0; i < active.a().values.size(); ++i) {
      REQUIRE_FALSE((active.a().values[i] == 0 && active.b().values[i] == 0));
    }
  }
}

TEST_CASE("property: normalize is idempotent and order preserving") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<double> values(1 + rng() % 90);
    for (auto& v : values) v = static_cast<double>(rng() % 30);
    auto once = normalize(series(values));
    auto twice = normalize(once);
    REQUIRE(once.values == twice.values);
    for (std::size_t i = 0; i < values.size(); ++i) {
      REQUIRE(once.values[i] >= 0.0);
      REQUIRE(once.values[i] <= 1.0);
      for (std::size_t j = 0; j < values.size(); ++j) {
        REQUIRE((values[i] < values[j]) == (once.values[i] < once.values[j]));
      }
    }
    const double max = *std::max_element(values.begin(), values.end());
    if (max > 0) {
      REQUIRE(std::count(once.values.begin(), once.values.end(), 1.0) ==
              std::count(values.begin(), values.end(), max));
    }
  }
}
