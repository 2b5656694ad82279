#include <random>
#include <set>
#include <sstream>

#include "botcorr/errors.hpp"
#include "botcorr/trace.hpp"
#include "botcorr/trace_io.hpp"
#include "doctest.h"

using namespace botcorr;

namespace {

ApiEvent event(std::uint64_t t, KnownCall call, std::optional<std::uint64_t> bytes = {},
               std::uint32_t pid = 7) {
  return ApiEvent{t, pid, "spybot.exe", call, bytes};
}

Trace round_trip(const Trace& trace) {
  std::stringstream buffer;
  write_trace(trace, buffer);
  return read_trace(buffer);
}

Trace random_trace(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> duration_dist(1, 50'000);
  const auto duration = duration_dist(rng);
  std::uniform_int_distribution<std::uint64_t> t_dist(0, duration - 1);
  std::uniform_int_distribution<int> n_dist(0, 40);
  std::uniform_int_distribution<std::size_t> call_dist(0, kKnownCallCount);
  std::uniform_int_distribution<std::uint32_t> pid_dist(1, 4);
  std::bernoulli_distribution coin(0.5);

  std::vector<ApiEvent> events;
  const int n = n_dist(rng);
  for (int i = 0; i < n; ++i) {
    ApiEvent e;
    e.timestamp_ms = coin(rng) ? t_dist(rng) : (duration / 2);  // force timestamp ties
    e.process_id = pid_dist(rng);
    e.process_name = "proc \"" + std::to_string(e.process_id) + "\" \xc3\xa9";
    const auto c = call_dist(rng);
    e.call = c == kKnownCallCount ? CallName::from_string("LoadLibrary") : CallName(kAllKnownCalls[c]);
    if (carries_bytes(e.call) && coin(rng)) e.bytes = rng() % 100'000;
    events.push_back(std::move(e));
  }
  TraceMetadata metadata;
  if (coin(rng)) metadata.scenario = "E3.2";
  if (coin(rng)) metadata.seed = rng();
  return Trace(duration, std::move(events), metadata);
}

}  // namespace

TEST_CASE("category_of follows the three monitored lists") {
  CHECK(category_of(CallName(KnownCall::GetAsyncKeyState)) == CallCategory::KeyboardState);
  CHECK(category_of(CallName(KnownCall::WriteFile)) == CallCategory::FileAccess);
  CHECK(category_of(CallName::from_string("LoadLibrary")) == CallCategory::Other);

  const std::set<std::string_view> comm = {"socket", "send", "recv", "sendto", "recvfrom",
                                           "IcmpSendEcho"};
  const std::set<std::string_view> file = {"CreateFile", "OpenFile", "ReadFile", "WriteFile"};
  const std::set<std::string_view> keyboard = {"GetKeyboardState", "GetAsyncKeyState",
                                               "GetKeyNameText", "keybd_event"};
  std::size_t seen = 0;
  for (auto call : kAllKnownCalls) {
    const auto name = spelling(call);
    const auto category = category_of(call);
    CHECK(int(comm.count(name)) + int(file.count(name)) + int(keyboard.count(name)) == 1);
    if (comm.count(name)) CHECK(category == CallCategory::CommFunc);
    if (file.count(name)) CHECK(category == CallCategory::FileAccess);
    if (keyboard.count(name)) CHECK(category == CallCategory::KeyboardState);
    ++seen;
  }
  CHECK(seen == 14);
}

TEST_CASE("call names are parsed case-sensitively and canonically") {
  CHECK(CallName::from_string("WriteFile") == CallName(KnownCall::WriteFile));
  CHECK(CallName::from_string("WriteFile").known() == KnownCall::WriteFile);
  CHECK_FALSE(CallName::from_string("writefile").known().has_value());
  CHECK(category_of(CallName::from_string("getasynckeystate")) == CallCategory::Other);
  CHECK(CallName::from_string("keybd_event").name() == "keybd_event");
  CHECK(CallName::from_string("NtQuerySystemInformation").name() == "NtQuerySystemInformation");
}

TEST_CASE("trace construction sorts stably and validates") {
  Trace trace(20'000, {event(12'000, KnownCall::Send, 5), event(500, KnownCall::Recv, 1),
                       event(500, KnownCall::WriteFile)});
  REQUIRE(trace.events().size() == 3);
  CHECK(trace.events()[0].call == CallName(KnownCall::Recv));
  CHECK(trace.events()[1].call == CallName(KnownCall::WriteFile));
  CHECK(trace.events()[2].timestamp_ms == 12'000);

  CHECK_THROWS_AS(Trace(1000, {event(1000, KnownCall::Send, 1)}), RangeError);
  CHECK_THROWS_AS(Trace(0, {}), DataError);
  CHECK_THROWS_AS(Trace(1000, {event(1, KnownCall::WriteFile, 10)}), DataError);
  CHECK_THROWS_AS(Trace(1000, {event(1, KnownCall::Send, 10, 0)}), DataError);
}

TEST_CASE("process ids and names") {
  Trace trace(10'000, {event(5, KnownCall::Send, 1, 9), event(1, KnownCall::Recv, 1, 3),
                       event(2, KnownCall::Recv, 1, 9)});
  CHECK(trace.process_ids() == std::vector<std::uint32_t>{3, 9});
  CHECK(trace.process_name(3) == "spybot.exe");
  CHECK(trace.process_name(4).empty());
}

TEST_CASE("read_trace parses the line format") {
  std::istringstream in(
      "{\"duration_ms\": 20000, \"scenario\": null, \"seed\": null}\n"
      "{\"t\": 12000, \"pid\": 4, \"proc\": \"a.exe\", \"call\": \"send\", \"bytes\": 12}\n"
      "\n"
      "{\"t\": 500, \"pid\": 4, \"proc\": \"a.exe\", \"call\": \"GetAsyncKeyState\"}\n");
  auto trace = read_trace(in);
  CHECK(trace.duration_ms() == 20'000);
  REQUIRE(trace.events().size() == 2);
  CHECK(trace.events()[0].timestamp_ms == 500);
  CHECK(trace.events()[1].bytes == 12u);
  CHECK_FALSE(trace.metadata().scenario.has_value());
}

TEST_CASE("read_trace with only a header yields an empty trace") {
  std::istringstream in("{\"duration_ms\": 900000, \"scenario\": \"E1\", \"seed\": 3}\n");
  auto trace = read_trace(in);
  CHECK(trace.duration_ms() == 900'000);
  CHECK(trace.events().empty());
  CHECK(trace.metadata().scenario == "E1");
  CHECK(trace.metadata().seed == 3u);
}

TEST_CASE("read_trace reports the offending line") {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_trace(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  const std::string header = "{\"duration_ms\": 20000, \"scenario\": null, \"seed\": null}\n";
  CHECK(line_of(header + "{\"t\": -1, \"pid\": 1, \"proc\": \"p\", \"call\": \"send\"}\n") == 2);
  CHECK(line_of(header + "\n{\"pid\": 1, \"proc\": \"p\", \"call\": \"send\"}\n") == 3);
  CHECK(line_of(header + "{\"t\": 1, \"pid\": 1, \"proc\": \"p\", \"call\": \"send\", "
                         "\"bytes\": \"ten\"}\n") == 2);
  CHECK(line_of(header + "{\"t\": 1, \"pid\": 0, \"proc\": \"p\", \"call\": \"send\"}\n") == 2);
  CHECK(line_of(header + "{\"t\": 1, \"pid\": 1, \"proc\": \"p\", \"call\": \"ReadFile\", "
                         "\"bytes\": 4}\n") == 2);
  CHECK(line_of(header + "not json\n") == 2);
  CHECK(line_of("{\"duration_ms\": -5}\n") == 1);
  CHECK(line_of("") == 1);

  std::istringstream late(header + "{\"t\": 20000, \"pid\": 1, \"proc\": \"p\", \"call\": \"send\"}\n");
  CHECK_THROWS_AS(read_trace(late), RangeError);
}

TEST_CASE("write_trace emits the exact line format") {
  Trace trace(20'000, {event(500, KnownCall::Send, 64), event(900, KnownCall::GetAsyncKeyState)},
              TraceMetadata{"E4.2", 42});
  std::ostringstream out;
  write_trace(trace, out);
  CHECK(out.str() ==
        "{\"duration_ms\":20000,\"scenario\":\"E4.2\",\"seed\":42}\n"
        "{\"t\":500,\"pid\":7,\"proc\":\"spybot.exe\",\"call\":\"send\",\"bytes\":64}\n"
        "{\"t\":900,\"pid\":7,\"proc\":\"spybot.exe\",\"call\":\"GetAsyncKeyState\"}\n");

  std::ostringstream empty;
  write_trace(Trace(5, {}), empty);
  CHECK(empty.str() == "{\"duration_ms\":5,\"scenario\":null,\"seed\":null}\n");
}

TEST_CASE("round trips") {
  Trace three(30'000, {event(1, KnownCall::Socket), event(2, KnownCall::Send, 3),
                       event(29'999, KnownCall::ReadFile)},
              TraceMetadata{"E2", 5});
  CHECK(round_trip(three) == three);

  Trace ties(1000, {event(10, KnownCall::WriteFile), event(10, KnownCall::ReadFile)});
  auto back = round_trip(ties);
  CHECK(back == ties);
  CHECK(back.events()[0].call == CallName(KnownCall::WriteFile));

  Trace empty(900'000, {});
  CHECK(round_trip(empty) == empty);
}

TEST_CASE("property: read_trace(write_trace(t)) == t for random traces") {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 300; ++i) {
    auto trace = random_trace(rng);
    REQUIRE(round_trip(trace) == trace);
  }
}

TEST_CASE("write_trace surfaces sink failures") {
  std::ostringstream sink;
  sink.setstate(std::ios::badbit);
  CHECK_THROWS_AS(write_trace(Trace(10, {}), sink), IoError);
}
