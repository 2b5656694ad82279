#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "botcorr/trace.hpp"

namespace botcorr {

/// The five experiments, with the two typing variants of experiments three and four.
///
///  - E1: bot joined the channel and idles; keepalive traffic only.
///  - E2: E1 plus botmaster commands answered with traffic and a little file access.
///  - E3_1 / E3_2: E1 plus a user typing long / short sentences while the bot polls the
///    keyboard and logs each line to a file. Nothing is sent.
///  - E4_1 / E4_2: E3 plus every logged line sent to the botmaster.
///  - E5: a benign chat client; no keyboard polling.
enum class Scenario { E1, E2, E3_1, E3_2, E4_1, E4_2, E5 };

inline constexpr std::array<Scenario, 7> kAllScenarios = {
    Scenario::E1,   Scenario::E2,   Scenario::E3_1, Scenario::E3_2,
    Scenario::E4_1, Scenario::E4_2, Scenario::E5,
};

/// "E1", "E2", "E3.1", ...
std::string_view to_string(Scenario scenario) noexcept;

/// Case-insensitive; accepts "e3.1", "E3_1" and "e31".
std::optional<Scenario> parse_scenario(std::string_view text) noexcept;

/// Inclusive integer range sampled uniformly.
struct IntRange {
  std::int64_t min = 1;
  std::int64_t max = 1;

  bool operator==(const IntRange&) const = default;
};

struct TypingProfile {
  IntRange keys_per_sentence;
  IntRange inter_key_ms{150, 400};
  IntRange inter_sentence_pause_ms;
  /// Cadence of keyboard polls while a sentence is being typed.
  IntRange poll_interval_ms{50, 150};
  /// Chance (percent) that the user steps away before a sentence, and for how long.
  int break_percent = 40;
  IntRange break_ms{6'000, 15'000};

  static TypingProfile long_sentences();
  static TypingProfile short_sentences();

  /// Throws ContractError unless every range has 1 <= min <= max and break_percent is 0..100.
  void validate() const;

  bool operator==(const TypingProfile&) const = default;
};

/// IRC-side behavior shared by the bot scenarios.
struct ChannelProfile {
  /// Outbound silence after which the server PINGs; each PING gets a fixed-size PONG.
  IntRange keepalive_interval_ms{85'000, 95'000};
  std::uint64_t keepalive_bytes = 64;
  /// Periodic unsolicited bulk sends.
  IntRange bulk_interval_ms{400'000, 800'000};
  IntRange bulk_bytes{400, 900};

  void validate() const;

  bool operator==(const ChannelProfile&) const = default;
};

struct ScenarioSpec {
  Scenario scenario = Scenario::E1;
  std::uint64_t duration_ms = 900'000;
  std::uint64_t seed = 1;
  TypingProfile typing;
  ChannelProfile channel;
  std::uint32_t process_id = 2104;
  std::string process_name = "spybot.exe";
  /// Overlay an unrelated benign process (file and network noise, no keyboard polling).
  bool background_process = false;

  /// Scenario defaults: long typing for x.1, short for x.2, a chat client identity for E5.
  static ScenarioSpec defaults(Scenario scenario, std::uint64_t seed);

  bool exfiltrate() const noexcept;
  bool types() const noexcept;

  void validate() const;
};

inline constexpr std::uint32_t kBackgroundProcessId = 1456;

/// Deterministic in the spec: equal specs give equal traces on every platform.
Trace generate(const ScenarioSpec& spec);

/// One default-spec trace per (scenario, seed), in seed order. Throws ContractError on no seeds.
std::map<Scenario, std::vector<Trace>> generate_suite(std::span<const std::uint64_t> seeds);

}  // namespace botcorr
