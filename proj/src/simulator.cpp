#include "botcorr/simulator.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <random>

#include "botcorr/errors.hpp"

namespace botcorr {
namespace {

// Independent random streams per behavior, so E3.x and E4.x with the same seed share the
// same typing timeline and differ only by the exfiltration sends.
enum class Stream : std::uint32_t { Channel = 1, Commands, Typing, Chat, Background };

/// mt19937_64 and seed_seq are fully specified by the standard; the bounded draw below is
/// written out because std::uniform_int_distribution is not.
class Rng {
 public:
  Rng(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    engine_.seed(seq);
  }

  std::int64_t uniform(IntRange range) {
    const auto span = static_cast<std::uint64_t>(range.max - range.min) + 1;
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = kMax - kMax % span;
    std::uint64_t draw = engine_();
    while (draw >= limit) draw = engine_();
    return range.min + static_cast<std::int64_t>(draw % span);
  }

  std::uint64_t uniform_u(IntRange range) { return static_cast<std::uint64_t>(uniform(range)); }

  bool chance(int percent) { return uniform({1, 100}) <= percent; }

 private:
  std::mt19937_64 engine_;
};

class EventSink {
 public:
  EventSink(std::vector<ApiEvent>& events, std::uint64_t duration_ms, std::uint32_t pid,
            std::string name)
      : events_(events), duration_ms_(duration_ms), pid_(pid), name_(std::move(name)) {}

  void emit(std::uint64_t t, KnownCall call, std::optional<std::uint64_t> bytes = std::nullopt) {
    emit(t, CallName(call), bytes);
  }

  void emit(std::uint64_t t, CallName call, std::optional<std::uint64_t> bytes = std::nullopt) {
    if (t >= duration_ms_) return;
    events_.push_back(ApiEvent{t, pid_, name_, std::move(call), bytes});
  }

  std::uint64_t duration_ms() const noexcept { return duration_ms_; }

 private:
  std::vector<ApiEvent>& events_;
  std::uint64_t duration_ms_;
  std::uint32_t pid_;
  std::string name_;
};

void validate_range(const IntRange& range, const char* name) {
  if (range.min < 1 || range.min > range.max) {
    throw ContractError(std::string("invalid range for ") + name + ": [" +
                        std::to_string(range.min) + ", " + std::to_string(range.max) + "]");
  }
}

// Connect, register and join, then push the occasional unsolicited bulk message.
void add_channel(EventSink& sink, const ChannelProfile& channel, Rng& rng, bool bulk) {
  std::uint64_t t = rng.uniform_u({200, 1500});
  sink.emit(t, KnownCall::Socket);
  t += rng.uniform_u({100, 500});
  sink.emit(t, KnownCall::Send, rng.uniform_u({40, 80}));
  t += rng.uniform_u({200, 900});
  sink.emit(t, KnownCall::Recv, rng.uniform_u({200, 600}));
  t += rng.uniform_u({100, 500});
  sink.emit(t, KnownCall::Send, rng.uniform_u({20, 40}));
  t += rng.uniform_u({100, 500});
  sink.emit(t, KnownCall::Recv, rng.uniform_u({100, 300}));

  if (!bulk) return;
  for (std::uint64_t at = rng.uniform_u(channel.bulk_interval_ms); at < sink.duration_ms();
       at += rng.uniform_u(channel.bulk_interval_ms)) {
    sink.emit(at, KnownCall::Send, rng.uniform_u(channel.bulk_bytes));
  }
}

// The server PINGs a client that has sent nothing for a keepalive interval; the client
// answers with a fixed-size PONG. Runs after every other behavior of the process so the
// silence test sees all of its sends.
void add_keepalive(EventSink& sink, const ChannelProfile& channel, Rng& rng,
                   std::span<const ApiEvent> events, std::uint32_t pid) {
  std::vector<std::uint64_t> sends;
  for (const auto& e : events) {
    auto call = e.call.known();
    if (e.process_id == pid && (call == KnownCall::Send || call == KnownCall::SendTo)) {
      sends.push_back(e.timestamp_ms);
    }
  }
  std::sort(sends.begin(), sends.end());

  std::uint64_t last = 0;
  auto next_send = sends.begin();
  while (last < sink.duration_ms()) {
    const std::uint64_t ping = last + rng.uniform_u(channel.keepalive_interval_ms);
    next_send = std::upper_bound(next_send, sends.end(), last);
    if (next_send != sends.end() && *next_send < ping) {
      last = *next_send;
      continue;
    }
    const std::uint64_t pong = ping + rng.uniform_u({5, 50});
    sink.emit(ping, KnownCall::Recv, rng.uniform_u({20, 30}));
    sink.emit(pong, KnownCall::Send, channel.keepalive_bytes);
    last = pong;
  }
}

// Botmaster commands (info, list, passwords...): a received command, a burst of replies,
// and a few file reads and writes.
void add_commands(EventSink& sink, Rng& rng) {
  const auto duration = static_cast<std::int64_t>(sink.duration_ms());
  const auto episodes = rng.uniform({5, 9});
  for (std::int64_t i = 0; i < episodes; ++i) {
    auto t = rng.uniform_u({std::min<std::int64_t>(30'000, duration - 1),
                            std::max<std::int64_t>(duration - 30'000, 1)});
    sink.emit(t, KnownCall::Recv, rng.uniform_u({20, 60}));
    t += rng.uniform_u({20, 200});
    const auto reads = rng.uniform({1, 3});
    for (std::int64_t r = 0; r < reads; ++r) {
      sink.emit(t, KnownCall::ReadFile);
      t += rng.uniform_u({5, 50});
    }
    const auto replies = rng.uniform({2, 8});
    for (std::int64_t r = 0; r < replies; ++r) {
      sink.emit(t, KnownCall::Send, rng.uniform_u({100, 1200}));
      t += rng.uniform_u({50, 400});
    }
    const auto writes = rng.uniform({0, 2});
    for (std::int64_t w = 0; w < writes; ++w) {
      sink.emit(t, KnownCall::WriteFile);
      t += rng.uniform_u({5, 50});
    }
  }
}

// The user types sentences; the bot polls the keyboard throughout each sentence and logs
// the line when Enter is pressed. With exfiltration the line is also sent upstream.
void add_typing(EventSink& sink, const TypingProfile& typing, bool exfiltrate, Rng& rng) {
  std::uint64_t t = rng.uniform_u({5'000, 20'000});
  while (t < sink.duration_ms()) {
    if (typing.break_percent > 0 && rng.chance(typing.break_percent)) {
      t += rng.uniform_u(typing.break_ms);
    }
    const auto keys = rng.uniform(typing.keys_per_sentence);
    std::uint64_t enter = t;
    for (std::int64_t k = 0; k < keys; ++k) enter += rng.uniform_u(typing.inter_key_ms);

    for (std::uint64_t poll = t; poll <= enter; poll += rng.uniform_u(typing.poll_interval_ms)) {
      sink.emit(poll, KnownCall::GetAsyncKeyState);
    }
    sink.emit(enter + rng.uniform_u({1, 30}), KnownCall::WriteFile);
    const auto upload_delay = rng.uniform_u({100, 600});
    if (exfiltrate) {
      sink.emit(enter + upload_delay, KnownCall::Send, static_cast<std::uint64_t>(keys));
    }
    t = enter + rng.uniform_u(typing.inter_sentence_pause_ms);
  }
}

// A person chatting through a regular IRC client.
void add_chat(EventSink& sink, Rng& rng) {
  for (std::uint64_t t = rng.uniform_u({5'000, 60'000}); t < sink.duration_ms();
       t += rng.uniform_u({5'000, 60'000})) {
    if (rng.chance(50)) {
      sink.emit(t, KnownCall::Send, rng.uniform_u({10, 200}));
    } else {
      sink.emit(t, KnownCall::Recv, rng.uniform_u({40, 300}));
    }
  }
  for (std::uint64_t t = rng.uniform_u({60'000, 180'000}); t < sink.duration_ms();
       t += rng.uniform_u({60'000, 180'000})) {
    sink.emit(t, KnownCall::ReadFile);
  }
}

void add_background(EventSink& sink, Rng& rng) {
  static const CallName registry = CallName::from_string("RegQueryValueEx");
  for (std::uint64_t t = rng.uniform_u({500, 5'000}); t < sink.duration_ms();
       t += rng.uniform_u({2'000, 30'000})) {
    switch (rng.uniform({0, 5})) {
      case 0: sink.emit(t, KnownCall::CreateFile); break;
      case 1: sink.emit(t, KnownCall::ReadFile); break;
      case 2: sink.emit(t, KnownCall::WriteFile); break;
      case 3: sink.emit(t, KnownCall::Send, rng.uniform_u({50, 1500})); break;
      case 4: sink.emit(t, KnownCall::Recv, rng.uniform_u({50, 4000})); break;
      default: sink.emit(t, registry); break;
    }
  }
}

}  // namespace

std::string_view to_string(Scenario scenario) noexcept {
  switch (scenario) {
    case Scenario::E1: return "E1";
    case Scenario::E2: return "E2";
    case Scenario::E3_1: return "E3.1";
    case Scenario::E3_2: return "E3.2";
    case Scenario::E4_1: return "E4.1";
    case Scenario::E4_2: return "E4.2";
    case Scenario::E5: return "E5";
  }
  return {};
}

std::optional<Scenario> parse_scenario(std::string_view text) noexcept {
  std::string key;
  for (char c : text) {
    if (c == '.' || c == '_') continue;
    key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  for (auto scenario : kAllScenarios) {
    std::string name;
    for (char c : to_string(scenario)) {
      if (c != '.') name.push_back(c);
    }
    if (name == key) return scenario;
  }
  return std::nullopt;
}

TypingProfile TypingProfile::long_sentences() {
  TypingProfile profile;
  profile.keys_per_sentence = {60, 120};
  profile.inter_sentence_pause_ms = {5'000, 20'000};
  return profile;
}

TypingProfile TypingProfile::short_sentences() {
  TypingProfile profile;
  profile.keys_per_sentence = {5, 15};
  profile.inter_sentence_pause_ms = {1'000, 5'000};
  return profile;
}

void TypingProfile::validate() const {
  validate_range(keys_per_sentence, "keys_per_sentence");
  validate_range(inter_key_ms, "inter_key_ms");
  validate_range(inter_sentence_pause_ms, "inter_sentence_pause_ms");
  validate_range(poll_interval_ms, "poll_interval_ms");
  validate_range(break_ms, "break_ms");
  if (break_percent < 0 || break_percent > 100) {
    throw ContractError("break_percent must lie in [0, 100]");
  }
}

void ChannelProfile::validate() const {
  validate_range(keepalive_interval_ms, "keepalive_interval_ms");
  validate_range(bulk_interval_ms, "bulk_interval_ms");
  validate_range(bulk_bytes, "bulk_bytes");
  if (keepalive_bytes == 0) throw ContractError("keepalive_bytes must be positive");
}

ScenarioSpec ScenarioSpec::defaults(Scenario scenario, std::uint64_t seed) {
  ScenarioSpec spec;
  spec.scenario = scenario;
  spec.seed = seed;
  switch (scenario) {
    case Scenario::E3_2:
    case Scenario::E4_2:
      spec.typing = TypingProfile::short_sentences();
      break;
    default:
      spec.typing = TypingProfile::long_sentences();
      break;
  }
  if (scenario == Scenario::E5) {
    spec.process_id = 3120;
    spec.process_name = "mirc.exe";
  }
  return spec;
}

bool ScenarioSpec::exfiltrate() const noexcept {
  return scenario == Scenario::E4_1 || scenario == Scenario::E4_2;
}

bool ScenarioSpec::types() const noexcept {
  return scenario == Scenario::E3_1 || scenario == Scenario::E3_2 ||
         scenario == Scenario::E4_1 || scenario == Scenario::E4_2;
}

void ScenarioSpec::validate() const {
  if (duration_ms == 0) throw ContractError("duration_ms must be positive");
  if (process_id == 0) throw ContractError("process_id must be positive");
  if (background_process && process_id == kBackgroundProcessId) {
    throw ContractError("subject process id collides with the background process");
  }
  typing.validate();
  channel.validate();
}

Trace generate(const ScenarioSpec& spec) {
  spec.validate();
  std::vector<ApiEvent> events;
  EventSink subject(events, spec.duration_ms, spec.process_id, spec.process_name);

  Rng channel_rng(spec.seed, Stream::Channel);
  if (spec.scenario == Scenario::E5) {
    add_channel(subject, spec.channel, channel_rng, /*bulk=*/false);
    Rng chat_rng(spec.seed, Stream::Chat);
    add_chat(subject, chat_rng);
  } else {
    add_channel(subject, spec.channel, channel_rng, /*bulk=*/true);
  }
  if (spec.scenario == Scenario::E2) {
    Rng command_rng(spec.seed, Stream::Commands);
    add_commands(subject, command_rng);
  }
  if (spec.types()) {
    Rng typing_rng(spec.seed, Stream::Typing);
    add_typing(subject, spec.typing, spec.exfiltrate(), typing_rng);
  }
  add_keepalive(subject, spec.channel, channel_rng, events, spec.process_id);
  if (spec.background_process) {
    EventSink background(events, spec.duration_ms, kBackgroundProcessId, "explorer.exe");
    Rng background_rng(spec.seed, Stream::Background);
    add_background(background, background_rng);
  }

  TraceMetadata metadata{std::string(to_string(spec.scenario)), spec.seed};
  return Trace(spec.duration_ms, std::move(events), std::move(metadata));
}

std::map<Scenario, std::vector<Trace>> generate_suite(std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw ContractError("generate_suite needs at least one seed");
  std::map<Scenario, std::vector<Trace>> suite;
  for (auto scenario : kAllScenarios) {
    auto& traces = suite[scenario];
    traces.reserve(seeds.size());
    for (auto seed : seeds) traces.push_back(generate(ScenarioSpec::defaults(scenario, seed)));
  }
  return suite;
}

}  // namespace botcorr
