#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "thimac/eventizer.hpp"
#include "thimac/ids.hpp"

namespace thimac {

// Discrete-time execution of a BehaviorGraph.
//
// Time is a global tick counter. An event instance erupts at the tick its
// time submachine's transfer->receive fires (its start) and processes for
// the event's duration. One step advances the tick and then:
//
//   1. live instances move Initiated -> Processing;
//   2. instances whose duration has elapsed complete;
//   3. each completion fires its repeat edges while their bound allows,
//      otherwise its forward edges (sequence targets, one alternative per
//      choice group picked by the policy, every branch of a concurrent
//      group). A completion that fires nothing ends its stream;
//   4. a stream end inside a concurrent fork halts sibling streams' events
//      that sit on unbounded repeat loops (race resolution);
//   5. each fired event gets a new instance (generation + 1). Its live
//      previous generation is archived (replacement) and so is every live
//      instance of a forward predecessor that started earlier (cutoff);
//   6. archived instances are appended to the record, ordered by id.
//
// The run stops when nothing is live (terminal reached, or deadlock when no
// stream ever ended) or when the tick reaches the horizon.

enum class Phase { Initiated, Processing, Archived };
enum class ArchiveReason { Completed, Cutoff, Replaced, Halted };

std::string_view to_string(Phase p);
std::string_view to_string(ArchiveReason r);

struct EventInstance {
    InstanceId id;
    EventId event;
    std::uint32_t generation = 1;
    Phase phase = Phase::Initiated;
    std::uint32_t start = 0;
    std::optional<std::uint32_t> end;
    std::optional<ArchiveReason> reason;

    friend bool operator==(const EventInstance&, const EventInstance&) = default;
};

/// Append-only archive of past instances, ordered by end tick then id.
class RecordStore {
public:
    void append(EventInstance instance);
    std::span<const EventInstance> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool contains(InstanceId id) const;

private:
    std::vector<EventInstance> entries_;
};

/// How choice groups are resolved. SeededRandom draws from std::mt19937_64
/// seeded with `seed` and takes `draw % alternatives`; the engine is fully
/// specified by the C++ standard, so traces reproduce across platforms.
struct ChoicePolicy {
    enum class Kind { FirstDeclared, SeededRandom, Scripted };
    Kind kind = Kind::FirstDeclared;
    std::uint64_t seed = 0;
    std::vector<std::string> script;  // event names, consumed in order

    static ChoicePolicy first_declared() { return {}; }
    static ChoicePolicy seeded_random(std::uint64_t seed) { return {Kind::SeededRandom, seed, {}}; }
    static ChoicePolicy scripted(std::vector<std::string> script) { return {Kind::Scripted, 0, std::move(script)}; }

    /// "first", "random", "scripted:A,B" (seed supplied separately).
    static ChoicePolicy parse(std::string_view text, std::uint64_t seed);
    std::string describe() const;
};

enum class Termination { Horizon, TerminalReached, Deadlock, ScriptedExhausted };
std::string_view to_string(Termination t);

enum class SimErrc { NoInitialEvents, InvalidHorizon, ScriptExhausted, ScriptMismatch, AlreadyTerminated };

class SimError : public std::runtime_error {
public:
    SimError(SimErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    SimErrc code() const noexcept { return code_; }

private:
    SimErrc code_;
};

struct ChoiceRecord {
    std::optional<InstanceId> source;  // empty for start groups
    std::size_t group = 0;
    EventId chosen;
    friend bool operator==(const ChoiceRecord&, const ChoiceRecord&) = default;
};

/// What happened in one tick, as seen at its end.
struct TickSnapshot {
    std::uint32_t tick = 0;
    std::vector<InstanceId> live;      // sorted
    std::vector<InstanceId> archived;  // archived during this tick, sorted
    std::vector<ChoiceRecord> choices;
    std::vector<EventId> stream_ends;  // events whose completion fired nothing
    friend bool operator==(const TickSnapshot&, const TickSnapshot&) = default;
};

struct SimState {
    std::uint32_t tick = 0;
    std::uint32_t horizon = 1;
    std::vector<EventInstance> live;       // sorted by id
    std::vector<EventInstance> instances;  // every instance ever created, by id
    RecordStore record;
    std::vector<std::uint32_t> generations;  // instances created per event
    std::vector<bool> halted;                // per event, set by race resolution
    ChoicePolicy policy;
    std::size_t script_cursor = 0;
    std::mt19937_64 rng;
    bool stream_ended = false;
    std::optional<Termination> termination;
    TickSnapshot last;
};

/// Tick 0: start events erupt. Start events are the initial events, with
/// each start choice group narrowed to the policy's pick, plus every branch
/// of a start concurrent group.
SimState init(const BehaviorGraph& behavior, const ChoicePolicy& policy, std::uint32_t horizon);

/// One tick. Pure: the input state is not modified. Throws ScriptExhausted
/// or ScriptMismatch from the scripted policy, AlreadyTerminated after the
/// run has ended.
SimState step(SimState state, const BehaviorGraph& behavior);

struct SimTrace {
    ChoicePolicy policy;
    std::uint32_t horizon = 1;
    std::vector<std::string> event_names;
    TickSnapshot initial;
    std::vector<TickSnapshot> ticks;
    std::vector<EventInstance> instances;  // final view of every instance, by id
    Termination termination = Termination::Horizon;
};

/// Steps until termination. A scripted policy running dry ends the trace
/// with Termination::ScriptedExhausted; other errors propagate.
SimTrace run(const BehaviorGraph& behavior, const ChoicePolicy& policy, std::uint32_t horizon);

struct StreamProgress {
    EventId head;
    std::optional<std::uint32_t> end_tick;  // first tick a stream event ended it
};

struct RaceReport {
    StreamProgress a;
    StreamProgress b;
    std::optional<EventId> winner;  // empty on a tie or when neither ended
    bool tie = false;
    std::optional<std::uint32_t> margin;  // ticks between the two ends, when both ended
};

/// Compares two branches of the same concurrent fork, named by their head
/// events. Throws std::invalid_argument when either is not a branch of a
/// common fork.
RaceReport race_report(const BehaviorGraph& behavior, const SimTrace& trace, std::string_view stream_a,
                       std::string_view stream_b);

}  // namespace thimac
