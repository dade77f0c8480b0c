#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "thimac/diagnostic.hpp"
#include "thimac/document.hpp"
#include "thimac/model.hpp"

namespace thimac {

/// The time machine an event owns: time is transferred in, received
/// (the instant the event erupts) and processed for `duration` ticks.
struct TimeSubmachine {
    std::vector<ActionKind> stages{ActionKind::Transfer, ActionKind::Receive, ActionKind::Process};
    std::optional<std::uint32_t> duration;

    std::uint32_t ticks() const noexcept { return duration.value_or(1); }
    bool well_formed() const;
};

struct Event {
    EventId id;
    std::string name;
    std::optional<std::string> label;
    Region region;
    TimeSubmachine time;
};

enum class EventizeErrc {
    InvalidRegion,
    InvalidDuration,
    UnknownEvent,
    DuplicateEvent,
    SequenceCycle,
    ChoiceTooSmall,
    InvalidRepeat,
    DifferentModels,
};

class EventizeError : public std::runtime_error {
public:
    EventizeError(EventizeErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    EventizeErrc code() const noexcept { return code_; }

private:
    EventizeErrc code_;
};

/// Binds `region` to a fresh time submachine. Throws InvalidRegion when the
/// region is empty, belongs to another model or has error diagnostics,
/// and InvalidDuration for a zero duration.
Event define_event(const StaticModel& model, std::string name, Region region,
                   std::optional<std::uint32_t> duration = std::nullopt, std::optional<std::string> label = std::nullopt);

enum class BehaviorEdgeKind { Sequence, Choice, Concurrent, Repeat };

std::string_view to_string(BehaviorEdgeKind kind);

struct BehaviorEdge {
    std::optional<EventId> from;  // empty for start groups
    EventId to;
    BehaviorEdgeKind kind = BehaviorEdgeKind::Sequence;
    std::optional<std::size_t> group;   // choice / concurrent group
    std::optional<std::uint32_t> bound;  // repeat only; empty = unbounded

    /// Sequence, choice and concurrent edges with a source event.
    bool forward() const noexcept { return from && kind != BehaviorEdgeKind::Repeat; }
};

namespace detail {
struct BehaviorBuilder;
}

/// One branch of a concurrent fork and every event reachable from it.
struct Stream {
    std::size_t group = 0;
    EventId head;
    std::vector<EventId> members;  // sorted
};

struct BehaviorGroup {
    BehaviorEdgeKind kind = BehaviorEdgeKind::Choice;
    std::optional<EventId> from;
    std::vector<EventId> members;  // declaration order, distinct
};

/// Events plus chronology edges. Forward edges (sequence, choice,
/// concurrent) are acyclic; cycles exist only through repeat edges.
class BehaviorGraph {
public:
    std::span<const Event> events() const noexcept { return events_; }
    const Event& event(EventId id) const { return events_.at(id.value); }
    std::optional<EventId> find(std::string_view name) const;

    std::span<const BehaviorEdge> edges() const noexcept { return edges_; }
    std::span<const BehaviorGroup> groups() const noexcept { return groups_; }

    /// No inbound forward edge.
    std::span<const EventId> initial_events() const noexcept { return initial_; }
    /// No outgoing forward edge.
    std::span<const EventId> terminal_events() const noexcept { return terminal_; }
    bool is_terminal(EventId id) const;

    /// Indices into edges(), in declaration order.
    std::span<const std::size_t> out_edges(EventId id) const { return out_.at(id.value); }
    /// Sources of forward edges into `id`, sorted.
    std::span<const EventId> forward_predecessors(EventId id) const { return preds_.at(id.value); }

    std::span<const Stream> streams() const noexcept { return streams_; }
    /// Event lies on a cycle closed by an unbounded repeat edge.
    bool in_unbounded_loop(EventId id) const { return unbounded_loop_.at(id.value); }

private:
    friend struct detail::BehaviorBuilder;

    std::vector<Event> events_;
    std::vector<BehaviorEdge> edges_;
    std::vector<BehaviorGroup> groups_;
    std::vector<EventId> initial_;
    std::vector<EventId> terminal_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<EventId>> preds_;
    std::vector<Stream> streams_;
    std::vector<bool> unbounded_loop_;
};

/// Resolves behavior declarations against `events` (by name; ids are
/// reassigned to positions). Throws EventizeError on an unknown event, a
/// duplicate event name, a forward cycle, a choice with fewer than two
/// distinct alternatives, or a repeat edge that is not a self/back edge or
/// has bound 0.
BehaviorGraph build_behavior(std::vector<Event> events, std::span<const BehaviorStatement> statements);

struct CoverageReport {
    struct Overlap {
        StageId stage;
        std::vector<EventId> events;
    };
    std::vector<StageId> uncovered;  // in no event region
    std::vector<Overlap> overlaps;   // in more than one, each stage once
};

CoverageReport coverage(std::span<const Event> events, const StaticModel& model);

/// Induced subdiagram on the shared stages; empty when disjoint.
Region overlap(const StaticModel& model, const Event& a, const Event& b);

struct Eventization {
    std::vector<Event> events;
    std::optional<BehaviorGraph> behavior;  // present when every event and the behavior resolved
    std::vector<Diagnostic> diagnostics;
};

/// Events and behavior from a document's declarations; failures are
/// reported as E1/B1-B4 diagnostics.
Eventization eventize(const ModelDocument& document);

}  // namespace thimac
