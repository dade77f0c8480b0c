#include "thimac/simulator.hpp"

#include <algorithm>
#include <sstream>

namespace thimac {

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::Initiated: return "initiated";
        case Phase::Processing: return "processing";
        case Phase::Archived: return "archived";
    }
    return "?";
}

std::string_view to_string(ArchiveReason r) {
    switch (r) {
        case ArchiveReason::Completed: return "completed";
        case ArchiveReason::Cutoff: return "cutoff";
        case ArchiveReason::Replaced: return "replaced";
        case ArchiveReason::Halted: return "halted";
    }
    return "?";
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::Horizon: return "horizon";
        case Termination::TerminalReached: return "terminal reached";
        case Termination::Deadlock: return "deadlock";
        case Termination::ScriptedExhausted: return "scripted-exhausted";
    }
    return "?";
}

void RecordStore::append(EventInstance instance) {
    if (!instance.end || instance.phase != Phase::Archived)
        throw std::logic_error("record entries must be archived instances");
    if (!entries_.empty()) {
        const auto& last = entries_.back();
        if (std::pair(*instance.end, instance.id) <= std::pair(*last.end, last.id))
            throw std::logic_error("record entries must be ordered by end tick, then id");
    }
    entries_.push_back(std::move(instance));
}

bool RecordStore::contains(InstanceId id) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const EventInstance& e) { return e.id == id; });
}

ChoicePolicy ChoicePolicy::parse(std::string_view text, std::uint64_t seed) {
    if (text == "first") return {Kind::FirstDeclared, seed, {}};
    if (text == "random") return seeded_random(seed);
    constexpr std::string_view prefix = "scripted:";
    if (text.starts_with(prefix)) {
        std::vector<std::string> names;
        std::string item;
        std::istringstream in{std::string(text.substr(prefix.size()))};
        while (std::getline(in, item, ','))
            if (!item.empty()) names.push_back(item);
        return {Kind::Scripted, seed, std::move(names)};
    }
    throw std::invalid_argument("unknown policy '" + std::string(text) + "' (expected first, random or scripted:A,B)");
}

std::string ChoicePolicy::describe() const {
    switch (kind) {
        case Kind::FirstDeclared: return "first";
        case Kind::SeededRandom: return "random";
        case Kind::Scripted: {
            std::string out = "scripted:";
            for (std::size_t i = 0; i < script.size(); ++i) out += (i ? "," : "") + script[i];
            return out;
        }
    }
    return "?";
}

namespace {

EventId pick(SimState& state, const BehaviorGraph& behavior, const BehaviorGroup& group) {
    const auto& alts = group.members;
    switch (state.policy.kind) {
        case ChoicePolicy::Kind::FirstDeclared: return alts.front();
        case ChoicePolicy::Kind::SeededRandom: return alts[state.rng() % alts.size()];
        case ChoicePolicy::Kind::Scripted: {
            if (state.script_cursor >= state.policy.script.size())
                throw SimError(SimErrc::ScriptExhausted,
                               "scripted policy exhausted at tick " + std::to_string(state.tick));
            const auto& name = state.policy.script[state.script_cursor++];
            for (auto a : alts)
                if (behavior.event(a).name == name) return a;
            std::string options;
            for (auto a : alts) options += (options.empty() ? "" : ", ") + behavior.event(a).name;
            throw SimError(SimErrc::ScriptMismatch,
                           "scripted choice '" + name + "' is not one of: " + options);
        }
    }
    return alts.front();
}

std::vector<EventInstance>::iterator find_live(SimState& state, EventId event) {
    return std::find_if(state.live.begin(), state.live.end(), [&](const EventInstance& i) { return i.event == event; });
}

void instantiate(SimState& state, const BehaviorGraph& behavior, std::vector<EventId> targets,
                 std::vector<EventInstance>& archived) {
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    auto archive = [&](std::vector<EventInstance>::iterator it, ArchiveReason reason) {
        it->phase = Phase::Archived;
        it->end = state.tick;
        it->reason = reason;
        archived.push_back(*it);
        state.live.erase(it);
    };

    for (auto t : targets) {
        if (auto it = find_live(state, t); it != state.live.end()) archive(it, ArchiveReason::Replaced);
        for (auto p : behavior.forward_predecessors(t))
            if (auto it = find_live(state, p); it != state.live.end() && it->start < state.tick)
                archive(it, ArchiveReason::Cutoff);
    }
    for (auto t : targets) {
        EventInstance inst{InstanceId{static_cast<std::uint32_t>(state.instances.size())},
                           t,
                           ++state.generations[t.value],
                           Phase::Initiated,
                           state.tick,
                           std::nullopt,
                           std::nullopt};
        state.instances.push_back(inst);
        state.live.push_back(inst);
    }
}

/// Commits this tick's archivals: record, instance table, snapshot.
void settle(SimState& state, std::vector<EventInstance> archived) {
    std::sort(archived.begin(), archived.end(),
              [](const EventInstance& a, const EventInstance& b) { return a.id < b.id; });
    for (auto& a : archived) {
        state.instances[a.id.value] = a;
        state.last.archived.push_back(a.id);
        state.record.append(std::move(a));
    }
    std::sort(state.live.begin(), state.live.end(),
              [](const EventInstance& a, const EventInstance& b) { return a.id < b.id; });
    for (const auto& l : state.live) {
        state.instances[l.id.value] = l;
        state.last.live.push_back(l.id);
    }
}

}  // namespace

SimState init(const BehaviorGraph& behavior, const ChoicePolicy& policy, std::uint32_t horizon) {
    if (behavior.events().empty()) throw SimError(SimErrc::NoInitialEvents, "behavior has no events");
    if (horizon < 1) throw SimError(SimErrc::InvalidHorizon, "horizon must be at least 1");

    SimState state;
    state.horizon = horizon;
    state.policy = policy;
    state.rng.seed(policy.seed);
    state.generations.assign(behavior.events().size(), 0);
    state.halted.assign(behavior.events().size(), false);

    std::vector<EventId> excluded;
    std::vector<EventId> start;
    for (std::size_t gi = 0; gi < behavior.groups().size(); ++gi) {
        const auto& group = behavior.groups()[gi];
        if (group.from) continue;
        if (group.kind == BehaviorEdgeKind::Choice) {
            excluded.insert(excluded.end(), group.members.begin(), group.members.end());
            const auto chosen = pick(state, behavior, group);
            state.last.choices.push_back({std::nullopt, gi, chosen});
            start.push_back(chosen);
        } else {
            start.insert(start.end(), group.members.begin(), group.members.end());
        }
    }
    for (auto e : behavior.initial_events())
        if (std::find(excluded.begin(), excluded.end(), e) == excluded.end()) start.push_back(e);
    if (start.empty()) throw SimError(SimErrc::NoInitialEvents, "behavior has no initial events");

    std::vector<EventInstance> archived;
    instantiate(state, behavior, std::move(start), archived);
    settle(state, std::move(archived));
    return state;
}

SimState step(SimState state, const BehaviorGraph& behavior) {
    if (state.termination)
        throw SimError(SimErrc::AlreadyTerminated,
                       "simulation already ended (" + std::string(to_string(*state.termination)) + ")");
    ++state.tick;
    state.last = TickSnapshot{};
    state.last.tick = state.tick;

    for (auto& l : state.live)
        if (l.phase == Phase::Initiated) l.phase = Phase::Processing;

    std::vector<EventInstance> archived;
    std::vector<EventInstance> completed;
    for (auto it = state.live.begin(); it != state.live.end();) {
        if (state.tick - it->start >= behavior.event(it->event).time.ticks()) {
            it->phase = Phase::Archived;
            it->end = state.tick;
            it->reason = ArchiveReason::Completed;
            completed.push_back(*it);
            it = state.live.erase(it);
        } else {
            ++it;
        }
    }

    struct Firing {
        EventId source;
        EventId target;
    };
    std::vector<Firing> firings;
    for (const auto& c : completed) {
        archived.push_back(c);
        bool fired = false;
        const auto outs = behavior.out_edges(c.event);
        for (auto ei : outs) {
            const auto& e = behavior.edges()[ei];
            if (e.kind != BehaviorEdgeKind::Repeat) continue;
            if (!e.bound || state.generations[e.to.value] < *e.bound) {
                firings.push_back({c.event, e.to});
                fired = true;
            }
        }
        if (fired) continue;
        std::vector<std::size_t> seen_groups;
        for (auto ei : outs) {
            const auto& e = behavior.edges()[ei];
            if (e.kind == BehaviorEdgeKind::Repeat) continue;
            fired = true;
            if (e.kind == BehaviorEdgeKind::Choice) {
                if (std::find(seen_groups.begin(), seen_groups.end(), *e.group) != seen_groups.end()) continue;
                seen_groups.push_back(*e.group);
                const auto chosen = pick(state, behavior, behavior.groups()[*e.group]);
                state.last.choices.push_back({c.id, *e.group, chosen});
                firings.push_back({c.event, chosen});
            } else {
                firings.push_back({c.event, e.to});
            }
        }
        if (!fired) state.last.stream_ends.push_back(c.event);
    }

    // Race resolution: a stream that ended stops the unbounded loops of its
    // sibling branches.
    for (auto ended : state.last.stream_ends) {
        for (const auto& s : behavior.streams()) {
            if (!std::binary_search(s.members.begin(), s.members.end(), ended)) continue;
            for (const auto& sibling : behavior.streams()) {
                if (sibling.group != s.group || sibling.head == s.head) continue;
                for (auto x : sibling.members)
                    if (behavior.in_unbounded_loop(x) && !std::binary_search(s.members.begin(), s.members.end(), x))
                        state.halted[x.value] = true;
            }
        }
    }
    if (!state.last.stream_ends.empty()) state.stream_ended = true;

    for (auto it = state.live.begin(); it != state.live.end();) {
        if (state.halted[it->event.value]) {
            it->phase = Phase::Archived;
            it->end = state.tick;
            it->reason = ArchiveReason::Halted;
            archived.push_back(*it);
            it = state.live.erase(it);
        } else {
            ++it;
        }
    }

    std::vector<EventId> targets;
    for (const auto& f : firings)
        if (!state.halted[f.source.value] && !state.halted[f.target.value]) targets.push_back(f.target);
    instantiate(state, behavior, std::move(targets), archived);
    settle(state, std::move(archived));

    if (state.live.empty())
        state.termination = state.stream_ended ? Termination::TerminalReached : Termination::Deadlock;
    else if (state.tick >= state.horizon)
        state.termination = Termination::Horizon;
    return state;
}

SimTrace run(const BehaviorGraph& behavior, const ChoicePolicy& policy, std::uint32_t horizon) {
    SimTrace trace;
    trace.policy = policy;
    trace.horizon = horizon;
    for (const auto& e : behavior.events()) trace.event_names.push_back(e.name);

    auto state = init(behavior, policy, horizon);
    trace.initial = state.last;
    while (!state.termination) {
        try {
            state = step(state, behavior);
        } catch (const SimError& e) {
            if (e.code() != SimErrc::ScriptExhausted) throw;
            trace.termination = Termination::ScriptedExhausted;
            trace.instances = state.instances;
            return trace;
        }
        trace.ticks.push_back(state.last);
    }
    trace.termination = *state.termination;
    trace.instances = std::move(state.instances);
    return trace;
}

RaceReport race_report(const BehaviorGraph& behavior, const SimTrace& trace, std::string_view stream_a,
                       std::string_view stream_b) {
    auto head = [&](std::string_view name) {
        auto id = behavior.find(name);
        if (!id) throw std::invalid_argument("stream not found: unknown event '" + std::string(name) + "'");
        return *id;
    };
    const auto a = head(stream_a);
    const auto b = head(stream_b);

    const Stream* sa = nullptr;
    const Stream* sb = nullptr;
    for (const auto& s : behavior.streams()) {
        if (s.head != a) continue;
        for (const auto& t : behavior.streams())
            if (t.head == b && t.group == s.group && &t != &s) {
                sa = &s;
                sb = &t;
            }
        if (sa) break;
    }
    if (!sa)
        throw std::invalid_argument("stream not found: '" + std::string(stream_a) + "' and '" + std::string(stream_b) +
                                    "' are not branches of one concurrent fork");

    auto end_of = [&](const Stream& s) -> std::optional<std::uint32_t> {
        for (const auto& t : trace.ticks)
            for (auto e : t.stream_ends)
                if (std::binary_search(s.members.begin(), s.members.end(), e)) return t.tick;
        return std::nullopt;
    };

    RaceReport report{{a, end_of(*sa)}, {b, end_of(*sb)}, std::nullopt, false, std::nullopt};
    const auto& ea = report.a.end_tick;
    const auto& eb = report.b.end_tick;
    if (ea && eb) {
        report.tie = *ea == *eb;
        if (!report.tie) report.winner = *ea < *eb ? a : b;
        report.margin = *ea < *eb ? *eb - *ea : *ea - *eb;
    } else if (ea) {
        report.winner = a;
    } else if (eb) {
        report.winner = b;
    }
    return report;
}

}  // namespace thimac
