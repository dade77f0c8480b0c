#include "thimac/eventizer.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "thimac/validator.hpp"

namespace thimac {

namespace {

/// Thrown internally so eventize() can attach the offending statement's span.
struct StatementError {
    EventizeError error;
    std::size_t statement;
};

std::vector<std::vector<bool>> closure(std::size_t n, const std::vector<std::vector<EventId>>& adj) {
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t s = 0; s < n; ++s) {
        std::deque<std::size_t> queue{s};
        reach[s][s] = true;
        while (!queue.empty()) {
            auto x = queue.front();
            queue.pop_front();
            for (auto y : adj[x])
                if (!reach[s][y.value]) {
                    reach[s][y.value] = true;
                    queue.push_back(y.value);
                }
        }
    }
    return reach;
}

template <class Range>
std::vector<std::string> distinct(const Range& names) {
    std::vector<std::string> out;
    for (const auto& n : names)
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    return out;
}

}  // namespace

namespace detail {
struct BehaviorBuilder {
    static BehaviorGraph build(std::vector<Event> events, std::span<const BehaviorStatement> statements);
};
}  // namespace detail

bool TimeSubmachine::well_formed() const {
    auto has = [&](ActionKind k) { return std::find(stages.begin(), stages.end(), k) != stages.end(); };
    return has(ActionKind::Transfer) && has(ActionKind::Receive) && has(ActionKind::Process) &&
           (!duration || *duration >= 1);
}

Event define_event(const StaticModel& model, std::string name, Region region, std::optional<std::uint32_t> duration,
                   std::optional<std::string> label) {
    if (region.empty()) throw EventizeError(EventizeErrc::InvalidRegion, "event '" + name + "' has an empty region");
    if (region.model_uid != model.uid())
        throw EventizeError(EventizeErrc::InvalidRegion, "event '" + name + "' region belongs to another model");
    for (const auto& d : check_region(model, region))
        if (d.severity == Severity::Error)
            throw EventizeError(EventizeErrc::InvalidRegion, "event '" + name + "': " + d.message);
    if (duration && *duration == 0)
        throw EventizeError(EventizeErrc::InvalidDuration, "event '" + name + "' duration must be at least 1 tick");
    Event e{EventId{0}, std::move(name), std::move(label), std::move(region), TimeSubmachine{}};
    e.time.duration = duration;
    return e;
}

std::string_view to_string(BehaviorEdgeKind kind) {
    switch (kind) {
        case BehaviorEdgeKind::Sequence: return "sequence";
        case BehaviorEdgeKind::Choice: return "choice";
        case BehaviorEdgeKind::Concurrent: return "concurrent";
        case BehaviorEdgeKind::Repeat: return "repeat";
    }
    return "?";
}

std::optional<EventId> BehaviorGraph::find(std::string_view name) const {
    for (const auto& e : events_)
        if (e.name == name) return e.id;
    return std::nullopt;
}

bool BehaviorGraph::is_terminal(EventId id) const {
    return std::binary_search(terminal_.begin(), terminal_.end(), id);
}

BehaviorGraph build_behavior(std::vector<Event> events, std::span<const BehaviorStatement> statements) {
    try {
        return detail::BehaviorBuilder::build(std::move(events), statements);
    } catch (const StatementError& e) {
        throw e.error;
    }
}

BehaviorGraph detail::BehaviorBuilder::build(std::vector<Event> events, std::span<const BehaviorStatement> statements) {
    BehaviorGraph g;
    const std::size_t n = events.size();
    std::map<std::string, EventId, std::less<>> by_name;
    for (std::size_t i = 0; i < n; ++i) {
        events[i].id = EventId{static_cast<std::uint32_t>(i)};
        if (!by_name.emplace(events[i].name, events[i].id).second)
            throw EventizeError(EventizeErrc::DuplicateEvent, "duplicate event '" + events[i].name + "'");
    }

    std::size_t current = 0;
    auto fail = [&](EventizeErrc code, const std::string& msg) { throw StatementError{EventizeError(code, msg), current}; };
    auto resolve = [&](const std::string& name) {
        auto it = by_name.find(name);
        if (it == by_name.end()) fail(EventizeErrc::UnknownEvent, "unknown event '" + name + "'");
        return it->second;
    };

    auto& edges = g.edges_;
    auto& groups = g.groups_;
    std::vector<std::size_t> origin;  // statement index per edge
    for (current = 0; current < statements.size(); ++current) {
        std::visit(
            [&](const auto& d) {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, SequenceDecl>) {
                    edges.push_back({resolve(d.from), resolve(d.to), BehaviorEdgeKind::Sequence, {}, {}});
                } else if constexpr (std::is_same_v<T, RepeatDecl>) {
                    if (d.bound && *d.bound == 0) fail(EventizeErrc::InvalidRepeat, "repeat bound must be at least 1");
                    edges.push_back({resolve(d.from), resolve(d.to), BehaviorEdgeKind::Repeat, {}, d.bound});
                } else {
                    constexpr bool choice = std::is_same_v<T, ChoiceDecl>;
                    const auto kind = choice ? BehaviorEdgeKind::Choice : BehaviorEdgeKind::Concurrent;
                    std::vector<std::string> members;
                    if constexpr (choice)
                        members = distinct(d.alternatives);
                    else
                        members = distinct(d.branches);
                    if (choice && members.size() < 2)
                        fail(EventizeErrc::ChoiceTooSmall, "choice needs at least two distinct alternatives");
                    BehaviorGroup group{kind, d.from ? std::optional(resolve(*d.from)) : std::nullopt, {}};
                    for (const auto& m : members) group.members.push_back(resolve(m));
                    for (auto m : group.members) edges.push_back({group.from, m, kind, groups.size(), {}});
                    groups.push_back(std::move(group));
                }
            },
            statements[current].decl);
        origin.resize(edges.size(), current);
    }

    std::vector<std::vector<EventId>> fwd(n), any(n);
    g.out_.assign(n, {});
    g.preds_.assign(n, {});
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        if (!e.from) continue;
        g.out_[e.from->value].push_back(i);
        any[e.from->value].push_back(e.to);
        if (e.forward()) {
            fwd[e.from->value].push_back(e.to);
            g.preds_[e.to.value].push_back(*e.from);
        }
    }
    for (auto& p : g.preds_) {
        std::sort(p.begin(), p.end());
        p.erase(std::unique(p.begin(), p.end()), p.end());
    }

    // Kahn's algorithm over forward edges; anything left over sits on a cycle.
    std::vector<std::size_t> indegree(n, 0);
    for (const auto& outs : fwd)
        for (auto t : outs) ++indegree[t.value];
    std::deque<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] == 0) ready.push_back(i);
    std::size_t visited = 0;
    while (!ready.empty()) {
        auto x = ready.front();
        ready.pop_front();
        ++visited;
        for (auto t : fwd[x])
            if (--indegree[t.value] == 0) ready.push_back(t.value);
    }
    if (visited != n) {
        std::string names;
        for (std::size_t i = 0; i < n; ++i)
            if (indegree[i] > 0) names += (names.empty() ? "" : ", ") + events[i].name;
        throw EventizeError(EventizeErrc::SequenceCycle, "cycle through " + names + " is not marked as repeat");
    }

    const auto reach = closure(n, fwd);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        if (e.kind != BehaviorEdgeKind::Repeat) continue;
        if (!reach[e.to.value][e.from->value])
            throw StatementError{EventizeError(EventizeErrc::InvalidRepeat,
                                               "repeat " + events[e.from->value].name + " -> " + events[e.to.value].name +
                                                   " is neither a self edge nor a back edge"),
                                 origin[i]};
    }

    for (std::size_t i = 0; i < n; ++i) {
        const EventId id{static_cast<std::uint32_t>(i)};
        if (g.preds_[i].empty()) g.initial_.push_back(id);
        if (fwd[i].empty()) g.terminal_.push_back(id);
    }

    const auto reach_any = closure(n, any);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        if (groups[gi].kind != BehaviorEdgeKind::Concurrent) continue;
        for (auto head : groups[gi].members) {
            Stream s{gi, head, {}};
            for (std::size_t x = 0; x < n; ++x)
                if (reach_any[head.value][x]) s.members.push_back(EventId{static_cast<std::uint32_t>(x)});
            g.streams_.push_back(std::move(s));
        }
    }

    g.unbounded_loop_.assign(n, false);
    for (const auto& e : edges) {
        if (e.kind != BehaviorEdgeKind::Repeat || e.bound) continue;
        for (std::size_t x = 0; x < n; ++x)
            if (reach[e.to.value][x] && reach[x][e.from->value]) g.unbounded_loop_[x] = true;
    }

    g.events_ = std::move(events);
    return g;
}

CoverageReport coverage(std::span<const Event> events, const StaticModel& model) {
    std::vector<std::vector<EventId>> owners(model.stages().size());
    for (const auto& e : events)
        for (auto s : e.region.stages)
            if (s.value < owners.size()) owners[s.value].push_back(e.id);
    CoverageReport report;
    for (std::size_t i = 0; i < owners.size(); ++i) {
        const StageId s{static_cast<std::uint32_t>(i)};
        if (owners[i].empty())
            report.uncovered.push_back(s);
        else if (owners[i].size() > 1)
            report.overlaps.push_back({s, owners[i]});
    }
    return report;
}

Region overlap(const StaticModel& model, const Event& a, const Event& b) {
    if (a.region.model_uid != b.region.model_uid || a.region.model_uid != model.uid())
        throw EventizeError(EventizeErrc::DifferentModels,
                            "events '" + a.name + "' and '" + b.name + "' are defined over different models");
    std::vector<StageId> shared;
    std::set_intersection(a.region.stages.begin(), a.region.stages.end(), b.region.stages.begin(),
                          b.region.stages.end(), std::back_inserter(shared));
    return induced_region(model, shared);
}

Eventization eventize(const ModelDocument& document) {
    Eventization out;
    bool ok = true;
    for (const auto& decl : document.events) {
        const auto* region = document.find_region(decl.region);
        if (!region) {
            out.diagnostics.push_back(make_diagnostic("E1", "event '" + decl.name + "' names unknown region '" +
                                                                decl.region + "'", decl.span));
            ok = false;
            continue;
        }
        try {
            auto e = define_event(document.model, decl.name, induced_region(document.model, region->stages),
                                  decl.duration, decl.label);
            e.id = EventId{static_cast<std::uint32_t>(out.events.size())};
            out.events.push_back(std::move(e));
        } catch (const EventizeError& err) {
            out.diagnostics.push_back(make_diagnostic("E1", err.what(), decl.span));
            ok = false;
        }
    }
    if (!ok) return out;

    try {
        out.behavior = detail::BehaviorBuilder::build(out.events, document.behavior);
    } catch (const StatementError& e) {
        const auto code = e.error.code() == EventizeErrc::UnknownEvent    ? "B1"
                          : e.error.code() == EventizeErrc::ChoiceTooSmall ? "B3"
                                                                           : "B4";
        out.diagnostics.push_back(make_diagnostic(code, e.error.what(), document.behavior[e.statement].span));
    } catch (const EventizeError& e) {
        // Cycles span several statements; point at the behavior block's first one.
        std::optional<SourceSpan> span;
        if (!document.behavior.empty()) span = document.behavior.front().span;
        out.diagnostics.push_back(make_diagnostic(e.code() == EventizeErrc::SequenceCycle ? "B2" : "B1", e.what(), span));
    }
    return out;
}

}  // namespace thimac
