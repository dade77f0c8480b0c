#include "thimac/validator.hpp"

#include <map>
#include <numeric>
#include <stdexcept>
#include <variant>

namespace thimac {

namespace {

using Subject = std::variant<std::monostate, FlowId, TriggerId, MachineId, StageId>;

struct Finding {
    Diagnostic diagnostic;
    Subject subject;
};

std::string edge_text(const StaticModel& model, StageId from, StageId to) {
    return model.path(from) + " -> " + model.path(to);
}

/// Component label per stage for intra-machine flow edges.
std::vector<std::size_t> flow_series(const StaticModel& model) {
    std::vector<std::size_t> parent(model.stages().size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& f : model.flows())
        if (model.stage(f.from).owner == model.stage(f.to).owner) parent[find(f.from.value)] = find(f.to.value);
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = find(i);
    return parent;
}

std::vector<Finding> model_findings(const StaticModel& model, const FlowAdjacencyTable& table) {
    std::vector<Finding> out;

    for (const auto& f : model.flows()) {
        const auto& a = model.stage(f.from);
        const auto& b = model.stage(f.to);
        const bool same = a.owner == b.owner;
        if (table.allows(a.kind, b.kind, same)) continue;
        if (same)
            out.push_back({make_diagnostic("F1", "illegal flow " + edge_text(model, f.from, f.to) + ": " +
                                                     std::string(to_string(a.kind)) + " -> " +
                                                     std::string(to_string(b.kind)) + " is not allowed within a machine"),
                           f.id});
        else
            out.push_back({make_diagnostic("F2", "illegal cross-machine flow " + edge_text(model, f.from, f.to) +
                                                     ": " + std::string(to_string(a.kind)) + " -> " +
                                                     std::string(to_string(b.kind)) +
                                                     " (things cross machine boundaries via transfer)"),
                           f.id});
    }

    const auto series = flow_series(model);
    for (const auto& t : model.triggers()) {
        if (model.stage(t.from).owner != model.stage(t.to).owner) continue;
        if (series[t.from.value] == series[t.to.value])
            out.push_back({make_diagnostic("T1", "trigger " + edge_text(model, t.from, t.to) +
                                                     " stays within a single flow series"),
                           t.id});
    }

    for (const auto& m : model.machines()) {
        std::map<ActionKind, int> kinds;
        for (auto s : m.stages) ++kinds[model.stage(s).kind];
        for (const auto& [kind, n] : kinds)
            if (n > 1)
                out.push_back({make_diagnostic("D1", "machine '" + model.path(m.id) + "' has " + std::to_string(n) + " " +
                                                         std::string(to_string(kind)) + " stages"),
                               m.id});
    }

    for (const auto& m : model.machines()) {
        if (m.stages.empty() || model.stage_of(m.id, ActionKind::Create)) continue;
        auto entry = [&](StageId to) {
            const auto kind = model.stage(to).kind;
            return model.stage(to).owner == m.id && (kind == ActionKind::Transfer || kind == ActionKind::Receive);
        };
        bool reachable = false;
        for (const auto& f : model.flows())
            if (entry(f.to) && model.stage(f.from).owner != m.id) reachable = true;
        for (const auto& t : model.triggers())
            if (entry(t.to) && model.stage(t.from).owner != m.id) reachable = true;
        if (!reachable)
            out.push_back({make_diagnostic("M1", "machine '" + model.path(m.id) +
                                                     "' has no create stage and nothing flows into it"),
                           m.id});
    }

    for (const auto& s : model.stages()) {
        if (s.kind != ActionKind::Release) continue;
        bool released = false;
        for (const auto& f : model.flows())
            if (f.from == s.id && model.stage(f.to).kind == ActionKind::Transfer) released = true;
        if (!released)
            out.push_back({make_diagnostic("M2", "release stage " + model.path(s.id) + " has no outgoing transfer"),
                           s.id});
    }
    return out;
}

std::optional<SourceSpan> span_of(const ModelDocument& doc, const Subject& subject) {
    auto lookup = [](const auto& map, auto key) -> std::optional<SourceSpan> {
        auto it = map.find(key);
        if (it == map.end()) return std::nullopt;
        return it->second;
    };
    return std::visit(
        [&](auto id) -> std::optional<SourceSpan> {
            using T = decltype(id);
            if constexpr (std::is_same_v<T, FlowId>) return lookup(doc.flow_spans, id);
            else if constexpr (std::is_same_v<T, TriggerId>) return lookup(doc.trigger_spans, id);
            else if constexpr (std::is_same_v<T, MachineId>) return lookup(doc.machine_spans, id);
            else if constexpr (std::is_same_v<T, StageId>) return lookup(doc.stage_spans, id);
            else return std::nullopt;
        },
        subject);
}

}  // namespace

FlowAdjacencyTable FlowAdjacencyTable::defaults() {
    using K = ActionKind;
    return FlowAdjacencyTable({
        {K::Transfer, K::Receive, true},
        {K::Receive, K::Process, true},
        {K::Receive, K::Release, true},
        {K::Process, K::Release, true},
        {K::Process, K::Create, true},
        {K::Create, K::Release, true},
        {K::Create, K::Process, true},
        {K::Release, K::Transfer, true},
        {K::Transfer, K::Transfer, false},
        {K::Transfer, K::Receive, false},
    });
}

FlowAdjacencyTable::FlowAdjacencyTable(std::set<Entry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("flow adjacency table must not be empty");
}

std::vector<Diagnostic> check_model(const StaticModel& model, const FlowAdjacencyTable& table) {
    std::vector<Diagnostic> out;
    for (auto& f : model_findings(model, table)) out.push_back(std::move(f.diagnostic));
    return out;
}

std::vector<Diagnostic> check_region(const StaticModel& model, const Region& region) {
    std::vector<Diagnostic> out;
    if (region.empty()) {
        out.push_back(make_diagnostic("R1", "region has no stages"));
        return out;
    }
    if (!region.connected) out.push_back(make_diagnostic("R2", "region is not connected"));
    for (const auto& f : model.flows()) {
        if (model.stage(f.from).kind != ActionKind::Transfer || model.stage(f.to).kind != ActionKind::Receive) continue;
        if (region.contains(f.from) != region.contains(f.to))
            out.push_back(make_diagnostic("R3", "region splits the move " + edge_text(model, f.from, f.to)));
    }
    return out;
}

std::vector<Diagnostic> check_document(const ModelDocument& document, const FlowAdjacencyTable& table) {
    std::vector<Diagnostic> out;
    for (auto& f : model_findings(document.model, table)) {
        f.diagnostic.span = span_of(document, f.subject);
        out.push_back(std::move(f.diagnostic));
    }
    for (const auto& decl : document.regions) {
        const auto region = induced_region(document.model, decl.stages);
        for (auto d : check_region(document.model, region)) {
            d.message = "region '" + decl.name + "': " + d.message;
            d.span = decl.span;
            out.push_back(std::move(d));
        }
    }
    return out;
}

}  // namespace thimac
