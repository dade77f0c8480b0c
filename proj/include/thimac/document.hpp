#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "thimac/diagnostic.hpp"
#include "thimac/model.hpp"

namespace thimac {

/// Syntax-level behavior declarations. Event references are by name and
/// are resolved by the eventizer.
struct SequenceDecl {
    std::string from;
    std::string to;
};

/// `[from ->] choice { a | b ... }`; without a source the group chooses
/// among start events.
struct ChoiceDecl {
    std::optional<std::string> from;
    std::vector<std::string> alternatives;
};

/// `[from ->] concurrent { a, b ... }`; each branch heads one stream.
struct ConcurrentDecl {
    std::optional<std::string> from;
    std::vector<std::string> branches;
};

/// `repeat e [bound n];` (self) or `repeat from -> to [bound n];` (back edge).
struct RepeatDecl {
    std::string from;
    std::string to;
    std::optional<std::uint32_t> bound;  // empty = unbounded
};

struct BehaviorStatement {
    std::variant<SequenceDecl, ChoiceDecl, ConcurrentDecl, RepeatDecl> decl;
    std::optional<SourceSpan> span;
};

struct RegionDecl {
    std::string name;
    std::vector<StageId> stages;  // declaration order, may repeat
    std::optional<SourceSpan> span;
};

struct EventDecl {
    std::string name;
    std::optional<std::string> label;
    std::string region;
    std::optional<std::uint32_t> duration;
    std::optional<SourceSpan> span;
};

/// A parsed (or programmatically assembled) .tm document: the static
/// model plus the dynamic-level declarations and source spans.
struct ModelDocument {
    StaticModel model;
    std::map<MachineId, SourceSpan> machine_spans;
    std::map<StageId, SourceSpan> stage_spans;
    std::map<FlowId, SourceSpan> flow_spans;
    std::map<TriggerId, SourceSpan> trigger_spans;
    std::map<StorageId, SourceSpan> storage_spans;
    std::vector<RegionDecl> regions;
    std::vector<EventDecl> events;
    std::vector<BehaviorStatement> behavior;

    static ModelDocument from_model(StaticModel model) { return ModelDocument{std::move(model), {}, {}, {}, {}, {}, {}, {}, {}}; }

    const RegionDecl* find_region(std::string_view name) const;
    const EventDecl* find_event(std::string_view name) const;
};

inline const RegionDecl* ModelDocument::find_region(std::string_view name) const {
    for (const auto& r : regions)
        if (r.name == name) return &r;
    return nullptr;
}

inline const EventDecl* ModelDocument::find_event(std::string_view name) const {
    for (const auto& e : events)
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace thimac
