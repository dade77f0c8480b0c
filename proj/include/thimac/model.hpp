#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "thimac/ids.hpp"

namespace thimac {

/// The five generic actions. Receive merges arrival and acceptance.
enum class ActionKind : std::uint8_t { Create, Process, Release, Transfer, Receive };

inline constexpr std::array<ActionKind, 5> kAllActionKinds = {
    ActionKind::Create, ActionKind::Process, ActionKind::Release, ActionKind::Transfer, ActionKind::Receive};

std::string_view to_string(ActionKind kind);
std::optional<ActionKind> parse_action_kind(std::string_view text);

struct Machine {
    MachineId id;
    std::string name;
    std::optional<MachineId> parent;  // empty only for the root
    std::vector<MachineId> children;
    std::vector<StageId> stages;
    std::vector<StorageId> storages;
};

struct Stage {
    StageId id;
    ActionKind kind = ActionKind::Create;
    MachineId owner;
};

struct FlowEdge {
    FlowId id;
    StageId from;
    StageId to;
    std::optional<std::string> thing;
};

struct TriggerEdge {
    TriggerId id;
    StageId from;
    StageId to;
};

struct Storage {
    StorageId id;
    MachineId owner;
    std::string thing;
};

enum class ModelErrc {
    UnknownMachine,
    UnknownStage,
    DuplicateStageKind,
    DuplicateMachineName,
    EmptySelection,
    Frozen,
};

class ModelError : public std::runtime_error {
public:
    ModelError(ModelErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ModelErrc code() const noexcept { return code_; }

private:
    ModelErrc code_;
};

/// Subdiagram of a static model: a stage set plus every edge whose two
/// endpoints lie inside it.
struct Region {
    std::uint64_t model_uid = 0;
    std::vector<StageId> stages;  // sorted, unique
    std::vector<FlowId> flows;    // sorted
    std::vector<TriggerId> triggers;
    bool connected = true;  // weak connectivity of the induced graph; vacuous for the empty region

    bool empty() const noexcept { return stages.empty(); }
    bool contains(StageId s) const;
    friend bool operator==(const Region&, const Region&) = default;
};

/// Static TM description: nested machines, their stages, flow and trigger
/// edges, and storages. Mutable until freeze(); afterwards every mutator
/// throws ModelErrc::Frozen.
class StaticModel {
public:
    static constexpr std::string_view kRootName = "world";

    StaticModel();

    MachineId root() const noexcept { return MachineId{0}; }
    std::uint64_t uid() const noexcept { return uid_; }

    MachineId add_machine(std::string name, std::optional<MachineId> parent = std::nullopt);
    StageId add_stage(MachineId machine, ActionKind kind);
    FlowId add_flow(StageId from, StageId to, std::optional<std::string> thing = std::nullopt);
    TriggerId add_trigger(StageId from, StageId to);
    StorageId add_storage(MachineId owner, std::string thing);

    void freeze() noexcept { frozen_ = true; }
    bool frozen() const noexcept { return frozen_; }

    std::span<const Machine> machines() const noexcept { return machines_; }
    std::span<const Stage> stages() const noexcept { return stages_; }
    std::span<const FlowEdge> flows() const noexcept { return flows_; }
    std::span<const TriggerEdge> triggers() const noexcept { return triggers_; }
    std::span<const Storage> storages() const noexcept { return storages_; }

    const Machine& machine(MachineId id) const;
    const Stage& stage(StageId id) const;
    const FlowEdge& flow(FlowId id) const;
    const TriggerEdge& trigger(TriggerId id) const;
    const Storage& storage(StorageId id) const;

    bool has_machine(MachineId id) const noexcept { return id.value < machines_.size(); }
    bool has_stage(StageId id) const noexcept { return id.value < stages_.size(); }

    std::optional<StageId> stage_of(MachineId machine, ActionKind kind) const;
    std::optional<MachineId> child_named(MachineId parent, std::string_view name) const;

    /// Dotted path from the root, excluding the root itself ("mouth.moistening").
    /// The root's path is empty.
    std::string path(MachineId id) const;
    /// Machine path plus kind ("mouth.moistening.process").
    std::string path(StageId id) const;

    /// Resolves a dotted machine path relative to the root.
    std::optional<MachineId> find_machine(std::string_view dotted) const;
    /// Resolves "<machine path>.<kind>".
    std::optional<StageId> find_stage(std::string_view dotted) const;

    /// Non-root machines, i.e. the ones a document declares.
    std::size_t user_machine_count() const noexcept { return machines_.size() - 1; }
    bool empty() const noexcept;

private:
    void require_mutable() const;

    std::uint64_t uid_;
    bool frozen_ = false;
    std::vector<Machine> machines_;
    std::vector<Stage> stages_;
    std::vector<FlowEdge> flows_;
    std::vector<TriggerEdge> triggers_;
    std::vector<Storage> storages_;
};

/// Induced subdiagram on `stage_ids`. Throws on an empty selection or an
/// unknown stage.
Region subdiagram(const StaticModel& model, std::span<const StageId> stage_ids);

/// Induced subdiagram that accepts the empty set (used for intersections).
Region induced_region(const StaticModel& model, std::span<const StageId> stage_ids);

/// Forward closure over flow and trigger edges, including `start`.
std::set<StageId> reachable_stages(const StaticModel& model, StageId start);

}  // namespace thimac
