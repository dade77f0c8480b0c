#include "thimac/model.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <numeric>

namespace thimac {

namespace {

std::uint64_t next_uid() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace

std::string_view to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::Create: return "create";
        case ActionKind::Process: return "process";
        case ActionKind::Release: return "release";
        case ActionKind::Transfer: return "transfer";
        case ActionKind::Receive: return "receive";
    }
    return "?";
}

std::optional<ActionKind> parse_action_kind(std::string_view text) {
    for (auto k : kAllActionKinds)
        if (to_string(k) == text) return k;
    return std::nullopt;
}

bool Region::contains(StageId s) const { return std::binary_search(stages.begin(), stages.end(), s); }

StaticModel::StaticModel() : uid_(next_uid()) {
    machines_.push_back(Machine{MachineId{0}, std::string(kRootName), std::nullopt, {}, {}, {}});
}

void StaticModel::require_mutable() const {
    if (frozen_) throw ModelError(ModelErrc::Frozen, "model is frozen");
}

MachineId StaticModel::add_machine(std::string name, std::optional<MachineId> parent) {
    require_mutable();
    const MachineId p = parent.value_or(root());
    if (!has_machine(p)) throw ModelError(ModelErrc::UnknownMachine, "unknown parent machine " + std::to_string(p.value));
    if (child_named(p, name))
        throw ModelError(ModelErrc::DuplicateMachineName,
                         "machine '" + name + "' already declared in '" + machines_[p.value].name + "'");
    const MachineId id{static_cast<std::uint32_t>(machines_.size())};
    machines_.push_back(Machine{id, std::move(name), p, {}, {}, {}});
    machines_[p.value].children.push_back(id);
    return id;
}

StageId StaticModel::add_stage(MachineId machine, ActionKind kind) {
    require_mutable();
    if (!has_machine(machine))
        throw ModelError(ModelErrc::UnknownMachine, "unknown machine " + std::to_string(machine.value));
    if (stage_of(machine, kind))
        throw ModelError(ModelErrc::DuplicateStageKind, "machine '" + path(machine) + "' already has a " +
                                                            std::string(to_string(kind)) + " stage");
    const StageId id{static_cast<std::uint32_t>(stages_.size())};
    stages_.push_back(Stage{id, kind, machine});
    machines_[machine.value].stages.push_back(id);
    return id;
}

FlowId StaticModel::add_flow(StageId from, StageId to, std::optional<std::string> thing) {
    require_mutable();
    if (!has_stage(from) || !has_stage(to)) throw ModelError(ModelErrc::UnknownStage, "flow references an unknown stage");
    const FlowId id{static_cast<std::uint32_t>(flows_.size())};
    flows_.push_back(FlowEdge{id, from, to, std::move(thing)});
    return id;
}

TriggerId StaticModel::add_trigger(StageId from, StageId to) {
    require_mutable();
    if (!has_stage(from) || !has_stage(to))
        throw ModelError(ModelErrc::UnknownStage, "trigger references an unknown stage");
    const TriggerId id{static_cast<std::uint32_t>(triggers_.size())};
    triggers_.push_back(TriggerEdge{id, from, to});
    return id;
}

StorageId StaticModel::add_storage(MachineId owner, std::string thing) {
    require_mutable();
    if (!has_machine(owner)) throw ModelError(ModelErrc::UnknownMachine, "unknown machine " + std::to_string(owner.value));
    const StorageId id{static_cast<std::uint32_t>(storages_.size())};
    storages_.push_back(Storage{id, owner, std::move(thing)});
    machines_[owner.value].storages.push_back(id);
    return id;
}

const Machine& StaticModel::machine(MachineId id) const {
    if (!has_machine(id)) throw ModelError(ModelErrc::UnknownMachine, "unknown machine " + std::to_string(id.value));
    return machines_[id.value];
}

const Stage& StaticModel::stage(StageId id) const {
    if (!has_stage(id)) throw ModelError(ModelErrc::UnknownStage, "unknown stage " + std::to_string(id.value));
    return stages_[id.value];
}

const FlowEdge& StaticModel::flow(FlowId id) const { return flows_.at(id.value); }
const TriggerEdge& StaticModel::trigger(TriggerId id) const { return triggers_.at(id.value); }
const Storage& StaticModel::storage(StorageId id) const { return storages_.at(id.value); }

std::optional<StageId> StaticModel::stage_of(MachineId machine, ActionKind kind) const {
    for (auto s : this->machine(machine).stages)
        if (stages_[s.value].kind == kind) return s;
    return std::nullopt;
}

std::optional<MachineId> StaticModel::child_named(MachineId parent, std::string_view name) const {
    for (auto c : machine(parent).children)
        if (machines_[c.value].name == name) return c;
    return std::nullopt;
}

std::string StaticModel::path(MachineId id) const {
    std::vector<std::string_view> parts;
    for (auto cur = id; cur != root(); cur = *machine(cur).parent) parts.push_back(machines_[cur.value].name);
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        if (!out.empty()) out += '.';
        out += *it;
    }
    return out;
}

std::string StaticModel::path(StageId id) const {
    const auto& s = stage(id);
    auto prefix = path(s.owner);
    if (!prefix.empty()) prefix += '.';
    return prefix + std::string(to_string(s.kind));
}

std::optional<MachineId> StaticModel::find_machine(std::string_view dotted) const {
    MachineId cur = root();
    if (dotted.empty()) return cur;
    while (true) {
        const auto dot = dotted.find('.');
        auto next = child_named(cur, dotted.substr(0, dot));
        if (!next) return std::nullopt;
        cur = *next;
        if (dot == std::string_view::npos) return cur;
        dotted.remove_prefix(dot + 1);
    }
}

std::optional<StageId> StaticModel::find_stage(std::string_view dotted) const {
    const auto dot = dotted.rfind('.');
    const auto kind = parse_action_kind(dot == std::string_view::npos ? dotted : dotted.substr(dot + 1));
    if (!kind) return std::nullopt;
    auto m = find_machine(dot == std::string_view::npos ? std::string_view{} : dotted.substr(0, dot));
    if (!m) return std::nullopt;
    return stage_of(*m, *kind);
}

bool StaticModel::empty() const noexcept {
    return machines_.size() == 1 && stages_.empty() && flows_.empty() && triggers_.empty() && storages_.empty();
}

Region induced_region(const StaticModel& model, std::span<const StageId> stage_ids) {
    Region r;
    r.model_uid = model.uid();
    r.stages.assign(stage_ids.begin(), stage_ids.end());
    for (auto s : r.stages)
        if (!model.has_stage(s))
            throw ModelError(ModelErrc::UnknownStage, "unknown stage " + std::to_string(s.value));
    std::sort(r.stages.begin(), r.stages.end());
    r.stages.erase(std::unique(r.stages.begin(), r.stages.end()), r.stages.end());

    // Union-find over positions in r.stages.
    std::vector<std::size_t> parent(r.stages.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto index_of = [&](StageId s) {
        return static_cast<std::size_t>(std::lower_bound(r.stages.begin(), r.stages.end(), s) - r.stages.begin());
    };
    auto join = [&](StageId a, StageId b) { parent[find(index_of(a))] = find(index_of(b)); };

    for (const auto& f : model.flows())
        if (r.contains(f.from) && r.contains(f.to)) {
            r.flows.push_back(f.id);
            join(f.from, f.to);
        }
    for (const auto& t : model.triggers())
        if (r.contains(t.from) && r.contains(t.to)) {
            r.triggers.push_back(t.id);
            join(t.from, t.to);
        }

    std::size_t components = 0;
    for (std::size_t i = 0; i < parent.size(); ++i)
        if (find(i) == i) ++components;
    r.connected = components <= 1;
    return r;
}

Region subdiagram(const StaticModel& model, std::span<const StageId> stage_ids) {
    if (stage_ids.empty()) throw ModelError(ModelErrc::EmptySelection, "subdiagram of an empty stage set");
    return induced_region(model, stage_ids);
}

std::set<StageId> reachable_stages(const StaticModel& model, StageId start) {
    if (!model.has_stage(start)) throw ModelError(ModelErrc::UnknownStage, "unknown stage " + std::to_string(start.value));
    std::vector<std::vector<StageId>> out(model.stages().size());
    for (const auto& f : model.flows()) out[f.from.value].push_back(f.to);
    for (const auto& t : model.triggers()) out[t.from.value].push_back(t.to);

    std::set<StageId> seen{start};
    std::deque<StageId> queue{start};
    while (!queue.empty()) {
        const auto s = queue.front();
        queue.pop_front();
        for (auto n : out[s.value])
            if (seen.insert(n).second) queue.push_back(n);
    }
    return seen;
}

}  // namespace thimac
