#include "thimac/export.hpp"

#include <array>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace thimac {

using nlohmann::json;

namespace {

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + '"';
}

std::string stage_node(StageId s) { return "s" + std::to_string(s.value); }

constexpr std::array kPalette = {"#fde2e4", "#e2ece9", "#dfe7fd", "#fff1c1", "#e8dff5",
                                 "#d7f9f1", "#fce1e4", "#eef4d4"};

void write_machine(std::ostringstream& os, const StaticModel& model, MachineId id, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const auto& m = model.machine(id);
    for (auto s : m.stages)
        os << pad << quote(stage_node(s)) << " [label=" << quote(to_string(model.stage(s).kind)) << "];\n";
    for (auto st : m.storages)
        os << pad << quote("st" + std::to_string(st.value)) << " [shape=cylinder, label="
           << quote(model.storage(st).thing) << "];\n";
    for (auto c : m.children) {
        os << pad << "subgraph " << quote("cluster_" + model.path(c)) << " {\n";
        os << pad << "  label=" << quote(model.machine(c).name) << ";\n";
        write_machine(os, model, c, depth + 1);
        os << pad << "}\n";
    }
}

void write_flow_attrs(std::ostringstream& os, const FlowEdge& f) {
    if (f.thing) os << " [label=" << quote(*f.thing) << "]";
    os << ";\n";
}

std::string instance_label(const SimTrace& trace, InstanceId id) {
    const auto& inst = trace.instances.at(id.value);
    return trace.event_names.at(inst.event.value) + "#" + std::to_string(inst.generation);
}

json tick_json(const SimTrace& trace, const TickSnapshot& t) {
    json live = json::array();
    for (auto id : t.live) live.push_back(instance_label(trace, id));
    json archived = json::array();
    for (auto id : t.archived) {
        const auto& inst = trace.instances.at(id.value);
        archived.push_back({{"instance", instance_label(trace, id)},
                            {"id", inst.id.value},
                            {"event", trace.event_names.at(inst.event.value)},
                            {"generation", inst.generation},
                            {"start", inst.start},
                            {"end", inst.end.value_or(0)},
                            {"reason", to_string(inst.reason.value_or(ArchiveReason::Completed))}});
    }
    json choices = json::array();
    for (const auto& c : t.choices)
        choices.push_back({{"source", c.source ? json(instance_label(trace, *c.source)) : json(nullptr)},
                           {"group", c.group},
                           {"chosen", trace.event_names.at(c.chosen.value)}});
    json terminals = json::array();
    for (auto e : t.stream_ends) terminals.push_back(trace.event_names.at(e.value));
    return {{"tick", t.tick}, {"live", live}, {"archived", archived}, {"choices", choices}, {"terminals", terminals}};
}

json statement_json(const BehaviorStatement& st) {
    return std::visit(
        [](const auto& d) -> json {
            using T = std::decay_t<decltype(d)>;
            json j;
            if constexpr (std::is_same_v<T, SequenceDecl>) {
                j = {{"kind", "sequence"}, {"from", d.from}, {"to", d.to}};
            } else if constexpr (std::is_same_v<T, RepeatDecl>) {
                j = {{"kind", "repeat"}, {"from", d.from}, {"to", d.to}};
                if (d.bound) j["bound"] = *d.bound;
            } else if constexpr (std::is_same_v<T, ChoiceDecl>) {
                j = {{"kind", "choice"}, {"members", d.alternatives}};
                if (d.from) j["from"] = *d.from;
            } else {
                j = {{"kind", "concurrent"}, {"members", d.branches}};
                if (d.from) j["from"] = *d.from;
            }
            return j;
        },
        st.decl);
}

BehaviorStatement statement_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    auto from = [&]() -> std::optional<std::string> {
        if (!j.contains("from")) return std::nullopt;
        return j.at("from").get<std::string>();
    };
    if (kind == "sequence") return {SequenceDecl{j.at("from").get<std::string>(), j.at("to").get<std::string>()}, {}};
    if (kind == "repeat") {
        std::optional<std::uint32_t> bound;
        if (j.contains("bound")) bound = j.at("bound").get<std::uint32_t>();
        return {RepeatDecl{j.at("from").get<std::string>(), j.at("to").get<std::string>(), bound}, {}};
    }
    const auto members = j.at("members").get<std::vector<std::string>>();
    if (kind == "choice") return {ChoiceDecl{from(), members}, {}};
    if (kind == "concurrent") return {ConcurrentDecl{from(), members}, {}};
    throw ImportError("unknown behavior statement kind '" + kind + "'");
}

}  // namespace

std::string export_dot(const StaticModel& model, std::span<const Event> events, const BehaviorGraph* behavior) {
    std::ostringstream os;
    os << "digraph tm {\n";
    if (!model.empty()) {
        os << "  compound=true;\n  node [shape=box];\n";
        std::ostringstream body;
        write_machine(body, model, model.root(), 1);
        os << body.str();
        for (const auto& f : model.flows()) {
            os << "  " << quote(stage_node(f.from)) << " -> " << quote(stage_node(f.to));
            write_flow_attrs(os, f);
        }
        for (const auto& t : model.triggers())
            os << "  " << quote(stage_node(t.from)) << " -> " << quote(stage_node(t.to)) << " [style=dashed];\n";
    }
    os << "}\n";

    if (!events.empty()) {
        os << "digraph regions {\n  node [shape=box];\n";
        for (std::size_t i = 0; i < events.size(); ++i) {
            const auto& e = events[i];
            const auto prefix = e.name + ":";
            os << "  subgraph " << quote("cluster_" + e.name) << " {\n";
            os << "    label=" << quote(e.label ? e.name + ": " + *e.label : e.name) << ";\n";
            os << "    style=filled;\n    fillcolor=" << quote(kPalette[i % kPalette.size()]) << ";\n";
            for (auto s : e.region.stages)
                os << "    " << quote(prefix + stage_node(s)) << " [label=" << quote(model.path(s)) << "];\n";
            for (auto fid : e.region.flows) {
                const auto& f = model.flow(fid);
                os << "    " << quote(prefix + stage_node(f.from)) << " -> " << quote(prefix + stage_node(f.to));
                write_flow_attrs(os, f);
            }
            for (auto tid : e.region.triggers) {
                const auto& t = model.trigger(tid);
                os << "    " << quote(prefix + stage_node(t.from)) << " -> " << quote(prefix + stage_node(t.to))
                   << " [style=dashed];\n";
            }
            os << "  }\n";
        }
        os << "}\n";
    }

    if (behavior) {
        os << "digraph behavior {\n  node [shape=ellipse];\n";
        bool start_node = false;
        for (const auto& e : behavior->events()) {
            auto label = e.label ? e.name + "\n" + *e.label : e.name;
            if (e.time.duration) label += "\n(" + std::to_string(*e.time.duration) + " ticks)";
            os << "  " << quote(e.name) << " [label=" << quote(label) << "];\n";
        }
        for (const auto& edge : behavior->edges()) {
            if (!edge.from && !start_node) {
                os << "  \"start\" [shape=point];\n";
                start_node = true;
            }
            const auto from = edge.from ? behavior->event(*edge.from).name : std::string("start");
            os << "  " << quote(from) << " -> " << quote(behavior->event(edge.to).name);
            switch (edge.kind) {
                case BehaviorEdgeKind::Sequence: os << ";\n"; break;
                case BehaviorEdgeKind::Choice:
                    os << " [style=dashed, label=" << quote("choice " + std::to_string(*edge.group)) << "];\n";
                    break;
                case BehaviorEdgeKind::Concurrent:
                    os << " [style=bold, label=" << quote("concurrent " + std::to_string(*edge.group)) << "];\n";
                    break;
                case BehaviorEdgeKind::Repeat:
                    os << " [style=dotted, label="
                       << quote(edge.bound ? "repeat x" + std::to_string(*edge.bound) : std::string("repeat"))
                       << "];\n";
                    break;
            }
        }
        os << "}\n";
    }
    return os.str();
}

std::string model_to_json(const ModelDocument& document, bool include_regions, bool include_behavior) {
    const auto& model = document.model;
    json machines = json::array();
    for (const auto& m : model.machines())
        machines.push_back({{"id", m.id.value},
                            {"name", m.name},
                            {"parent", m.parent ? json(m.parent->value) : json(nullptr)}});
    json stages = json::array();
    for (const auto& s : model.stages())
        stages.push_back({{"id", s.id.value}, {"machine", s.owner.value}, {"kind", to_string(s.kind)}});
    json flows = json::array();
    for (const auto& f : model.flows()) {
        json j = {{"id", f.id.value}, {"from", f.from.value}, {"to", f.to.value}};
        if (f.thing) j["thing"] = *f.thing;
        flows.push_back(std::move(j));
    }
    json triggers = json::array();
    for (const auto& t : model.triggers())
        triggers.push_back({{"id", t.id.value}, {"from", t.from.value}, {"to", t.to.value}});
    json storages = json::array();
    for (const auto& s : model.storages())
        storages.push_back({{"id", s.id.value}, {"machine", s.owner.value}, {"thing", s.thing}});

    json out = {{"schema", "tm-model/1"}, {"root", model.root().value}, {"machines", machines},
                {"stages", stages},      {"flows", flows},               {"triggers", triggers},
                {"storages", storages}};

    if (include_regions && !document.regions.empty()) {
        json regions = json::array();
        for (const auto& r : document.regions) {
            json ids = json::array();
            for (auto s : r.stages) ids.push_back(s.value);
            regions.push_back({{"name", r.name}, {"stages", ids}});
        }
        out["regions"] = regions;
        json events = json::array();
        for (const auto& e : document.events) {
            json j = {{"name", e.name}, {"region", e.region}};
            if (e.label) j["label"] = *e.label;
            if (e.duration) j["duration"] = *e.duration;
            events.push_back(std::move(j));
        }
        if (!events.empty()) out["events"] = events;
    }
    if (include_behavior && !document.behavior.empty()) {
        json behavior = json::array();
        for (const auto& st : document.behavior) behavior.push_back(statement_json(st));
        out["behavior"] = behavior;
    }
    return out.dump(2) + "\n";
}

ModelDocument import_json(std::string_view text) {
    try {
        const auto j = json::parse(text);
        if (j.at("schema").get<std::string>() != "tm-model/1") throw ImportError("unsupported schema");
        if (j.at("root").get<std::uint32_t>() != 0) throw ImportError("root machine must have id 0");

        StaticModel model;
        const auto& machines = j.at("machines");
        for (std::size_t i = 0; i < machines.size(); ++i) {
            const auto& m = machines[i];
            if (m.at("id").get<std::size_t>() != i) throw ImportError("machine ids must be dense and ordered");
            if (i == 0) {
                if (!m.at("parent").is_null()) throw ImportError("the root machine has no parent");
                continue;
            }
            if (m.at("parent").is_null()) throw ImportError("machine " + std::to_string(i) + " has no parent");
            const auto parent = m.at("parent").get<std::uint32_t>();
            if (parent >= i) throw ImportError("machine " + std::to_string(i) + " is declared before its parent");
            model.add_machine(m.at("name").get<std::string>(), MachineId{parent});
        }
        auto checked = [](const json& item, std::size_t i, const char* what) {
            if (item.at("id").get<std::size_t>() != i)
                throw ImportError(std::string(what) + " ids must be dense and ordered");
        };
        const auto& stages = j.at("stages");
        for (std::size_t i = 0; i < stages.size(); ++i) {
            checked(stages[i], i, "stage");
            const auto kind = parse_action_kind(stages[i].at("kind").get<std::string>());
            if (!kind) throw ImportError("unknown stage kind");
            model.add_stage(MachineId{stages[i].at("machine").get<std::uint32_t>()}, *kind);
        }
        const auto& flows = j.at("flows");
        for (std::size_t i = 0; i < flows.size(); ++i) {
            checked(flows[i], i, "flow");
            std::optional<std::string> thing;
            if (flows[i].contains("thing")) thing = flows[i].at("thing").get<std::string>();
            model.add_flow(StageId{flows[i].at("from").get<std::uint32_t>()},
                           StageId{flows[i].at("to").get<std::uint32_t>()}, thing);
        }
        const auto& triggers = j.at("triggers");
        for (std::size_t i = 0; i < triggers.size(); ++i) {
            checked(triggers[i], i, "trigger");
            model.add_trigger(StageId{triggers[i].at("from").get<std::uint32_t>()},
                              StageId{triggers[i].at("to").get<std::uint32_t>()});
        }
        const auto& storages = j.at("storages");
        for (std::size_t i = 0; i < storages.size(); ++i) {
            checked(storages[i], i, "storage");
            model.add_storage(MachineId{storages[i].at("machine").get<std::uint32_t>()},
                              storages[i].at("thing").get<std::string>());
        }
        model.freeze();

        auto doc = ModelDocument::from_model(std::move(model));
        if (j.contains("regions"))
            for (const auto& r : j.at("regions")) {
                RegionDecl decl{r.at("name").get<std::string>(), {}, std::nullopt};
                for (const auto& s : r.at("stages")) {
                    StageId id{s.get<std::uint32_t>()};
                    if (!doc.model.has_stage(id)) throw ImportError("region '" + decl.name + "' names an unknown stage");
                    decl.stages.push_back(id);
                }
                doc.regions.push_back(std::move(decl));
            }
        if (j.contains("events"))
            for (const auto& e : j.at("events")) {
                EventDecl decl{e.at("name").get<std::string>(), std::nullopt, e.at("region").get<std::string>(),
                               std::nullopt, std::nullopt};
                if (e.contains("label")) decl.label = e.at("label").get<std::string>();
                if (e.contains("duration")) decl.duration = e.at("duration").get<std::uint32_t>();
                doc.events.push_back(std::move(decl));
            }
        if (j.contains("behavior"))
            for (const auto& st : j.at("behavior")) doc.behavior.push_back(statement_from_json(st));
        return doc;
    } catch (const json::exception& e) {
        throw ImportError(std::string("malformed model JSON: ") + e.what());
    } catch (const ModelError& e) {
        throw ImportError(std::string("inconsistent model JSON: ") + e.what());
    }
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {
std::string hex(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}
}  // namespace

std::string model_fingerprint(const ModelDocument& document) {
    return hex(fnv1a64(model_to_json(document, false, false)));
}

std::string behavior_fingerprint(const BehaviorGraph& behavior) {
    json events = json::array();
    for (const auto& e : behavior.events()) {
        json stages = json::array();
        for (auto s : e.region.stages) stages.push_back(s.value);
        events.push_back({{"name", e.name}, {"ticks", e.time.ticks()}, {"stages", stages}});
    }
    json edges = json::array();
    for (const auto& e : behavior.edges())
        edges.push_back({{"from", e.from ? json(e.from->value) : json(nullptr)},
                         {"to", e.to.value},
                         {"kind", to_string(e.kind)},
                         {"group", e.group ? json(*e.group) : json(nullptr)},
                         {"bound", e.bound ? json(*e.bound) : json(nullptr)}});
    return hex(fnv1a64(json{{"events", events}, {"edges", edges}}.dump()));
}

std::string trace_to_json(const ModelDocument& document, const BehaviorGraph& behavior, const SimTrace& trace) {
    json ticks = json::array();
    for (const auto& t : trace.ticks) ticks.push_back(tick_json(trace, t));
    json out = {{"schema", "tm-trace/1"},
                {"model_hash", model_fingerprint(document)},
                {"behavior_hash", behavior_fingerprint(behavior)},
                {"policy", trace.policy.describe()},
                {"seed", trace.policy.seed},
                {"horizon", trace.horizon},
                {"initial", tick_json(trace, trace.initial)},
                {"ticks", ticks},
                {"termination", to_string(trace.termination)}};
    return out.dump(2) + "\n";
}

}  // namespace thimac
