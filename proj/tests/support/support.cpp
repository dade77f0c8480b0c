#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "thimac/dsl.hpp"

namespace thimac::testing {

std::string corpus_path(const std::string& name) { return std::string(THIMAC_CORPUS_DIR) + "/" + name; }

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ModelDocument load_corpus(const std::string& name) {
    auto result = parse(read_text(corpus_path(name)), name);
    if (!result.document) {
        std::ostringstream os;
        for (const auto& d : result.diagnostics) os << d << "\n";
        throw std::runtime_error("corpus file " + name + " does not parse:\n" + os.str());
    }
    return std::move(*result.document);
}

namespace {

const char* kind_name(ActionKind k) {
    switch (k) {
        case ActionKind::Create: return "create";
        case ActionKind::Process: return "process";
        case ActionKind::Release: return "release";
        case ActionKind::Transfer: return "transfer";
        case ActionKind::Receive: return "receive";
    }
    return "?";
}

std::string machine_path(const StaticModel& m, MachineId id) {
    std::vector<std::string> parts;
    for (auto cur = id; m.machine(cur).parent; cur = *m.machine(cur).parent) parts.push_back(m.machine(cur).name);
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) out += (out.empty() ? "" : ".") + *it;
    return out;
}

std::string stage_path(const StaticModel& m, StageId id) {
    const auto& s = m.stage(id);
    return machine_path(m, s.owner) + ":" + kind_name(s.kind);
}

std::string opt(const std::optional<std::string>& s) { return s ? "'" + *s + "'" : "-"; }

template <class T>
std::string opt_num(const std::optional<T>& v) {
    return v ? std::to_string(*v) : "-";
}

std::string statement_text(const BehaviorStatement& st) {
    return std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            std::string s;
            if constexpr (std::is_same_v<T, SequenceDecl>) {
                s = "seq " + d.from + " " + d.to;
            } else if constexpr (std::is_same_v<T, RepeatDecl>) {
                s = "rep " + d.from + " " + d.to + " " + opt_num(d.bound);
            } else if constexpr (std::is_same_v<T, ChoiceDecl>) {
                s = "choice " + opt(d.from);
                for (const auto& a : d.alternatives) s += " " + a;
            } else {
                s = "conc " + opt(d.from);
                for (const auto& a : d.branches) s += " " + a;
            }
            return s;
        },
        st.decl);
}

}  // namespace

std::string signature(const ModelDocument& doc) {
    const auto& m = doc.model;
    std::vector<std::string> machines, stages, flows, triggers, storages;
    for (const auto& x : m.machines()) machines.push_back(machine_path(m, x.id));
    for (const auto& s : m.stages()) stages.push_back(stage_path(m, s.id));
    for (const auto& f : m.flows())
        flows.push_back(stage_path(m, f.from) + ">" + stage_path(m, f.to) + "|" + opt(f.thing));
    for (const auto& t : m.triggers()) triggers.push_back(stage_path(m, t.from) + ">" + stage_path(m, t.to));
    for (const auto& s : m.storages()) storages.push_back(s.thing + "@" + machine_path(m, s.owner));
    for (auto* v : {&machines, &stages, &flows, &triggers, &storages}) std::sort(v->begin(), v->end());

    std::ostringstream os;
    auto dump = [&](const char* title, const std::vector<std::string>& items) {
        os << title << ":\n";
        for (const auto& i : items) os << "  " << i << "\n";
    };
    dump("machines", machines);
    dump("stages", stages);
    dump("flows", flows);
    dump("triggers", triggers);
    dump("storages", storages);
    os << "regions:\n";
    for (const auto& r : doc.regions) {
        std::set<std::string> paths;
        for (auto s : r.stages) paths.insert(stage_path(m, s));
        os << "  " << r.name << " =";
        for (const auto& p : paths) os << " " << p;
        os << "\n";
    }
    os << "events:\n";
    for (const auto& e : doc.events)
        os << "  " << e.name << " " << opt(e.label) << " on " << e.region << " " << opt_num(e.duration) << "\n";
    os << "behavior:\n";
    for (const auto& st : doc.behavior) os << "  " << statement_text(st) << "\n";
    return os.str();
}

// ---- generators -----------------------------------------------------------

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(std::mt19937_64& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

constexpr ActionKind kKinds[] = {ActionKind::Create, ActionKind::Process, ActionKind::Release, ActionKind::Transfer,
                                 ActionKind::Receive};

std::string random_name(std::mt19937_64& rng, const std::string& prefix, int index) {
    static const char* const stems[] = {"", "-x", "_y", "-2b", "Q"};
    return prefix + std::to_string(index) + stems[uniform(rng, 0, 4)];
}

std::string random_label(std::mt19937_64& rng) {
    static const std::string alphabet =
        "abcdefghijklmnopqrstuvwxyz ABCXYZ0123456789.,;:{}()->|#=\"\\\t\n";
    std::string s;
    const int n = uniform(rng, 0, 16);
    for (int i = 0; i < n; ++i) s += alphabet[static_cast<std::size_t>(uniform(rng, 0, int(alphabet.size()) - 1))];
    return s;
}

}  // namespace

StaticModel random_model(std::mt19937_64& rng, const ModelShape& shape) {
    StaticModel m;
    const int machines = uniform(rng, 0, shape.max_machines);
    std::vector<int> depth{0};
    for (int i = 0; i < machines; ++i) {
        std::vector<MachineId> parents;
        for (std::size_t p = 0; p < depth.size(); ++p)
            if (depth[p] < shape.max_depth) parents.push_back(MachineId{static_cast<std::uint32_t>(p)});
        const auto parent = parents[static_cast<std::size_t>(uniform(rng, 0, int(parents.size()) - 1))];
        m.add_machine(random_name(rng, "m", i), parent);
        depth.push_back(depth[parent.value] + 1);
    }
    int budget = shape.max_stages;
    for (std::uint32_t i = 1; i < m.machines().size() && budget > 0; ++i)
        for (auto k : kKinds)
            if (budget > 0 && coin(rng, 0.55)) {
                m.add_stage(MachineId{i}, k);
                --budget;
            }
    const int n = static_cast<int>(m.stages().size());
    if (n > 0) {
        auto stage = [&] { return StageId{static_cast<std::uint32_t>(uniform(rng, 0, n - 1))}; };
        const int flows = uniform(rng, 0, shape.max_flows);
        for (int i = 0; i < flows; ++i) {
            std::optional<std::string> thing;
            if (coin(rng, 0.4)) thing = coin(rng) ? random_name(rng, "t", i) : random_label(rng);
            m.add_flow(stage(), stage(), thing);
        }
        const int triggers = uniform(rng, 0, shape.max_triggers);
        for (int i = 0; i < triggers; ++i) m.add_trigger(stage(), stage());
    }
    if (m.machines().size() > 1) {
        const int storages = uniform(rng, 0, shape.max_storages);
        for (int i = 0; i < storages; ++i)
            m.add_storage(MachineId{static_cast<std::uint32_t>(uniform(rng, 1, int(m.machines().size()) - 1))},
                          coin(rng) ? random_name(rng, "s", i) : random_label(rng));
    }
    return m;
}

ModelDocument random_document(std::mt19937_64& rng) {
    ModelShape shape;
    shape.max_stages = 30;
    shape.max_flows = 30;
    auto doc = ModelDocument::from_model(random_model(rng, shape));
    const int n = static_cast<int>(doc.model.stages().size());
    const int regions = uniform(rng, 0, 5);
    for (int i = 0; i < regions; ++i) {
        RegionDecl r{random_name(rng, "r", i), {}, std::nullopt};
        if (n > 0) {
            const int k = uniform(rng, 0, std::min(n, 8));
            for (int j = 0; j < k; ++j) r.stages.push_back(StageId{static_cast<std::uint32_t>(uniform(rng, 0, n - 1))});
        }
        doc.regions.push_back(std::move(r));
    }
    if (!doc.regions.empty()) {
        const int events = uniform(rng, 0, 6);
        for (int i = 0; i < events; ++i) {
            EventDecl e{random_name(rng, "E", i), std::nullopt,
                        doc.regions[static_cast<std::size_t>(uniform(rng, 0, regions - 1))].name, std::nullopt,
                        std::nullopt};
            if (coin(rng)) e.label = random_label(rng);
            if (coin(rng, 0.3)) e.duration = static_cast<std::uint32_t>(uniform(rng, 0, 5));
            doc.events.push_back(std::move(e));
        }
    }
    const int ne = static_cast<int>(doc.events.size());
    if (ne > 0) {
        auto ev = [&] { return doc.events[static_cast<std::size_t>(uniform(rng, 0, ne - 1))].name; };
        const int statements = uniform(rng, 0, 6);
        for (int i = 0; i < statements; ++i) {
            BehaviorStatement st;
            switch (uniform(rng, 0, 3)) {
                case 0: st.decl = SequenceDecl{ev(), ev()}; break;
                case 1: {
                    ChoiceDecl c{coin(rng) ? std::optional(ev()) : std::nullopt, {}};
                    for (int j = uniform(rng, 1, 3); j > 0; --j) c.alternatives.push_back(ev());
                    st.decl = c;
                    break;
                }
                case 2: {
                    ConcurrentDecl c{coin(rng) ? std::optional(ev()) : std::nullopt, {}};
                    for (int j = uniform(rng, 1, 3); j > 0; --j) c.branches.push_back(ev());
                    st.decl = c;
                    break;
                }
                default: {
                    const auto from = ev();
                    RepeatDecl r{from, coin(rng) ? from : ev(), std::nullopt};
                    if (coin(rng)) r.bound = static_cast<std::uint32_t>(uniform(rng, 0, 4));
                    st.decl = r;
                }
            }
            doc.behavior.push_back(std::move(st));
        }
    }
    doc.model.freeze();
    return doc;
}

Scenario random_scenario(std::mt19937_64& rng, int max_events) {
    const int n = uniform(rng, 1, max_events);
    StaticModel model;
    std::vector<std::string> names;
    std::vector<std::vector<StageId>> regions;
    for (int i = 0; i < n; ++i) {
        const auto m = model.add_machine("m" + std::to_string(i));
        const auto t = model.add_stage(m, ActionKind::Transfer);
        const auto r = model.add_stage(m, ActionKind::Receive);
        const auto p = model.add_stage(m, ActionKind::Process);
        model.add_flow(t, r);
        model.add_flow(r, p);
        names.push_back("E" + std::to_string(i));
        regions.push_back({t, r, p});
    }
    model.freeze();
    auto doc = ModelDocument::from_model(std::move(model));
    std::vector<Event> events;
    for (int i = 0; i < n; ++i) {
        const auto duration = static_cast<std::uint32_t>(uniform(rng, 1, 3));
        doc.regions.push_back({"r" + std::to_string(i), regions[static_cast<std::size_t>(i)], std::nullopt});
        doc.events.push_back({names[static_cast<std::size_t>(i)], std::nullopt, "r" + std::to_string(i), duration,
                              std::nullopt});
        events.push_back(define_event(doc.model, names[static_cast<std::size_t>(i)],
                                      subdiagram(doc.model, regions[static_cast<std::size_t>(i)]), duration));
    }

    // Forward edges only go from lower to higher index, so they are acyclic.
    std::vector<std::vector<bool>> reach(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
    auto link = [&](int a, int b) { reach[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true; };
    auto later = [&](int from, int count) {
        std::vector<std::string> out;
        for (int j = 0; j < count && from + 1 < n; ++j) {
            const int t = uniform(rng, from + 1, n - 1);
            if (std::find(out.begin(), out.end(), names[static_cast<std::size_t>(t)]) == out.end())
                out.push_back(names[static_cast<std::size_t>(t)]);
        }
        return out;
    };
    auto index_of = [&](const std::string& name) {
        return static_cast<int>(std::find(names.begin(), names.end(), name) - names.begin());
    };

    std::vector<BehaviorStatement> statements;
    const int forward = uniform(rng, 0, 2 * n);
    for (int i = 0; i < forward && n > 1; ++i) {
        const int a = uniform(rng, 0, n - 2);
        const int roll = uniform(rng, 0, 9);
        if (roll < 6) {
            const int b = uniform(rng, a + 1, n - 1);
            statements.push_back({SequenceDecl{names[static_cast<std::size_t>(a)], names[static_cast<std::size_t>(b)]}, {}});
            link(a, b);
        } else {
            const bool sourced = coin(rng, 0.8);
            auto members = later(a, uniform(rng, 2, 4));
            if (roll < 8) {
                if (members.size() < 2) continue;
                statements.push_back(
                    {ChoiceDecl{sourced ? std::optional(names[static_cast<std::size_t>(a)]) : std::nullopt, members}, {}});
            } else {
                if (members.empty()) continue;
                statements.push_back(
                    {ConcurrentDecl{sourced ? std::optional(names[static_cast<std::size_t>(a)]) : std::nullopt, members},
                     {}});
            }
            if (sourced)
                for (const auto& mname : members) link(a, index_of(mname));
        }
    }
    // Close the reachability relation, then add repeats along it.
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] &&
                    reach[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)])
                    link(i, j);
    const int repeats = uniform(rng, 0, 3);
    for (int i = 0; i < repeats; ++i) {
        const int a = uniform(rng, 0, n - 1);
        std::vector<int> targets{a};
        for (int b = 0; b < a; ++b)
            if (reach[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)]) targets.push_back(b);
        const int b = targets[static_cast<std::size_t>(uniform(rng, 0, int(targets.size()) - 1))];
        std::optional<std::uint32_t> bound;
        if (coin(rng, 0.6)) bound = static_cast<std::uint32_t>(uniform(rng, 1, 4));
        statements.push_back(
            {RepeatDecl{names[static_cast<std::size_t>(a)], names[static_cast<std::size_t>(b)], bound}, {}});
    }
    doc.behavior = statements;
    return Scenario{std::move(doc), build_behavior(std::move(events), statements)};
}

ChoicePolicy random_policy(std::mt19937_64& rng, const BehaviorGraph& behavior) {
    switch (uniform(rng, 0, 2)) {
        case 0: return ChoicePolicy::first_declared();
        case 1: return ChoicePolicy::seeded_random(rng());
        default: {
            // Names drawn from choice alternatives; a stale pick is possible
            // and exercises the mismatch path.
            std::vector<std::string> pool;
            for (const auto& g : behavior.groups())
                if (g.kind == BehaviorEdgeKind::Choice)
                    for (auto e : g.members) pool.push_back(behavior.event(e).name);
            std::vector<std::string> script;
            const int len = pool.empty() ? 0 : uniform(rng, 0, 6);
            for (int i = 0; i < len; ++i) script.push_back(pool[static_cast<std::size_t>(uniform(rng, 0, int(pool.size()) - 1))]);
            return ChoicePolicy::scripted(script);
        }
    }
}

// ---- oracles ----------------------------------------------------------------

std::string expected_flow_code(ActionKind from, ActionKind to, bool same_machine) {
    static const std::set<std::pair<std::string, std::string>> inside = {
        {"transfer", "receive"}, {"receive", "process"}, {"receive", "release"}, {"process", "release"},
        {"process", "create"},   {"create", "release"},  {"create", "process"},  {"release", "transfer"},
    };
    static const std::set<std::pair<std::string, std::string>> across = {
        {"transfer", "transfer"},
        {"transfer", "receive"},
    };
    const std::pair<std::string, std::string> key{kind_name(from), kind_name(to)};
    if (same_machine) return inside.count(key) ? "" : "F1";
    return across.count(key) ? "" : "F2";
}

bool brute_connected(const StaticModel& model, const std::set<StageId>& stages) {
    if (stages.empty()) return true;
    std::set<StageId> seen{*stages.begin()};
    bool grew = true;
    while (grew) {
        grew = false;
        auto visit = [&](StageId a, StageId b) {
            if (!stages.count(a) || !stages.count(b)) return;
            if (seen.count(a) && !seen.count(b)) grew = seen.insert(b).second || grew;
            if (seen.count(b) && !seen.count(a)) grew = seen.insert(a).second || grew;
        };
        for (const auto& f : model.flows()) visit(f.from, f.to);
        for (const auto& t : model.triggers()) visit(t.from, t.to);
    }
    return seen.size() == stages.size();
}

std::vector<std::vector<bool>> brute_closure(const StaticModel& model) {
    const std::size_t n = model.stages().size();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
    for (const auto& f : model.flows()) r[f.from.value][f.to.value] = true;
    for (const auto& t : model.triggers()) r[t.from.value][t.to.value] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (r[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (r[k][j]) r[i][j] = true;
    return r;
}

std::vector<EventId> brute_topological_order(const BehaviorGraph& behavior) {
    const auto n = behavior.events().size();
    std::vector<EventId> order;
    std::vector<bool> placed(n, false);
    while (order.size() < n) {
        bool progressed = false;
        for (std::size_t i = 0; i < n && !progressed; ++i) {
            if (placed[i]) continue;
            bool ready = true;
            for (const auto& e : behavior.edges())
                if (e.from && e.kind != BehaviorEdgeKind::Repeat && e.to.value == i && !placed[e.from->value])
                    ready = false;
            if (ready) {
                placed[i] = true;
                order.push_back(EventId{static_cast<std::uint32_t>(i)});
                progressed = true;
            }
        }
        if (!progressed) throw std::logic_error("forward edges contain a cycle");
    }
    return order;
}

std::vector<std::string> check_state(const SimState& s) {
    std::vector<std::string> v;
    auto fail = [&](const std::string& what) { v.push_back("tick " + std::to_string(s.tick) + ": " + what); };
    std::set<std::uint32_t> live, record;
    std::set<std::uint32_t> live_events;
    for (const auto& i : s.live) {
        live.insert(i.id.value);
        if (!live_events.insert(i.event.value).second) fail("two live instances of one event");
        if (i.phase == Phase::Archived) fail("live instance marked archived");
        if (i.start > s.tick) fail("live instance starts in the future");
    }
    for (const auto& r : s.record.entries()) {
        record.insert(r.id.value);
        if (r.phase != Phase::Archived || !r.end) fail("record entry not archived");
        else if (*r.end < r.start) fail("record entry ends before it starts");
    }
    for (auto id : live)
        if (record.count(id)) fail("instance " + std::to_string(id) + " is both live and recorded");
    const auto total = s.instances.size();
    if (live.size() + record.size() != total) fail("live and record do not account for every instance");
    for (std::uint32_t id = 0; id < total; ++id)
        if (!live.count(id) && !record.count(id)) fail("instance " + std::to_string(id) + " vanished");
    const auto entries = s.record.entries();
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (std::pair(*entries[i].end, entries[i].id) <= std::pair(*entries[i - 1].end, entries[i - 1].id))
            fail("record out of order");
    return v;
}

std::vector<std::string> check_step(const SimState& before, const SimState& after) {
    auto v = check_state(after);
    auto fail = [&](const std::string& what) { v.push_back("tick " + std::to_string(after.tick) + ": " + what); };
    if (after.tick != before.tick + 1) fail("tick did not advance by one");
    const auto a = before.record.entries();
    const auto b = after.record.entries();
    if (b.size() < a.size()) fail("record shrank");
    else
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!(a[i] == b[i])) fail("record entry " + std::to_string(i) + " changed");
    if (after.instances.size() < before.instances.size()) fail("instances were forgotten");
    // Everything live before is still somewhere.
    for (const auto& l : before.live) {
        const bool still_live = std::any_of(after.live.begin(), after.live.end(),
                                            [&](const EventInstance& x) { return x.id == l.id; });
        const bool recorded =
            std::any_of(b.begin(), b.end(), [&](const EventInstance& x) { return x.id == l.id; });
        if (!still_live && !recorded) fail("instance " + std::to_string(l.id.value) + " lost");
        if (still_live) {
            const auto& now = *std::find_if(after.live.begin(), after.live.end(),
                                            [&](const EventInstance& x) { return x.id == l.id; });
            if (now.phase != Phase::Processing) fail("surviving instance did not move to processing");
        }
    }
    return v;
}

std::vector<std::string> check_cutoff(const BehaviorGraph& behavior, const std::vector<EventInstance>& instances) {
    std::vector<std::string> v;
    for (const auto& e : behavior.edges()) {
        if (e.kind != BehaviorEdgeKind::Sequence || !e.from) continue;
        for (const auto& ib : instances) {
            if (ib.event != e.to) continue;
            for (const auto& ia : instances) {
                if (ia.event != *e.from || ia.start >= ib.start) continue;
                if (!ia.end || *ia.end > ib.start)
                    v.push_back(behavior.event(ia.event).name + "#" + std::to_string(ia.generation) +
                                " outlives the eruption of " + behavior.event(ib.event).name + "#" +
                                std::to_string(ib.generation) + " at tick " + std::to_string(ib.start));
            }
        }
    }
    return v;
}

std::vector<std::string> check_replacement(const BehaviorGraph& behavior,
                                           const std::vector<EventInstance>& instances) {
    std::vector<std::string> v;
    std::map<std::uint32_t, std::vector<const EventInstance*>> by_event;
    for (const auto& i : instances) by_event[i.event.value].push_back(&i);
    for (auto& [event, list] : by_event) {
        std::sort(list.begin(), list.end(),
                  [](const EventInstance* a, const EventInstance* b) { return a->generation < b->generation; });
        const auto& name = behavior.event(EventId{event}).name;
        for (std::size_t g = 0; g < list.size(); ++g) {
            if (list[g]->generation != g + 1) v.push_back(name + ": generations are not consecutive");
            if (g + 1 < list.size() && (!list[g]->end || *list[g]->end > list[g + 1]->start))
                v.push_back(name + "#" + std::to_string(g + 1) + " not archived before the next generation starts");
        }
    }
    return v;
}

}  // namespace thimac::testing
