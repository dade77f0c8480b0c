#include <algorithm>
#include <sstream>

#include "thimac/dsl.hpp"

namespace thimac {

namespace {

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out + '"';
}

std::string label(std::string_view s) { return is_identifier(s) ? std::string(s) : quote(s); }

void write_machine(std::ostream& os, const StaticModel& model, MachineId id, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const auto& m = model.machine(id);
    os << pad << "machine " << m.name << " {\n";
    for (auto kind : kAllActionKinds)
        if (model.stage_of(id, kind)) os << pad << "  stage " << to_string(kind) << ";\n";
    for (auto child : m.children) {
        if (!m.stages.empty() || child != m.children.front()) os << '\n';
        write_machine(os, model, child, indent + 1);
    }
    os << pad << "}\n";
}

template <class T>
void join(std::ostream& os, const std::vector<T>& items, std::string_view sep) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) os << sep;
        os << items[i];
    }
}

void write_statement(std::ostream& os, const BehaviorStatement& stmt) {
    os << "  ";
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SequenceDecl>) {
                os << d.from << " -> " << d.to;
            } else if constexpr (std::is_same_v<T, ChoiceDecl>) {
                if (d.from) os << *d.from << " -> ";
                os << "choice { ";
                join(os, d.alternatives, " | ");
                os << " }";
            } else if constexpr (std::is_same_v<T, ConcurrentDecl>) {
                if (d.from) os << *d.from << " -> ";
                os << "concurrent { ";
                join(os, d.branches, ", ");
                os << " }";
            } else {
                os << "repeat " << d.from;
                if (d.to != d.from) os << " -> " << d.to;
                if (d.bound) os << " bound " << *d.bound;
            }
        },
        stmt.decl);
    os << ";\n";
}

}  // namespace

std::string format(const ModelDocument& document) {
    const auto& model = document.model;
    std::ostringstream os;
    bool section_open = false;
    auto section = [&] {
        if (section_open) os << '\n';
        section_open = true;
    };

    for (auto top : model.machine(model.root()).children) {
        section();
        write_machine(os, model, top, 0);
    }

    if (!model.flows().empty() || !model.triggers().empty()) {
        section();
        for (const auto& f : model.flows()) {
            os << "flow ";
            if (f.thing) os << label(*f.thing) << ' ';
            os << ": " << model.path(f.from) << " -> " << model.path(f.to) << ";\n";
        }
        for (const auto& t : model.triggers())
            os << "trigger : " << model.path(t.from) << " -> " << model.path(t.to) << ";\n";
    }

    if (!model.storages().empty()) {
        section();
        for (const auto& s : model.storages()) {
            // Storage on the root machine has no path; documents only attach storage to declared machines.
            os << "storage " << label(s.thing) << " in " << model.path(s.owner) << ";\n";
        }
    }

    if (!document.regions.empty()) {
        section();
        for (const auto& r : document.regions) {
            os << "region " << r.name << " = {";
            for (std::size_t i = 0; i < r.stages.size(); ++i) os << (i ? ", " : " ") << model.path(r.stages[i]);
            os << (r.stages.empty() ? "};\n" : " };\n");
        }
    }

    if (!document.events.empty()) {
        section();
        for (const auto& e : document.events) {
            os << "event " << e.name;
            if (e.label) os << ' ' << quote(*e.label);
            os << " on " << e.region;
            if (e.duration) os << " duration " << *e.duration;
            os << ";\n";
        }
    }

    if (!document.behavior.empty()) {
        section();
        os << "behavior {\n";
        for (const auto& stmt : document.behavior) write_statement(os, stmt);
        os << "}\n";
    }
    return os.str();
}

}  // namespace thimac
