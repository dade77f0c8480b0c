#include "thimac/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "thimac/dsl.hpp"
#include "thimac/eventizer.hpp"
#include "thimac/export.hpp"
#include "thimac/simulator.hpp"
#include "thimac/validator.hpp"

namespace thimac {

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Writes through a sibling temporary and renames it into place, so a
/// failure never leaves a partial file behind.
bool write_atomically(const std::string& path, const std::string& text, std::ostream& err) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!(out << text) || !out.flush()) {
            err << "error: cannot write " << path << "\n";
            std::error_code ec;
            fs::remove(tmp, ec);
            return false;
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        err << "error: cannot write " << path << ": " << ec.message() << "\n";
        fs::remove(tmp, ec);
        return false;
    }
    return true;
}

void print(std::ostream& err, std::span<const Diagnostic> diagnostics) {
    for (const auto& d : diagnostics) err << d << "\n";
}

struct Loaded {
    std::optional<ModelDocument> document;
    std::vector<Diagnostic> diagnostics;
};

Loaded load(const std::string& path, std::ostream& err) {
    auto text = read_file(path);
    if (!text) {
        err << "error: cannot read " << path << "\n";
        return {};
    }
    auto result = parse(*text, path);
    return {std::move(result.document), std::move(result.diagnostics)};
}

/// Parse, validate and eventize; diagnostics go to `err`.
struct Pipeline {
    std::optional<ModelDocument> document;
    std::optional<Eventization> eventization;
    bool errors = true;
};

Pipeline run_pipeline(const std::string& path, std::ostream& err) {
    Pipeline p;
    auto loaded = load(path, err);
    print(err, loaded.diagnostics);
    if (!loaded.document) return p;
    auto diagnostics = check_document(*loaded.document);
    print(err, diagnostics);
    auto ev = eventize(*loaded.document);
    print(err, ev.diagnostics);
    p.errors = has_errors(diagnostics) || has_errors(ev.diagnostics);
    p.document = std::move(loaded.document);
    p.eventization = std::move(ev);
    return p;
}

int cmd_parse(const std::string& file, std::ostream& out, std::ostream& err) {
    auto loaded = load(file, err);
    print(err, loaded.diagnostics);
    if (!loaded.document) return kFailed;
    const auto& m = loaded.document->model;
    out << file << ": " << m.user_machine_count() << " machines, " << m.stages().size() << " stages, "
        << m.flows().size() << " flows, " << m.triggers().size() << " triggers, " << loaded.document->regions.size()
        << " regions, " << loaded.document->events.size() << " events\n";
    return kOk;
}

int cmd_check(const std::string& file, std::ostream& out, std::ostream& err) {
    auto p = run_pipeline(file, err);
    if (p.errors) return kFailed;
    out << file << ": ok\n";
    return kOk;
}

int cmd_eventize(const std::string& file, std::ostream& out, std::ostream& err) {
    auto p = run_pipeline(file, err);
    if (p.errors) return kFailed;
    const auto& model = p.document->model;
    const auto& events = p.eventization->events;
    for (const auto& e : events) {
        out << "event " << e.name;
        if (e.label) out << " \"" << *e.label << "\"";
        out << " (" << e.time.ticks() << (e.time.ticks() == 1 ? " tick" : " ticks") << "):";
        for (auto s : e.region.stages) out << " " << model.path(s);
        out << "\n";
    }
    const auto report = coverage(events, model);
    out << "coverage: " << (model.stages().size() - report.uncovered.size()) << "/" << model.stages().size()
        << " stages covered\n";
    for (auto s : report.uncovered) out << "  uncovered " << model.path(s) << "\n";
    for (const auto& o : report.overlaps) {
        out << "  overlap " << model.path(o.stage) << ":";
        for (auto e : o.events) out << " " << events[e.value].name;
        out << "\n";
    }
    if (p.eventization->behavior) {
        const auto& b = *p.eventization->behavior;
        out << "initial:";
        for (auto e : b.initial_events()) out << " " << b.event(e).name;
        out << "\nterminal:";
        for (auto e : b.terminal_events()) out << " " << b.event(e).name;
        out << "\n";
    }
    return kOk;
}

struct SimulateArgs {
    std::string file;
    std::string policy = "first";
    std::uint64_t seed = 0;
    std::uint32_t horizon = 30;
    std::string trace;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    auto p = run_pipeline(args.file, err);
    if (p.errors) return kFailed;
    if (!p.eventization->behavior || p.eventization->events.empty()) {
        err << "error: " << args.file << " declares no events to simulate\n";
        return kFailed;
    }
    const auto& behavior = *p.eventization->behavior;
    try {
        const auto policy = ChoicePolicy::parse(args.policy, args.seed);
        const auto trace = run(behavior, policy, args.horizon);
        if (!args.trace.empty() && !write_atomically(args.trace, trace_to_json(*p.document, behavior, trace), err))
            return kFailed;
        out << "termination: " << to_string(trace.termination) << " at tick "
            << (trace.ticks.empty() ? 0 : trace.ticks.back().tick) << "\n";
        out << "instances: " << trace.instances.size() << "\n";
    } catch (const SimError& e) {
        err << "error: " << e.what() << "\n";
        return kFailed;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kOk;
}

int cmd_export(const std::string& file, const ExportConfig& config, std::ostream& out, std::ostream& err) {
    auto loaded = load(file, err);
    print(err, loaded.diagnostics);
    if (!loaded.document) return kFailed;
    const auto& doc = *loaded.document;

    std::string text;
    if (config.format == ExportFormat::Json) {
        text = model_to_json(doc, config.include_regions, config.include_behavior);
    } else {
        std::optional<Eventization> ev;
        if (config.include_regions || config.include_behavior) {
            ev = eventize(doc);
            print(err, ev->diagnostics);
            if (has_errors(ev->diagnostics)) return kFailed;
        }
        std::span<const Event> events;
        const BehaviorGraph* behavior = nullptr;
        if (ev && config.include_regions) events = ev->events;
        if (ev && config.include_behavior && ev->behavior && !ev->events.empty()) behavior = &*ev->behavior;
        text = export_dot(doc.model, events, behavior);
    }
    if (config.output.empty()) {
        out << text;
        return kOk;
    }
    return write_atomically(config.output, text, err) ? kOk : kFailed;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Thinging machine model toolkit", "tmc"};
    app.require_subcommand(1);

    std::string file;
    auto* parse_cmd = app.add_subcommand("parse", "Parse a .tm file");
    parse_cmd->add_option("file", file, "Model file")->required();

    auto* check_cmd = app.add_subcommand("check", "Parse and validate a .tm file");
    check_cmd->add_option("file", file, "Model file")->required();

    auto* eventize_cmd = app.add_subcommand("eventize", "List events and the region coverage report");
    eventize_cmd->add_option("file", file, "Model file")->required();

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run the behavior of a .tm file");
    simulate_cmd->add_option("file", sim.file, "Model file")->required();
    simulate_cmd->add_option("--policy", sim.policy, "Choice policy: first, random or scripted:A,B")
        ->capture_default_str();
    simulate_cmd->add_option("--seed", sim.seed, "Seed for the random policy")->capture_default_str();
    simulate_cmd->add_option("--horizon", sim.horizon, "Last tick to simulate")
        ->capture_default_str()
        ->check(CLI::Range(1u, 1000000u));
    simulate_cmd->add_option("--trace", sim.trace, "Write the trace as JSON to this path");

    ExportConfig config;
    std::string format = "dot";
    bool no_regions = false;
    bool no_behavior = false;
    auto* export_cmd = app.add_subcommand("export", "Render a .tm file as DOT or JSON");
    export_cmd->add_option("file", file, "Model file")->required();
    export_cmd->add_option("--format", format, "Output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"dot", "json"}));
    export_cmd->add_option("-o,--output", config.output, "Output path (default: standard output)");
    export_cmd->add_flag("--no-regions", no_regions, "Leave out regions and events");
    export_cmd->add_flag("--no-behavior", no_behavior, "Leave out the behavior");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const CLI::App* failed = &app;
        for (auto* sub : app.get_subcommands()) failed = sub;
        err << failed->help();
        return kUsage;
    }

    if (parse_cmd->parsed()) return cmd_parse(file, out, err);
    if (check_cmd->parsed()) return cmd_check(file, out, err);
    if (eventize_cmd->parsed()) return cmd_eventize(file, out, err);
    if (simulate_cmd->parsed()) return cmd_simulate(sim, out, err);
    config.format = format == "json" ? ExportFormat::Json : ExportFormat::Dot;
    config.include_regions = !no_regions;
    config.include_behavior = !no_behavior;
    return cmd_export(file, config, out, err);
}

}  // namespace thimac
