#include <doctest.h>

#include <json.hpp>

#include "support.hpp"
#include "thimac/dsl.hpp"
#include "thimac/export.hpp"

using namespace thimac;
using thimac::testing::isomorphic;
using thimac::testing::load_corpus;

TEST_CASE("empty model exports an empty digraph") {
    StaticModel m;
    CHECK(export_dot(m) == "digraph tm {\n}\n");
}

TEST_CASE("eating DOT nests moistening inside mouth") {
    const auto doc = load_corpus("eating.tm");
    const auto ev = eventize(doc);
    const auto dot = export_dot(doc.model, ev.events, &*ev.behavior);
    const auto mouth = dot.find("subgraph \"cluster_mouth\" {");
    const auto moist = dot.find("subgraph \"cluster_mouth.moistening\" {");
    REQUIRE(mouth != std::string::npos);
    REQUIRE(moist != std::string::npos);
    CHECK(mouth < moist);
    // The moistening cluster opens before mouth's cluster closes.
    CHECK(dot.find("\n  }\n", mouth) > moist);
    CHECK(dot.find("digraph regions {") != std::string::npos);
    CHECK(dot.find("digraph behavior {") != std::string::npos);
    CHECK(dot.find("\"E6\" -> \"E5\" [style=dotted") != std::string::npos);
    CHECK(dot == export_dot(doc.model, ev.events, &*ev.behavior));
}

TEST_CASE("triggers are dashed, flows solid") {
    const auto doc = load_corpus("disaster.tm");
    const auto dot = export_dot(doc.model);
    std::size_t dashed = 0;
    for (auto pos = dot.find("[style=dashed]"); pos != std::string::npos; pos = dot.find("[style=dashed]", pos + 1))
        ++dashed;
    CHECK(dashed == doc.model.triggers().size());
    CHECK(dot.find("[label=\"gas\"]") != std::string::npos);
}

TEST_CASE("model JSON round trip") {
    for (const char* name : {"eating.tm", "ball.tm", "disaster.tm", "broken.tm"}) {
        CAPTURE(name);
        const auto doc = load_corpus(name);
        const auto text = model_to_json(doc);
        const auto back = import_json(text);
        CHECK(back.model.frozen());
        CHECK(isomorphic(doc, back));
        CHECK(model_to_json(back) == text);
    }
}

TEST_CASE("empty model JSON") {
    const auto doc = ModelDocument::from_model(StaticModel{});
    const auto j = nlohmann::json::parse(model_to_json(doc));
    CHECK(j["schema"] == "tm-model/1");
    CHECK(j["machines"].size() == 1);
    CHECK(j["stages"].empty());
    CHECK_FALSE(j.contains("regions"));
    CHECK(isomorphic(import_json(model_to_json(doc)), doc));
}

TEST_CASE("export flags drop sections") {
    const auto doc = load_corpus("eating.tm");
    const auto j = nlohmann::json::parse(model_to_json(doc, false, false));
    CHECK_FALSE(j.contains("regions"));
    CHECK_FALSE(j.contains("events"));
    CHECK_FALSE(j.contains("behavior"));
}

TEST_CASE("import rejects malformed input") {
    CHECK_THROWS_AS(import_json("not json"), ImportError);
    CHECK_THROWS_AS(import_json("{}"), ImportError);
    CHECK_THROWS_AS(import_json(R"({"schema":"tm-model/2"})"), ImportError);
    const auto doc = load_corpus("ball.tm");
    auto j = nlohmann::json::parse(model_to_json(doc));
    j["stages"][1]["machine"] = j["stages"][0]["machine"];
    j["stages"][1]["kind"] = j["stages"][0]["kind"];
    CHECK_THROWS_AS(import_json(j.dump()), ImportError);
    auto k = nlohmann::json::parse(model_to_json(doc));
    k["flows"][0]["to"] = 999;
    CHECK_THROWS_AS(import_json(k.dump()), ImportError);
}

TEST_CASE("trace JSON for a twenty tick run") {
    const auto doc = load_corpus("eating.tm");
    const auto ev = eventize(doc);
    const auto trace = run(*ev.behavior, ChoicePolicy::first_declared(), 20);
    const auto text = trace_to_json(doc, *ev.behavior, trace);
    const auto j = nlohmann::json::parse(text);
    CHECK(j["schema"] == "tm-trace/1");
    CHECK(j["ticks"].size() == 20);
    CHECK(j["termination"] == "horizon");
    CHECK(j["horizon"] == 20);
    CHECK(j["policy"] == "first");
    CHECK(j["model_hash"].get<std::string>().size() == 16);
    CHECK(j["behavior_hash"].get<std::string>().size() == 16);
    CHECK(j["initial"]["live"] == nlohmann::json::array({"E1#1", "E2#1"}));
    for (std::size_t i = 0; i < j["ticks"].size(); ++i) {
        const auto& t = j["ticks"][i];
        CHECK(t["tick"] == i + 1);
        for (const char* key : {"live", "archived", "choices", "terminals"}) CHECK(t[key].is_array());
        for (const auto& a : t["archived"]) {
            for (const char* key : {"instance", "event", "generation", "start", "end", "reason"})
                CHECK(a.contains(key));
            CHECK(a["end"] == i + 1);
        }
    }
    CHECK(text == trace_to_json(doc, *ev.behavior, run(*ev.behavior, ChoicePolicy::first_declared(), 20)));
}

TEST_CASE("FNV-1a reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}
