#pragma once

// Test-side generators and independent oracles. Nothing here calls the
// library code it is used to check.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "thimac/document.hpp"
#include "thimac/eventizer.hpp"
#include "thimac/model.hpp"
#include "thimac/simulator.hpp"

namespace thimac::testing {

std::string corpus_path(const std::string& name);
std::string read_text(const std::string& path);
ModelDocument load_corpus(const std::string& name);

/// Name-based canonical form: machine paths, stage paths, edge and storage
/// multisets, regions as stage-path sets, events and behavior in order.
/// Two documents are isomorphic iff their signatures are equal.
std::string signature(const ModelDocument& document);
inline bool isomorphic(const ModelDocument& a, const ModelDocument& b) { return signature(a) == signature(b); }

struct ModelShape {
    int max_machines = 12;
    int max_depth = 4;
    int max_stages = 50;
    int max_flows = 60;
    int max_triggers = 10;
    int max_storages = 4;
};

/// Random model; flows connect arbitrary stages, so many are illegal.
StaticModel random_model(std::mt19937_64& rng, const ModelShape& shape = {});

/// Random model plus regions, events and behavior statements, assembled
/// through the public mutators (not through text).
ModelDocument random_document(std::mt19937_64& rng);

/// A simulation scenario: one three-stage machine per event, so every
/// event region is valid, and a random behavior over those events.
struct Scenario {
    ModelDocument document;
    BehaviorGraph behavior;
};
Scenario random_scenario(std::mt19937_64& rng, int max_events = 12);
ChoicePolicy random_policy(std::mt19937_64& rng, const BehaviorGraph& behavior);

// ---- oracles --------------------------------------------------------------

/// Expected F1/F2 code for a flow from `from` to `to`, or "" when legal,
/// read from a hand-written copy of the default adjacency table.
std::string expected_flow_code(ActionKind from, ActionKind to, bool same_machine);

/// Weak connectivity of the subgraph induced by `stages` (flows + triggers).
bool brute_connected(const StaticModel& model, const std::set<StageId>& stages);

/// Transitive closure (Warshall) over flows and triggers, reflexive.
std::vector<std::vector<bool>> brute_closure(const StaticModel& model);

/// Forward-edge topological order by repeated minimum selection.
std::vector<EventId> brute_topological_order(const BehaviorGraph& behavior);

/// Presentism, record monotonicity and lifecycle checks between two
/// successive states. Returns human-readable violations.
std::vector<std::string> check_step(const SimState& before, const SimState& after);
std::vector<std::string> check_state(const SimState& state);

/// Cutoff and replacement over a finished run.
std::vector<std::string> check_cutoff(const BehaviorGraph& behavior, const std::vector<EventInstance>& instances);
std::vector<std::string> check_replacement(const BehaviorGraph& behavior,
                                           const std::vector<EventInstance>& instances);

}  // namespace thimac::testing
