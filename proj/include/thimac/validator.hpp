#pragma once

#include <set>
#include <tuple>
#include <vector>

#include "thimac/diagnostic.hpp"
#include "thimac/document.hpp"
#include "thimac/model.hpp"

namespace thimac {

/// Allowed (from kind, to kind, same machine?) triples for flow edges.
class FlowAdjacencyTable {
public:
    struct Entry {
        ActionKind from;
        ActionKind to;
        bool same_machine;
        friend auto operator<=>(const Entry&, const Entry&) = default;
    };

    /// Read off the canonical machine: inside a machine
    /// transfer->receive, receive->process, receive->release,
    /// process->release, process->create, create->release,
    /// create->process, release->transfer; across machines
    /// transfer->transfer and transfer->receive.
    static FlowAdjacencyTable defaults();

    /// Throws std::invalid_argument when `entries` is empty.
    explicit FlowAdjacencyTable(std::set<Entry> entries);

    bool allows(ActionKind from, ActionKind to, bool same_machine) const {
        return entries_.contains(Entry{from, to, same_machine});
    }
    const std::set<Entry>& entries() const noexcept { return entries_; }

private:
    std::set<Entry> entries_;
};

/// Rules F1/F2 (per flow edge), T1, D1, M1, M2, reported in that order with
/// entities in id order. Flow edges outside the table are F1 within a machine and F2
/// across machines.
std::vector<Diagnostic> check_model(const StaticModel& model,
                                    const FlowAdjacencyTable& table = FlowAdjacencyTable::defaults());

/// Rules R1 (empty), R2 (disconnected), R3 (a transfer->receive flow edge
/// with exactly one endpoint inside).
std::vector<Diagnostic> check_region(const StaticModel& model, const Region& region);

/// check_model plus check_region for every declared region, with source
/// spans attached from the document.
std::vector<Diagnostic> check_document(const ModelDocument& document,
                                       const FlowAdjacencyTable& table = FlowAdjacencyTable::defaults());

}  // namespace thimac
