#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "thimac/document.hpp"
#include "thimac/eventizer.hpp"
#include "thimac/model.hpp"
#include "thimac/simulator.hpp"

namespace thimac {

enum class ExportFormat { Dot, Json };

struct ExportConfig {
    ExportFormat format = ExportFormat::Dot;
    bool include_regions = true;
    bool include_behavior = true;
    std::string output;  // empty = standard output
};

/// `digraph tm` with machines as nested clusters, stages labelled by kind,
/// solid flow edges and dashed trigger edges. A non-empty `events` adds a
/// `digraph regions` of coloured clusters; `behavior` adds a
/// `digraph behavior`. Everything is emitted in id order.
std::string export_dot(const StaticModel& model, std::span<const Event> events = {},
                       const BehaviorGraph* behavior = nullptr);

/// `tm-model/1` JSON. Regions, events and behavior statements are written
/// only when the flags allow and the document has any.
std::string model_to_json(const ModelDocument& document, bool include_regions = true,
                          bool include_behavior = true);

class ImportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inverse of model_to_json. The model comes back frozen. Throws
/// ImportError on malformed or inconsistent input.
ModelDocument import_json(std::string_view text);

/// `tm-trace/1` JSON: model and behavior fingerprints, policy, seed,
/// horizon, the initial snapshot, one entry per tick and the termination.
std::string trace_to_json(const ModelDocument& document, const BehaviorGraph& behavior, const SimTrace& trace);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string model_fingerprint(const ModelDocument& document);
std::string behavior_fingerprint(const BehaviorGraph& behavior);

}  // namespace thimac
