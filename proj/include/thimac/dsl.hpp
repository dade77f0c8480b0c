#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thimac/diagnostic.hpp"
#include "thimac/document.hpp"

namespace thimac {

/// Parsing stops after this many diagnostics.
inline constexpr std::size_t kDiagnosticLimit = 100;

/// Maximum machine nesting depth accepted by the parser.
inline constexpr std::size_t kMaxNestingDepth = 128;

struct ParseResult {
    std::optional<ModelDocument> document;  // present iff no error diagnostics
    std::vector<Diagnostic> diagnostics;

    bool ok() const noexcept { return document.has_value(); }
};

/// Parses .tm text. Total: never throws on malformed input, reports every
/// independent problem it can (up to kDiagnosticLimit). On success the
/// document's model is frozen.
ParseResult parse(std::string_view text, std::string_view file = "<input>");

/// Canonical text. LF line endings; machines in declaration order with
/// their stages in ActionKind order; edges, regions and events in id
/// order. parse(format(d)) is isomorphic to d and format is a fixed point
/// after one round.
std::string format(const ModelDocument& document);

/// True when `text` is a bare identifier in the .tm lexical grammar.
bool is_identifier(std::string_view text);

}  // namespace thimac
