#include "thimac/diagnostic.hpp"

#include <algorithm>
#include <array>

namespace thimac {

namespace {

constexpr std::array kRules = {
    RuleId{"L1", "lexical error: unexpected character, unterminated string or malformed number", Severity::Error},
    RuleId{"S1", "syntax error", Severity::Error},
    RuleId{"N1", "duplicate identifier", Severity::Error},
    RuleId{"N2", "unresolved reference", Severity::Error},
    RuleId{"F1", "illegal flow adjacency within a machine", Severity::Error},
    RuleId{"F2", "illegal cross-machine flow (things leave a machine only via transfer)", Severity::Error},
    RuleId{"T1", "trigger within a single flow series", Severity::Warning},
    RuleId{"M1", "unreachable machine: stages but no create stage and no inbound transfer/receive", Severity::Warning},
    RuleId{"M2", "release stage with no outgoing flow to a transfer stage", Severity::Warning},
    RuleId{"D1", "duplicate stage kind in one machine", Severity::Error},
    RuleId{"R1", "empty region", Severity::Error},
    RuleId{"R2", "disconnected region", Severity::Warning},
    RuleId{"R3", "region splits a transfer->receive move", Severity::Error},
    RuleId{"E1", "event declared on an invalid region or with an invalid duration", Severity::Error},
    RuleId{"B1", "behavior references an unknown event", Severity::Error},
    RuleId{"B2", "sequence cycle not marked as repeat", Severity::Error},
    RuleId{"B3", "choice group with fewer than two distinct alternatives", Severity::Error},
    RuleId{"B4", "repeat edge is neither a self edge nor a back edge, or has bound 0", Severity::Error},
};

}  // namespace

std::string_view to_string(Severity s) { return s == Severity::Error ? "error" : "warning"; }

std::span<const RuleId> rule_catalogue() { return kRules; }

const RuleId* find_rule(std::string_view code) {
    auto it = std::find_if(kRules.begin(), kRules.end(), [&](const RuleId& r) { return r.code == code; });
    return it == kRules.end() ? nullptr : &*it;
}

Diagnostic make_diagnostic(std::string_view code, std::string message, std::optional<SourceSpan> span) {
    const auto* rule = find_rule(code);
    return Diagnostic{rule ? rule->severity : Severity::Error, std::string(code), std::move(message), std::move(span)};
}

bool has_errors(std::span<const Diagnostic> diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::size_t count_code(std::span<const Diagnostic> diagnostics, std::string_view code) {
    return static_cast<std::size_t>(
        std::count_if(diagnostics.begin(), diagnostics.end(), [&](const Diagnostic& d) { return d.code == code; }));
}

std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
    if (d.span) os << d.span->file << ':' << d.span->line << ':' << d.span->column << ": ";
    return os << to_string(d.severity) << '[' << d.code << "]: " << d.message;
}

}  // namespace thimac
