#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace thimac {

struct SourceSpan {
    std::string file;
    std::size_t start = 0;  // byte offsets, start <= end
    std::size_t end = 0;
    std::size_t line = 1;  // 1-based, of `start`
    std::size_t column = 1;

    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class Severity { Error, Warning };

std::string_view to_string(Severity s);

/// One entry of the closed diagnostic catalogue.
struct RuleId {
    std::string_view code;
    std::string_view description;
    Severity severity;
};

/// Every code a Diagnostic may carry. Parser codes come first, then the
/// validator's model rules, region rules and the eventizer's behavior rules.
std::span<const RuleId> rule_catalogue();
const RuleId* find_rule(std::string_view code);

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    std::optional<SourceSpan> span;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Builds a diagnostic with the catalogue's default severity for `code`.
Diagnostic make_diagnostic(std::string_view code, std::string message, std::optional<SourceSpan> span = std::nullopt);

bool has_errors(std::span<const Diagnostic> diagnostics);
std::size_t count_code(std::span<const Diagnostic> diagnostics, std::string_view code);

/// "file:line:col: error[F1]: message" (location omitted when unknown).
std::ostream& operator<<(std::ostream& os, const Diagnostic& d);

}  // namespace thimac
