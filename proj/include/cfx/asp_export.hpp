#pragma once

// Emits the counterfactual intervention program for an instance as
// solver-ready answer-set programming text, and re-parses such text.
//
// Entities are atoms e(Id, X1, ..., Xn, Annotation) with annotations
// o (original), do (intervened), star (transition) and s (stopped).

#include "cfx/engine.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace cfx {

enum class StatementKind { Fact, Rule, Strong, Weak };

struct AspStatement {
    StatementKind kind = StatementKind::Fact;
    std::string text;

    friend bool operator==(const AspStatement&, const AspStatement&) = default;
};

struct AspSection {
    std::string title;
    std::vector<AspStatement> statements;

    friend bool operator==(const AspSection&, const AspSection&) = default;
};

struct AspProgram {
    static constexpr std::array<std::string_view, 4> annotations{"o", "do", "star", "s"};

    std::vector<AspSection> sections;

    [[nodiscard]] std::vector<std::string> statements(StatementKind kind) const;
    [[nodiscard]] std::vector<std::string> facts() const { return statements(StatementKind::Fact); }
    [[nodiscard]] std::vector<std::string> rules() const { return statements(StatementKind::Rule); }
    [[nodiscard]] std::vector<std::string> strong_constraints() const { return statements(StatementKind::Strong); }
    [[nodiscard]] std::vector<std::string> weak_constraints() const { return statements(StatementKind::Weak); }

    /// One statement per line, each section introduced by a "% title" line.
    [[nodiscard]] std::string to_text() const;

    friend bool operator==(const AspProgram&, const AspProgram&) = default;
};

/// Throws NotSerializable for external classifiers and UnsupportedMode for
/// sample-restricted instances.
AspProgram export_asp(const Instance& inst);

/// Checks `text` against the output grammar and classifies each statement.
/// Throws SyntaxError with the offending line and column.
AspProgram parse_asp(std::string_view text);

/// A value rendered as an ASP term: integers and lowercase constants stay
/// bare, everything else becomes a quoted string.
std::string asp_term(std::string_view value);

} // namespace cfx
