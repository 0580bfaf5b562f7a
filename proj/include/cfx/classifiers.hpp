#pragma once

// The label function L behind one interface: an explicit decision table, a
// first-match rule program, or an external black-box process.

#include "cfx/condition.hpp"
#include "cfx/core_model.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cfx {

struct DecisionTable {
    std::map<std::vector<Value>, Label> rows;

    friend bool operator==(const DecisionTable&, const DecisionTable&) = default;
};

struct Rule {
    Label label = Label::Zero;
    Conjunction conditions;

    friend bool operator==(const Rule&, const Rule&) = default;
};

/// First rule whose conditions all hold decides; otherwise the default.
struct RuleProgram {
    std::vector<Rule> rules;
    Label default_label = Label::One;

    [[nodiscard]] Label evaluate(const FeatureSchema& schema, std::span<const Value> values) const;

    friend bool operator==(const RuleProgram&, const RuleProgram&) = default;
};

struct ExternalEndpoint {
    std::string command;
    std::chrono::milliseconds timeout{5000};
    std::size_t arity = 0;

    friend bool operator==(const ExternalEndpoint&, const ExternalEndpoint&) = default;
};

using ClassifierSpec = std::variant<DecisionTable, RuleProgram, ExternalEndpoint>;

/// CSV with header `<features...>,label` (optionally led by `id`).
/// Throws HeaderMismatch, ConflictingRow, BadLabel, OutOfDomainValue.
DecisionTable load_table(std::string_view csv, const FeatureSchema& schema);

class ExternalClient;

/// A classifier bound to a schema. Copies share the external process and its
/// memo cache.
class Classifier {
public:
    Classifier(FeatureSchema schema, ClassifierSpec spec);

    /// Throws MissingTableRow or the External* errors.
    [[nodiscard]] Label classify(const Entity& e) const;

    [[nodiscard]] const ClassifierSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] const FeatureSchema& schema() const noexcept { return schema_; }
    /// Null unless the spec is External.
    [[nodiscard]] std::shared_ptr<ExternalClient> external() const noexcept { return external_; }

private:
    FeatureSchema schema_;
    ClassifierSpec spec_;
    std::shared_ptr<ExternalClient> external_;
};

} // namespace cfx
