#include "cfx/classifiers.hpp"

#include "cfx/csv.hpp"
#include "cfx/error.hpp"
#include "cfx/external.hpp"

namespace cfx {

Label RuleProgram::evaluate(const FeatureSchema& schema, std::span<const Value> values) const {
    for (const auto& rule : rules)
        if (holds(schema, rule.conditions, values)) return rule.label;
    return default_label;
}

DecisionTable load_table(std::string_view csv, const FeatureSchema& schema) {
    const auto rows = read_entity_rows(csv, schema, LabelColumn::Required);
    DecisionTable table;
    for (std::size_t r = 0; r < rows.entities.size(); ++r) {
        const auto& values = rows.entities[r].values;
        const Label label = *rows.labels[r];
        auto [it, inserted] = table.rows.emplace(values, label);
        if (!inserted && it->second != label) {
            std::string tuple;
            for (const auto& v : values) tuple += (tuple.empty() ? "" : ",") + v;
            throw Error(ErrorKind::ConflictingRow, "tuple (" + tuple + ") listed with labels 0 and 1");
        }
    }
    return table;
}

namespace {

void check_spec(const FeatureSchema& schema, const ClassifierSpec& spec) {
    if (const auto* program = std::get_if<RuleProgram>(&spec)) {
        for (const auto& rule : program->rules)
            for (const auto& cond : rule.conditions) check_condition(schema, cond);
    } else if (const auto* endpoint = std::get_if<ExternalEndpoint>(&spec)) {
        if (endpoint->arity != schema.arity())
            throw Error(ErrorKind::SchemaMismatch, "external endpoint arity " + std::to_string(endpoint->arity) +
                                                       " differs from schema arity " +
                                                       std::to_string(schema.arity()));
        for (const auto& f : schema.features())
            for (const auto& v : f.domain)
                if (v.find_first_of("|\n") != std::string::npos)
                    throw Error(ErrorKind::InvalidSchema,
                                "value '" + v + "' of '" + f.name + "' cannot be sent over the wire protocol");
    } else {
        for (const auto& [values, label] : std::get<DecisionTable>(spec).rows)
            schema.validate(Entity{"row", values});
    }
}

} // namespace

Classifier::Classifier(FeatureSchema schema, ClassifierSpec spec) : schema_(std::move(schema)), spec_(std::move(spec)) {
    check_spec(schema_, spec_);
    if (const auto* endpoint = std::get_if<ExternalEndpoint>(&spec_))
        external_ = std::make_shared<ExternalClient>(*endpoint);
}

Label Classifier::classify(const Entity& e) const {
    schema_.validate(e);
    if (const auto* table = std::get_if<DecisionTable>(&spec_)) {
        auto it = table->rows.find(e.values);
        if (it == table->rows.end()) {
            std::string tuple;
            for (const auto& v : e.values) tuple += (tuple.empty() ? "" : ",") + v;
            throw Error(ErrorKind::MissingTableRow, "no table row for (" + tuple + ")");
        }
        return it->second;
    }
    if (const auto* program = std::get_if<RuleProgram>(&spec_)) return program->evaluate(schema_, e.values);
    return external_->classify(e);
}

} // namespace cfx
