#pragma once

#include "cfx/engine.hpp"
#include "cfx/error.hpp"

#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace cfx::support {

std::filesystem::path data_dir();
std::string data_file(const std::string& name);

FeatureSchema binary_schema(std::size_t n);
FeatureSchema table1_schema();
DecisionTable table1_table();
Entity e1();
Instance table1_instance();

/// Explicit intervention from (feature, value) pairs.
Intervention iota(std::initializer_list<std::pair<FeatureIndex, Value>> changes);

/// Decision table labeling a tuple 0 iff `zero` says so.
template <class Pred>
DecisionTable table_from(const FeatureSchema& schema, Pred zero) {
    DecisionTable t;
    std::vector<std::size_t> digit(schema.arity(), 0);
    for (;;) {
        std::vector<Value> row;
        for (std::size_t i = 0; i < schema.arity(); ++i) row.push_back(schema.feature(i).domain[digit[i]]);
        t.rows[row] = zero(row) ? Label::Zero : Label::One;
        std::size_t i = schema.arity();
        while (i > 0 && ++digit[i - 1] == schema.feature(i - 1).domain.size()) digit[--i] = 0;
        if (i == 0) break;
    }
    return t;
}

struct RandomSpec {
    std::size_t min_features = 2;
    std::size_t max_features = 5;
    std::size_t max_domain = 3;
    double denial_rate = 0.5;      // chance of 1-2 denials
    double implication_rate = 0.0; // chance of 1-2 implications
    double zero_rate = 0.4;        // per-tuple chance of label 0
};

/// Random total-table instance whose entity is labeled 1. Feature values are
/// small integers so every comparison operator is legal.
Instance random_instance(std::mt19937& rng, const RandomSpec& spec = {});

Conjunction random_conjunction(std::mt19937& rng, const FeatureSchema& schema, std::size_t max_len);

/// Feature sets of a list of explanations.
std::vector<std::vector<FeatureIndex>> feature_sets(const std::vector<Explanation>& list);

/// Empty string when equal, else a description of the first difference.
std::string diff_reports(const ExplanationReport& engine, const ExplanationReport& oracle);

std::string describe(const Instance& inst);

/// Kind of the cfx::Error thrown by f, or nullopt when nothing was thrown.
template <class F>
std::optional<ErrorKind> kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

} // namespace cfx::support
