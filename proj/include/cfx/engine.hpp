#pragma once

// Counterfactual search over the admissible intervention space.
//
// Explicit interventions are enumerated level by level: feature subsets by
// size, then lexicographically by index, and for each subset every
// assignment of non-original values in domain order. Each candidate is
// propagated and checked against the constraint set before the classifier
// sees it. The label being explained is always 1; counterfactuals reach 0.

#include "cfx/classifiers.hpp"
#include "cfx/constraints.hpp"
#include "cfx/core_model.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cfx {

struct LabeledSample {
    std::vector<Entity> entities;
    std::vector<Label> labels;
};

struct FullSpace {};

using SearchMode = std::variant<FullSpace, LabeledSample>;

struct SearchOptions {
    /// Upper bound on explanation cardinality; defaults to the schema arity.
    std::optional<std::size_t> max_cardinality;
    /// When false, propagated changes are carried in witnesses but do not
    /// count toward (or appear in) explanations.
    bool count_propagated = true;
    /// Hard stop on classifier calls made by the search (the initial check of
    /// the explained entity is not charged).
    std::optional<std::size_t> classifier_budget;
};

struct Instance {
    FeatureSchema schema;
    Entity entity;
    Classifier classifier;
    ConstraintSet constraints;
    SearchMode mode = FullSpace{};
    SearchOptions options;
};

struct Diagnostics {
    std::string mode = "full";
    std::size_t max_cardinality = 0;
    bool count_propagated = true;
    std::size_t candidates_tested = 0;
    std::size_t classifier_calls = 0;
    std::size_t pruned_by_constraints = 0;
    std::size_t levels_searched = 0;
    std::optional<std::size_t> k_star;
    /// No counterfactual exists within max_cardinality.
    bool exhausted = false;
    bool budget_exhausted = false;
    /// Results cover every explanation up to the schema arity.
    bool complete = true;

    friend bool operator==(const Diagnostics&, const Diagnostics&) = default;
};

struct ExplanationReport {
    std::vector<Explanation> c_explanations;
    std::vector<Explanation> s_explanations;
    std::optional<std::vector<Explanation>> causal_explanations;
    std::vector<Rational> resp; // one per feature, for the entity's own value
    Diagnostics diagnostics;

    friend bool operator==(const ExplanationReport&, const ExplanationReport&) = default;
};

/// Minimum-cardinality explanations; stops at the first level that cannot
/// improve on the best cardinality found.
std::vector<Explanation> find_c_explanations(const Instance& inst, Diagnostics* diagnostics = nullptr);

/// One explanation per subset-minimal flip set, witnessed by the least
/// flipping assignment.
std::vector<Explanation> find_s_explanations(const Instance& inst, Diagnostics* diagnostics = nullptr);

/// Every causal explanation with cardinality <= max_cardinality.
std::vector<Explanation> all_causal_explanations(const Instance& inst, Diagnostics* diagnostics = nullptr);

/// 1/|e| for the smallest s-explanation containing the feature's value, else 0.
Rational x_resp(const Instance& inst, FeatureIndex feature);

/// Responsibility of every feature given a set of s-explanations.
std::vector<Rational> resp_from(const std::vector<Explanation>& s_explanations, std::size_t arity);

/// c- and s-explanations plus resp for all features. In sample-restricted
/// mode the candidates are the sample's label-0 rows and the classifier is
/// only consulted for the explained entity.
ExplanationReport report(const Instance& inst, bool include_causal = false);

/// report() for an instance whose mode is LabeledSample.
ExplanationReport explain_from_sample(const Instance& inst, bool include_causal = false);

} // namespace cfx
