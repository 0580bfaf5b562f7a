#pragma once

// Semantic knowledge over entities: denial constraints, implication rules
// that propagate extra changes, and one-hot groups.

#include "cfx/condition.hpp"
#include "cfx/core_model.hpp"

#include <string>
#include <variant>
#include <vector>

namespace cfx {

/// body -> feature = value
struct Implication {
    Conjunction body;
    FeatureIndex feature = 0;
    Value value;

    friend bool operator==(const Implication&, const Implication&) = default;
};

struct ConstraintSet {
    std::vector<Conjunction> denials;
    std::vector<Implication> implications;
    std::vector<std::vector<FeatureIndex>> onehot_groups;

    [[nodiscard]] bool empty() const noexcept {
        return denials.empty() && implications.empty() && onehot_groups.empty();
    }

    /// Throws UnknownFeature, OperatorOnUnorderedFeature or InvalidConstraint.
    void validate(const FeatureSchema& schema) const;

    /// Concatenation; the result is re-validated by callers that need it.
    [[nodiscard]] ConstraintSet merged(const ConstraintSet& other) const;

    friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;
};

struct CheckResult {
    bool satisfied = true;
    std::vector<std::size_t> violated;
};

CheckResult check_denials(const FeatureSchema& schema, const ConstraintSet& cs, const Entity& e);

/// Satisfied iff every group has exactly one feature equal to "1".
CheckResult check_onehot(const FeatureSchema& schema, const ConstraintSet& cs, const Entity& e);

struct PropagationConflict {
    std::size_t implication = 0; // index of the rule that tried to reassign
    FeatureIndex feature = 0;
    Value current;
    Value attempted;

    [[nodiscard]] std::string describe(const FeatureSchema& schema) const;
};

using Propagation = std::variant<Intervention, PropagationConflict>;

/// Fires implications in declaration order until fixpoint. A feature is
/// assigned at most once over explicit and propagated changes; a second,
/// different assignment is a conflict.
Propagation propagate(const FeatureSchema& schema, const ConstraintSet& cs, const Entity& e,
                      const Intervention& iota);

struct Admissible {
    Intervention final_intervention;
};

struct Inadmissible {
    enum class Reason { Conflict, Denial, OneHot };
    Reason reason = Reason::Denial;
    std::size_t index = 0; // conflicting implication, denial or group
    std::string detail;
};

using Admissibility = std::variant<Admissible, Inadmissible>;

Admissibility is_admissible(const FeatureSchema& schema, const ConstraintSet& cs, const Entity& e,
                            const Intervention& iota);

} // namespace cfx
