#pragma once

#include "cfx/core_model.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace cfx {

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(CompareOp op) noexcept;

/// `feature op literal`, resolved against a schema. Order operators are only
/// legal on ordered features, where both sides compare as integers.
struct Condition {
    FeatureIndex feature = 0;
    CompareOp op = CompareOp::Eq;
    Value literal;

    friend bool operator==(const Condition&, const Condition&) = default;
};

using Conjunction = std::vector<Condition>;

/// Throws OperatorOnUnorderedFeature or InvalidConstraint (non-integer literal).
void check_condition(const FeatureSchema& schema, const Condition& cond);

bool holds(const FeatureSchema& schema, const Condition& cond, std::span<const Value> values);
bool holds(const FeatureSchema& schema, const Conjunction& body, std::span<const Value> values);

} // namespace cfx
