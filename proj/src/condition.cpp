#include "cfx/condition.hpp"

#include "cfx/error.hpp"

namespace cfx {

std::string_view to_string(CompareOp op) noexcept {
    switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    }
    return "?";
}

void check_condition(const FeatureSchema& schema, const Condition& cond) {
    if (cond.feature >= schema.arity())
        throw Error(ErrorKind::UnknownFeature, "feature #" + std::to_string(cond.feature));
    const auto& decl = schema.feature(cond.feature);
    const bool order_op = cond.op != CompareOp::Eq && cond.op != CompareOp::Ne;
    if (order_op && !decl.ordered)
        throw Error(ErrorKind::OperatorOnUnorderedFeature,
                    std::string(to_string(cond.op)) + " on unordered feature '" + decl.name + "'");
    if (decl.ordered && !parse_integer(cond.literal))
        throw Error(ErrorKind::InvalidConstraint,
                    "ordered feature '" + decl.name + "' compared with non-integer '" + cond.literal + "'");
}

bool holds(const FeatureSchema& schema, const Condition& cond, std::span<const Value> values) {
    const Value& actual = values[cond.feature];
    if (!schema.feature(cond.feature).ordered) {
        const bool eq = actual == cond.literal;
        return cond.op == CompareOp::Eq ? eq : !eq;
    }
    const auto lhs = *parse_integer(actual);
    const auto rhs = *parse_integer(cond.literal);
    switch (cond.op) {
    case CompareOp::Eq: return lhs == rhs;
    case CompareOp::Ne: return lhs != rhs;
    case CompareOp::Lt: return lhs < rhs;
    case CompareOp::Le: return lhs <= rhs;
    case CompareOp::Gt: return lhs > rhs;
    case CompareOp::Ge: return lhs >= rhs;
    }
    return false;
}

bool holds(const FeatureSchema& schema, const Conjunction& body, std::span<const Value> values) {
    for (const auto& cond : body)
        if (!holds(schema, cond, values)) return false;
    return true;
}

} // namespace cfx
