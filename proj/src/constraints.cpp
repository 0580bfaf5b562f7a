#include "cfx/constraints.hpp"

#include "cfx/error.hpp"

#include <algorithm>
#include <set>

namespace cfx {

void ConstraintSet::validate(const FeatureSchema& schema) const {
    for (const auto& denial : denials) {
        if (denial.empty()) throw Error(ErrorKind::InvalidConstraint, "denial with empty body");
        for (const auto& cond : denial) check_condition(schema, cond);
    }
    for (const auto& rule : implications) {
        if (rule.body.empty()) throw Error(ErrorKind::InvalidConstraint, "implication with empty body");
        for (const auto& cond : rule.body) check_condition(schema, cond);
        if (rule.feature >= schema.arity())
            throw Error(ErrorKind::UnknownFeature, "feature #" + std::to_string(rule.feature));
        if (!schema.in_domain(rule.feature, rule.value))
            throw Error(ErrorKind::InvalidConstraint, "implication assigns '" + rule.value +
                                                          "' outside the domain of '" +
                                                          schema.feature(rule.feature).name + "'");
    }
    std::set<FeatureIndex> seen;
    for (const auto& group : onehot_groups) {
        if (group.empty()) throw Error(ErrorKind::InvalidConstraint, "empty one-hot group");
        for (FeatureIndex f : group) {
            if (f >= schema.arity()) throw Error(ErrorKind::UnknownFeature, "feature #" + std::to_string(f));
            auto dom = schema.feature(f).domain;
            std::sort(dom.begin(), dom.end());
            if (dom != std::vector<Value>{"0", "1"})
                throw Error(ErrorKind::InvalidConstraint,
                            "one-hot member '" + schema.feature(f).name + "' is not a {0,1} feature");
            if (!seen.insert(f).second)
                throw Error(ErrorKind::InvalidConstraint,
                            "feature '" + schema.feature(f).name + "' belongs to two one-hot groups");
        }
    }
}

ConstraintSet ConstraintSet::merged(const ConstraintSet& other) const {
    ConstraintSet out = *this;
    out.denials.insert(out.denials.end(), other.denials.begin(), other.denials.end());
    out.implications.insert(out.implications.end(), other.implications.begin(), other.implications.end());
    out.onehot_groups.insert(out.onehot_groups.end(), other.onehot_groups.begin(), other.onehot_groups.end());
    return out;
}

CheckResult check_denials(const FeatureSchema& schema, const ConstraintSet& cs, const Entity& e) {
    CheckResult result;
    for (std::size_t k = 0; k < cs.denials.size(); ++k) {
        if (holds(schema, cs.denials[k], e.values)) {
            result.satisfied = false;
            result.violated.push_back(k);
        }
    }
    return result;
}

CheckResult check_onehot(const FeatureSchema&, const ConstraintSet& cs, const Entity& e) {
    CheckResult result;
    for (std::size_t g = 0; g < cs.onehot_groups.size(); ++g) {
        const auto ones = std::count_if(cs.onehot_groups[g].begin(), cs.onehot_groups[g].end(),
                                        [&](FeatureIndex f) { return e.values[f] == "1"; });
        if (ones != 1) {
            result.satisfied = false;
            result.violated.push_back(g);
        }
    }
    return result;
}

std::string PropagationConflict::describe(const FeatureSchema& schema) const {
    return "rule " + std::to_string(implication) + " assigns " + schema.feature(feature).name + "=" + attempted +
           " but it is already " + current;
}

Propagation propagate(const FeatureSchema& schema, const ConstraintSet& cs, const Entity& e,
                      const Intervention& iota) {
    validate_intervention(schema, e, iota);
    std::vector<Value> state = e.values;
    std::vector<bool> assigned(schema.arity(), false);
    std::vector<Change> changes(iota.changes().begin(), iota.changes().end());
    for (const auto& c : changes) {
        state[c.feature] = c.value;
        assigned[c.feature] = true;
    }

    bool fired = true;
    while (fired) {
        fired = false;
        for (std::size_t k = 0; k < cs.implications.size(); ++k) {
            const auto& rule = cs.implications[k];
            if (state[rule.feature] == rule.value || !holds(schema, rule.body, state)) continue;
            if (assigned[rule.feature]) return PropagationConflict{k, rule.feature, state[rule.feature], rule.value};
            state[rule.feature] = rule.value;
            assigned[rule.feature] = true;
            changes.push_back({rule.feature, rule.value, Provenance::Propagated});
            fired = true;
        }
    }
    return Intervention(std::move(changes));
}

Admissibility is_admissible(const FeatureSchema& schema, const ConstraintSet& cs, const Entity& e,
                            const Intervention& iota) {
    auto propagated = propagate(schema, cs, e, iota);
    if (auto* conflict = std::get_if<PropagationConflict>(&propagated))
        return Inadmissible{Inadmissible::Reason::Conflict, conflict->implication, conflict->describe(schema)};

    auto& final_iota = std::get<Intervention>(propagated);
    Entity state = e;
    for (const auto& c : final_iota.changes()) state.values[c.feature] = c.value;

    if (auto denials = check_denials(schema, cs, state); !denials.satisfied)
        return Inadmissible{Inadmissible::Reason::Denial, denials.violated.front(),
                            "denial " + std::to_string(denials.violated.front()) + " violated"};
    if (auto groups = check_onehot(schema, cs, state); !groups.satisfied)
        return Inadmissible{Inadmissible::Reason::OneHot, groups.violated.front(),
                            "one-hot group " + std::to_string(groups.violated.front()) + " violated"};
    return Admissible{std::move(final_iota)};
}

} // namespace cfx
