#include "cfx/engine.hpp"

#include "cfx/error.hpp"

#include <algorithm>
#include <map>

namespace cfx {
namespace {

using FeatureSet = std::vector<FeatureIndex>;
using Found = std::map<FeatureSet, Intervention>;

enum class Goal { Minimum, Minimal, All };

bool subset_of(const FeatureSet& small, const FeatureSet& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::size_t resolve_max_cardinality(const Instance& inst) {
    const std::size_t n = inst.schema.arity();
    const std::size_t m = inst.options.max_cardinality.value_or(n);
    if (m > n || (m == 0 && n > 0))
        throw Error(ErrorKind::InvalidInstance,
                    "max cardinality " + std::to_string(m) + " outside 1.." + std::to_string(n));
    return m;
}

FeatureSet counted_features(const Intervention& final_iota, bool count_propagated) {
    return count_propagated ? final_iota.features() : final_iota.explicit_features();
}

void record(const FeatureSchema& schema, Found& found, FeatureSet counted, const Intervention& witness) {
    auto [it, inserted] = found.try_emplace(std::move(counted), witness);
    if (!inserted && witness_less(schema, witness, it->second)) it->second = witness;
}

Explanation make_explanation(const Entity& e, const FeatureSet& counted, const Intervention& witness) {
    Explanation out;
    for (FeatureIndex f : counted) out.items.push_back({f, e.values[f]});
    out.witness = witness;
    return out;
}

std::vector<Explanation> to_explanations(const Entity& e, const Found& found) {
    std::vector<Explanation> out;
    for (const auto& [counted, witness] : found) out.push_back(make_explanation(e, counted, witness));
    std::stable_sort(out.begin(), out.end(), explanation_less);
    return out;
}

Found minimal_only(const Found& found) {
    Found out;
    for (const auto& [set, witness] : found) {
        const bool dominated = std::any_of(found.begin(), found.end(), [&](const auto& other) {
            return other.first.size() < set.size() && subset_of(other.first, set);
        });
        if (!dominated) out.emplace(set, witness);
    }
    return out;
}

Found minimum_only(const Found& found) {
    Found out;
    if (found.empty()) return out;
    std::size_t best = found.begin()->first.size();
    for (const auto& entry : found) best = std::min(best, entry.first.size());
    for (const auto& [set, witness] : found)
        if (set.size() == best) out.emplace(set, witness);
    return out;
}

/// Validates the instance and checks that the explained entity has label 1.
void prepare(const Instance& inst, Diagnostics& diag, std::size_t max_card) {
    inst.schema.validate(inst.entity);
    if (!(inst.classifier.schema() == inst.schema))
        throw Error(ErrorKind::SchemaMismatch, "classifier was built for a different schema");
    inst.constraints.validate(inst.schema);
    diag = Diagnostics{};
    diag.mode = std::holds_alternative<FullSpace>(inst.mode) ? "full" : "sample";
    diag.max_cardinality = max_card;
    diag.count_propagated = inst.options.count_propagated;
    const Label label = inst.classifier.classify(inst.entity);
    ++diag.classifier_calls;
    if (label != Label::One)
        throw Error(ErrorKind::NothingToExplain, "entity '" + inst.entity.id + "' is already labeled 0");
}

class FullSpaceSearch {
public:
    FullSpaceSearch(const Instance& inst, Diagnostics& diag, std::size_t max_card)
        : inst_(inst), diag_(diag), max_card_(max_card) {
        memo_.emplace(inst.entity.values, Label::One);
    }

    Found run(Goal goal) {
        Found found;
        std::optional<std::size_t> best;
        const std::size_t n = inst_.schema.arity();
        const bool may_grow = inst_.options.count_propagated && !inst_.constraints.implications.empty();

        for (std::size_t k = 1; k <= max_card_; ++k) {
            if (goal == Goal::Minimum && best && k > *best) break;
            diag_.levels_searched = k;

            FeatureSet subset(k);
            for (std::size_t i = 0; i < k; ++i) subset[i] = i;
            for (;;) {
                if (!visit_subset(goal, subset, found, best, may_grow)) return found;
                // Next combination in lexicographic order.
                std::size_t i = k;
                while (i > 0 && subset[i - 1] == n - k + i - 1) --i;
                if (i == 0) break;
                ++subset[i - 1];
                for (std::size_t j = i; j < k; ++j) subset[j] = subset[j - 1] + 1;
            }
        }
        return found;
    }

private:
    /// False when the classifier budget ran out.
    bool visit_subset(Goal goal, const FeatureSet& subset, Found& found, std::optional<std::size_t>& best,
                      bool may_grow) {
        if (goal != Goal::All) {
            for (const auto& entry : found)
                if (subset_of(entry.first, subset)) return true;
        }

        const auto& schema = inst_.schema;
        const auto& e = inst_.entity;
        std::vector<std::vector<const Value*>> alternatives(subset.size());
        for (std::size_t j = 0; j < subset.size(); ++j) {
            for (const auto& v : schema.feature(subset[j]).domain)
                if (v != e.values[subset[j]]) alternatives[j].push_back(&v);
            if (alternatives[j].empty()) return true;
        }

        std::vector<std::size_t> odometer(subset.size(), 0);
        for (;;) {
            std::vector<Change> changes;
            changes.reserve(subset.size());
            for (std::size_t j = 0; j < subset.size(); ++j)
                changes.push_back({subset[j], *alternatives[j][odometer[j]], Provenance::Explicit});
            Intervention explicit_iota(std::move(changes));
            ++diag_.candidates_tested;

            auto verdict = is_admissible(schema, inst_.constraints, e, explicit_iota);
            if (auto* ok = std::get_if<Admissible>(&verdict)) {
                std::vector<Value> values = e.values;
                for (const auto& c : ok->final_intervention.changes()) values[c.feature] = c.value;
                auto label = label_of(values);
                if (!label) return false;
                if (*label == Label::Zero) {
                    FeatureSet counted = counted_features(ok->final_intervention, inst_.options.count_propagated);
                    const bool same_as_subset = counted == subset;
                    if (counted.size() <= max_card_ && (goal != Goal::Minimum || !best || counted.size() <= *best)) {
                        best = best ? std::min(*best, counted.size()) : counted.size();
                        record(schema, found, std::move(counted), ok->final_intervention);
                    }
                    // Later assignments of this subset only repeat the same set.
                    if (same_as_subset && (goal != Goal::All || !may_grow)) return true;
                }
            } else {
                ++diag_.pruned_by_constraints;
            }

            std::size_t j = subset.size();
            while (j > 0 && odometer[j - 1] + 1 == alternatives[j - 1].size()) odometer[--j] = 0;
            if (j == 0) return true;
            ++odometer[j - 1];
        }
    }

    std::optional<Label> label_of(const std::vector<Value>& values) {
        if (auto it = memo_.find(values); it != memo_.end()) return it->second;
        const auto& budget = inst_.options.classifier_budget;
        if (budget && search_calls_ >= *budget) {
            diag_.budget_exhausted = true;
            return std::nullopt;
        }
        ++search_calls_;
        ++diag_.classifier_calls;
        const Label label = inst_.classifier.classify(Entity{inst_.entity.id, values});
        memo_.emplace(values, label);
        return label;
    }

    const Instance& inst_;
    Diagnostics& diag_;
    std::size_t max_card_;
    std::size_t search_calls_ = 0;
    std::map<std::vector<Value>, Label> memo_;
};

Found collect_from_sample(const Instance& inst, Diagnostics& diag, std::size_t max_card) {
    const auto& sample = std::get<LabeledSample>(inst.mode);
    const auto& schema = inst.schema;
    const auto& e = inst.entity;
    Found found;
    for (std::size_t r = 0; r < sample.entities.size(); ++r) {
        if (sample.labels[r] != Label::Zero || sample.entities[r].values == e.values) continue;
        auto iota = intervention_between(schema, e, sample.entities[r]);
        ++diag.candidates_tested;
        auto verdict = is_admissible(schema, inst.constraints, e, iota);
        const auto* ok = std::get_if<Admissible>(&verdict);
        // The sample row itself must be the admissible end state.
        if (!ok || !(ok->final_intervention == iota)) {
            ++diag.pruned_by_constraints;
            continue;
        }
        auto counted = iota.features();
        if (counted.size() <= max_card) record(schema, found, std::move(counted), iota);
    }
    diag.levels_searched = max_card;
    return found;
}

void check_sample(const Instance& inst) {
    const auto& sample = std::get<LabeledSample>(inst.mode);
    if (sample.entities.empty()) throw Error(ErrorKind::EmptySample, "labeled sample has no rows");
    if (sample.entities.size() != sample.labels.size())
        throw Error(ErrorKind::InvalidInstance, "sample rows and labels differ in length");
    std::map<std::vector<Value>, Label> seen;
    for (std::size_t r = 0; r < sample.entities.size(); ++r) {
        inst.schema.validate(sample.entities[r]);
        auto [it, inserted] = seen.emplace(sample.entities[r].values, sample.labels[r]);
        if (!inserted && it->second != sample.labels[r])
            throw Error(ErrorKind::ConflictingSampleLabels,
                        "sample row '" + sample.entities[r].id + "' repeats a tuple with the other label");
    }
}

/// Every counterfactual (All) or the goal-specific subset, in either mode.
Found search(const Instance& inst, Goal goal, Diagnostics& diag) {
    const std::size_t max_card = resolve_max_cardinality(inst);
    if (!std::holds_alternative<FullSpace>(inst.mode)) check_sample(inst);
    prepare(inst, diag, max_card);
    Found found;
    if (std::holds_alternative<FullSpace>(inst.mode)) {
        found = FullSpaceSearch(inst, diag, max_card).run(goal);
    } else {
        found = collect_from_sample(inst, diag, max_card);
    }
    diag.exhausted = found.empty() && !diag.budget_exhausted;
    diag.complete = max_card == inst.schema.arity() && !diag.budget_exhausted;
    if (!found.empty()) {
        std::size_t best = found.begin()->first.size();
        for (const auto& entry : found) best = std::min(best, entry.first.size());
        diag.k_star = best;
    }
    return found;
}

} // namespace

std::vector<Explanation> find_c_explanations(const Instance& inst, Diagnostics* diagnostics) {
    Diagnostics local;
    auto& diag = diagnostics ? *diagnostics : local;
    return to_explanations(inst.entity, minimum_only(search(inst, Goal::Minimum, diag)));
}

std::vector<Explanation> find_s_explanations(const Instance& inst, Diagnostics* diagnostics) {
    Diagnostics local;
    auto& diag = diagnostics ? *diagnostics : local;
    return to_explanations(inst.entity, minimal_only(search(inst, Goal::Minimal, diag)));
}

std::vector<Explanation> all_causal_explanations(const Instance& inst, Diagnostics* diagnostics) {
    Diagnostics local;
    auto& diag = diagnostics ? *diagnostics : local;
    return to_explanations(inst.entity, search(inst, Goal::All, diag));
}

std::vector<Rational> resp_from(const std::vector<Explanation>& s_explanations, std::size_t arity) {
    std::vector<std::size_t> smallest(arity, 0);
    for (const auto& expl : s_explanations)
        for (const auto& item : expl.items)
            if (smallest[item.feature] == 0 || expl.cardinality() < smallest[item.feature])
                smallest[item.feature] = expl.cardinality();
    std::vector<Rational> out;
    out.reserve(arity);
    for (std::size_t k : smallest)
        out.push_back(k == 0 ? Rational{0, 1} : Rational::reciprocal(static_cast<std::int64_t>(k)));
    return out;
}

Rational x_resp(const Instance& inst, FeatureIndex feature) {
    if (feature >= inst.schema.arity())
        throw Error(ErrorKind::UnknownFeature, "feature #" + std::to_string(feature));
    return resp_from(find_s_explanations(inst), inst.schema.arity())[feature];
}

ExplanationReport report(const Instance& inst, bool include_causal) {
    ExplanationReport out;
    const Found found = search(inst, include_causal ? Goal::All : Goal::Minimal, out.diagnostics);
    const Found minimal = minimal_only(found);
    out.s_explanations = to_explanations(inst.entity, minimal);
    out.c_explanations = to_explanations(inst.entity, minimum_only(minimal));
    if (include_causal) out.causal_explanations = to_explanations(inst.entity, found);
    out.resp = resp_from(out.s_explanations, inst.schema.arity());
    return out;
}

ExplanationReport explain_from_sample(const Instance& inst, bool include_causal) {
    if (!std::holds_alternative<LabeledSample>(inst.mode))
        throw Error(ErrorKind::UnsupportedMode, "instance is not sample-restricted");
    return report(inst, include_causal);
}

} // namespace cfx
