#include "cfx/core_model.hpp"

#include "cfx/error.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace cfx {

Label label_from_string(std::string_view text) {
    if (text == "0") return Label::Zero;
    if (text == "1") return Label::One;
    throw Error(ErrorKind::BadLabel, "label must be 0 or 1, got '" + std::string(text) + "'");
}

char to_char(Label label) noexcept { return label == Label::One ? '1' : '0'; }

std::optional<std::int64_t> parse_integer(std::string_view text) noexcept {
    if (text.empty()) return std::nullopt;
    std::int64_t out = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    return out;
}

FeatureSchema::FeatureSchema(std::vector<FeatureDecl> features) : features_(std::move(features)) {
    std::unordered_set<std::string> names;
    for (const auto& f : features_) {
        if (f.name.empty()) throw Error(ErrorKind::InvalidSchema, "empty feature name");
        if (!names.insert(f.name).second)
            throw Error(ErrorKind::InvalidSchema, "duplicate feature name '" + f.name + "'");
        if (f.domain.empty()) throw Error(ErrorKind::InvalidSchema, "feature '" + f.name + "' has an empty domain");
        std::unordered_set<std::string> values;
        for (const auto& v : f.domain) {
            if (!values.insert(v).second)
                throw Error(ErrorKind::InvalidSchema, "feature '" + f.name + "' repeats value '" + v + "'");
            if (f.ordered && !parse_integer(v))
                throw Error(ErrorKind::InvalidSchema,
                            "ordered feature '" + f.name + "' has non-integer value '" + v + "'");
        }
    }
}

std::optional<FeatureIndex> FeatureSchema::index_of(std::string_view name) const noexcept {
    for (FeatureIndex i = 0; i < features_.size(); ++i)
        if (features_[i].name == name) return i;
    return std::nullopt;
}

bool FeatureSchema::in_domain(FeatureIndex i, std::string_view value) const {
    const auto& dom = features_.at(i).domain;
    return std::find(dom.begin(), dom.end(), value) != dom.end();
}

std::size_t FeatureSchema::domain_position(FeatureIndex i, std::string_view value) const {
    const auto& dom = features_.at(i).domain;
    auto it = std::find(dom.begin(), dom.end(), value);
    if (it == dom.end())
        throw Error(ErrorKind::OutOfDomainValue,
                    "value '" + std::string(value) + "' not in domain of '" + features_[i].name + "'");
    return static_cast<std::size_t>(it - dom.begin());
}

std::size_t FeatureSchema::space_size() const noexcept {
    std::size_t total = 1;
    for (const auto& f : features_) {
        if (total > std::numeric_limits<std::size_t>::max() / f.domain.size())
            return std::numeric_limits<std::size_t>::max();
        total *= f.domain.size();
    }
    return total;
}

void FeatureSchema::validate(const Entity& e) const {
    if (e.values.size() != features_.size())
        throw Error(ErrorKind::SchemaMismatch, "entity '" + e.id + "' has " + std::to_string(e.values.size()) +
                                                   " values, schema has " + std::to_string(features_.size()));
    for (FeatureIndex i = 0; i < features_.size(); ++i)
        if (!in_domain(i, e.values[i]))
            throw Error(ErrorKind::OutOfDomainValue,
                        "value '" + e.values[i] + "' not in domain of '" + features_[i].name + "'");
}

Intervention::Intervention(std::vector<Change> changes) : changes_(std::move(changes)) {
    std::sort(changes_.begin(), changes_.end(),
              [](const Change& a, const Change& b) { return a.feature < b.feature; });
    auto dup = std::adjacent_find(changes_.begin(), changes_.end(),
                                  [](const Change& a, const Change& b) { return a.feature == b.feature; });
    if (dup != changes_.end())
        throw Error(ErrorKind::DuplicateFeature, "feature #" + std::to_string(dup->feature) + " changed twice");
}

std::vector<FeatureIndex> Intervention::features() const {
    std::vector<FeatureIndex> out;
    out.reserve(changes_.size());
    for (const auto& c : changes_) out.push_back(c.feature);
    return out;
}

std::vector<FeatureIndex> Intervention::explicit_features() const {
    std::vector<FeatureIndex> out;
    for (const auto& c : changes_)
        if (c.provenance == Provenance::Explicit) out.push_back(c.feature);
    return out;
}

std::size_t Intervention::explicit_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(changes_.begin(), changes_.end(), [](const Change& c) {
        return c.provenance == Provenance::Explicit;
    }));
}

const Change* Intervention::find(FeatureIndex feature) const noexcept {
    auto it = std::lower_bound(changes_.begin(), changes_.end(), feature,
                               [](const Change& c, FeatureIndex f) { return c.feature < f; });
    return it != changes_.end() && it->feature == feature ? &*it : nullptr;
}

std::vector<FeatureIndex> Explanation::features() const {
    std::vector<FeatureIndex> out;
    out.reserve(items.size());
    for (const auto& item : items) out.push_back(item.feature);
    return out;
}

void validate_intervention(const FeatureSchema& schema, const Entity& e, const Intervention& iota) {
    schema.validate(e);
    for (const auto& c : iota.changes()) {
        if (c.feature >= schema.arity())
            throw Error(ErrorKind::SchemaMismatch, "feature #" + std::to_string(c.feature) + " out of range");
        if (!schema.in_domain(c.feature, c.value))
            throw Error(ErrorKind::OutOfDomainValue,
                        "value '" + c.value + "' not in domain of '" + schema.feature(c.feature).name + "'");
        if (e.values[c.feature] == c.value)
            throw Error(ErrorKind::SameAsOriginal,
                        "'" + schema.feature(c.feature).name + "' already has value '" + c.value + "'");
    }
}

Entity apply_intervention(const FeatureSchema& schema, const Entity& e, const Intervention& iota) {
    validate_intervention(schema, e, iota);
    Entity out = e;
    for (const auto& c : iota.changes()) out.values[c.feature] = c.value;
    return out;
}

Intervention intervention_between(const FeatureSchema& schema, const Entity& e, const Entity& target) {
    schema.validate(e);
    schema.validate(target);
    std::vector<Change> changes;
    for (FeatureIndex i = 0; i < schema.arity(); ++i)
        if (e.values[i] != target.values[i]) changes.push_back({i, target.values[i], Provenance::Explicit});
    return Intervention(std::move(changes));
}

Explanation explanation_of(const FeatureSchema& schema, const Entity& e, const Intervention& iota) {
    validate_intervention(schema, e, iota);
    Explanation out;
    for (const auto& c : iota.changes()) out.items.push_back({c.feature, e.values[c.feature]});
    out.witness = iota;
    return out;
}

Precedence compare(const Intervention& a, const Intervention& b, MinimalityOrder order) {
    if (order == MinimalityOrder::Cardinality) {
        if (a.size() < b.size()) return Precedence::Less;
        if (a.size() > b.size()) return Precedence::Greater;
        return Precedence::EqualOrIncomparable;
    }
    const auto fa = a.features();
    const auto fb = b.features();
    if (fa.size() < fb.size() && std::includes(fb.begin(), fb.end(), fa.begin(), fa.end())) return Precedence::Less;
    if (fb.size() < fa.size() && std::includes(fa.begin(), fa.end(), fb.begin(), fb.end()))
        return Precedence::Greater;
    return Precedence::EqualOrIncomparable;
}

bool witness_less(const FeatureSchema& schema, const Intervention& a, const Intervention& b) {
    const auto ea = a.explicit_features();
    const auto eb = b.explicit_features();
    if (ea.size() != eb.size()) return ea.size() < eb.size();
    if (ea != eb) return ea < eb;
    auto positions = [&](const Intervention& iota, bool explicit_only) {
        std::vector<std::size_t> out;
        for (const auto& c : iota.changes())
            if (!explicit_only || c.provenance == Provenance::Explicit)
                out.push_back(schema.domain_position(c.feature, c.value));
        return out;
    };
    const auto pa = positions(a, true);
    const auto pb = positions(b, true);
    if (pa != pb) return pa < pb;
    const auto fa = a.features();
    const auto fb = b.features();
    if (fa != fb) return fa < fb;
    return positions(a, false) < positions(b, false);
}

bool explanation_less(const Explanation& a, const Explanation& b) {
    if (a.cardinality() != b.cardinality()) return a.cardinality() < b.cardinality();
    return a.features() < b.features();
}

Rational Rational::reciprocal(std::int64_t k) {
    if (k <= 0) throw std::invalid_argument("reciprocal of non-positive value");
    return Rational{1, k};
}

std::string Rational::to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) throw Error(ErrorKind::IoError, "bad rational '" + std::string(text) + "'");
    auto num = parse_integer(text.substr(0, slash));
    auto den = parse_integer(text.substr(slash + 1));
    if (!num || !den || *den <= 0 || *num < 0)
        throw Error(ErrorKind::IoError, "bad rational '" + std::string(text) + "'");
    const auto g = std::gcd(*num, *den);
    return g == 0 ? Rational{0, 1} : Rational{*num / g, *den / g};
}

} // namespace cfx
