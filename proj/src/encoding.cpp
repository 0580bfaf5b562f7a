#include "cfx/encoding.hpp"

#include "cfx/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace cfx {

BucketSpec::BucketSpec(std::string feature, std::vector<double> cut_points)
    : feature_(std::move(feature)), cuts_(std::move(cut_points)) {
    if (cuts_.empty()) throw Error(ErrorKind::InvalidSchema, "'" + feature_ + "' needs at least one cut-point");
    for (std::size_t i = 0; i < cuts_.size(); ++i) {
        if (!std::isfinite(cuts_[i]))
            throw Error(ErrorKind::InvalidSchema, "'" + feature_ + "' has a non-finite cut-point");
        if (i > 0 && !(cuts_[i - 1] < cuts_[i]))
            throw Error(ErrorKind::InvalidSchema, "cut-points of '" + feature_ + "' must increase strictly");
    }
}

std::size_t bucketize(const BucketSpec& spec, double x) {
    if (!std::isfinite(x)) throw Error(ErrorKind::NonFiniteInput, "cannot bucketize a non-finite value");
    const auto cuts = spec.cut_points();
    return static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), x) - cuts.begin());
}

std::vector<std::uint8_t> one_hot(const BucketSpec& spec, double x) {
    std::vector<std::uint8_t> bits(spec.bucket_count(), 0);
    bits[bucketize(spec, x)] = 1;
    return bits;
}

std::size_t decode_one_hot(std::span<const std::uint8_t> bits) {
    std::size_t position = bits.size();
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] > 1 || (bits[i] == 1 && position != bits.size()))
            throw Error(ErrorKind::InvalidConstraint, "vector is not one-hot");
        if (bits[i] == 1) position = i;
    }
    if (position == bits.size()) throw Error(ErrorKind::InvalidConstraint, "vector has no 1");
    return position;
}

std::string encoded_name(std::string_view feature, std::size_t bucket) {
    return std::string(feature) + "#" + std::to_string(bucket);
}

EncodedSchema encode_schema(std::span<const RawFeature> features, std::span<const BucketSpec> buckets) {
    std::vector<FeatureDecl> decls;
    EncodedSchema out;
    std::set<std::string> names;
    auto add = [&](FeatureDecl decl) {
        if (!names.insert(decl.name).second)
            throw Error(ErrorKind::NameCollision, "two features encode to the name '" + decl.name + "'");
        decls.push_back(std::move(decl));
        return decls.size() - 1;
    };

    for (const auto& raw : features) {
        if (raw.kind == RawFeature::Kind::Categorical) {
            out.translation.push_back({add({raw.name, raw.domain, raw.ordered})});
            out.buckets.emplace_back(std::nullopt);
            continue;
        }
        auto spec = std::find_if(buckets.begin(), buckets.end(),
                                 [&](const BucketSpec& b) { return b.feature() == raw.name; });
        if (spec == buckets.end())
            throw Error(ErrorKind::MissingBucketSpec, "numeric feature '" + raw.name + "' has no cut-points");
        std::vector<FeatureIndex> group;
        for (std::size_t k = 0; k < spec->bucket_count(); ++k)
            group.push_back(add({encoded_name(raw.name, k), {"0", "1"}, true}));
        out.translation.push_back(group);
        out.groups.onehot_groups.push_back(std::move(group));
        out.buckets.emplace_back(*spec);
    }
    out.schema = FeatureSchema(std::move(decls));
    return out;
}

std::vector<Value> EncodedSchema::encode_row(std::span<const std::string> raw) const {
    if (raw.size() != translation.size())
        throw Error(ErrorKind::RaggedRows, "row has " + std::to_string(raw.size()) + " values, expected " +
                                               std::to_string(translation.size()));
    std::vector<Value> values(schema.arity());
    for (std::size_t f = 0; f < raw.size(); ++f) {
        if (!buckets[f]) {
            const FeatureIndex target = translation[f].front();
            if (!schema.in_domain(target, raw[f]))
                throw Error(ErrorKind::OutOfDomainValue,
                            "value '" + raw[f] + "' not in domain of '" + schema.feature(target).name + "'");
            values[target] = raw[f];
            continue;
        }
        double x = 0;
        const auto& text = raw[f];
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            throw Error(ErrorKind::NonFiniteInput, "'" + text + "' is not a number");
        const auto bits = one_hot(*buckets[f], x);
        for (std::size_t k = 0; k < bits.size(); ++k) values[translation[f][k]] = bits[k] ? "1" : "0";
    }
    return values;
}

FeatureSchema extract_domains(std::span<const std::vector<Value>> rows, std::span<const std::string> names) {
    if (rows.empty()) throw Error(ErrorKind::EmptyData, "no rows to extract domains from");
    std::vector<FeatureDecl> decls;
    for (const auto& name : names) decls.push_back({name, {}, true});
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != names.size())
            throw Error(ErrorKind::RaggedRows, "row " + std::to_string(r + 1) + " has " +
                                                   std::to_string(rows[r].size()) + " values, expected " +
                                                   std::to_string(names.size()));
        for (std::size_t i = 0; i < names.size(); ++i) {
            auto& dom = decls[i].domain;
            if (std::find(dom.begin(), dom.end(), rows[r][i]) == dom.end()) dom.push_back(rows[r][i]);
        }
    }
    for (auto& decl : decls)
        decl.ordered = std::all_of(decl.domain.begin(), decl.domain.end(),
                                   [](const Value& v) { return parse_integer(v).has_value(); });
    return FeatureSchema(std::move(decls));
}

} // namespace cfx
