#pragma once

// Bucketization and one-hot encoding of numeric features, plus domain
// extraction from data.

#include "cfx/constraints.hpp"
#include "cfx/core_model.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cfx {

/// Cut-points c1 < ... < c_{N-1} split the line into N half-open intervals
/// (-inf, c1), [c1, c2), ..., [c_{N-1}, +inf).
class BucketSpec {
public:
    /// Throws InvalidSchema unless cut-points are finite and strictly increasing.
    BucketSpec(std::string feature, std::vector<double> cut_points);

    [[nodiscard]] const std::string& feature() const noexcept { return feature_; }
    [[nodiscard]] std::span<const double> cut_points() const noexcept { return cuts_; }
    [[nodiscard]] std::size_t bucket_count() const noexcept { return cuts_.size() + 1; }

    friend bool operator==(const BucketSpec&, const BucketSpec&) = default;

private:
    std::string feature_;
    std::vector<double> cuts_;
};

/// Throws NonFiniteInput.
std::size_t bucketize(const BucketSpec& spec, double x);
std::vector<std::uint8_t> one_hot(const BucketSpec& spec, double x);
/// Position of the single 1; throws InvalidConstraint if the vector is not one-hot.
std::size_t decode_one_hot(std::span<const std::uint8_t> bits);

/// One feature of a schema document before encoding.
struct RawFeature {
    enum class Kind { Categorical, Numeric };
    std::string name;
    Kind kind = Kind::Categorical;
    std::vector<Value> domain; // categorical only
    bool ordered = false;

    friend bool operator==(const RawFeature&, const RawFeature&) = default;
};

struct EncodedSchema {
    FeatureSchema schema;
    ConstraintSet groups;
    /// For each raw feature, the encoded feature indices it maps to.
    std::vector<std::vector<FeatureIndex>> translation;
    /// Bucket spec per raw feature; nullopt for categorical ones.
    std::vector<std::optional<BucketSpec>> buckets;

    /// Maps one raw row (numbers as text for numeric features) to encoded values.
    [[nodiscard]] std::vector<Value> encode_row(std::span<const std::string> raw) const;
};

std::string encoded_name(std::string_view feature, std::size_t bucket);

/// Numeric features become N binary features "<f>#<k>" plus one one-hot
/// group each; categorical features pass through. Throws MissingBucketSpec,
/// NameCollision.
EncodedSchema encode_schema(std::span<const RawFeature> features, std::span<const BucketSpec> buckets);

/// Domains are the distinct values per column in first-occurrence order;
/// a feature is ordered iff all its values are integers. Throws EmptyData,
/// RaggedRows.
FeatureSchema extract_domains(std::span<const std::vector<Value>> rows, std::span<const std::string> names);

} // namespace cfx
