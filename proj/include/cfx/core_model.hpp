#pragma once

// Entities, interventions and explanations over a finite categorical
// feature space. Everything here is an immutable value.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cfx {

using Value = std::string;
using FeatureIndex = std::size_t;

enum class Label : std::uint8_t { Zero = 0, One = 1 };

Label label_from_string(std::string_view text); // throws BadLabel
char to_char(Label label) noexcept;

/// Parses a canonical base-10 integer; rejects anything else.
std::optional<std::int64_t> parse_integer(std::string_view text) noexcept;

struct Entity;

struct FeatureDecl {
    std::string name;
    std::vector<Value> domain;
    bool ordered = false;

    friend bool operator==(const FeatureDecl&, const FeatureDecl&) = default;
};

class FeatureSchema {
public:
    FeatureSchema() = default;
    /// Validates name uniqueness, non-empty distinct domains and the ordered flag.
    explicit FeatureSchema(std::vector<FeatureDecl> features);

    [[nodiscard]] std::size_t arity() const noexcept { return features_.size(); }
    [[nodiscard]] const FeatureDecl& feature(FeatureIndex i) const { return features_.at(i); }
    [[nodiscard]] std::span<const FeatureDecl> features() const noexcept { return features_; }
    [[nodiscard]] std::optional<FeatureIndex> index_of(std::string_view name) const noexcept;
    [[nodiscard]] bool in_domain(FeatureIndex i, std::string_view value) const;
    /// Position of `value` within the domain of feature `i`; throws OutOfDomainValue.
    [[nodiscard]] std::size_t domain_position(FeatureIndex i, std::string_view value) const;
    /// Product of domain sizes, saturating at SIZE_MAX.
    [[nodiscard]] std::size_t space_size() const noexcept;

    /// Checks arity and domain membership of every value.
    void validate(const Entity& e) const;

    friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;

private:
    std::vector<FeatureDecl> features_;
};

struct Entity {
    std::string id = "e";
    std::vector<Value> values;

    friend bool operator==(const Entity&, const Entity&) = default;
};

enum class Provenance : std::uint8_t { Explicit, Propagated };

struct Change {
    FeatureIndex feature = 0;
    Value value;
    Provenance provenance = Provenance::Explicit;

    friend bool operator==(const Change&, const Change&) = default;
};

/// A set of feature replacements, kept sorted by feature index.
class Intervention {
public:
    Intervention() = default;
    /// Throws DuplicateFeature when two changes touch the same feature.
    explicit Intervention(std::vector<Change> changes);

    [[nodiscard]] std::span<const Change> changes() const noexcept { return changes_; }
    [[nodiscard]] std::size_t size() const noexcept { return changes_.size(); }
    [[nodiscard]] bool empty() const noexcept { return changes_.empty(); }
    [[nodiscard]] std::vector<FeatureIndex> features() const;
    [[nodiscard]] std::vector<FeatureIndex> explicit_features() const;
    [[nodiscard]] std::size_t explicit_count() const noexcept;
    [[nodiscard]] const Change* find(FeatureIndex feature) const noexcept;

    friend bool operator==(const Intervention&, const Intervention&) = default;

private:
    std::vector<Change> changes_;
};

struct ExplanationItem {
    FeatureIndex feature = 0;
    Value original;

    friend bool operator==(const ExplanationItem&, const ExplanationItem&) = default;
};

struct Explanation {
    std::vector<ExplanationItem> items; // ascending by feature
    Intervention witness;

    [[nodiscard]] std::size_t cardinality() const noexcept { return items.size(); }
    [[nodiscard]] std::vector<FeatureIndex> features() const;

    friend bool operator==(const Explanation&, const Explanation&) = default;
};

/// Throws OutOfDomainValue / SameAsOriginal / SchemaMismatch.
void validate_intervention(const FeatureSchema& schema, const Entity& e, const Intervention& iota);

Entity apply_intervention(const FeatureSchema& schema, const Entity& e, const Intervention& iota);

/// The explicit intervention that turns `e` into `target`.
Intervention intervention_between(const FeatureSchema& schema, const Entity& e, const Entity& target);

/// Items cover every change of the witness.
Explanation explanation_of(const FeatureSchema& schema, const Entity& e, const Intervention& iota);

enum class MinimalityOrder { Subset, Cardinality };
enum class Precedence { Less, EqualOrIncomparable, Greater };

Precedence compare(const Intervention& a, const Intervention& b, MinimalityOrder order);

/// Deterministic order used for witnesses: fewer explicit changes first,
/// then explicit feature indices, then domain positions of all values.
bool witness_less(const FeatureSchema& schema, const Intervention& a, const Intervention& b);

/// Canonical listing order: cardinality, then feature indices.
bool explanation_less(const Explanation& a, const Explanation& b);

/// Exact non-negative rational, always reduced.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational reciprocal(std::int64_t k);

    [[nodiscard]] double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
        return a.num * b.den <=> b.num * a.den;
    }
};

Rational parse_rational(std::string_view text);

} // namespace cfx
