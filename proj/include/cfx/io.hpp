#pragma once

// File formats: YAML schema documents, entity/sample CSV and the JSON report.

#include "cfx/encoding.hpp"
#include "cfx/engine.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace cfx {

/// features:
///   - name: F1
///     domain: [0, 1]        # categorical; `ordered` defaults to all-integer
///   - name: ERE
///     buckets: [64, 71, 76, 81]
struct SchemaDocument {
    std::vector<RawFeature> features;
    std::vector<BucketSpec> buckets;

    [[nodiscard]] bool has_numeric() const noexcept { return !buckets.empty(); }
    /// Throws InvalidSchema if any feature still needs encoding.
    [[nodiscard]] FeatureSchema categorical_schema() const;
};

SchemaDocument parse_schema_document(std::string_view yaml);
std::string write_schema_document(const FeatureSchema& schema);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Single-row CSV; id defaults to "e" when the file has no id column.
Entity parse_entity(std::string_view csv, const FeatureSchema& schema);

/// CSV with a trailing label column.
LabeledSample parse_sample(std::string_view csv, const FeatureSchema& schema);

using Json = nlohmann::ordered_json;

/// Fixed keys: c_explanations, s_explanations, [causal_explanations], resp,
/// diagnostics. Scores carry 6 significant digits plus an exact "num/den".
Json report_to_json(const ExplanationReport& report, const FeatureSchema& schema, const Entity& e);
ExplanationReport report_from_json(const Json& json, const FeatureSchema& schema, const Entity& e);

} // namespace cfx
