#pragma once

#include "cfx/core_model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cfx {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines; // 1-based source line of each row
};

/// Comma-separated, fields trimmed, blank lines skipped, double quotes escape
/// commas ("" inside quotes is a literal quote). Throws RaggedRows.
CsvTable parse_csv(std::string_view text);

std::string csv_field(std::string_view value);

enum class LabelColumn { Required, Optional, Forbidden };

struct EntityRows {
    std::vector<Entity> entities;
    std::vector<std::optional<Label>> labels;
    bool had_ids = false;
};

/// Header is `[id,] <schema features in order> [,label]`. Rows without an id
/// column get ids "r1", "r2", ... Throws HeaderMismatch, BadLabel,
/// OutOfDomainValue.
EntityRows read_entity_rows(std::string_view csv, const FeatureSchema& schema, LabelColumn label);

} // namespace cfx
