#include "cfx/csv.hpp"

#include "cfx/error.hpp"

namespace cfx {
namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
            was_quoted = true;
            field = trim(field);
        } else if (c == ',') {
            fields.push_back(was_quoted ? field : trim(field));
            field.clear();
            was_quoted = false;
        } else if (!(was_quoted && (c == ' ' || c == '\t' || c == '\r'))) {
            field += c;
        }
    }
    if (quoted) throw Error(ErrorKind::IoError, "line " + std::to_string(line_no) + ": unterminated quote");
    fields.push_back(was_quoted ? field : trim(field));
    return fields;
}

} // namespace

CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool have_header = false;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(pos, end - pos);
        ++line_no;
        pos = end + 1;
        if (trim(line).empty()) {
            if (end == text.size()) break;
            continue;
        }
        auto fields = split_line(line, line_no);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
        } else {
            if (fields.size() != table.header.size())
                throw Error(ErrorKind::RaggedRows, "line " + std::to_string(line_no) + " has " +
                                                       std::to_string(fields.size()) + " fields, header has " +
                                                       std::to_string(table.header.size()));
            table.rows.push_back(std::move(fields));
            table.row_lines.push_back(line_no);
        }
        if (end == text.size()) break;
    }
    return table;
}

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\n") == std::string_view::npos && trim(value) == value) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

EntityRows read_entity_rows(std::string_view csv, const FeatureSchema& schema, LabelColumn label) {
    const auto table = parse_csv(csv);
    const auto& header = table.header;
    std::size_t offset = 0;
    if (!header.empty() && header.front() == "id" && !schema.index_of("id")) offset = 1;
    const std::size_t n = schema.arity();
    bool has_label = header.size() == offset + n + 1 && header.back() == "label";
    if (header.size() != offset + n + (has_label ? 1 : 0))
        throw Error(ErrorKind::HeaderMismatch, "expected " + std::to_string(n) + " feature columns");
    for (std::size_t i = 0; i < n; ++i)
        if (header[offset + i] != schema.feature(i).name)
            throw Error(ErrorKind::HeaderMismatch,
                        "column " + std::to_string(offset + i + 1) + " is '" + header[offset + i] +
                            "', expected '" + schema.feature(i).name + "'");
    if (label == LabelColumn::Required && !has_label)
        throw Error(ErrorKind::HeaderMismatch, "missing trailing 'label' column");
    if (label == LabelColumn::Forbidden && has_label)
        throw Error(ErrorKind::HeaderMismatch, "unexpected 'label' column");

    EntityRows out;
    out.had_ids = offset == 1;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        Entity e;
        e.id = offset == 1 ? row[0] : "r" + std::to_string(r + 1);
        e.values.assign(row.begin() + static_cast<std::ptrdiff_t>(offset),
                        row.begin() + static_cast<std::ptrdiff_t>(offset + n));
        std::optional<Label> row_label;
        try {
            schema.validate(e);
            if (has_label) row_label = label_from_string(row.back());
        } catch (const Error& err) {
            throw Error(err.kind(), "line " + std::to_string(table.row_lines[r]) + ": " + err.what());
        }
        out.entities.push_back(std::move(e));
        out.labels.push_back(row_label);
    }
    return out;
}

} // namespace cfx
