// cfx: counterfactual explanations for binary classifiers over categorical data.
//
// Exit codes: 0 ok, 1 bad input, 2 nothing to explain (entity labeled 0),
// 3 classifier failure at run time.

#include "cfx/asp_export.hpp"
#include "cfx/csv.hpp"
#include "cfx/dsl.hpp"
#include "cfx/encoding.hpp"
#include "cfx/engine.hpp"
#include "cfx/error.hpp"
#include "cfx/io.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace cfx;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kNothingToExplain = 2;
constexpr int kClassifierFailure = 3;

struct InstanceFlags {
    std::string schema;
    std::string classifier;
    std::string entity;
    std::string constraints;
    std::string sample;
    std::optional<std::size_t> max_card;
    std::string count_propagated = "true";
    std::optional<std::size_t> budget;
    long timeout_ms = 5000;
};

void add_instance_flags(CLI::App& cmd, InstanceFlags& f, bool search_flags) {
    cmd.add_option("--schema", f.schema, "feature schema (YAML)")->required()->check(CLI::ExistingFile);
    cmd.add_option("--classifier", f.classifier, "table .csv, rules file, or cmd:<launch line>")->required();
    cmd.add_option("--entity", f.entity, "single-row entity CSV")->required()->check(CLI::ExistingFile);
    cmd.add_option("--constraints", f.constraints, "constraint file")->check(CLI::ExistingFile);
    if (!search_flags) return;
    cmd.add_option("--sample", f.sample, "labeled sample CSV; restricts candidates to its rows")
        ->check(CLI::ExistingFile);
    cmd.add_option("--max-card", f.max_card, "largest explanation size searched")->check(CLI::PositiveNumber);
    cmd.add_option("--count-propagated", f.count_propagated, "count rule-propagated changes")
        ->check(CLI::IsMember({"true", "false"}));
    cmd.add_option("--budget", f.budget, "classifier-call budget for the search");
    cmd.add_option("--timeout-ms", f.timeout_ms, "external classifier timeout")->check(CLI::PositiveNumber);
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Instance load_instance(const InstanceFlags& f) {
    const auto doc = parse_schema_document(read_file(f.schema));
    const auto schema = doc.categorical_schema();
    spdlog::debug("schema with {} features", schema.arity());

    ClassifierSpec spec;
    if (f.classifier.rfind("cmd:", 0) == 0) {
        spec = ExternalEndpoint{f.classifier.substr(4), std::chrono::milliseconds(f.timeout_ms), schema.arity()};
        spdlog::debug("external classifier '{}'", f.classifier.substr(4));
    } else if (ends_with(f.classifier, ".csv")) {
        spec = load_table(read_file(f.classifier), schema);
    } else {
        spec = parse_rule_program(read_file(f.classifier), schema);
    }

    Instance inst{schema, parse_entity(read_file(f.entity), schema), Classifier(schema, std::move(spec)),
                  f.constraints.empty() ? ConstraintSet{} : parse_constraints(read_file(f.constraints), schema),
                  FullSpace{}, {}};
    if (!f.sample.empty()) inst.mode = parse_sample(read_file(f.sample), schema);
    inst.options.max_cardinality = f.max_card;
    inst.options.count_propagated = f.count_propagated == "true";
    inst.options.classifier_budget = f.budget;
    return inst;
}

std::string change_text(const FeatureSchema& schema, const Change& c) {
    std::string out = schema.feature(c.feature).name + "->" + c.value;
    if (c.provenance == Provenance::Propagated) out += " (propagated)";
    return out;
}

void print_explanations(std::ostream& out, const std::string& title, const std::vector<Explanation>& list,
                        const Instance& inst) {
    out << title << " (" << list.size() << "):\n";
    for (const auto& x : list) {
        std::string items;
        for (const auto& item : x.items)
            items += (items.empty() ? "" : ", ") + inst.schema.feature(item.feature).name + "=" + item.original;
        std::string via;
        for (const auto& c : x.witness.changes()) via += (via.empty() ? "" : ", ") + change_text(inst.schema, c);
        out << "  {" << items << "}  via " << via << "\n";
    }
}

void print_resp(std::ostream& out, const ExplanationReport& r, const Instance& inst) {
    for (std::size_t i = 0; i < r.resp.size(); ++i) {
        std::ostringstream score;
        score << std::setprecision(6) << r.resp[i].to_double();
        out << std::left << std::setw(16) << (inst.schema.feature(i).name + "=" + inst.entity.values[i]) << " "
            << std::setw(10) << score.str() << " " << r.resp[i].to_string() << "\n";
    }
}

void print_table(std::ostream& out, const ExplanationReport& r, const Instance& inst, const std::string& order) {
    const auto& d = r.diagnostics;
    out << "entity " << inst.entity.id << " (label 1), k* = " << (d.k_star ? std::to_string(*d.k_star) : "none")
        << "\n";
    if (order == "all" && r.causal_explanations) print_explanations(out, "causal explanations", *r.causal_explanations, inst);
    if (order != "s") print_explanations(out, "c-explanations", r.c_explanations, inst);
    if (order != "c") print_explanations(out, "s-explanations", r.s_explanations, inst);
    out << "responsibility:\n";
    print_resp(out, r, inst);
    out << "search: mode=" << d.mode << " max_card=" << d.max_cardinality << " candidates=" << d.candidates_tested
        << " classifier_calls=" << d.classifier_calls << " pruned=" << d.pruned_by_constraints
        << " levels=" << d.levels_searched << (d.exhausted ? " exhausted" : "")
        << (d.budget_exhausted ? " budget-exhausted" : "") << (d.complete ? "" : " incomplete") << "\n";
}

int run_encode(const std::string& schema_path, const std::string& data_path, const std::string& out_schema,
               const std::string& out_constraints, const std::string& out_data) {
    const auto doc = parse_schema_document(read_file(schema_path));
    const auto enc = encode_schema(doc.features, doc.buckets);
    const auto schema_text = write_schema_document(enc.schema);
    const auto constraints_text = print_constraints(enc.groups, enc.schema);
    if (!out_schema.empty()) write_file(out_schema, schema_text);
    if (!out_constraints.empty()) write_file(out_constraints, constraints_text);

    if (data_path.empty()) {
        if (out_schema.empty()) std::cout << schema_text;
        if (out_constraints.empty()) std::cout << constraints_text;
        return kOk;
    }
    const auto table = parse_csv(read_file(data_path));
    const auto& raw = doc.features;
    // Columns: optional id, the raw features in order, optional label.
    const bool has_id = !table.header.empty() && table.header.front() == "id";
    const std::size_t first = has_id ? 1 : 0;
    const bool has_label = table.header.size() == first + raw.size() + 1 && table.header.back() == "label";
    if (table.header.size() != first + raw.size() + (has_label ? 1 : 0))
        throw Error(ErrorKind::HeaderMismatch, "data header does not match the schema");
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (table.header[first + i] != raw[i].name)
            throw Error(ErrorKind::HeaderMismatch, "expected column '" + raw[i].name + "'");

    std::ostringstream csv;
    std::vector<std::string> header;
    if (has_id) header.push_back("id");
    for (const auto& f : enc.schema.features()) header.push_back(f.name);
    if (has_label) header.push_back("label");
    for (std::size_t i = 0; i < header.size(); ++i) csv << (i ? "," : "") << csv_field(header[i]);
    csv << "\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        std::vector<std::string> raw_values(row.begin() + static_cast<std::ptrdiff_t>(first),
                                            row.begin() + static_cast<std::ptrdiff_t>(first + raw.size()));
        std::vector<std::string> cells;
        if (has_id) cells.push_back(row.front());
        try {
            for (auto& v : enc.encode_row(raw_values)) cells.push_back(std::move(v));
        } catch (const Error& e) {
            throw Error(e.kind(), "line " + std::to_string(table.row_lines[r]) + ": " + e.what());
        }
        if (has_label) cells.push_back(row.back());
        for (std::size_t i = 0; i < cells.size(); ++i) csv << (i ? "," : "") << csv_field(cells[i]);
        csv << "\n";
    }
    if (out_data.empty()) std::cout << csv.str();
    else write_file(out_data, csv.str());
    return kOk;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NothingToExplain: return kNothingToExplain;
    case ErrorKind::MissingTableRow:
    case ErrorKind::ExternalTimeout:
    case ErrorKind::ExternalProtocolError:
    case ErrorKind::ExternalBadLabel: return kClassifierFailure;
    default: return kInputError;
    }
}

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("cfx");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("CFX_LOG")) spdlog::set_level(spdlog::level::from_str(level));
}

} // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Counterfactual explanations, responsibility scores and ASP export"};
    app.require_subcommand(1);

    InstanceFlags explain_flags;
    std::string order = "c";
    std::string format = "table";
    auto* explain = app.add_subcommand("explain", "minimal counterfactual explanations and responsibility");
    add_instance_flags(*explain, explain_flags, true);
    explain->add_option("--order", order, "c, s or all")->check(CLI::IsMember({"c", "s", "all"}));
    explain->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));

    InstanceFlags resp_flags;
    std::string resp_format = "table";
    auto* resp = app.add_subcommand("resp", "responsibility score of every feature value");
    add_instance_flags(*resp, resp_flags, true);
    resp->add_option("--format", resp_format, "table or json")->check(CLI::IsMember({"table", "json"}));

    InstanceFlags asp_flags;
    std::string asp_out;
    auto* asp = app.add_subcommand("export-asp", "answer-set program for the instance");
    add_instance_flags(*asp, asp_flags, false);
    asp->add_option("--out", asp_out, "write the program here instead of stdout");

    std::string enc_schema, enc_data, enc_out_schema, enc_out_constraints, enc_out_data;
    auto* encode = app.add_subcommand("encode", "bucketize and one-hot encode numeric features");
    encode->add_option("--schema", enc_schema, "schema with bucket specs")->required()->check(CLI::ExistingFile);
    encode->add_option("--data", enc_data, "raw CSV to translate")->check(CLI::ExistingFile);
    encode->add_option("--out-schema", enc_out_schema, "encoded schema file");
    encode->add_option("--out-constraints", enc_out_constraints, "one-hot group constraints file");
    encode->add_option("--out-data", enc_out_data, "encoded CSV (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*explain) {
            const auto inst = load_instance(explain_flags);
            const auto r = report(inst, order == "all");
            spdlog::info("{} candidates, {} classifier calls", r.diagnostics.candidates_tested,
                         r.diagnostics.classifier_calls);
            if (format == "json") std::cout << report_to_json(r, inst.schema, inst.entity).dump(2) << "\n";
            else print_table(std::cout, r, inst, order);
        } else if (*resp) {
            const auto inst = load_instance(resp_flags);
            const auto r = report(inst);
            if (resp_format == "json") std::cout << report_to_json(r, inst.schema, inst.entity)["resp"].dump(2) << "\n";
            else print_resp(std::cout, r, inst);
        } else if (*asp) {
            const auto inst = load_instance(asp_flags);
            const auto text = export_asp(inst).to_text();
            if (asp_out.empty()) std::cout << text;
            else write_file(asp_out, text);
        } else if (*encode) {
            return run_encode(enc_schema, enc_data, enc_out_schema, enc_out_constraints, enc_out_data);
        }
    } catch (const Error& e) {
        spdlog::error("{}", e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kInputError;
    }
    return kOk;
}
