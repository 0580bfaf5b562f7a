#include "cfx/io.hpp"

#include "cfx/csv.hpp"
#include "cfx/error.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cfx {

FeatureSchema SchemaDocument::categorical_schema() const {
    std::vector<FeatureDecl> decls;
    for (const auto& f : features) {
        if (f.kind == RawFeature::Kind::Numeric)
            throw Error(ErrorKind::InvalidSchema, "feature '" + f.name + "' is numeric; encode the schema first");
        decls.push_back({f.name, f.domain, f.ordered});
    }
    return FeatureSchema(std::move(decls));
}

SchemaDocument parse_schema_document(std::string_view yaml) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml));
    } catch (const YAML::Exception& ex) {
        throw Error(ErrorKind::InvalidSchema, ex.what());
    }
    const auto features = root["features"];
    if (!features || !features.IsSequence())
        throw Error(ErrorKind::InvalidSchema, "schema needs a 'features' list");

    SchemaDocument doc;
    try {
        for (const auto& node : features) {
            RawFeature raw;
            if (!node["name"]) throw Error(ErrorKind::InvalidSchema, "feature without a name");
            raw.name = node["name"].as<std::string>();
            const bool has_domain = static_cast<bool>(node["domain"]);
            const bool has_buckets = static_cast<bool>(node["buckets"]);
            if (has_domain == has_buckets)
                throw Error(ErrorKind::InvalidSchema,
                            "feature '" + raw.name + "' needs exactly one of 'domain' or 'buckets'");
            if (has_domain) {
                for (const auto& v : node["domain"]) raw.domain.push_back(v.as<std::string>());
                bool all_int = !raw.domain.empty();
                for (const auto& v : raw.domain) all_int = all_int && parse_integer(v).has_value();
                raw.ordered = node["ordered"] ? node["ordered"].as<bool>() : all_int;
            } else {
                raw.kind = RawFeature::Kind::Numeric;
                std::vector<double> cuts;
                for (const auto& c : node["buckets"]) cuts.push_back(c.as<double>());
                doc.buckets.emplace_back(raw.name, std::move(cuts));
            }
            doc.features.push_back(std::move(raw));
        }
    } catch (const YAML::Exception& ex) {
        throw Error(ErrorKind::InvalidSchema, ex.what());
    }
    // Validates names and domains of the categorical part early.
    std::vector<FeatureDecl> decls;
    for (const auto& f : doc.features)
        decls.push_back(f.kind == RawFeature::Kind::Categorical ? FeatureDecl{f.name, f.domain, f.ordered}
                                                                : FeatureDecl{f.name, {"0"}, false});
    (void)FeatureSchema(std::move(decls));
    return doc;
}

std::string write_schema_document(const FeatureSchema& schema) {
    YAML::Emitter out;
    out << YAML::BeginMap << YAML::Key << "features" << YAML::Value << YAML::BeginSeq;
    for (const auto& f : schema.features()) {
        out << YAML::BeginMap;
        out << YAML::Key << "name" << YAML::Value << f.name;
        out << YAML::Key << "domain" << YAML::Value << YAML::Flow << f.domain;
        out << YAML::Key << "ordered" << YAML::Value << f.ordered;
        out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path.string() + "'");
    out << content;
}

Entity parse_entity(std::string_view csv, const FeatureSchema& schema) {
    auto rows = read_entity_rows(csv, schema, LabelColumn::Optional);
    if (rows.entities.size() != 1)
        throw Error(ErrorKind::InvalidInstance,
                    "entity file must hold exactly one row, found " + std::to_string(rows.entities.size()));
    Entity e = std::move(rows.entities.front());
    if (!rows.had_ids) e.id = "e";
    return e;
}

LabeledSample parse_sample(std::string_view csv, const FeatureSchema& schema) {
    auto rows = read_entity_rows(csv, schema, LabelColumn::Required);
    LabeledSample sample;
    sample.entities = std::move(rows.entities);
    for (const auto& label : rows.labels) sample.labels.push_back(*label);
    return sample;
}

namespace {

double six_digits(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return std::strtod(buf, nullptr);
}

Json explanation_json(const Explanation& expl, const FeatureSchema& schema, const Entity& e) {
    Json changes = Json::array();
    for (const auto& c : expl.witness.changes()) {
        Json item;
        item["feature"] = schema.feature(c.feature).name;
        item["original"] = e.values[c.feature];
        item["new"] = c.value;
        if (c.provenance == Provenance::Propagated) item["propagated"] = true;
        changes.push_back(std::move(item));
    }
    return changes;
}

Explanation explanation_from_json(const Json& json, const FeatureSchema& schema, const Entity& e,
                                  bool count_propagated) {
    std::vector<Change> changes;
    for (const auto& item : json) {
        auto index = schema.index_of(item.at("feature").get<std::string>());
        if (!index) throw Error(ErrorKind::UnknownFeature, item.at("feature").get<std::string>());
        if (item.at("original").get<std::string>() != e.values[*index])
            throw Error(ErrorKind::SchemaMismatch, "report does not belong to this entity");
        const bool propagated = item.value("propagated", false);
        changes.push_back({*index, item.at("new").get<std::string>(),
                           propagated ? Provenance::Propagated : Provenance::Explicit});
    }
    Explanation expl;
    expl.witness = Intervention(std::move(changes));
    for (const auto& c : expl.witness.changes())
        if (count_propagated || c.provenance == Provenance::Explicit) expl.items.push_back({c.feature, e.values[c.feature]});
    return expl;
}

Json explanations_json(const std::vector<Explanation>& list, const FeatureSchema& schema, const Entity& e) {
    Json out = Json::array();
    for (const auto& expl : list) out.push_back(explanation_json(expl, schema, e));
    return out;
}

std::vector<Explanation> explanations_from_json(const Json& json, const FeatureSchema& schema, const Entity& e,
                                                bool count_propagated) {
    std::vector<Explanation> out;
    for (const auto& item : json) out.push_back(explanation_from_json(item, schema, e, count_propagated));
    return out;
}

} // namespace

Json report_to_json(const ExplanationReport& report, const FeatureSchema& schema, const Entity& e) {
    Json out;
    out["entity"] = e.id;
    out["c_explanations"] = explanations_json(report.c_explanations, schema, e);
    out["s_explanations"] = explanations_json(report.s_explanations, schema, e);
    if (report.causal_explanations)
        out["causal_explanations"] = explanations_json(*report.causal_explanations, schema, e);
    Json resp = Json::object();
    for (std::size_t i = 0; i < report.resp.size(); ++i) {
        Json score;
        score["original"] = e.values[i];
        score["score"] = six_digits(report.resp[i].to_double());
        score["exact"] = report.resp[i].to_string();
        resp[schema.feature(i).name] = std::move(score);
    }
    out["resp"] = std::move(resp);

    const auto& d = report.diagnostics;
    Json diag;
    diag["mode"] = d.mode;
    diag["max_cardinality"] = d.max_cardinality;
    diag["count_propagated"] = d.count_propagated;
    diag["candidates_tested"] = d.candidates_tested;
    diag["classifier_calls"] = d.classifier_calls;
    diag["pruned_by_constraints"] = d.pruned_by_constraints;
    diag["levels_searched"] = d.levels_searched;
    diag["k_star"] = d.k_star ? Json(*d.k_star) : Json(nullptr);
    diag["exhausted"] = d.exhausted;
    diag["budget_exhausted"] = d.budget_exhausted;
    diag["complete"] = d.complete;
    out["diagnostics"] = std::move(diag);
    return out;
}

ExplanationReport report_from_json(const Json& json, const FeatureSchema& schema, const Entity& e) {
    ExplanationReport report;
    try {
        const auto& d = json.at("diagnostics");
        auto& diag = report.diagnostics;
        diag.mode = d.at("mode").get<std::string>();
        diag.max_cardinality = d.at("max_cardinality").get<std::size_t>();
        diag.count_propagated = d.at("count_propagated").get<bool>();
        diag.candidates_tested = d.at("candidates_tested").get<std::size_t>();
        diag.classifier_calls = d.at("classifier_calls").get<std::size_t>();
        diag.pruned_by_constraints = d.at("pruned_by_constraints").get<std::size_t>();
        diag.levels_searched = d.at("levels_searched").get<std::size_t>();
        if (!d.at("k_star").is_null()) diag.k_star = d.at("k_star").get<std::size_t>();
        diag.exhausted = d.at("exhausted").get<bool>();
        diag.budget_exhausted = d.at("budget_exhausted").get<bool>();
        diag.complete = d.at("complete").get<bool>();

        report.c_explanations = explanations_from_json(json.at("c_explanations"), schema, e, diag.count_propagated);
        report.s_explanations = explanations_from_json(json.at("s_explanations"), schema, e, diag.count_propagated);
        if (json.contains("causal_explanations"))
            report.causal_explanations =
                explanations_from_json(json.at("causal_explanations"), schema, e, diag.count_propagated);
        report.resp.resize(schema.arity());
        for (std::size_t i = 0; i < schema.arity(); ++i)
            report.resp[i] = parse_rational(json.at("resp").at(schema.feature(i).name).at("exact").get<std::string>());
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorKind::IoError, std::string("malformed report: ") + ex.what());
    }
    return report;
}

} // namespace cfx
