#include "support.hpp"

#include <sstream>

#ifndef CFX_TEST_DATA_DIR
#error "CFX_TEST_DATA_DIR must point at tests/data"
#endif

namespace cfx::support {

std::filesystem::path data_dir() { return CFX_TEST_DATA_DIR; }
std::string data_file(const std::string& name) { return (data_dir() / name).string(); }

FeatureSchema binary_schema(std::size_t n) {
    std::vector<FeatureDecl> decls;
    for (std::size_t i = 1; i <= n; ++i) decls.push_back({"F" + std::to_string(i), {"0", "1"}, true});
    return FeatureSchema(std::move(decls));
}

FeatureSchema table1_schema() { return binary_schema(3); }

DecisionTable table1_table() {
    DecisionTable t;
    auto put = [&](const char* a, const char* b, const char* c, Label l) { t.rows[{a, b, c}] = l; };
    put("0", "1", "1", Label::One);
    put("1", "1", "1", Label::One);
    put("1", "1", "0", Label::One);
    put("1", "0", "1", Label::Zero);
    put("1", "0", "0", Label::One);
    put("0", "1", "0", Label::One);
    put("0", "0", "1", Label::Zero);
    put("0", "0", "0", Label::Zero);
    return t;
}

Entity e1() { return Entity{"e1", {"0", "1", "1"}}; }

Instance table1_instance() {
    auto schema = table1_schema();
    return Instance{schema, e1(), Classifier(schema, table1_table()), {}, FullSpace{}, {}};
}

Intervention iota(std::initializer_list<std::pair<FeatureIndex, Value>> changes) {
    std::vector<Change> out;
    for (const auto& [f, v] : changes) out.push_back({f, v, Provenance::Explicit});
    return Intervention(std::move(out));
}

Conjunction random_conjunction(std::mt19937& rng, const FeatureSchema& schema, std::size_t max_len) {
    static constexpr CompareOp ops[] = {CompareOp::Eq, CompareOp::Ne, CompareOp::Lt,
                                        CompareOp::Le, CompareOp::Gt, CompareOp::Ge};
    std::uniform_int_distribution<std::size_t> len(1, max_len);
    std::uniform_int_distribution<std::size_t> feat(0, schema.arity() - 1);
    Conjunction body;
    for (std::size_t k = len(rng); k > 0; --k) {
        const FeatureIndex f = feat(rng);
        const auto& dom = schema.feature(f).domain;
        std::uniform_int_distribution<std::size_t> pick(0, dom.size() - 1);
        std::uniform_int_distribution<std::size_t> op(0, schema.feature(f).ordered ? 5 : 1);
        body.push_back({f, ops[op(rng)], dom[pick(rng)]});
    }
    return body;
}

Instance random_instance(std::mt19937& rng, const RandomSpec& spec) {
    std::uniform_int_distribution<std::size_t> arity(spec.min_features, spec.max_features);
    std::uniform_int_distribution<std::size_t> dom_size(2, spec.max_domain);
    std::bernoulli_distribution coin(0.5);

    const std::size_t n = arity(rng);
    std::vector<FeatureDecl> decls;
    for (std::size_t i = 0; i < n; ++i) {
        FeatureDecl d{"F" + std::to_string(i + 1), {}, true};
        for (std::size_t v = dom_size(rng); v > 0; --v) d.domain.push_back(std::to_string(d.domain.size()));
        decls.push_back(std::move(d));
    }
    FeatureSchema schema(std::move(decls));

    Entity e{"e", {}};
    for (const auto& f : schema.features()) {
        std::uniform_int_distribution<std::size_t> pick(0, f.domain.size() - 1);
        e.values.push_back(f.domain[pick(rng)]);
    }

    std::bernoulli_distribution zero(spec.zero_rate);
    auto table = table_from(schema, [&](const std::vector<Value>&) { return zero(rng); });
    table.rows[e.values] = Label::One;

    ConstraintSet cs;
    if (std::bernoulli_distribution(spec.denial_rate)(rng))
        for (std::size_t k = coin(rng) ? 2 : 1; k > 0; --k) cs.denials.push_back(random_conjunction(rng, schema, 2));
    if (std::bernoulli_distribution(spec.implication_rate)(rng)) {
        std::uniform_int_distribution<std::size_t> feat(0, n - 1);
        for (std::size_t k = coin(rng) ? 2 : 1; k > 0; --k) {
            const FeatureIndex f = feat(rng);
            const auto& dom = schema.feature(f).domain;
            std::uniform_int_distribution<std::size_t> pick(0, dom.size() - 1);
            cs.implications.push_back({random_conjunction(rng, schema, 2), f, dom[pick(rng)]});
        }
    }
    return Instance{schema, e, Classifier(schema, std::move(table)), std::move(cs), FullSpace{}, {}};
}

std::vector<std::vector<FeatureIndex>> feature_sets(const std::vector<Explanation>& list) {
    std::vector<std::vector<FeatureIndex>> out;
    for (const auto& x : list) out.push_back(x.features());
    return out;
}

namespace {

std::string show(const Explanation& x) {
    std::ostringstream s;
    s << "{";
    for (const auto& item : x.items) s << " " << item.feature << ":" << item.original;
    s << " } via [";
    for (const auto& c : x.witness.changes())
        s << " " << c.feature << "=" << c.value << (c.provenance == Provenance::Propagated ? "*" : "");
    s << " ]";
    return s.str();
}

std::string show(const std::vector<Explanation>& list) {
    std::string out;
    for (const auto& x : list) out += show(x) + "; ";
    return out.empty() ? "(none)" : out;
}

std::string compare_lists(const char* what, const std::vector<Explanation>& a, const std::vector<Explanation>& b) {
    if (a == b) return {};
    return std::string(what) + " differ\n  engine: " + show(a) + "\n  oracle: " + show(b) + "\n";
}

} // namespace

std::string diff_reports(const ExplanationReport& engine, const ExplanationReport& oracle) {
    std::string out;
    out += compare_lists("c-explanations", engine.c_explanations, oracle.c_explanations);
    out += compare_lists("s-explanations", engine.s_explanations, oracle.s_explanations);
    if (engine.causal_explanations && oracle.causal_explanations)
        out += compare_lists("causal explanations", *engine.causal_explanations, *oracle.causal_explanations);
    if (engine.resp != oracle.resp) {
        out += "resp differ:";
        for (std::size_t i = 0; i < std::max(engine.resp.size(), oracle.resp.size()); ++i)
            out += " " + (i < engine.resp.size() ? engine.resp[i].to_string() : "-") + "/" +
                   (i < oracle.resp.size() ? oracle.resp[i].to_string() : "-");
        out += "\n";
    }
    if (engine.diagnostics.k_star != oracle.diagnostics.k_star) out += "k* differs\n";
    if (engine.diagnostics.exhausted != oracle.diagnostics.exhausted) out += "exhaustion flag differs\n";
    return out;
}

std::string describe(const Instance& inst) {
    std::ostringstream s;
    s << "schema:";
    for (const auto& f : inst.schema.features()) s << " " << f.name << "/" << f.domain.size();
    s << " entity:";
    for (const auto& v : inst.entity.values) s << " " << v;
    s << " denials=" << inst.constraints.denials.size() << " implications=" << inst.constraints.implications.size()
      << " count_propagated=" << inst.options.count_propagated;
    return s.str();
}

} // namespace cfx::support
