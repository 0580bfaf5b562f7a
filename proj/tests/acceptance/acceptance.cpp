// One line per criterion; nonzero exit if any fails.

#include "cfx/asp_export.hpp"
#include "cfx/dsl.hpp"
#include "cfx/encoding.hpp"
#include "cfx/engine.hpp"
#include "cfx/external.hpp"
#include "cfx/io.hpp"

#include "oracle.hpp"
#include "support.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

using namespace cfx;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    std::size_t cases = 0;
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

using Items = std::vector<std::pair<FeatureIndex, Value>>;

Items items_of(const std::vector<ExplanationItem>& items) {
    Items out;
    for (const auto& i : items) out.emplace_back(i.feature, i.original);
    return out;
}

Items changes_of(const Intervention& iota) {
    Items out;
    for (const auto& ch : iota.changes()) out.emplace_back(ch.feature, ch.value);
    return out;
}

std::set<Items> item_sets(const std::vector<Explanation>& list) {
    std::set<Items> out;
    for (const auto& x : list) out.insert(items_of(x.items));
    return out;
}

const std::pair<FeatureIndex, Value> F1_0{0, "0"}, F2_1{1, "1"}, F3_1{2, "1"};

// Table 1 classifier, e1 = (0,1,1).
void table1(Check& c) {
    const auto start = Clock::now();
    const auto inst = cfx::support::table1_instance();
    const auto r = report(inst, true);
    const double elapsed = seconds_since(start);
    c.cases = 1;

    const std::set<Items> eps4_7_8{{F1_0, F2_1}, {F2_1}, {F2_1, F3_1}};
    c.expect(r.causal_explanations && item_sets(*r.causal_explanations) == eps4_7_8, "causal explanations");
    if (r.causal_explanations) {
        std::set<Items> witnesses;
        for (const auto& x : *r.causal_explanations) witnesses.insert(changes_of(x.witness));
        c.expect(witnesses == std::set<Items>{{{0, "1"}, {1, "0"}}, {{1, "0"}}, {{1, "0"}, {2, "0"}}},
                 "causal witnesses");
    }
    c.expect(item_sets(r.c_explanations) == std::set<Items>{{F2_1}}, "c-explanations");
    c.expect(item_sets(r.s_explanations) == std::set<Items>{{F2_1}}, "s-explanations");
    c.expect(r.resp == std::vector<Rational>{{0, 1}, {1, 1}, {0, 1}}, "x-resp");
    c.expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
}

void oracle_equivalence(Check& c) {
    const auto start = Clock::now();
    std::mt19937 rng(20240601);
    cfx::support::RandomSpec spec;
    spec.min_features = 2;
    spec.max_features = 5;
    spec.max_domain = 3;
    spec.denial_rate = 0.5;
    std::size_t with_denials = 0;
    for (int t = 0; t < 250; ++t) {
        const auto inst = cfx::support::random_instance(rng, spec);
        with_denials += !inst.constraints.denials.empty();
        const auto diff = cfx::support::diff_reports(report(inst, true), cfx::oracle::brute_force_report(inst));
        c.expect(diff.empty(), diff + "\n" + cfx::support::describe(inst));
        ++c.cases;
    }
    c.expect(with_denials > 50 && with_denials < 200, "denial share " + std::to_string(with_denials));
    const double elapsed = seconds_since(start);
    c.expect(elapsed < 60.0, "runtime " + std::to_string(elapsed) + " s");
}

FeatureSchema lift_schema() {
    return parse_schema_document(read_file(cfx::support::data_file("lift.schema.yaml"))).categorical_schema();
}

void lifting(Check& c) {
    const auto s = lift_schema();
    const auto liftable = *s.index_of("liftable");
    const auto age = *s.index_of("age");
    const auto rules = parse_rule_program("label 0 if gender = M. default 1.", s);

    // Denial only, record aged 85.
    const Instance old{s, Entity{"old", {"101", "0", "F", "160", "6", "85"}}, Classifier(s, rules),
                       parse_constraints("deny: liftable = 1 and age > 80.", s), FullSpace{}, {}};
    const auto bf = cfx::oracle::brute_force(old);
    std::size_t admissible = 0, blocked = 0;
    for (const auto& o : bf.outcomes) {
        const auto final_state = apply_intervention(s, old.entity, o.final_intervention);
        const bool forbidden = final_state.values[liftable] == "1" && std::stoi(final_state.values[age]) > 80;
        if (o.admissible) {
            ++admissible;
            c.expect(!forbidden, "admissible outcome lifts an 85-year-old");
        } else if (forbidden) {
            ++blocked;
        }
        ++c.cases;
    }
    c.expect(admissible > 0 && blocked > 0, "degenerate denial scenario");
    const auto old_report = report(old, true);
    for (const auto& x : *old_report.causal_explanations) {
        const auto final_state = apply_intervention(s, old.entity, x.witness);
        c.expect(!(final_state.values[liftable] == "1" && final_state.values[age] == "85"), "engine witness denied");
    }

    // Implication rule with the gender classifier.
    const auto mary = parse_entity(read_file(cfx::support::data_file("mary.csv")), s);
    const Instance lift{s, mary, Classifier(s, rules),
                        parse_constraints(read_file(cfx::support::data_file("lift.constraints")), s).merged(
                            parse_constraints("rule: gender = M and weight > 100 and age < 70 -> liftable = 1.", s)),
                        FullSpace{}, {}};
    const Intervention expected({{liftable, "1", Provenance::Propagated}, {*s.index_of("gender"), "M",
                                                                           Provenance::Explicit}});
    const auto r = report(lift, true);
    bool found = false;
    for (const auto& x : r.c_explanations) found = found || x.witness == expected;
    c.expect(found, "propagated witness missing from c-explanations");
    const auto admitted = is_admissible(s, lift.constraints, mary, cfx::support::iota({{*s.index_of("gender"), "M"}}));
    c.expect(std::holds_alternative<Admissible>(admitted) &&
                 std::get<Admissible>(admitted).final_intervention == expected,
             "propagation result");
    ++c.cases;
}

void buckets(Check& c) {
    const BucketSpec ere("ERE", {64, 71, 76, 81});
    c.expect(bucketize(ere, 65) == 1, "65");
    c.expect(bucketize(ere, 64) == 1, "64");
    c.expect(bucketize(ere, 63) == 0, "63");
    c.expect(bucketize(ere, 81) == 4, "81");
    const std::vector<RawFeature> raw{{"ERE", RawFeature::Kind::Numeric, {}, false}};
    const std::vector<BucketSpec> specs{ere};
    const auto enc = encode_schema(raw, specs);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> x(0, 150);
    for (int t = 0; t < 1000; ++t) {
        const auto v = one_hot(ere, x(rng));
        c.expect(std::accumulate(v.begin(), v.end(), 0) == 1, "one-hot sum");
        ++c.cases;
    }
    const Entity two_hot{"x", {"0", "1", "0", "1", "0"}};
    c.expect(!check_onehot(enc.schema, enc.groups, two_hot).satisfied, "two-hot accepted");
    c.cases += 5;
}

std::optional<std::size_t> k_star(const Instance& inst) { return report(inst).diagnostics.k_star; }

LabeledSample random_sample(std::mt19937& rng, const Instance& inst) {
    LabeledSample s;
    std::bernoulli_distribution keep(0.5);
    for (const auto& [values, label] : std::get<DecisionTable>(inst.classifier.spec()).rows) {
        if (!keep(rng)) continue;
        s.entities.push_back({"s" + std::to_string(s.entities.size()), values});
        s.labels.push_back(label);
    }
    if (s.entities.empty()) {
        s.entities.push_back(inst.entity);
        s.labels.push_back(Label::One);
    }
    return s;
}

void invariants(Check& c) {
    const auto start = Clock::now();
    std::mt19937 rng(777);
    cfx::support::RandomSpec spec;
    for (int t = 0; t < 1200; ++t) {
        const auto inst = cfx::support::random_instance(rng, spec);
        const auto tag = "\n" + cfx::support::describe(inst);
        const auto r = report(inst);
        const auto cs = item_sets(r.c_explanations);
        const auto ss = item_sets(r.s_explanations);
        c.expect(std::includes(ss.begin(), ss.end(), cs.begin(), cs.end()), "c not within s" + tag);

        std::set<std::size_t> sizes;
        for (const auto& x : r.c_explanations) sizes.insert(x.cardinality());
        c.expect(sizes.size() <= 1, "mixed c-cardinality" + tag);

        const auto n = static_cast<std::int64_t>(inst.schema.arity());
        for (const auto& q : r.resp)
            c.expect(q.num == 0 || (q.num == 1 && q.den >= 1 && q.den <= n), "resp " + q.to_string() + tag);

        const auto top = *std::max_element(r.resp.begin(), r.resp.end());
        std::set<FeatureIndex> best, c_union;
        if (top.num > 0)
            for (FeatureIndex i = 0; i < r.resp.size(); ++i)
                if (r.resp[i] == top) best.insert(i);
        for (const auto& x : r.c_explanations)
            for (auto f : x.features()) c_union.insert(f);
        c.expect(best == c_union, "max-resp features differ from c-explanation union" + tag);

        auto tighter = inst;
        tighter.constraints.denials.push_back(cfx::support::random_conjunction(rng, inst.schema, 2));
        const auto k0 = r.diagnostics.k_star;
        const auto k1 = k_star(tighter);
        c.expect(!k1 || (k0 && *k1 >= *k0), "k* dropped after adding a denial" + tag);

        auto sampled = inst;
        sampled.mode = random_sample(rng, inst);
        const auto sr = explain_from_sample(sampled);
        const auto causal = item_sets(*cfx::oracle::brute_force_report(inst).causal_explanations);
        for (const auto& x : sr.s_explanations)
            c.expect(causal.count(items_of(x.items)) == 1, "sample explanation is not causal" + tag);
        c.expect(!sr.diagnostics.k_star || (k0 && *sr.diagnostics.k_star >= *k0), "sample k* below full k*" + tag);

        c.expect(report_to_json(report(inst, true), inst.schema, inst.entity).dump() ==
                     report_to_json(report(inst, true), inst.schema, inst.entity).dump(),
                 "nondeterministic report" + tag);
        ++c.cases;
    }
    const double elapsed = seconds_since(start);
    c.expect(elapsed < 120.0, "runtime " + std::to_string(elapsed) + " s");
}

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

void asp(Check& c) {
    const auto p = export_asp(cfx::support::table1_instance());
    const auto text = p.to_text();
    c.expect(text == read_file(std::filesystem::path(CFX_GOLDEN_DIR) / "table1.lp"), "golden mismatch");
    std::size_t dom = 0, cls = 0, expl = 0;
    for (const auto& f : p.facts()) {
        dom += starts_with(f, "dom");
        cls += starts_with(f, "c(");
    }
    for (const auto& r : p.rules()) expl += starts_with(r, "expl");
    c.expect(dom == 6, "dom facts " + std::to_string(dom));
    c.expect(cls == 8, "classifier facts " + std::to_string(cls));
    c.expect(p.weak_constraints().size() == 3, "weak constraints");
    c.expect(expl == 3, "expl rules " + std::to_string(expl));
    const auto strong = p.strong_constraints();
    c.expect(strong.size() == 1 && strong[0].find(",do)") != std::string::npos &&
                 strong[0].find(",o)") != std::string::npos,
             "return-to-original constraint");
    try {
        c.expect(parse_asp(text) == p, "re-parse differs");
    } catch (const Error& e) {
        c.expect(false, std::string("re-parse: ") + e.what());
    }
    c.cases = 1;
}

std::size_t count_lines(const std::filesystem::path& p, std::set<std::string>* distinct = nullptr) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        ++n;
        if (distinct) distinct->insert(line.substr(line.rfind(' ') + 1));
    }
    return n;
}

std::string run_cli(const std::string& args, int* status) {
    const std::string cmd =
        "cd '" + cfx::support::data_dir().string() + "' && '" + CFX_CLI + "' " + args + " 2>/dev/null";
    std::string out;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return out;
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
    const int raw = ::pclose(pipe);
    *status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return out;
}

void external(Check& c) {
    const auto tmp = std::filesystem::temp_directory_path();
    const auto log = tmp / ("cfx_accept_" + std::to_string(::getpid()) + ".log");
    std::filesystem::remove(log);
    const std::string server = std::string(CFX_TABLE_SERVER) + " " + cfx::support::data_file("t1.csv");
    const auto schema = cfx::support::table1_schema();
    const auto expected = report(cfx::support::table1_instance(), true);

    {
        Instance inst{schema, cfx::support::e1(),
                      Classifier(schema, ExternalEndpoint{server + " --log " + log.string(),
                                                          std::chrono::milliseconds(2000), 3}),
                      {}, FullSpace{}, {}};
        const auto r = report(inst, true);
        c.expect(r == expected, "external report differs: " + cfx::support::diff_reports(r, expected));
        std::set<std::string> distinct;
        const auto lines = count_lines(log, &distinct);
        c.expect(lines == distinct.size() && lines <= schema.space_size(),
                 "CLASSIFY lines " + std::to_string(lines) + " for " + std::to_string(distinct.size()) + " tuples");
        c.expect(lines == inst.classifier.external()->requests_sent(), "request count");
        ++c.cases;
    }
    std::filesystem::remove(log);

    {
        int status = -1;
        const auto out = run_cli("explain --schema t1.schema.yaml --classifier 'cmd:" + server + " --log " +
                                     log.string() + "' --entity e1.csv --order all --format json",
                                 &status);
        c.expect(status == 0, "cli exit " + std::to_string(status));
        if (status == 0) {
            const auto j = Json::parse(out);
            c.expect(report_from_json(j, schema, cfx::support::e1()) == expected, "cli report differs");
        }
        std::set<std::string> distinct;
        const auto lines = count_lines(log, &distinct);
        c.expect(lines == distinct.size() && lines <= schema.space_size(), "cli CLASSIFY lines");
        ++c.cases;
    }
    std::filesystem::remove(log);

    for (int deadline : {150, 300, 500}) {
        ExternalClient stalled(ExternalEndpoint{server + " --mode stall", std::chrono::milliseconds(deadline), 3});
        const auto start = Clock::now();
        std::optional<ErrorKind> kind;
        try {
            (void)stalled.classify(cfx::support::e1());
        } catch (const Error& e) {
            kind = e.kind();
        }
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
        c.expect(kind == ErrorKind::ExternalTimeout, "stall did not time out");
        c.expect(ms >= deadline - 100 && ms <= deadline + 100,
                 "timeout after " + std::to_string(ms) + " ms for deadline " + std::to_string(deadline));
        ++c.cases;
    }
}

struct Criterion {
    int number;
    const char* title;
    std::function<void(Check&)> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Table 1 explanations and responsibility", table1},
        {2, "engine matches brute-force oracle", oracle_equivalence},
        {3, "lifting scenario with denial and implication", lifting},
        {4, "bucketization and one-hot groups", buckets},
        {5, "invariants over random instances", invariants},
        {6, "ASP export golden file and structure", asp},
        {7, "external classifier protocol", external},
    };
    int failed = 0;
    for (const auto& crit : criteria) {
        Check check;
        const auto start = Clock::now();
        try {
            crit.run(check);
        } catch (const std::exception& e) {
            check.failures.push_back(std::string("exception: ") + e.what());
        }
        const double elapsed = seconds_since(start);
        const bool ok = check.failures.empty();
        failed += !ok;
        std::ostringstream line;
        line << (ok ? "PASS" : "FAIL") << " criterion " << crit.number << ": " << crit.title << " (" << check.cases
             << " cases, " << elapsed << " s)";
        std::cout << line.str() << "\n";
        for (std::size_t i = 0; i < check.failures.size() && i < 5; ++i) std::cout << "    " << check.failures[i] << "\n";
        if (check.failures.size() > 5) std::cout << "    ... " << check.failures.size() - 5 << " more\n";
    }
    std::cout.flush();
    return failed == 0 ? 0 : 1;
}
