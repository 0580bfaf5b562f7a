#include "cfx/classifiers.hpp"
#include "cfx/csv.hpp"
#include "cfx/dsl.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace cfx;
using cfx::support::kind_of;

namespace {

const FeatureSchema kSchema = cfx::support::table1_schema();

const char* kTable1Csv = "F1,F2,F3,label\n"
                         "0,1,1,1\n1,1,1,1\n1,1,0,1\n1,0,1,0\n"
                         "1,0,0,1\n0,1,0,1\n0,0,1,0\n0,0,0,0\n";

const char* kTable1Rules = "label 0 if F2 = 0 and F3 = 1. label 0 if F2 = 0 and F1 = 0. default 1.";

std::vector<std::vector<Value>> all_tuples() {
    std::vector<std::vector<Value>> out;
    for (const char* a : {"0", "1"})
        for (const char* b : {"0", "1"})
            for (const char* c : {"0", "1"}) out.push_back({a, b, c});
    return out;
}

} // namespace

TEST(Table, ClassifiesTable1Rows) {
    Classifier c(kSchema, load_table(kTable1Csv, kSchema));
    EXPECT_EQ(c.classify({"e1", {"0", "1", "1"}}), Label::One);
    EXPECT_EQ(c.classify({"e4", {"1", "0", "1"}}), Label::Zero);
    EXPECT_EQ(std::get<DecisionTable>(c.spec()).rows.size(), 8u);
}

TEST(Table, LoadErrors) {
    EXPECT_TRUE(load_table("F1,F2,F3,label\n", kSchema).rows.empty());
    EXPECT_EQ(kind_of([] { load_table("F1,F2,F3,label\n0,1,1,1\n0,1,1,0\n", kSchema); }), ErrorKind::ConflictingRow);
    EXPECT_NO_THROW(load_table("F1,F2,F3,label\n0,1,1,1\n0,1,1,1\n", kSchema));
    EXPECT_EQ(kind_of([] { load_table("F1,F3,F2,label\n", kSchema); }), ErrorKind::HeaderMismatch);
    EXPECT_EQ(kind_of([] { load_table("F1,F2,F3\n0,1,1\n", kSchema); }), ErrorKind::HeaderMismatch);
    EXPECT_EQ(kind_of([] { load_table("F1,F2,F3,label\n0,1,1,yes\n", kSchema); }), ErrorKind::BadLabel);
    EXPECT_EQ(kind_of([] { load_table("F1,F2,F3,label\n0,1,5,1\n", kSchema); }), ErrorKind::OutOfDomainValue);
}

TEST(Table, EmptyTableAlwaysMisses) {
    Classifier c(kSchema, load_table("F1,F2,F3,label\n", kSchema));
    EXPECT_EQ(kind_of([&] { (void)c.classify({"e", {"0", "0", "0"}}); }), ErrorKind::MissingTableRow);
}

TEST(Rules, AgreeWithTable1OnAllTuples) {
    Classifier table(kSchema, load_table(kTable1Csv, kSchema));
    Classifier rules(kSchema, parse_rule_program(kTable1Rules, kSchema));
    // Hand-evaluated truth table: 0 exactly when F2=0 and (F3=1 or F1=0).
    for (const auto& t : all_tuples()) {
        const Label expected = t[1] == "0" && (t[2] == "1" || t[0] == "0") ? Label::Zero : Label::One;
        EXPECT_EQ(rules.classify({"x", t}), expected);
        EXPECT_EQ(table.classify({"x", t}), expected);
    }
}

TEST(Rules, FirstMatchWins) {
    auto p = parse_rule_program("label 1 if F1 = 1. label 0 if F1 = 1. label 0 if F2 >= 0. default 1.", kSchema);
    EXPECT_EQ(p.evaluate(kSchema, std::vector<Value>{"1", "0", "0"}), Label::One);
    EXPECT_EQ(p.evaluate(kSchema, std::vector<Value>{"0", "0", "0"}), Label::Zero);
}

TEST(Rules, ConstantProgram) {
    auto p = parse_rule_program("default 0.", kSchema);
    EXPECT_TRUE(p.rules.empty());
    EXPECT_EQ(p.default_label, Label::Zero);
}

TEST(Classifier, RejectsInvalidSpecs) {
    EXPECT_EQ(kind_of([] { Classifier(kSchema, ExternalEndpoint{"true", std::chrono::milliseconds(10), 2}); }),
              ErrorKind::SchemaMismatch);
    RuleProgram bad{{Rule{Label::Zero, {Condition{7, CompareOp::Eq, "1"}}}}, Label::One};
    EXPECT_EQ(kind_of([&] { Classifier(kSchema, bad); }), ErrorKind::UnknownFeature);
}

TEST(Csv, QuotingAndTrimming) {
    auto t = parse_csv("a, b ,\"c,d\"\n\n1,\"x\"\"y\",3\n");
    EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b", "c,d"}));
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0][1], "x\"y");
    EXPECT_EQ(t.row_lines[0], 3u);
    EXPECT_EQ(kind_of([] { parse_csv("a,b\n1\n"); }), ErrorKind::RaggedRows);
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
}

TEST(Csv, EntityRowsWithAndWithoutIds) {
    auto with_ids = read_entity_rows("id,F1,F2,F3,label\ne1,0,1,1,1\n", kSchema, LabelColumn::Required);
    EXPECT_TRUE(with_ids.had_ids);
    EXPECT_EQ(with_ids.entities[0].id, "e1");
    EXPECT_EQ(with_ids.labels[0], Label::One);
    auto bare = read_entity_rows("F1,F2,F3\n0,1,1\n1,1,1\n", kSchema, LabelColumn::Optional);
    EXPECT_FALSE(bare.had_ids);
    EXPECT_EQ(bare.entities[1].id, "r2");
    EXPECT_EQ(kind_of([] { read_entity_rows("F1,F2,F3\n0,1,1\n", kSchema, LabelColumn::Required); }),
              ErrorKind::HeaderMismatch);
    EXPECT_EQ(kind_of([] { read_entity_rows("F1,F2,F3,label\n0,1,1,1\n", kSchema, LabelColumn::Forbidden); }),
              ErrorKind::HeaderMismatch);
}
