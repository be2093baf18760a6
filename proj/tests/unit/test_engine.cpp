#include "doctest.h"

#include <algorithm>

#include "fixture.hpp"
#include "fm/engine.hpp"
#include "fm/oracle.hpp"
#include "fm/parse.hpp"

using namespace fm;

namespace {

std::vector<std::size_t> relevant_of(const FeatureTree& t, const char* name) {
    return relevant_constraints(t, constraint_clauses(t))[t.id_of(name).index()];
}

EngineResult with_tables(const FeatureTree& t) {
    EngineOptions o;
    o.keep_tables = true;
    return run_engine(t, constraint_clauses(t), o);
}

const NodeEntry& entry(const EngineResult& r, const FeatureTree& t, const char* name,
                       std::vector<std::size_t> clauses) {
    const auto& table = r.tables[t.id_of(name).index()];
    return table.at(table.mask_of(clauses));
}

} // namespace

TEST_CASE("relevant clauses of the fixture") {
    const auto t = testing::fixture();
    CHECK(relevant_of(t, "D") == std::vector<std::size_t>{2});
    CHECK(relevant_of(t, "B") == std::vector<std::size_t>{0, 1});
    CHECK(relevant_of(t, "C") == std::vector<std::size_t>{0, 1, 2});
    CHECK(relevant_of(t, "A") == std::vector<std::size_t>{0, 1, 2});
    CHECK(relevant_of(t, "F").empty());
}

TEST_CASE("fixture counts") {
    const auto t = testing::fixture();
    const auto r = with_tables(t);
    CHECK(r.product_count == 119);
    CHECK(r.root_terms ==
          std::vector<Count>{Count(255), Count(-64), Count(-64), Count(32), Count(-64), Count(16), Count(16), Count(-8)});
    CHECK(entry(r, t, "A", {}).count == 255);
    CHECK(entry(r, t, "A", {0}).count == 64);
    CHECK(entry(r, t, "C", {0}).count == 1);
    CHECK(entry(r, t, "B", {}).count == 7);

    const auto& c = entry(r, t, "C", {0});
    CHECK(c.status.label() == NodeStatus::Label::Potential);
    CHECK(entry(r, t, "H", {0}).status.label() == NodeStatus::Label::Absent);
    CHECK(entry(r, t, "I", {}).status.label() == NodeStatus::Label::Potential);
    CHECK(entry(r, t, "E", {0}).status.label() == NodeStatus::Label::Present);
    CHECK(entry(r, t, "B", {0}).status.label() == NodeStatus::Label::Present);
    CHECK(entry(r, t, "B", {0}).count == 4);
    CHECK_THROWS_AS(r.tables[t.id_of("D").index()].mask_of(std::vector<std::size_t>{0}), Error);

    // Descendant propagation at (A, K = {}) for the grandchild E.
    const auto& root_table = r.tables[t.root.index()];
    const auto& root_empty = root_table.at(0);
    const auto pos = std::find(root_table.descendants.begin(), root_table.descendants.end(), t.id_of("E")) -
                     root_table.descendants.begin();
    CHECK(root_empty.descendant_counts[static_cast<std::size_t>(pos)] == 128);
}

TEST_CASE("feature counts of the fixture") {
    const auto t = testing::fixture();
    const auto fc = feature_counts(t, constraint_clauses(t));
    CHECK(fc[t.id_of("E").index()] == 48);
    CHECK(fc[t.root.index()] == 119);
    const auto oracle = enumerate(t);
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(fc[i] == oracle.per_node_count[i]);
}

TEST_CASE("unconstrained fixture") {
    auto t = testing::fixture();
    t.constraints.clear();
    CHECK(count_products(t, constraint_clauses(t)) == 255);
}

TEST_CASE("contradictions") {
    const auto t = parse_model("feature A mandatory { feature B feature C }\nconstraints { B implies !C }");
    CHECK(count_products(t, constraint_clauses(t)) == 0);
    const auto fc = feature_counts(t, constraint_clauses(t));
    CHECK(std::all_of(fc.begin(), fc.end(), [](const Count& c) { return c == 0; }));

    const auto u = parse_model("feature A optional { feature B }\nconstraints { B; !B }");
    const auto r = with_tables(u);
    CHECK(r.product_count == 0);
    // K = {B, !B} negated: B both affirmed and negated.
    CHECK(entry(r, u, "B", {0, 1}).status.label() == NodeStatus::Label::Contradicting);
    CHECK(entry(r, u, "B", {0, 1}).count == 0);
    CHECK(entry(r, u, "A", {0, 1}).count == 0);

    const auto v = parse_model("feature A optional { feature B }\nconstraints { B and !B }");
    CHECK(count_products(v, constraint_clauses(v)) == 0);
}

TEST_CASE("classify reports infeasible cards") {
    const auto t = parse_model("feature A mandatory { feature B feature C }\nconstraints { !B }");
    const auto r = with_tables(t);
    // D = B: nothing forbids B, so A is fine.
    CHECK(entry(r, t, "A", {0}).status.label() == NodeStatus::Label::Present);
    const auto u = parse_model("feature A mandatory { feature B feature C }\nconstraints { B }");
    const auto ru = with_tables(u);
    CHECK(entry(ru, u, "B", {0}).status.label() == NodeStatus::Label::Absent);
    CHECK(entry(ru, u, "A", {0}).status.desel);
    CHECK(ru.product_count == 1);
}

TEST_CASE("constraints on internal nodes and the root") {
    for (const char* text : {
             "feature A optional { feature B or { feature C feature D } feature E }\nconstraints { B iff E }",
             "feature A optional { feature B or { feature C feature D } feature E }\nconstraints { !A }",
             "feature A optional { feature B or { feature C feature D } feature E }\nconstraints { A implies B }",
             "feature A card [0..0] { feature B }",
             "feature A card [1..2] { feature B card [0..0] { feature C } feature D }\nconstraints { C or D }",
         }) {
        const auto t = parse_model(text);
        const auto r = run_engine(t, constraint_clauses(t));
        const auto o = enumerate(t);
        CHECK(r.product_count == o.configuration_count);
        CHECK(r.feature_counts == o.per_node_count);
    }
}

TEST_CASE("serial and parallel agree") {
    const auto t = testing::fixture();
    EngineOptions par;
    par.execution = Execution::Parallel;
    const auto a = run_engine(t, constraint_clauses(t));
    const auto b = run_engine(t, constraint_clauses(t), par);
    CHECK(a.product_count == b.product_count);
    CHECK(a.feature_counts == b.feature_counts);
    CHECK(a.root_terms == b.root_terms);
}

TEST_CASE("count only skips feature counts") {
    const auto t = testing::fixture();
    EngineOptions o;
    o.feature_counts = false;
    const auto r = run_engine(t, constraint_clauses(t), o);
    CHECK(r.product_count == 119);
    CHECK(r.feature_counts.empty());
}
