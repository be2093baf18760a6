#include "doctest.h"

#include <algorithm>

#include "fixture.hpp"
#include "fm/normalize.hpp"
#include "fm/parse.hpp"

using namespace fm;

namespace {

std::vector<std::string> child_names(const FeatureTree& t, std::string_view parent) {
    std::vector<std::string> out;
    for (NodeId c : t.node(t.id_of(parent)).children)
        out.push_back(t.name(c));
    return out;
}

std::vector<std::string> clause_texts(const ClauseSet& cs, const FeatureTree& t) {
    std::vector<std::string> out;
    for (const auto& c : cs.clauses)
        out.push_back(format_clause(c, t));
    return out;
}

std::set<std::string> names_of(const std::set<NodeId>& ids, const FeatureTree& t) {
    std::set<std::string> out;
    for (NodeId id : ids)
        out.insert(t.name(id));
    return out;
}

} // namespace

TEST_CASE("group kinds as cards") {
    CHECK(dependency_to_card(GroupKind::Or, 3) == Cardinality{1, 3});
    CHECK(dependency_to_card(GroupKind::Xor, 5) == Cardinality{1, 1});
    CHECK(dependency_to_card(GroupKind::Mandatory, 1) == Cardinality{1, 1});
    CHECK(dependency_to_card(GroupKind::Optional, 4) == Cardinality{0, 4});
    CHECK_THROWS_AS(dependency_to_card(GroupKind::Or, 0), Error);
}

TEST_CASE("splitting a mixed group") {
    const auto t = parse_model("feature A card [0..3] { feature B feature C feature D }");
    const auto out = split_mixed_group(t, t.root, {{{t.id_of("B")}, GroupKind::Mandatory},
                                                   {{t.id_of("C"), t.id_of("D")}, GroupKind::Xor}});
    CHECK(validate(out).empty());
    CHECK(out.node(out.root).card == Cardinality{2, 2});
    CHECK(child_names(out, "A") == std::vector<std::string>{"B", "_aux1"});
    CHECK(out.node(out.id_of("_aux1")).card == Cardinality{1, 1});
    CHECK(child_names(out, "_aux1") == std::vector<std::string>{"C", "D"});

    SUBCASE("one cell only relabels") {
        const auto u = split_mixed_group(t, t.root, {{{t.id_of("B"), t.id_of("C"), t.id_of("D")}, GroupKind::Optional}});
        CHECK(u.size() == t.size());
        CHECK(u.node(u.root).card == Cardinality{0, 3});
    }
    SUBCASE("cells must partition the children") {
        CHECK_THROWS_AS(split_mixed_group(t, t.root, {{{t.id_of("B")}, GroupKind::Or}}), Error);
        CHECK_THROWS_AS(split_mixed_group(t, t.root,
                                          {{{t.id_of("B"), t.id_of("C")}, GroupKind::Or},
                                           {{t.id_of("C"), t.id_of("D")}, GroupKind::Or}}),
                        Error);
    }
}

TEST_CASE("aux names avoid existing names") {
    ParseOptions opts;
    opts.allow_reserved_names = true;
    const auto t = parse_model("feature A card [0..3] { feature B feature C feature _aux1 }", opts);
    const auto out = split_mixed_group(t, t.root, {{{t.id_of("B")}, GroupKind::Or},
                                                   {{t.id_of("C"), t.id_of("_aux1")}, GroupKind::Or}});
    CHECK(validate(out).empty());
    CHECK(child_names(out, "A") == std::vector<std::string>{"_aux2", "_aux3"});
}

TEST_CASE("primitive internal nodes become leaves") {
    const auto t = parse_model("feature A optional { feature B card [1..2] { feature C feature D } }");
    SUBCASE("marked internal node") {
        const auto out = primitive_to_leaf({t, {t.id_of("B")}}).tree;
        CHECK(validate(out).empty());
        CHECK(out.node(out.id_of("B")).is_leaf());
        CHECK(child_names(out, "A") == std::vector<std::string>{"_aux1"});
        CHECK(out.node(out.id_of("_aux1")).card == Cardinality{2, 2});
        CHECK(child_names(out, "_aux1") == std::vector<std::string>{"B", "_aux2"});
        CHECK(out.node(out.id_of("_aux2")).card == Cardinality{1, 2});
        CHECK(child_names(out, "_aux2") == std::vector<std::string>{"C", "D"});
    }
    SUBCASE("marked leaf is left alone") {
        const auto out = primitive_to_leaf({t, {t.id_of("C")}}).tree;
        CHECK(structurally_equal(out, t));
    }
    SUBCASE("nested and root") {
        const auto out = primitive_to_leaf({t, {t.root, t.id_of("B")}}).tree;
        CHECK(validate(out).empty());
        CHECK(out.node(out.id_of("A")).is_leaf());
        CHECK(out.node(out.id_of("B")).is_leaf());
        CHECK(out.name(out.root) != "A");
    }
}

TEST_CASE("graphs become trees") {
    SUBCASE("tree input is unchanged") {
        const auto t = testing::fixture();
        CHECK(structurally_equal(dag_to_tree(FeatureGraph::from_tree(t)), t));
    }
    SUBCASE("diamond") {
        const auto t = parse_model("feature A or { feature B optional { feature D } feature C optional { feature X } }");
        auto g = FeatureGraph::from_tree(t);
        auto& c = g.nodes[t.id_of("C").index()];
        c.children = {t.id_of("D")};
        g.nodes.erase(g.nodes.begin() + static_cast<std::ptrdiff_t>(t.id_of("X").index()));
        REQUIRE(validate_graph(g).empty());
        const auto out = dag_to_tree(g);
        CHECK(validate(out).empty());
        CHECK(child_names(out, "B") == std::vector<std::string>{"D"});
        CHECK(child_names(out, "C") == std::vector<std::string>{"_aux2"});
        REQUIRE(out.constraints.size() == 1);
        CHECK(format_formula(out.constraints[0]) == "_aux2 iff D");
    }
    SUBCASE("three parents") {
        FeatureGraph g;
        g.root = node_id(0);
        g.nodes = {Node{"R", {node_id(1), node_id(2), node_id(3)}, Cardinality{0, 3}},
                   Node{"P", {node_id(4)}, Cardinality{0, 1}}, Node{"Q", {node_id(4)}, Cardinality{0, 1}},
                   Node{"S", {node_id(4)}, Cardinality{1, 1}}, Node{"N", {}, std::nullopt}};
        const auto out = dag_to_tree(g);
        CHECK(validate(out).empty());
        CHECK(out.size() == 7);
        CHECK(out.constraints.size() == 2);
        CHECK(child_names(out, "Q") == std::vector<std::string>{"_aux2"});
        CHECK(child_names(out, "S") == std::vector<std::string>{"_aux3"});
    }
    SUBCASE("cycles are rejected") {
        FeatureGraph g;
        g.root = node_id(0);
        g.nodes = {Node{"R", {node_id(1)}, Cardinality{0, 1}}, Node{"P", {node_id(2)}, Cardinality{0, 1}},
                   Node{"Q", {node_id(1)}, Cardinality{0, 1}}};
        CHECK_FALSE(validate_graph(g).empty());
        CHECK_THROWS_AS(dag_to_tree(g), ValidationError);
    }
}

TEST_CASE("edges as formulas") {
    const auto xor_edge = edge_to_formula("P", {1, 1}, {"A", "B"});
    CHECK(format_formula(xor_edge) ==
          "(A implies P) and (B implies P) and (P implies A or B) and (P implies !(A and B))");
    const auto open = edge_to_formula("P", {0, 2}, {"A", "B"});
    CHECK(format_formula(open) == "(A implies P) and (B implies P)");
    const auto all = edge_to_formula("P", {2, 2}, {"A", "B"});
    CHECK(format_formula(all) == "(A implies P) and (B implies P) and (P implies A) and (P implies B)");

    // Truth table against the card reading on every assignment.
    for (unsigned low = 0; low <= 3; ++low)
        for (unsigned high = low; high <= 3; ++high) {
            const auto f = edge_to_formula("P", {low, high}, {"A", "B", "C"});
            for (unsigned m = 0; m < 16; ++m) {
                auto val = [&](const std::string& n) {
                    return ((m >> (n == "P" ? 3 : n[0] - 'A')) & 1u) != 0;
                };
                const unsigned picked = (m & 1u) + ((m >> 1) & 1u) + ((m >> 2) & 1u);
                const bool p = (m >> 3) & 1u;
                const bool expected = p ? picked >= low && picked <= high : picked == 0;
                CHECK(f.evaluate(val) == expected);
            }
        }
}

TEST_CASE("clausal form") {
    const auto t = parse_model("feature R optional { feature A feature B feature C feature E feature H }");
    CHECK(clause_texts(to_cnf(parse_formula("E implies H"), t), t) == std::vector<std::string>{"(!E or H)"});
    CHECK(clause_texts(to_cnf(parse_formula("A iff B"), t), t) == std::vector<std::string>{"(!A or B)", "(A or !B)"});
    CHECK(clause_texts(to_cnf(parse_formula("A or (B and C)"), t), t) ==
          std::vector<std::string>{"(A or B)", "(A or C)"});
    CHECK(to_cnf(parse_formula("A or !A"), t).clauses.empty());
    CHECK(clause_texts(to_cnf(parse_formula("(A or B) and (B or A)"), t), t) == std::vector<std::string>{"(A or B)"});
    const auto contradiction = to_cnf(parse_formula("A and !A"), t);
    CHECK_FALSE(contradiction.has_empty_clause);
    CHECK(contradiction.size() == 2);
    CHECK(to_cnf(parse_formula("!(A implies A)"), t).size() == 2);
    CHECK_THROWS_AS(to_cnf(parse_formula("Z"), t), Error);
}

TEST_CASE("negated clause subsets") {
    const auto t = testing::fixture();
    const auto cs = constraint_clauses(t);
    REQUIRE(cs.size() == 3);
    auto one = negate_subset(cs, {0});
    CHECK(names_of(one.affirmed, t) == std::set<std::string>{"E"});
    CHECK(names_of(one.negated, t) == std::set<std::string>{"H"});
    auto none = negate_subset(cs, {});
    CHECK(none.affirmed.empty());
    CHECK(none.negated.empty());
    auto both = negate_subset(cs, {0, 2});
    CHECK(names_of(both.affirmed, t) == std::set<std::string>{"E", "J"});
    CHECK(names_of(both.negated, t) == std::set<std::string>{"H", "I"});
    CHECK_THROWS_AS(negate_subset(cs, {3}), Error);
}
