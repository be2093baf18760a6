#include "doctest.h"

#include <algorithm>
#include <bit>

#include "fm/analysis.hpp"
#include "fm/combinatorics.hpp"
#include "fm/engine.hpp"
#include "fm/oracle.hpp"
#include "fm/parse.hpp"
#include "random_models.hpp"
#include "reference_oracle.hpp"

using namespace fm;
using namespace fm::testing;

namespace {

FeatureTree random_model(Rng& rng, std::size_t max_nodes, std::size_t max_clauses) {
    FeatureTree t = random_tree(rng, {uniform(rng, 1, max_nodes), 12});
    t.constraints = random_clauses(rng, t, {max_clauses, 3});
    return t;
}

std::map<std::string, Count> by_name(const FeatureTree& t, const std::vector<Count>& counts) {
    std::map<std::string, Count> out;
    for (std::size_t i = 0; i < t.size(); ++i)
        out.emplace(t.nodes[i].name, counts[i]);
    return out;
}

} // namespace

TEST_CASE("engine agrees with enumeration") {
    Rng rng(1001);
    for (int round = 0; round < 300; ++round) {
        const auto t = random_model(rng, 14, 5);
        CAPTURE(emit_model(t));
        const auto r = run_engine(t, constraint_clauses(t));
        const auto o = enumerate(t);
        REQUIRE(r.product_count == o.configuration_count);
        REQUIRE(r.feature_counts == o.per_node_count);
        CHECK(o.product_count <= o.configuration_count);
    }
}

TEST_CASE("engine agrees with enumeration under arbitrary formulas") {
    Rng rng(1212);
    for (int round = 0; round < 150; ++round) {
        FeatureTree t = random_tree(rng, {uniform(rng, 2, 16), 12});
        std::vector<std::string> vars;
        for (const auto& n : t.nodes)
            vars.push_back(n.name);
        const auto nf = uniform(rng, 1, 3);
        for (std::uint64_t i = 0; i < nf; ++i)
            t.constraints.push_back(random_formula(rng, vars, 3));
        const auto clauses = constraint_clauses(t);
        if (clauses.size() > 24)
            continue;
        CAPTURE(emit_model(t));
        const auto r = run_engine(t, clauses);
        const auto o = enumerate(t);
        REQUIRE(r.product_count == o.configuration_count);
        REQUIRE(r.feature_counts == o.per_node_count);
    }
}

TEST_CASE("serial and parallel kernels agree") {
    Rng rng(2002);
    for (int round = 0; round < 40; ++round) {
        const auto t = random_model(rng, 16, 6);
        EngineOptions par;
        par.execution = Execution::Parallel;
        const auto a = run_engine(t, constraint_clauses(t));
        const auto b = run_engine(t, constraint_clauses(t), par);
        REQUIRE(a.product_count == b.product_count);
        REQUIRE(a.feature_counts == b.feature_counts);
        REQUIRE(a.root_terms == b.root_terms);

        OracleOptions op;
        op.execution = Execution::Parallel;
        op.collect_products = true;
        const auto oa = enumerate(t, op);
        op.execution = Execution::Serial;
        const auto ob = enumerate(t, op);
        REQUIRE(oa.configuration_count == ob.configuration_count);
        REQUIRE(oa.per_node_count == ob.per_node_count);
        REQUIRE(*oa.product_list == *ob.product_list);
    }
}

TEST_CASE("child order does not matter") {
    Rng rng(3003);
    for (int round = 0; round < 60; ++round) {
        const auto t = random_model(rng, 16, 4);
        auto shuffled = t;
        for (auto& n : shuffled.nodes)
            std::shuffle(n.children.begin(), n.children.end(), rng);
        const auto a = run_engine(t, constraint_clauses(t));
        const auto b = run_engine(shuffled, constraint_clauses(shuffled));
        REQUIRE(a.product_count == b.product_count);
        REQUIRE(by_name(t, a.feature_counts) == by_name(shuffled, b.feature_counts));
    }
}

TEST_CASE("clause order does not matter") {
    Rng rng(3103);
    for (int round = 0; round < 60; ++round) {
        const auto t = random_model(rng, 14, 5);
        auto reordered = t;
        std::shuffle(reordered.constraints.begin(), reordered.constraints.end(), rng);
        const auto a = run_engine(t, constraint_clauses(t));
        const auto b = run_engine(reordered, constraint_clauses(reordered));
        REQUIRE(a.product_count == b.product_count);
        REQUIRE(a.feature_counts == b.feature_counts);
    }
}

TEST_CASE("adding a constraint never adds products") {
    Rng rng(4004);
    for (int round = 0; round < 80; ++round) {
        auto t = random_model(rng, 16, 4);
        const auto before = count_products(t, constraint_clauses(t));
        auto extra = random_clauses(rng, t, {1, 3});
        if (extra.empty())
            continue;
        t.constraints.push_back(extra.front());
        CHECK(count_products(t, constraint_clauses(t)) <= before);
    }
}

TEST_CASE("metrics stay in range") {
    Rng rng(5005);
    for (int round = 0; round < 100; ++round) {
        const auto t = random_model(rng, 14, 4);
        const auto r = analyze(t);
        for (const auto& [name, c] : r.feature_count) {
            CHECK(c >= 0);
            CHECK(c <= r.product_count);
        }
        if (r.empty())
            continue;
        CHECK(*r.homogeneity >= 0);
        CHECK(*r.homogeneity <= 1);
        CHECK(r.core_features.contains(t.name(t.root)));
    }
}

TEST_CASE("unconstrained trees match the closed forms") {
    Rng rng(6006);
    for (int round = 0; round < 60; ++round) {
        auto t = random_tree(rng, {uniform(rng, 1, 30), 20});
        std::vector<Count> p(t.size());
        auto order = preorder(t);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const Node& n = t.node(*it);
            if (n.is_leaf()) {
                p[it->index()] = 1;
                continue;
            }
            std::vector<Count> kids;
            for (NodeId c : n.children)
                kids.push_back(p[c.index()]);
            // sum over k in [low, high] of the k-subset products, by brute force
            Count total = 0;
            const std::size_t s = kids.size();
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << s); ++m) {
                const auto k = static_cast<unsigned>(std::popcount(m));
                if (k < n.card->low || k > n.card->high)
                    continue;
                Count prod = 1;
                for (std::size_t i = 0; i < s; ++i)
                    if ((m >> i) & 1u)
                        prod *= kids[i];
                total += prod;
            }
            p[it->index()] = total;
        }
        CHECK(count_products(t, constraint_clauses(t)) == p[t.root.index()]);
    }
}

TEST_CASE("model and formula text round-trips") {
    Rng rng(7007);
    const std::vector<std::string> vars{"A", "B", "C", "D", "E"};
    for (int round = 0; round < 100; ++round) {
        const auto t = random_model(rng, 20, 4);
        CHECK(structurally_equal(read_json(emit_json(t)), t));
        CHECK(structurally_equal(parse_model(emit_model(t)), t));
        const auto f = random_formula(rng, vars, 4);
        CHECK(parse_formula(format_formula(f)) == f);
    }
}

TEST_CASE("negating more clauses only grows the literal sets") {
    Rng rng(8008);
    for (int round = 0; round < 50; ++round) {
        const auto t = random_model(rng, 12, 6);
        const auto cs = constraint_clauses(t);
        if (cs.size() == 0)
            continue;
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << cs.size()); ++k) {
            std::vector<std::size_t> small, large;
            for (std::size_t j = 0; j < cs.size(); ++j) {
                if ((k >> j) & 1u)
                    small.push_back(j);
                if (((k >> j) & 1u) || j == 0)
                    large.push_back(j);
            }
            const auto a = negate_subset(cs, small);
            const auto b = negate_subset(cs, large);
            CHECK(std::includes(b.affirmed.begin(), b.affirmed.end(), a.affirmed.begin(), a.affirmed.end()));
            CHECK(std::includes(b.negated.begin(), b.negated.end(), a.negated.begin(), a.negated.end()));
        }
    }
}

TEST_CASE("descendants follow the root paths") {
    Rng rng(9009);
    for (int round = 0; round < 30; ++round) {
        const auto t = random_tree(rng, {uniform(rng, 1, 25), 25});
        const auto parent = parents(t);
        for (std::size_t n = 0; n < t.size(); ++n) {
            const auto d = descendants(t, node_id(n));
            for (std::size_t m = 0; m < t.size(); ++m) {
                bool on_path = false;
                for (auto up = parent[m]; up; up = parent[up->index()])
                    on_path = on_path || up->index() == n;
                CHECK((std::find(d.begin(), d.end(), node_id(m)) != d.end()) == on_path);
            }
        }
    }
}

TEST_CASE("normalizations preserve the configurations") {
    Rng rng(1111);
    for (int round = 0; round < 40; ++round) {
        auto t = random_model(rng, 10, 3);
        const auto names = node_names(t.nodes);
        const auto before = projected_configurations(ReferenceModel::of(t), names);

        std::set<NodeId> marked;
        for (std::size_t i = 0; i < t.size(); ++i)
            if (uniform(rng, 0, 2) == 0)
                marked.insert(node_id(i));
        const auto leafy = primitive_to_leaf({t, marked}).tree;
        REQUIRE(validate(leafy).empty());
        CHECK(projected_configurations(ReferenceModel::of(leafy), names) == before);
        if (leafy.size() <= OracleOptions{}.node_limit)
            CHECK(enumerate(leafy).configuration_count == Count(static_cast<unsigned long>(before.size())));
    }
}
