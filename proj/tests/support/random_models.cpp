#include "random_models.hpp"

#include <algorithm>

namespace fm::testing {

std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

Cardinality random_card(Rng& rng, unsigned s) {
    switch (uniform(rng, 0, 4)) {
    case 0: return dependency_to_card(GroupKind::Mandatory, s);
    case 1: return dependency_to_card(GroupKind::Optional, s);
    case 2: return dependency_to_card(GroupKind::Or, s);
    case 3: return dependency_to_card(GroupKind::Xor, s);
    default: {
        const auto low = static_cast<unsigned>(uniform(rng, 0, s));
        const auto high = static_cast<unsigned>(uniform(rng, low, s));
        return {low, high};
    }
    }
}

FeatureTree random_tree(Rng& rng, const TreeShape& shape) {
    const std::size_t n = std::max<std::size_t>(shape.nodes, 1);
    FeatureTree tree;
    tree.nodes.resize(n);
    tree.root = node_id(0);
    std::size_t leaves = 1;
    for (std::size_t i = 0; i < n; ++i)
        tree.nodes[i].name = "N" + std::to_string(i);
    for (std::size_t i = 1; i < n; ++i) {
        std::vector<std::size_t> hosts;
        for (std::size_t j = 0; j < i; ++j) {
            // Hanging below an internal node adds a leaf; below a leaf it does not.
            if (leaves < shape.max_leaves || tree.nodes[j].is_leaf())
                hosts.push_back(j);
        }
        const std::size_t parent = hosts[uniform(rng, 0, hosts.size() - 1)];
        if (!tree.nodes[parent].is_leaf())
            ++leaves;
        tree.nodes[parent].children.push_back(node_id(i));
    }
    for (auto& node : tree.nodes)
        if (!node.is_leaf())
            node.card = random_card(rng, static_cast<unsigned>(node.children.size()));
    return tree;
}

std::vector<Formula> random_clauses(Rng& rng, const FeatureTree& tree, const ClauseShape& shape) {
    std::vector<Formula> out;
    const auto count = uniform(rng, 0, shape.max_clauses);
    for (std::uint64_t c = 0; c < count; ++c) {
        std::vector<Formula> lits;
        const auto width = uniform(rng, 1, shape.max_literals);
        for (std::uint64_t l = 0; l < width; ++l) {
            Formula v = Formula::var(tree.nodes[uniform(rng, 0, tree.size() - 1)].name);
            lits.push_back(uniform(rng, 0, 1) ? std::move(v) : Formula::negation(std::move(v)));
        }
        out.push_back(Formula::disjunction(std::move(lits)));
    }
    return out;
}

Formula random_formula(Rng& rng, const std::vector<std::string>& vars, int depth) {
    if (depth <= 0 || uniform(rng, 0, 3) == 0)
        return Formula::var(vars[uniform(rng, 0, vars.size() - 1)]);
    switch (uniform(rng, 0, 4)) {
    case 0: return Formula::negation(random_formula(rng, vars, depth - 1));
    case 1:
    case 2: {
        std::vector<Formula> ops;
        const auto n = uniform(rng, 2, 3);
        for (std::uint64_t i = 0; i < n; ++i)
            ops.push_back(random_formula(rng, vars, depth - 1));
        return uniform(rng, 0, 1) ? Formula::conjunction(std::move(ops)) : Formula::disjunction(std::move(ops));
    }
    case 3: return Formula::implication(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1));
    default:
        return Formula::biconditional(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1));
    }
}

namespace {

bool reaches(const std::vector<Node>& nodes, std::size_t from, std::size_t to) {
    std::vector<std::size_t> stack{from};
    std::vector<bool> seen(nodes.size(), false);
    while (!stack.empty()) {
        const auto n = stack.back();
        stack.pop_back();
        if (n == to)
            return true;
        if (seen[n])
            continue;
        seen[n] = true;
        for (NodeId c : nodes[n].children)
            stack.push_back(c.index());
    }
    return false;
}

} // namespace

FeatureGraph random_dag(Rng& rng, const TreeShape& shape, std::size_t extra_edges) {
    FeatureGraph g = FeatureGraph::from_tree(random_tree(rng, shape));
    const std::size_t n = g.nodes.size();
    for (std::size_t attempt = 0; attempt < 8 * extra_edges && extra_edges > 0; ++attempt) {
        const auto u = uniform(rng, 0, n - 1);
        const auto v = uniform(rng, 1, n - 1);
        auto& kids = g.nodes[u].children;
        if (u == v || std::find(kids.begin(), kids.end(), node_id(v)) != kids.end() || reaches(g.nodes, v, u))
            continue;
        kids.push_back(node_id(v));
        g.nodes[u].card = random_card(rng, static_cast<unsigned>(kids.size()));
        --extra_edges;
    }
    return g;
}

} // namespace fm::testing
