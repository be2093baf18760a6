#include "fm/normalize.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_set>

namespace fm {

std::string_view to_string(GroupKind kind) {
    switch (kind) {
    case GroupKind::Mandatory: return "mandatory";
    case GroupKind::Optional: return "optional";
    case GroupKind::Or: return "or";
    case GroupKind::Xor: return "xor";
    }
    return "?";
}

Cardinality dependency_to_card(GroupKind kind, unsigned s) {
    if (s == 0)
        throw Error("a group needs at least one child");
    switch (kind) {
    case GroupKind::Mandatory: return {s, s};
    case GroupKind::Optional: return {0, s};
    case GroupKind::Or: return {1, s};
    case GroupKind::Xor: return {1, 1};
    }
    throw Error("unknown group kind");
}

namespace {

/// Hands out `_auxN` names that collide neither with existing nodes nor with
/// each other.
class AuxNames {
public:
    explicit AuxNames(const std::vector<Node>& nodes) {
        for (const auto& n : nodes)
            used_.insert(n.name);
    }

    std::string fresh(unsigned hint = 1) {
        std::string name = "_aux" + std::to_string(hint);
        for (unsigned i = 1; used_.contains(name); ++i)
            name = "_aux" + std::to_string(i);
        used_.insert(name);
        return name;
    }

private:
    std::unordered_set<std::string> used_;
};

NodeId add_node(std::vector<Node>& nodes, Node node) {
    nodes.push_back(std::move(node));
    return node_id(nodes.size() - 1);
}

void postorder(const FeatureTree& tree, NodeId n, std::vector<NodeId>& out) {
    for (NodeId c : tree.node(n).children)
        postorder(tree, c, out);
    out.push_back(n);
}

} // namespace

FeatureTree split_mixed_group(const FeatureTree& tree, NodeId parent, const std::vector<GroupCell>& partition) {
    const Node& p = tree.node(parent);
    std::multiset<NodeId> listed;
    for (const auto& cell : partition) {
        if (cell.children.empty())
            throw Error("empty cell in group partition of '" + p.name + "'");
        listed.insert(cell.children.begin(), cell.children.end());
    }
    if (listed != std::multiset<NodeId>(p.children.begin(), p.children.end()))
        throw Error("cells do not partition the children of '" + p.name + "'");

    FeatureTree out = tree;
    if (partition.size() == 1) {
        out.nodes[parent.index()].card =
            dependency_to_card(partition.front().kind, static_cast<unsigned>(p.children.size()));
        return out;
    }

    AuxNames names(out.nodes);
    std::vector<NodeId> children;
    for (const auto& cell : partition) {
        if (cell.kind == GroupKind::Mandatory) {
            children.insert(children.end(), cell.children.begin(), cell.children.end());
            continue;
        }
        const auto card = dependency_to_card(cell.kind, static_cast<unsigned>(cell.children.size()));
        children.push_back(add_node(out.nodes, Node{names.fresh(), cell.children, card}));
    }
    const auto k = static_cast<unsigned>(children.size());
    out.nodes[parent.index()].children = std::move(children);
    out.nodes[parent.index()].card = Cardinality{k, k};
    return out;
}

MarkedTree primitive_to_leaf(const MarkedTree& marked) {
    MarkedTree out = marked;
    FeatureTree& tree = out.tree;
    for (NodeId m : marked.primitive)
        tree.node(m);

    std::vector<NodeId> order;
    postorder(marked.tree, marked.tree.root, order);
    AuxNames names(tree.nodes);
    auto parent_of = parents(tree);

    for (NodeId p : order) {
        if (!marked.primitive.contains(p) || tree.nodes[p.index()].is_leaf())
            continue;
        const std::string outer = names.fresh();
        const std::string inner = names.fresh();
        Node& old = tree.nodes[p.index()];
        Node holder{inner, std::move(old.children), old.card};
        old.children.clear();
        old.card.reset();
        const NodeId aux2 = add_node(tree.nodes, std::move(holder));
        const NodeId aux1 = add_node(tree.nodes, Node{outer, {p, aux2}, Cardinality{2, 2}});

        if (auto up = parent_of[p.index()]) {
            auto& siblings = tree.nodes[up->index()].children;
            std::replace(siblings.begin(), siblings.end(), p, aux1);
        } else {
            tree.root = aux1;
        }
        parent_of.resize(tree.nodes.size());
        parent_of[aux1.index()] = parent_of[p.index()];
        parent_of[p.index()] = aux1;
        parent_of[aux2.index()] = aux1;
        for (NodeId c : tree.nodes[aux2.index()].children)
            parent_of[c.index()] = aux2;
    }
    return out;
}

FeatureGraph FeatureGraph::from_tree(const FeatureTree& tree) { return {tree.nodes, tree.root, tree.constraints}; }

ValidationReport validate_graph(const FeatureGraph& graph) {
    FeatureTree as_tree{graph.nodes, graph.root, graph.constraints};
    ValidationReport out;
    for (auto& v : validate(as_tree))
        if (v.kind != ViolationKind::MultipleParents)
            out.push_back(std::move(v));
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        std::set<NodeId> seen;
        for (NodeId c : graph.nodes[i].children)
            if (c.index() < graph.nodes.size() && !seen.insert(c).second)
                out.push_back({ViolationKind::MultipleParents,
                               "feature '" + graph.nodes[c.index()].name + "' is listed twice under '" +
                                   graph.nodes[i].name + "'",
                               c, {}, {}});
    }
    return out;
}

FeatureTree dag_to_tree(const FeatureGraph& graph) {
    auto report = validate_graph(graph);
    if (!report.empty())
        throw ValidationError(std::move(report));

    FeatureTree out{graph.nodes, graph.root, graph.constraints};
    std::vector<std::vector<NodeId>> parent_list(graph.nodes.size());
    for (std::size_t i = 0; i < graph.nodes.size(); ++i)
        for (NodeId c : graph.nodes[i].children)
            parent_list[c.index()].push_back(node_id(i));

    AuxNames names(out.nodes);
    for (std::size_t n = 0; n < graph.nodes.size(); ++n) {
        const auto& ps = parent_list[n];
        for (std::size_t k = 1; k < ps.size(); ++k) {
            const std::string aux_name = names.fresh(static_cast<unsigned>(k + 1));
            const NodeId aux = add_node(out.nodes, Node{aux_name, {}, std::nullopt});
            auto& siblings = out.nodes[ps[k].index()].children;
            std::replace(siblings.begin(), siblings.end(), node_id(n), aux);
            out.constraints.push_back(
                Formula::biconditional(Formula::var(aux_name), Formula::var(graph.nodes[n].name)));
        }
    }
    require_valid(out);
    return out;
}

namespace {

void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    if (k > n)
        return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    for (;;) {
        fn(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

} // namespace

Formula edge_to_formula(std::string_view parent, const Cardinality& card, const std::vector<std::string>& children) {
    const std::size_t s = children.size();
    const auto p = [&] { return Formula::var(std::string(parent)); };
    std::vector<Formula> conjuncts;
    for (const auto& c : children)
        conjuncts.push_back(Formula::implication(Formula::var(c), p()));

    // At least `low`: every (s - low + 1)-subset contains a selected child.
    if (card.low > 0 && card.low <= s) {
        for_each_subset(s, s - card.low + 1, [&](const std::vector<std::size_t>& subset) {
            std::vector<Formula> any;
            for (auto i : subset)
                any.push_back(Formula::var(children[i]));
            conjuncts.push_back(Formula::implication(p(), Formula::disjunction(std::move(any))));
        });
    }
    // At most `high`: no (high + 1)-subset is fully selected.
    if (card.high < s) {
        for_each_subset(s, card.high + 1, [&](const std::vector<std::size_t>& subset) {
            std::vector<Formula> all;
            for (auto i : subset)
                all.push_back(Formula::var(children[i]));
            conjuncts.push_back(Formula::implication(p(), Formula::negation(Formula::conjunction(std::move(all)))));
        });
    }
    if (card.low > s) {
        // Unsatisfiable bound: the parent cannot be selected.
        conjuncts.push_back(Formula::negation(p()));
    }
    return Formula::conjunction(std::move(conjuncts));
}

} // namespace fm
