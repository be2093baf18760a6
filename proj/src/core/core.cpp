#include "fm/core.hpp"

#include <map>
#include <set>
#include <unordered_map>

namespace fm {

const Node& FeatureTree::node(NodeId id) const {
    if (id.index() >= nodes.size())
        throw Error("unknown node id " + std::to_string(id.value));
    return nodes[id.index()];
}

std::optional<NodeId> FeatureTree::find(std::string_view name) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].name == name)
            return node_id(i);
    return std::nullopt;
}

NodeId FeatureTree::id_of(std::string_view name) const {
    if (auto id = find(name))
        return *id;
    throw Error("unknown feature '" + std::string(name) + "'");
}

namespace {

std::string describe(const FeatureTree& tree, std::size_t i) {
    const auto& name = tree.nodes[i].name;
    return name.empty() ? "node #" + std::to_string(i) : "feature '" + name + "'";
}

std::string card_text(const Cardinality& c) {
    return "card [" + std::to_string(c.low) + ".." + std::to_string(c.high) + "]";
}

} // namespace

ValidationError::ValidationError(ValidationReport report)
    : Error(report.empty() ? std::string("invalid feature tree") : report.front().message),
      report_(std::move(report)) {}

bool is_valid_name(std::string_view name) {
    if (name.empty())
        return false;
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(name[0]) && name[0] != '_')
        return false;
    for (char c : name)
        if (!alpha(c) && !digit(c) && c != '_')
            return false;
    return true;
}

bool is_reserved_name(std::string_view name) { return !name.empty() && name[0] == '_'; }

ValidationReport validate(const FeatureTree& tree) {
    ValidationReport out;
    const std::size_t n = tree.nodes.size();
    if (n == 0) {
        out.push_back({ViolationKind::NoNodes, "feature tree has no nodes", {}, {}, {}});
        return out;
    }
    const bool root_ok = tree.root.index() < n;
    if (!root_ok)
        out.push_back({ViolationKind::DanglingChild,
                       "root id " + std::to_string(tree.root.value) + " is out of range", {}, {}, {}});

    std::unordered_map<std::string, std::size_t> first_seen;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& name = tree.nodes[i].name;
        if (name.empty()) {
            out.push_back({ViolationKind::EmptyName, describe(tree, i) + " has an empty name", node_id(i), {}, {}});
            continue;
        }
        if (!is_valid_name(name))
            out.push_back({ViolationKind::InvalidName, "invalid feature name '" + name + "'", node_id(i), {}, {}});
        if (!first_seen.emplace(name, i).second)
            out.push_back({ViolationKind::DuplicateName, "duplicate feature name '" + name + "'", node_id(i), {}, {}});
    }

    std::vector<unsigned> parent_count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (NodeId c : tree.nodes[i].children) {
            if (c.index() >= n) {
                out.push_back({ViolationKind::DanglingChild,
                               describe(tree, i) + " lists unknown child id " + std::to_string(c.value),
                               node_id(i), {}, {}});
                continue;
            }
            if (++parent_count[c.index()] == 2)
                out.push_back({ViolationKind::MultipleParents, describe(tree, c.index()) + " has more than one parent",
                               c, {}, {}});
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const bool is_root = root_ok && i == tree.root.index();
        if (is_root && parent_count[i] > 0)
            out.push_back({ViolationKind::RootHasParent, "root " + describe(tree, i) + " has a parent", node_id(i), {}, {}});
        if (!is_root && parent_count[i] == 0)
            out.push_back({ViolationKind::MultipleRoots,
                           describe(tree, i) + " has no parent; only the root may be parentless", node_id(i), {}, {}});
    }

    // Cycle detection by iterative three-colour DFS over the whole child relation.
    std::vector<char> colour(n, 0);
    for (std::size_t start = 0; start < n; ++start) {
        if (colour[start] != 0)
            continue;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
        colour[start] = 1;
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            const auto& kids = tree.nodes[v].children;
            if (next == kids.size()) {
                colour[v] = 2;
                stack.pop_back();
                continue;
            }
            const NodeId c = kids[next++];
            if (c.index() >= n)
                continue;
            if (colour[c.index()] == 1) {
                out.push_back({ViolationKind::Cycle, "cycle through " + describe(tree, c.index()), c, {}, {}});
            } else if (colour[c.index()] == 0) {
                colour[c.index()] = 1;
                stack.emplace_back(c.index(), 0);
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        const auto& node = tree.nodes[i];
        const auto s = node.children.size();
        if (s == 0) {
            if (node.card)
                out.push_back({ViolationKind::LeafWithCard, "leaf " + describe(tree, i) + " carries a card", node_id(i), {}, {}});
            continue;
        }
        if (!node.card) {
            out.push_back({ViolationKind::MissingCard, describe(tree, i) + " has children but no card", node_id(i), {}, {}});
            continue;
        }
        const auto& card = *node.card;
        if (card.low > card.high)
            out.push_back({ViolationKind::LowExceedsHigh,
                           describe(tree, i) + ": " + card_text(card) + " low exceeds high", node_id(i), {}, {}});
        if (card.high > s)
            out.push_back({ViolationKind::HighExceedsArity,
                           describe(tree, i) + ": " + card_text(card) + " high exceeds arity " + std::to_string(s),
                           node_id(i), {}, {}});
    }

    for (std::size_t k = 0; k < tree.constraints.size(); ++k) {
        for (const auto& name : tree.constraints[k].variables()) {
            if (!first_seen.contains(name))
                out.push_back({ViolationKind::UnknownFeature,
                               "constraint " + std::to_string(k + 1) + ": unknown feature " + name, {}, k, name});
        }
    }
    return out;
}

void require_valid(const FeatureTree& tree) {
    auto report = validate(tree);
    if (!report.empty())
        throw ValidationError(std::move(report));
}

std::vector<std::optional<NodeId>> parents(const FeatureTree& tree) {
    std::vector<std::optional<NodeId>> out(tree.nodes.size());
    for (std::size_t i = 0; i < tree.nodes.size(); ++i)
        for (NodeId c : tree.nodes[i].children)
            if (c.index() < out.size())
                out[c.index()] = node_id(i);
    return out;
}

std::vector<NodeId> descendants(const FeatureTree& tree, NodeId n) {
    const Node& start = tree.node(n);
    std::vector<NodeId> out;
    std::vector<NodeId> stack(start.children.rbegin(), start.children.rend());
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        out.push_back(v);
        const auto& kids = tree.node(v).children;
        stack.insert(stack.end(), kids.rbegin(), kids.rend());
    }
    return out;
}

std::vector<NodeId> preorder(const FeatureTree& tree) {
    std::vector<NodeId> out{tree.root};
    auto rest = descendants(tree, tree.root);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

bool structurally_equal(const FeatureTree& a, const FeatureTree& b) {
    if (a.nodes.size() != b.nodes.size() || a.constraints != b.constraints)
        return false;
    if (a.name(a.root) != b.name(b.root))
        return false;
    std::map<std::string, const Node*> by_name;
    for (const auto& node : b.nodes)
        by_name.emplace(node.name, &node);
    for (const auto& node : a.nodes) {
        auto it = by_name.find(node.name);
        if (it == by_name.end())
            return false;
        const Node& other = *it->second;
        if (node.card != other.card || node.children.size() != other.children.size())
            return false;
        for (std::size_t i = 0; i < node.children.size(); ++i)
            if (a.name(node.children[i]) != b.name(other.children[i]))
                return false;
    }
    return true;
}

} // namespace fm
