#ifndef FM_NORMALIZE_HPP
#define FM_NORMALIZE_HPP

#include <set>
#include <string_view>
#include <vector>

#include "fm/core.hpp"

namespace fm {

enum class GroupKind { Mandatory, Optional, Or, Xor };

std::string_view to_string(GroupKind kind);

/// mandatory -> [s..s], optional -> [0..s], or -> [1..s], xor -> [1..1].
/// Throws Error for s == 0.
Cardinality dependency_to_card(GroupKind kind, unsigned s);

struct GroupCell {
    std::vector<NodeId> children;
    GroupKind kind;
};

/// Replaces a mixed group below `parent` by a uniform one. Mandatory cells
/// attach directly; every other cell gets an auxiliary node carrying the
/// cell's card, and the parent becomes card[k..k] over its new children. A
/// single-cell partition only relabels the parent's card.
/// Throws Error if the cells do not partition the parent's children.
FeatureTree split_mixed_group(const FeatureTree& tree, NodeId parent, const std::vector<GroupCell>& partition);

/// A tree plus the nodes the modeler marked as primitive.
struct MarkedTree {
    FeatureTree tree;
    std::set<NodeId> primitive;
};

/// Turns every marked internal node p into a leaf: p's slot is taken by
/// aux1 card[2..2]{p, aux2}, and aux2 inherits p's card and children.
/// Nested marked nodes are transformed innermost first.
MarkedTree primitive_to_leaf(const MarkedTree& marked);

/// A feature diagram whose nodes may have several parents. A child listed
/// under several parents is a member of each parent's card group.
struct FeatureGraph {
    std::vector<Node> nodes;
    NodeId root;
    std::vector<Formula> constraints;

    static FeatureGraph from_tree(const FeatureTree& tree);
};

/// Single root, known ids, acyclic, cards in range, constraint names resolve.
/// Multiple parents are allowed.
ValidationReport validate_graph(const FeatureGraph& graph);

/// Every multi-parent node keeps its first parent (in node order); each
/// further parent k gets an auxiliary leaf in the node's place and the
/// constraint `aux_k iff n` is appended. Throws Error on cycles or other
/// graph violations.
FeatureTree dag_to_tree(const FeatureGraph& graph);

/// (each child implies parent) and (parent implies at least `low` children)
/// and (parent implies at most `high` children), with the bounds expanded
/// over child subsets.
Formula edge_to_formula(std::string_view parent, const Cardinality& card, const std::vector<std::string>& children);

struct Literal {
    NodeId node;
    bool positive = true;

    friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// A disjunction of literals, sorted and duplicate free.
struct Clause {
    std::vector<Literal> literals;

    bool empty() const { return literals.empty(); }
    bool mentions(NodeId n) const;
    friend bool operator==(const Clause&, const Clause&) = default;
};

struct ClauseSet {
    std::vector<Clause> clauses;
    /// An empty clause was derived: the constraints are unsatisfiable.
    bool has_empty_clause = false;

    std::size_t size() const { return clauses.size(); }
};

/// Equivalence-preserving CNF by distribution over the tree's variables.
/// Tautological clauses are dropped and duplicates removed; clause order is
/// first-derivation order. Throws Error for names not in the tree.
ClauseSet to_cnf(const Formula& formula, const FeatureTree& tree);

/// CNF of the conjunction of every constraint of the tree.
ClauseSet constraint_clauses(const FeatureTree& tree);

/// D^K = conjunction of the negated clauses selected by K, as the set of
/// affirmed and negated nodes.
struct NegatedTerm {
    std::set<NodeId> affirmed;
    std::set<NodeId> negated;
};

/// K holds 0-based clause indices. Throws Error for an index out of range.
NegatedTerm negate_subset(const ClauseSet& clauses, const std::vector<std::size_t>& subset);

std::string format_clause(const Clause& clause, const FeatureTree& tree);

} // namespace fm

#endif // FM_NORMALIZE_HPP
