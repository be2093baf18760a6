#ifndef FM_CORE_HPP
#define FM_CORE_HPP

#include <cstdint>
#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "fm/formula.hpp"

namespace fm {

/// Exact nonnegative count of configurations.
using Count = mpz_class;
/// Exact rational, always kept canonical (lowest terms, positive denominator).
using Ratio = mpq_class;

/// Base class for every recoverable error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an internal arithmetic invariant breaks (e.g. inexact division
/// in the S-vector recurrence). Never expected on valid input.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Opaque node identifier; an index into FeatureTree::nodes.
struct NodeId {
    std::uint32_t value = 0;

    constexpr std::size_t index() const { return value; }
    friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

constexpr NodeId node_id(std::size_t index) { return NodeId{static_cast<std::uint32_t>(index)}; }

/// card[low..high] over the children of a node.
struct Cardinality {
    unsigned low = 0;
    unsigned high = 0;

    friend bool operator==(const Cardinality&, const Cardinality&) = default;
};

struct Node {
    std::string name;
    std::vector<NodeId> children;
    /// Present iff children is nonempty.
    std::optional<Cardinality> card;

    bool is_leaf() const { return children.empty(); }
};

/// A feature diagram restricted to a tree: every internal node carries a
/// card label and cross-tree constraints are arbitrary propositional formulas.
///
/// The struct is a plain value; it may hold an ill-formed diagram (as read
/// from user input) until validate() says otherwise. Operations other than
/// validate() require a valid tree.
struct FeatureTree {
    std::vector<Node> nodes;
    NodeId root;
    std::vector<Formula> constraints;

    std::size_t size() const { return nodes.size(); }
    const Node& node(NodeId id) const;
    const std::string& name(NodeId id) const { return node(id).name; }
    std::optional<NodeId> find(std::string_view name) const;
    /// Like find() but throws Error for an unknown name.
    NodeId id_of(std::string_view name) const;
};

enum class ViolationKind {
    NoNodes,
    DanglingChild,
    RootHasParent,
    MultipleRoots,
    MultipleParents,
    Cycle,
    LeafWithCard,
    MissingCard,
    LowExceedsHigh,
    HighExceedsArity,
    EmptyName,
    InvalidName,
    DuplicateName,
    UnknownFeature,
};

struct Violation {
    ViolationKind kind;
    std::string message;
    std::optional<NodeId> node;
    std::optional<std::size_t> constraint;
    /// For UnknownFeature: the unresolved name.
    std::string feature;
};

using ValidationReport = std::vector<Violation>;

/// Every well-formedness violation of the tree; empty means valid.
ValidationReport validate(const FeatureTree& tree);

/// Raised by consumers that require a valid tree.
class ValidationError : public Error {
public:
    explicit ValidationError(ValidationReport report);
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// Throws ValidationError unless validate(tree) is empty.
void require_valid(const FeatureTree& tree);

/// Names accepted in a tree: `[A-Za-z_][A-Za-z0-9_]*`. User-facing input
/// additionally rejects a leading underscore (reserved for synthetic nodes).
bool is_valid_name(std::string_view name);
bool is_reserved_name(std::string_view name);

/// parent[i] of every node; nullopt for parentless nodes.
std::vector<std::optional<NodeId>> parents(const FeatureTree& tree);

/// F(n): every node strictly below n, in preorder. Throws Error for an
/// unknown id.
std::vector<NodeId> descendants(const FeatureTree& tree, NodeId n);

/// Root-first preorder of a valid tree.
std::vector<NodeId> preorder(const FeatureTree& tree);

/// Equality up to node numbering: same root name, same card and ordered
/// child names per feature, same constraint ASTs in order.
bool structurally_equal(const FeatureTree& a, const FeatureTree& b);

} // namespace fm

#endif // FM_CORE_HPP
