#ifndef FM_ENGINE_HPP
#define FM_ENGINE_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fm/combinatorics.hpp"
#include "fm/core.hpp"
#include "fm/normalize.hpp"

namespace fm {

/// A subset K of a node's relevant clauses C(n): bit j stands for the j-th
/// entry of NodeTable::relevant.
using ClauseMask = std::uint64_t;

/// Largest |C(n)| the engine accepts; the table for a node has 2^|C(n)| entries.
inline constexpr std::size_t max_relevant_clauses = 30;

/// Sel/Desel of a node under D^K.
struct NodeStatus {
    enum class Label { Present, Absent, Contradicting, Potential };

    bool sel = false;
    bool desel = false;

    Label label() const {
        if (sel)
            return desel ? Label::Contradicting : Label::Present;
        return desel ? Label::Absent : Label::Potential;
    }
    /// Present or Potential: the node can be part of a configuration.
    bool viable() const { return !desel; }

    friend bool operator==(const NodeStatus&, const NodeStatus&) = default;
};

struct ChildClassification {
    unsigned count_pre = 0;
    unsigned count_pot = 0;
    unsigned count_con = 0;
    unsigned count_abs = 0;
    /// Product of P(n_i, Ki) over present children.
    Count pre_fac = 1;
    /// P(n_i, Ki) of the potential children, in child order.
    std::vector<Count> pot_list;
    std::vector<NodeStatus> child_status;
    /// Ki = K restricted to C(n_i), as a mask over the child's relevant list.
    std::vector<ClauseMask> child_subset;
};

/// Everything the engine knows about (n, K).
struct NodeEntry {
    NodeStatus status;
    /// P(n, K): configurations of n's subtree that contain n and satisfy D^K.
    Count count;
    /// S-vector over pot_list. Dropped once consumed unless tables are kept.
    SVector potential;
    /// P(n, m, K) for each m in NodeTable::descendants.
    std::vector<Count> descendant_counts;
};

struct NodeTable {
    NodeId node;
    /// C(n), ascending 0-based clause indices.
    std::vector<std::size_t> relevant;
    /// F(n) in preorder.
    std::vector<NodeId> descendants;
    /// Indexed by ClauseMask over `relevant`.
    std::vector<NodeEntry> entries;

    const NodeEntry& at(ClauseMask k) const { return entries.at(k); }
    /// Mask for a set of global clause indices; throws Error if one is not in C(n).
    ClauseMask mask_of(std::span<const std::size_t> clause_indices) const;
};

/// C(n) for every node (indexed by node id): clauses mentioning n or any node
/// below it, built in one bottom-up pass.
std::vector<std::vector<std::size_t>> relevant_constraints(const FeatureTree& tree, const ClauseSet& clauses);

/// Membership of a node itself in A_K / N_K, as masks over its relevant list.
struct NodeLiterals {
    ClauseMask affirmed = 0;
    ClauseMask negated = 0;
};

/// A finished child table plus the map from parent mask bits to child bits.
struct ChildView {
    const NodeTable* table = nullptr;
    /// bit_map[j] is the child's bit for the parent's j-th relevant clause, or 0.
    std::vector<ClauseMask> bit_map;

    ClauseMask restrict_mask(ClauseMask parent_mask) const;
};

/// Sel/Desel of `node` under K and the classification of its children. Leaves
/// use low = high = 0.
std::pair<NodeStatus, ChildClassification> classify(const Node& node, const NodeLiterals& own, ClauseMask k,
                                                    std::span<const ChildView> children);

struct SubtreeCount {
    Count count;
    SVector potential;
};

/// P(n, K) = pre_fac * (sum of S_k over the potential children for k in the
/// card bounds shifted by count_pre), or 0 when n is Absent or Contradicting.
SubtreeCount count_subtree(const Node& node, const NodeStatus& status, const ChildClassification& children);

enum class Execution {
    Serial,
    /// OpenMP over the K subsets of each node; results are identical to Serial.
    Parallel,
};

struct EngineOptions {
    Execution execution = Execution::Serial;
    bool feature_counts = true;
    /// Keep every node's table in the result (for inspection and tests).
    bool keep_tables = false;
};

struct EngineResult {
    Count product_count;
    /// Configurations containing each node, by node id (empty unless requested).
    std::vector<Count> feature_counts;
    /// C(root) and the signed inclusion-exclusion terms (-1)^|K| P(root, K)
    /// in mask order.
    std::vector<std::size_t> root_relevant;
    std::vector<Count> root_terms;
    /// By node id; empty unless keep_tables.
    std::vector<NodeTable> tables;
};

/// Exact configuration count and per-node counts of a valid tree under the
/// clause set, by inclusion-exclusion over the negated clauses.
EngineResult run_engine(const FeatureTree& tree, const ClauseSet& clauses, const EngineOptions& options = {});

Count count_products(const FeatureTree& tree, const ClauseSet& clauses, const EngineOptions& options = {});
std::vector<Count> feature_counts(const FeatureTree& tree, const ClauseSet& clauses, const EngineOptions& options = {});

} // namespace fm

#endif // FM_ENGINE_HPP
