#include "fm/engine.hpp"

#include <algorithm>
#include <bit>
#include <exception>
#include <optional>

#include <omp.h>

namespace fm {

ClauseMask NodeTable::mask_of(std::span<const std::size_t> clause_indices) const {
    ClauseMask mask = 0;
    for (std::size_t j : clause_indices) {
        auto it = std::lower_bound(relevant.begin(), relevant.end(), j);
        if (it == relevant.end() || *it != j)
            throw Error("clause " + std::to_string(j + 1) + " is not relevant to this node");
        mask |= ClauseMask{1} << (it - relevant.begin());
    }
    return mask;
}

ClauseMask ChildView::restrict_mask(ClauseMask parent_mask) const {
    ClauseMask out = 0;
    while (parent_mask != 0) {
        const int j = std::countr_zero(parent_mask);
        out |= bit_map[j];
        parent_mask &= parent_mask - 1;
    }
    return out;
}

std::vector<std::vector<std::size_t>> relevant_constraints(const FeatureTree& tree, const ClauseSet& clauses) {
    std::vector<std::vector<std::size_t>> mentions(tree.size());
    for (std::size_t j = 0; j < clauses.clauses.size(); ++j)
        for (const auto& lit : clauses.clauses[j].literals)
            mentions.at(lit.node.index()).push_back(j);

    std::vector<std::vector<std::size_t>> out(tree.size());
    auto order = preorder(tree);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        auto& rel = out[it->index()];
        rel = mentions[it->index()];
        for (NodeId c : tree.node(*it).children)
            rel.insert(rel.end(), out[c.index()].begin(), out[c.index()].end());
        std::sort(rel.begin(), rel.end());
        rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
    }
    return out;
}

std::pair<NodeStatus, ChildClassification> classify(const Node& node, const NodeLiterals& own, ClauseMask k,
                                                    std::span<const ChildView> children) {
    NodeStatus status;
    ChildClassification cls;
    cls.child_status.reserve(children.size());
    cls.child_subset.reserve(children.size());
    for (const auto& child : children) {
        const ClauseMask ki = child.restrict_mask(k);
        const NodeEntry& entry = child.table->at(ki);
        cls.child_status.push_back(entry.status);
        cls.child_subset.push_back(ki);
        switch (entry.status.label()) {
        case NodeStatus::Label::Present:
            ++cls.count_pre;
            cls.pre_fac *= entry.count;
            break;
        case NodeStatus::Label::Potential:
            ++cls.count_pot;
            cls.pot_list.push_back(entry.count);
            break;
        case NodeStatus::Label::Contradicting: ++cls.count_con; break;
        case NodeStatus::Label::Absent: ++cls.count_abs; break;
        }
        status.sel = status.sel || entry.status.sel;
    }
    const unsigned low = node.card ? node.card->low : 0;
    const unsigned high = node.card ? node.card->high : 0;
    status.sel = status.sel || (own.affirmed & k) != 0;
    status.desel = (own.negated & k) != 0 || cls.count_pre + cls.count_pot < low || cls.count_pre > high ||
                   cls.count_con > 0;
    return {status, std::move(cls)};
}

SubtreeCount count_subtree(const Node& node, const NodeStatus& status, const ChildClassification& children) {
    if (!status.viable())
        return {0, {}};
    const unsigned low = node.card ? node.card->low : 0;
    const unsigned high = node.card ? node.card->high : 0;
    // Desel screening guarantees count_pre <= high.
    const unsigned shifted_low = low > children.count_pre ? low - children.count_pre : 0;
    const unsigned shifted_high = high - children.count_pre;
    auto pot = combination_counts(children.pot_list, shifted_low, shifted_high);
    return {children.pre_fac * pot.total, std::move(pot.s)};
}

namespace {

struct NodePlan {
    std::vector<ChildView> children;
    /// Offset of each child's block [child, F(child)...] in the parent's descendant list.
    std::vector<std::size_t> offsets;
    NodeLiterals own;
};

/// P(n, m, K) for every m in F(n), given the finished entry for (n, K).
void propagate(const Node& node, const NodePlan& plan, const ChildClassification& cls, NodeEntry& entry,
               std::size_t descendant_total) {
    entry.descendant_counts.assign(descendant_total, Count(0));
    if (!entry.status.viable())
        return;
    const unsigned low = node.card ? node.card->low : 0;
    const unsigned high = node.card ? node.card->high : 0;
    const unsigned shifted_low = low > cls.count_pre ? low - cls.count_pre : 0;
    const unsigned shifted_high = high - cls.count_pre;

    Count cofactor;
    for (std::size_t i = 0; i < plan.children.size(); ++i) {
        const NodeEntry& child = plan.children[i].table->at(cls.child_subset[i]);
        const std::size_t base = plan.offsets[i];
        switch (cls.child_status[i].label()) {
        case NodeStatus::Label::Present:
            if (child.count == 0)
                break;
            entry.descendant_counts[base] = entry.count;
            mpz_divexact(cofactor.get_mpz_t(), entry.count.get_mpz_t(), child.count.get_mpz_t());
            break;
        case NodeStatus::Label::Potential: {
            if (cls.count_pre >= high)
                continue;
            SVector rest = eliminate_child(entry.potential, child.count);
            Count fac = 0;
            const unsigned from = shifted_low > 0 ? shifted_low - 1 : 0;
            const std::size_t to = std::min<std::size_t>(shifted_high - 1, rest.size() - 1);
            for (std::size_t k = from; k <= to; ++k)
                fac += rest[k];
            cofactor = cls.pre_fac * fac;
            entry.descendant_counts[base] = cofactor * child.count;
            break;
        }
        default:
            continue;
        }
        if (child.count == 0)
            continue;
        for (std::size_t j = 0; j < child.descendant_counts.size(); ++j)
            if (child.descendant_counts[j] != 0)
                entry.descendant_counts[base + 1 + j] = child.descendant_counts[j] * cofactor;
    }
}

std::vector<NodeId> postorder(const FeatureTree& tree) {
    auto order = preorder(tree);
    std::reverse(order.begin(), order.end());
    return order;
}

} // namespace

EngineResult run_engine(const FeatureTree& tree, const ClauseSet& clauses, const EngineOptions& options) {
    EngineResult result;
    if (clauses.has_empty_clause) {
        result.product_count = 0;
        if (options.feature_counts)
            result.feature_counts.assign(tree.size(), Count(0));
        return result;
    }

    const auto relevant = relevant_constraints(tree, clauses);
    const bool parallel = options.execution == Execution::Parallel;
    std::vector<NodeTable> tables(tree.size());
    std::vector<Count> root_accumulator;

    for (NodeId n : postorder(tree)) {
        const Node& node = tree.node(n);
        NodeTable& table = tables[n.index()];
        table.node = n;
        table.relevant = relevant[n.index()];
        if (table.relevant.size() > max_relevant_clauses)
            throw Error("feature '" + node.name + "' is affected by " + std::to_string(table.relevant.size()) +
                        " clauses; at most " + std::to_string(max_relevant_clauses) + " are supported");

        NodePlan plan;
        for (std::size_t j = 0; j < table.relevant.size(); ++j) {
            for (const auto& lit : clauses.clauses[table.relevant[j]].literals) {
                if (lit.node != n)
                    continue;
                // D_j negates the clause: a positive literal of n puts n in N_K.
                (lit.positive ? plan.own.negated : plan.own.affirmed) |= ClauseMask{1} << j;
            }
        }
        for (NodeId c : node.children) {
            const NodeTable& child = tables[c.index()];
            ChildView view{&child, std::vector<ClauseMask>(table.relevant.size(), 0)};
            for (std::size_t j = 0; j < table.relevant.size(); ++j) {
                auto it = std::lower_bound(child.relevant.begin(), child.relevant.end(), table.relevant[j]);
                if (it != child.relevant.end() && *it == table.relevant[j])
                    view.bit_map[j] = ClauseMask{1} << (it - child.relevant.begin());
            }
            plan.children.push_back(std::move(view));
            plan.offsets.push_back(table.descendants.size());
            table.descendants.push_back(c);
            table.descendants.insert(table.descendants.end(), child.descendants.begin(), child.descendants.end());
        }

        const bool is_root = n == tree.root;
        const std::size_t subsets = std::size_t{1} << table.relevant.size();
        table.entries.resize(subsets);
        const bool want_descendants = options.feature_counts && !node.children.empty();
        const bool keep_entry_descendants = want_descendants && (!is_root || options.keep_tables);

        std::vector<std::vector<Count>> thread_acc;
        if (is_root && want_descendants)
            thread_acc.assign(static_cast<std::size_t>(omp_get_max_threads()),
                              std::vector<Count>(table.descendants.size(), Count(0)));

        std::exception_ptr failure;
        const auto total = static_cast<std::int64_t>(subsets);
#pragma omp parallel for schedule(dynamic, 4) if (parallel && total >= 8)
        for (std::int64_t mask = 0; mask < total; ++mask) {
            try {
                const auto k = static_cast<ClauseMask>(mask);
                NodeEntry& entry = table.entries[k];
                auto [status, cls] = classify(node, plan.own, k, plan.children);
                auto counted = count_subtree(node, status, cls);
                entry.status = status;
                entry.count = std::move(counted.count);
                entry.potential = std::move(counted.potential);
                if (want_descendants) {
                    propagate(node, plan, cls, entry, table.descendants.size());
                    if (is_root) {
                        auto& acc = thread_acc[static_cast<std::size_t>(omp_get_thread_num())];
                        const bool odd = std::popcount(k) % 2 == 1;
                        for (std::size_t m = 0; m < acc.size(); ++m) {
                            if (odd)
                                acc[m] -= entry.descendant_counts[m];
                            else
                                acc[m] += entry.descendant_counts[m];
                        }
                    }
                    if (!keep_entry_descendants)
                        std::vector<Count>().swap(entry.descendant_counts);
                }
                if (!options.keep_tables)
                    SVector().swap(entry.potential);
            } catch (...) {
#pragma omp critical(fm_engine_failure)
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);

        if (is_root && want_descendants) {
            root_accumulator.assign(table.descendants.size(), Count(0));
            for (const auto& acc : thread_acc)
                for (std::size_t m = 0; m < acc.size(); ++m)
                    root_accumulator[m] += acc[m];
        }

        // The children's tables are fully consumed by this node.
        if (!options.keep_tables)
            for (NodeId c : node.children)
                tables[c.index()] = NodeTable{};
    }

    const NodeTable& root = tables[tree.root.index()];
    result.root_relevant = root.relevant;
    result.root_terms.reserve(root.entries.size());
    result.product_count = 0;
    for (ClauseMask k = 0; k < root.entries.size(); ++k) {
        Count term = root.entries[k].count;
        if (std::popcount(k) % 2 == 1)
            term = -term;
        result.product_count += term;
        result.root_terms.push_back(std::move(term));
    }
    if (result.product_count < 0)
        throw InternalError("inclusion-exclusion produced a negative product count");

    if (options.feature_counts) {
        result.feature_counts.assign(tree.size(), Count(0));
        result.feature_counts[tree.root.index()] = result.product_count;
        for (std::size_t m = 0; m < root_accumulator.size(); ++m)
            result.feature_counts[root.descendants[m].index()] = root_accumulator[m];
    }
    if (options.keep_tables)
        result.tables = std::move(tables);
    return result;
}

Count count_products(const FeatureTree& tree, const ClauseSet& clauses, const EngineOptions& options) {
    EngineOptions opts = options;
    opts.feature_counts = false;
    return run_engine(tree, clauses, opts).product_count;
}

std::vector<Count> feature_counts(const FeatureTree& tree, const ClauseSet& clauses, const EngineOptions& options) {
    EngineOptions opts = options;
    opts.feature_counts = true;
    return run_engine(tree, clauses, opts).feature_counts;
}

} // namespace fm
