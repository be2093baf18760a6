#include "fm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <exception>
#include <map>

#include <omp.h>

namespace fm {

OracleLimitExceeded::OracleLimitExceeded(std::size_t nodes, std::size_t limit)
    : Error("model has " + std::to_string(nodes) + " nodes; the oracle limit is " + std::to_string(limit)),
      nodes_(nodes), limit_(limit) {}

namespace {

using Mask = std::uint32_t;

/// A formula over node bits, flattened so evaluation needs no lookups.
struct CompiledFormula {
    struct Op {
        Formula::Kind kind;
        /// Var: node index. Others: operand indices in `ops`.
        std::vector<std::uint32_t> args;
    };
    std::vector<Op> ops;
    std::uint32_t top = 0;

    bool eval(Mask m) const { return eval(top, m); }

    bool eval(std::uint32_t i, Mask m) const {
        const Op& op = ops[i];
        switch (op.kind) {
        case Formula::Kind::Var: return (m >> op.args[0]) & 1u;
        case Formula::Kind::Not: return !eval(op.args[0], m);
        case Formula::Kind::And:
            return std::all_of(op.args.begin(), op.args.end(), [&](std::uint32_t a) { return eval(a, m); });
        case Formula::Kind::Or:
            return std::any_of(op.args.begin(), op.args.end(), [&](std::uint32_t a) { return eval(a, m); });
        case Formula::Kind::Implies: return !eval(op.args[0], m) || eval(op.args[1], m);
        case Formula::Kind::Iff: return eval(op.args[0], m) == eval(op.args[1], m);
        }
        return false;
    }
};

std::uint32_t compile(const Formula& f, const std::map<std::string, std::uint32_t, std::less<>>& ids,
                      CompiledFormula& out) {
    CompiledFormula::Op op{f.kind(), {}};
    if (f.kind() == Formula::Kind::Var) {
        auto it = ids.find(f.name());
        if (it == ids.end())
            throw Error("constraint mentions unknown feature '" + f.name() + "'");
        op.args.push_back(it->second);
    } else {
        for (const auto& sub : f.operands())
            op.args.push_back(compile(sub, ids, out));
    }
    out.ops.push_back(std::move(op));
    return static_cast<std::uint32_t>(out.ops.size() - 1);
}

/// Structure shared by trees and graphs, as bit masks over node indices.
struct Layout {
    std::size_t size = 0;
    std::uint32_t root = 0;
    std::vector<Mask> children;
    std::vector<Mask> parents;
    std::vector<Cardinality> card;
    Mask leaves = 0;
    std::vector<CompiledFormula> constraints;

    bool valid(Mask m) const {
        if (!((m >> root) & 1u))
            return false;
        for (Mask rest = m; rest != 0; rest &= rest - 1) {
            const int n = std::countr_zero(rest);
            if ((m & parents[n]) != parents[n])
                return false;
            if (children[n] != 0) {
                const auto picked = static_cast<unsigned>(std::popcount(m & children[n]));
                if (picked < card[n].low || picked > card[n].high)
                    return false;
            }
        }
        return std::all_of(constraints.begin(), constraints.end(), [m](const CompiledFormula& f) { return f.eval(m); });
    }
};

Layout make_layout(const std::vector<Node>& nodes, NodeId root, const std::vector<Formula>& constraints) {
    Layout l;
    l.size = nodes.size();
    l.root = root.value;
    l.children.assign(l.size, 0);
    l.parents.assign(l.size, 0);
    l.card.assign(l.size, {});
    std::map<std::string, std::uint32_t, std::less<>> ids;
    for (std::size_t i = 0; i < l.size; ++i) {
        ids.emplace(nodes[i].name, static_cast<std::uint32_t>(i));
        if (nodes[i].is_leaf())
            l.leaves |= Mask{1} << i;
        if (nodes[i].card)
            l.card[i] = *nodes[i].card;
        for (NodeId c : nodes[i].children) {
            l.children[i] |= Mask{1} << c.index();
            l.parents[c.index()] |= Mask{1} << i;
        }
    }
    for (const auto& f : constraints) {
        CompiledFormula cf;
        cf.top = compile(f, ids, cf);
        l.constraints.push_back(std::move(cf));
    }
    return l;
}

struct Tally {
    std::uint64_t configurations = 0;
    std::vector<std::uint64_t> per_node;
    std::vector<Mask> products;
};

void visit(const Layout& l, Mask m, Tally& t) {
    if (!l.valid(m))
        return;
    ++t.configurations;
    for (Mask rest = m; rest != 0; rest &= rest - 1)
        ++t.per_node[std::countr_zero(rest)];
    t.products.push_back(m & l.leaves);
}

OracleResult run(const Layout& l, const std::vector<Node>& nodes, const OracleOptions& options) {
    const std::size_t limit = std::min(options.node_limit, max_oracle_nodes);
    if (l.size > limit)
        throw OracleLimitExceeded(l.size, limit);

    // Enumerate the masks over the non-root bits and splice the root bit in.
    const std::size_t free_bits = l.size - 1;
    const auto total = static_cast<std::int64_t>(std::uint64_t{1} << free_bits);
    const Mask low_mask = (Mask{1} << l.root) - 1;
    auto expand = [&](std::uint64_t x) {
        const auto v = static_cast<Mask>(x);
        return (v & low_mask) | (Mask{1} << l.root) | ((v & ~low_mask) << 1);
    };

    const bool parallel = options.execution == Execution::Parallel;
    std::vector<Tally> tallies(parallel ? static_cast<std::size_t>(omp_get_max_threads()) : 1);
    for (auto& t : tallies)
        t.per_node.assign(l.size, 0);

    if (parallel) {
        std::exception_ptr failure;
#pragma omp parallel for schedule(static)
        for (std::int64_t x = 0; x < total; ++x) {
            try {
                visit(l, expand(static_cast<std::uint64_t>(x)), tallies[static_cast<std::size_t>(omp_get_thread_num())]);
            } catch (...) {
#pragma omp critical(fm_oracle_failure)
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);
    } else {
        for (std::int64_t x = 0; x < total; ++x)
            visit(l, expand(static_cast<std::uint64_t>(x)), tallies[0]);
    }

    Tally merged;
    merged.per_node.assign(l.size, 0);
    for (auto& t : tallies) {
        merged.configurations += t.configurations;
        for (std::size_t i = 0; i < l.size; ++i)
            merged.per_node[i] += t.per_node[i];
        merged.products.insert(merged.products.end(), t.products.begin(), t.products.end());
    }
    std::sort(merged.products.begin(), merged.products.end());
    merged.products.erase(std::unique(merged.products.begin(), merged.products.end()), merged.products.end());

    OracleResult out;
    out.configuration_count = static_cast<unsigned long>(merged.configurations);
    out.product_count = static_cast<unsigned long>(merged.products.size());
    for (auto v : merged.per_node)
        out.per_node_count.emplace_back(static_cast<unsigned long>(v));
    if (options.collect_products) {
        std::vector<std::set<std::string>> list;
        for (Mask p : merged.products) {
            std::set<std::string> names;
            for (Mask rest = p; rest != 0; rest &= rest - 1)
                names.insert(nodes[std::countr_zero(rest)].name);
            list.push_back(std::move(names));
        }
        std::sort(list.begin(), list.end());
        out.product_list = std::move(list);
    }
    return out;
}

Configuration checked(const FeatureTree& tree, const Configuration& c) {
    for (NodeId n : c)
        if (n.index() >= tree.size())
            throw Error("configuration names node " + std::to_string(n.value) + " outside the tree");
    return c;
}

bool structurally_valid(const FeatureTree& tree, const Configuration& c) {
    if (!c.contains(tree.root))
        return false;
    const auto parent = parents(tree);
    for (NodeId n : c) {
        if (parent[n.index()] && !c.contains(*parent[n.index()]))
            return false;
        const Node& node = tree.node(n);
        if (node.is_leaf())
            continue;
        const auto picked = static_cast<unsigned>(
            std::count_if(node.children.begin(), node.children.end(), [&](NodeId k) { return c.contains(k); }));
        if (picked < node.card->low || picked > node.card->high)
            return false;
    }
    return true;
}

} // namespace

bool is_valid(const FeatureTree& tree, const std::vector<Formula>& constraints, const Configuration& c) {
    checked(tree, c);
    if (!structurally_valid(tree, c))
        return false;
    auto value_of = [&](const std::string& name) { return c.contains(tree.id_of(name)); };
    return std::all_of(constraints.begin(), constraints.end(),
                       [&](const Formula& f) { return f.evaluate(value_of); });
}

bool is_valid(const FeatureTree& tree, const ClauseSet& clauses, const Configuration& c) {
    checked(tree, c);
    if (!structurally_valid(tree, c) || clauses.has_empty_clause)
        return false;
    return std::all_of(clauses.clauses.begin(), clauses.clauses.end(), [&](const Clause& clause) {
        return std::any_of(clause.literals.begin(), clause.literals.end(),
                           [&](const Literal& lit) { return c.contains(lit.node) == lit.positive; });
    });
}

OracleResult enumerate(const FeatureTree& tree, const OracleOptions& options) {
    require_valid(tree);
    return run(make_layout(tree.nodes, tree.root, tree.constraints), tree.nodes, options);
}

OracleResult enumerate_graph(const FeatureGraph& graph, const OracleOptions& options) {
    auto report = validate_graph(graph);
    if (!report.empty())
        throw ValidationError(std::move(report));
    return run(make_layout(graph.nodes, graph.root, graph.constraints), graph.nodes, options);
}

} // namespace fm
