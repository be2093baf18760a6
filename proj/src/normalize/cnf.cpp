#include "fm/normalize.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace fm {

bool Clause::mentions(NodeId n) const {
    return std::any_of(literals.begin(), literals.end(), [n](const Literal& l) { return l.node == n; });
}

namespace {

/// Guard against distribution blow-up; far beyond anything countable anyway.
constexpr std::size_t max_derived_clauses = 1u << 20;

using RawClause = std::vector<Literal>;
using RawCnf = std::vector<RawClause>;

class CnfBuilder {
public:
    explicit CnfBuilder(const FeatureTree& tree) {
        for (std::size_t i = 0; i < tree.nodes.size(); ++i)
            ids_.emplace(tree.nodes[i].name, node_id(i));
    }

    /// CNF of f (negated when `negate`), negations pushed to the literals.
    RawCnf build(const Formula& f, bool negate) const {
        using K = Formula::Kind;
        switch (f.kind()) {
        case K::Var: {
            auto it = ids_.find(f.name());
            if (it == ids_.end())
                throw Error("constraint mentions unknown feature '" + f.name() + "'");
            return {{Literal{it->second, !negate}}};
        }
        case K::Not:
            return build(f.operand(0), !negate);
        case K::And:
        case K::Or: {
            const bool conj = (f.kind() == K::And) != negate;
            std::vector<RawCnf> parts;
            for (const auto& op : f.operands())
                parts.push_back(build(op, negate));
            return conj ? concat(std::move(parts)) : distribute(std::move(parts));
        }
        case K::Implies: {
            // a -> b  ==  !a or b;   !(a -> b)  ==  a and !b
            if (!negate)
                return distribute({build(f.operand(0), true), build(f.operand(1), false)});
            return concat({build(f.operand(0), false), build(f.operand(1), true)});
        }
        case K::Iff: {
            const auto& a = f.operand(0);
            const auto& b = f.operand(1);
            if (!negate) {
                // (!a or b) and (!b or a)
                return concat({distribute({build(a, true), build(b, false)}),
                               distribute({build(b, true), build(a, false)})});
            }
            // (a or b) and (!a or !b)
            return concat({distribute({build(a, false), build(b, false)}),
                           distribute({build(a, true), build(b, true)})});
        }
        }
        return {};
    }

private:
    static RawCnf concat(std::vector<RawCnf> parts) {
        RawCnf out;
        for (auto& p : parts)
            for (auto& c : p)
                out.push_back(std::move(c));
        return out;
    }

    static RawCnf distribute(std::vector<RawCnf> parts) {
        RawCnf acc{RawClause{}};
        for (const auto& part : parts) {
            if (acc.size() * part.size() > max_derived_clauses)
                throw Error("constraint expands to more than " + std::to_string(max_derived_clauses) + " clauses");
            RawCnf next;
            next.reserve(acc.size() * part.size());
            for (const auto& lhs : acc)
                for (const auto& rhs : part) {
                    RawClause merged = lhs;
                    merged.insert(merged.end(), rhs.begin(), rhs.end());
                    next.push_back(std::move(merged));
                }
            acc = std::move(next);
        }
        return acc;
    }

    std::map<std::string, NodeId, std::less<>> ids_;
};

/// Sorts and dedups the literals; nullopt for a tautology.
std::optional<Clause> canonical(RawClause raw) {
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    for (std::size_t i = 1; i < raw.size(); ++i)
        if (raw[i].node == raw[i - 1].node)
            return std::nullopt;
    return Clause{std::move(raw)};
}

void append(ClauseSet& out, std::set<std::vector<Literal>>& seen, RawCnf raw) {
    for (auto& rc : raw) {
        auto clause = canonical(std::move(rc));
        if (!clause || !seen.insert(clause->literals).second)
            continue;
        if (clause->empty())
            out.has_empty_clause = true;
        out.clauses.push_back(std::move(*clause));
    }
}

} // namespace

ClauseSet to_cnf(const Formula& formula, const FeatureTree& tree) {
    ClauseSet out;
    std::set<std::vector<Literal>> seen;
    append(out, seen, CnfBuilder(tree).build(formula, false));
    return out;
}

ClauseSet constraint_clauses(const FeatureTree& tree) {
    ClauseSet out;
    std::set<std::vector<Literal>> seen;
    CnfBuilder builder(tree);
    for (const auto& c : tree.constraints)
        append(out, seen, builder.build(c, false));
    return out;
}

NegatedTerm negate_subset(const ClauseSet& clauses, const std::vector<std::size_t>& subset) {
    NegatedTerm out;
    for (std::size_t j : subset) {
        if (j >= clauses.clauses.size())
            throw Error("clause index " + std::to_string(j) + " out of range");
        for (const auto& lit : clauses.clauses[j].literals)
            (lit.positive ? out.negated : out.affirmed).insert(lit.node);
    }
    return out;
}

std::string format_clause(const Clause& clause, const FeatureTree& tree) {
    if (clause.empty())
        return "()";
    std::string out = "(";
    for (std::size_t i = 0; i < clause.literals.size(); ++i) {
        if (i > 0)
            out += " or ";
        if (!clause.literals[i].positive)
            out += '!';
        out += tree.name(clause.literals[i].node);
    }
    return out + ")";
}

} // namespace fm
