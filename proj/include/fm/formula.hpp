#ifndef FM_FORMULA_HPP
#define FM_FORMULA_HPP

#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace fm {

/// Propositional formula over feature names.
///
/// Conjunction and disjunction are n-ary (at least two operands after
/// construction); implication and biconditional are binary. Variables may
/// name any node of the tree, internal or leaf.
class Formula {
public:
    enum class Kind { Var, Not, And, Or, Implies, Iff };

    static Formula var(std::string name);
    static Formula negation(Formula operand);
    /// A single operand collapses to the operand itself.
    static Formula conjunction(std::vector<Formula> operands);
    static Formula disjunction(std::vector<Formula> operands);
    static Formula implication(Formula lhs, Formula rhs);
    static Formula biconditional(Formula lhs, Formula rhs);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    std::span<const Formula> operands() const { return operands_; }
    const Formula& operand(std::size_t i) const { return operands_.at(i); }

    void collect_variables(std::set<std::string>& out) const;
    std::set<std::string> variables() const;

    bool evaluate(const std::function<bool(const std::string&)>& value_of) const;

    friend bool operator==(const Formula& a, const Formula& b);

private:
    Formula(Kind kind, std::string name, std::vector<Formula> operands);

    Kind kind_;
    std::string name_;
    std::vector<Formula> operands_;
};

bool operator==(const Formula& a, const Formula& b);

} // namespace fm

#endif // FM_FORMULA_HPP
