#include "fm/formula.hpp"

#include <stdexcept>

namespace fm {

Formula::Formula(Kind kind, std::string name, std::vector<Formula> operands)
    : kind_(kind), name_(std::move(name)), operands_(std::move(operands)) {}

Formula Formula::var(std::string name) {
    if (name.empty())
        throw std::invalid_argument("formula variable with empty name");
    return Formula(Kind::Var, std::move(name), {});
}

Formula Formula::negation(Formula operand) {
    std::vector<Formula> ops;
    ops.push_back(std::move(operand));
    return Formula(Kind::Not, {}, std::move(ops));
}

Formula Formula::conjunction(std::vector<Formula> operands) {
    if (operands.empty())
        throw std::invalid_argument("empty conjunction");
    if (operands.size() == 1)
        return std::move(operands.front());
    return Formula(Kind::And, {}, std::move(operands));
}

Formula Formula::disjunction(std::vector<Formula> operands) {
    if (operands.empty())
        throw std::invalid_argument("empty disjunction");
    if (operands.size() == 1)
        return std::move(operands.front());
    return Formula(Kind::Or, {}, std::move(operands));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
    std::vector<Formula> ops;
    ops.push_back(std::move(lhs));
    ops.push_back(std::move(rhs));
    return Formula(Kind::Implies, {}, std::move(ops));
}

Formula Formula::biconditional(Formula lhs, Formula rhs) {
    std::vector<Formula> ops;
    ops.push_back(std::move(lhs));
    ops.push_back(std::move(rhs));
    return Formula(Kind::Iff, {}, std::move(ops));
}

void Formula::collect_variables(std::set<std::string>& out) const {
    if (kind_ == Kind::Var) {
        out.insert(name_);
        return;
    }
    for (const auto& op : operands_)
        op.collect_variables(out);
}

std::set<std::string> Formula::variables() const {
    std::set<std::string> out;
    collect_variables(out);
    return out;
}

bool Formula::evaluate(const std::function<bool(const std::string&)>& value_of) const {
    switch (kind_) {
    case Kind::Var:
        return value_of(name_);
    case Kind::Not:
        return !operands_[0].evaluate(value_of);
    case Kind::And:
        for (const auto& op : operands_)
            if (!op.evaluate(value_of))
                return false;
        return true;
    case Kind::Or:
        for (const auto& op : operands_)
            if (op.evaluate(value_of))
                return true;
        return false;
    case Kind::Implies:
        return !operands_[0].evaluate(value_of) || operands_[1].evaluate(value_of);
    case Kind::Iff:
        return operands_[0].evaluate(value_of) == operands_[1].evaluate(value_of);
    }
    return false;
}

bool operator==(const Formula& a, const Formula& b) {
    return a.kind_ == b.kind_ && a.name_ == b.name_ && a.operands_ == b.operands_;
}

} // namespace fm
