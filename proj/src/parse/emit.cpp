#include "fm/parse.hpp"

namespace fm {

namespace {

int precedence(Formula::Kind k) {
    switch (k) {
    case Formula::Kind::Var:
    case Formula::Kind::Not: return 5;
    case Formula::Kind::And: return 4;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Iff: return 1;
    }
    return 0;
}

void write(const Formula& f, std::string& out);

void write_operand(const Formula& f, bool parens, std::string& out) {
    if (parens)
        out += '(';
    write(f, out);
    if (parens)
        out += ')';
}

void write(const Formula& f, std::string& out) {
    const int p = precedence(f.kind());
    switch (f.kind()) {
    case Formula::Kind::Var:
        out += f.name();
        return;
    case Formula::Kind::Not:
        out += '!';
        write_operand(f.operand(0), precedence(f.operand(0).kind()) < p, out);
        return;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        const char* sep = f.kind() == Formula::Kind::And ? " and " : " or ";
        bool first = true;
        for (const auto& op : f.operands()) {
            if (!first)
                out += sep;
            first = false;
            // A nested operand of the same kind would be flattened on re-parse.
            write_operand(op, precedence(op.kind()) <= p, out);
        }
        return;
    }
    case Formula::Kind::Implies:
        write_operand(f.operand(0), precedence(f.operand(0).kind()) <= p, out);
        out += " implies ";
        write_operand(f.operand(1), precedence(f.operand(1).kind()) < p, out);
        return;
    case Formula::Kind::Iff:
        write_operand(f.operand(0), precedence(f.operand(0).kind()) < p, out);
        out += " iff ";
        write_operand(f.operand(1), precedence(f.operand(1).kind()) <= p, out);
        return;
    }
}

void emit_feature(const FeatureTree& tree, NodeId id, int depth, std::string& out) {
    const Node& node = tree.node(id);
    out.append(2 * depth, ' ');
    out += "feature " + node.name;
    if (node.children.empty()) {
        out += '\n';
        return;
    }
    out += " card [" + std::to_string(node.card->low) + ".." + std::to_string(node.card->high) + "] {\n";
    for (NodeId c : node.children)
        emit_feature(tree, c, depth + 1, out);
    out.append(2 * depth, ' ');
    out += "}\n";
}

} // namespace

std::string format_formula(const Formula& f) {
    std::string out;
    write(f, out);
    return out;
}

std::string emit_model(const FeatureTree& tree) {
    std::string out;
    emit_feature(tree, tree.root, 0, out);
    if (!tree.constraints.empty()) {
        out += "constraints {\n";
        for (const auto& c : tree.constraints)
            out += "  " + format_formula(c) + "\n";
        out += "}\n";
    }
    return out;
}

} // namespace fm
