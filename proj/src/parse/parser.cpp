#include "fm/parse.hpp"

#include <charconv>
#include <limits>

#include "fm/normalize.hpp"
#include "lexer.hpp"

namespace fm {

namespace {

std::string located(const SourceSpan& span, const std::string& message) {
    return std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message;
}

} // namespace

ParseError::ParseError(Kind kind, SourceSpan span, std::string message, std::vector<std::string> expected)
    : Error(located(span, message)), kind_(kind), span_(span), message_(std::move(message)),
      expected_(std::move(expected)) {}

namespace {

using detail::Tok;
using detail::Token;

class Parser {
public:
    Parser(std::string_view text, ParseOptions options) : tokens_(detail::tokenize(text)), options_(options) {}

    ParsedModel model() {
        ParsedModel out;
        expect_peek({Tok::KwFeature});
        out.tree.root = feature(out);
        if (peek().kind == Tok::KwConstraints)
            constraints(out);
        expect_peek({Tok::End});
        return out;
    }

    Formula standalone_formula() {
        std::vector<std::pair<std::string, SourceSpan>> vars;
        Formula f = formula(vars);
        expect_peek({Tok::End});
        return f;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const Token& at, std::vector<Tok> expected) const {
        std::vector<std::string> names;
        std::string msg = "expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            names.push_back(detail::describe(expected[i]));
            if (i > 0)
                msg += i + 1 == expected.size() ? " or " : ", ";
            msg += names.back();
        }
        msg += at.kind == Tok::End ? ", found end of input" : ", found '" + std::string(at.text) + "'";
        throw ParseError(ParseError::Kind::Syntax, at.span, msg, std::move(names));
    }

    void expect_peek(std::initializer_list<Tok> kinds) const {
        for (Tok k : kinds)
            if (peek().kind == k)
                return;
        fail(peek(), kinds);
    }

    const Token& expect(Tok kind) {
        if (peek().kind != kind)
            fail(peek(), {kind});
        return take();
    }

    std::string name_token() {
        const Token& t = expect(Tok::Name);
        if (is_reserved_name(t.text) && !options_.allow_reserved_names)
            throw ParseError(ParseError::Kind::Syntax, t.span,
                             "name '" + std::string(t.text) + "' uses the reserved '_' prefix", {"NAME"});
        return std::string(t.text);
    }

    unsigned natural(const Token& t) const {
        unsigned value = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size())
            throw ParseError(ParseError::Kind::Lexical, t.span, "number out of range");
        return value;
    }

    NodeId feature(ParsedModel& out) {
        expect(Tok::KwFeature);
        const SourceSpan name_span = peek().span;
        std::string name = name_token();

        const NodeId id = node_id(out.tree.nodes.size());
        out.tree.nodes.push_back(Node{std::move(name), {}, std::nullopt});
        out.name_spans.push_back(name_span);
        out.card_spans.push_back(name_span);

        const Token& head = peek();
        std::optional<GroupKind> kind;
        std::optional<unsigned> low, high;
        bool star = false;
        SourceSpan card_span = head.span;
        switch (head.kind) {
        case Tok::KwMandatory: kind = GroupKind::Mandatory; take(); break;
        case Tok::KwOptional: kind = GroupKind::Optional; take(); break;
        case Tok::KwOr: kind = GroupKind::Or; take(); break;
        case Tok::KwXor: kind = GroupKind::Xor; take(); break;
        case Tok::KwCard: {
            take();
            expect(Tok::LBracket);
            low = natural(expect(Tok::Nat));
            expect(Tok::DotDot);
            if (peek().kind == Tok::Star) {
                take();
                star = true;
            } else if (peek().kind == Tok::Nat) {
                high = natural(take());
            } else {
                fail(peek(), {Tok::Nat, Tok::Star});
            }
            const Token& close = expect(Tok::RBracket);
            card_span.end = close.span.end;
            break;
        }
        default:
            return id;
        }
        out.card_spans[id.index()] = card_span;

        expect(Tok::LBrace);
        std::vector<NodeId> children;
        do {
            expect_peek({Tok::KwFeature});
            children.push_back(feature(out));
        } while (peek().kind != Tok::RBrace);
        take();

        const auto s = static_cast<unsigned>(children.size());
        Cardinality card = kind ? dependency_to_card(*kind, s) : Cardinality{*low, star ? s : *high};
        out.tree.nodes[id.index()].children = std::move(children);
        out.tree.nodes[id.index()].card = card;
        return id;
    }

    void constraints(ParsedModel& out) {
        expect(Tok::KwConstraints);
        expect(Tok::LBrace);
        bool any = false;
        for (;;) {
            while (peek().kind == Tok::Semicolon)
                take();
            if (any && peek().kind == Tok::RBrace)
                break;
            std::vector<std::pair<std::string, SourceSpan>> vars;
            SourceSpan span = peek().span;
            out.tree.constraints.push_back(formula(vars));
            span.end = tokens_[pos_ - 1].span.end;
            out.constraint_spans.push_back(span);
            out.variable_spans.push_back(std::move(vars));
            any = true;
        }
        take();
    }

    using Vars = std::vector<std::pair<std::string, SourceSpan>>;

    Formula formula(Vars& vars) {
        Formula lhs = implication(vars);
        while (peek().kind == Tok::KwIff) {
            take();
            lhs = Formula::biconditional(std::move(lhs), implication(vars));
        }
        return lhs;
    }

    Formula implication(Vars& vars) {
        Formula lhs = disjunction(vars);
        if (peek().kind != Tok::KwImplies)
            return lhs;
        take();
        return Formula::implication(std::move(lhs), implication(vars));
    }

    Formula disjunction(Vars& vars) {
        std::vector<Formula> ops;
        ops.push_back(conjunction(vars));
        while (peek().kind == Tok::KwOr) {
            take();
            ops.push_back(conjunction(vars));
        }
        return Formula::disjunction(std::move(ops));
    }

    Formula conjunction(Vars& vars) {
        std::vector<Formula> ops;
        ops.push_back(unary(vars));
        while (peek().kind == Tok::KwAnd) {
            take();
            ops.push_back(unary(vars));
        }
        return Formula::conjunction(std::move(ops));
    }

    Formula unary(Vars& vars) {
        switch (peek().kind) {
        case Tok::Bang:
            take();
            return Formula::negation(unary(vars));
        case Tok::LParen: {
            take();
            Formula inner = formula(vars);
            expect(Tok::RParen);
            return inner;
        }
        case Tok::Name: {
            const SourceSpan span = peek().span;
            std::string name(take().text);
            vars.emplace_back(name, span);
            return Formula::var(std::move(name));
        }
        default:
            fail(peek(), {Tok::Name, Tok::Bang, Tok::LParen});
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    ParseOptions options_;
};

} // namespace

SourceSpan ParsedModel::locate(const Violation& v) const {
    if (v.constraint && *v.constraint < constraint_spans.size()) {
        for (const auto& [name, span] : variable_spans[*v.constraint])
            if (name == v.feature)
                return span;
        return constraint_spans[*v.constraint];
    }
    if (v.node && v.node->index() < name_spans.size()) {
        switch (v.kind) {
        case ViolationKind::LowExceedsHigh:
        case ViolationKind::HighExceedsArity:
        case ViolationKind::MissingCard:
        case ViolationKind::LeafWithCard:
            return card_spans[v.node->index()];
        default:
            return name_spans[v.node->index()];
        }
    }
    return name_spans.empty() ? SourceSpan{} : name_spans.front();
}

ParsedModel parse_model_unchecked(std::string_view text, const ParseOptions& options) {
    return Parser(text, options).model();
}

FeatureTree parse_model(std::string_view text, const ParseOptions& options) {
    ParsedModel parsed = parse_model_unchecked(text, options);
    auto report = validate(parsed.tree);
    if (!report.empty()) {
        const Violation& first = report.front();
        std::string message = first.kind == ViolationKind::UnknownFeature ? "unknown feature " + first.feature
                                                                            : first.message;
        throw ParseError(ParseError::Kind::Validation, parsed.locate(first), std::move(message));
    }
    return std::move(parsed.tree);
}

Formula parse_formula(std::string_view text) { return Parser(text, ParseOptions{true}).standalone_formula(); }

} // namespace fm
