#include "lexer.hpp"

#include <array>
#include <cstdio>
#include <utility>

namespace fm::detail {

std::string describe(Tok t) {
    switch (t) {
    case Tok::Name: return "NAME";
    case Tok::Nat: return "NAT";
    case Tok::KwFeature: return "'feature'";
    case Tok::KwCard: return "'card'";
    case Tok::KwMandatory: return "'mandatory'";
    case Tok::KwOptional: return "'optional'";
    case Tok::KwOr: return "'or'";
    case Tok::KwXor: return "'xor'";
    case Tok::KwConstraints: return "'constraints'";
    case Tok::KwAnd: return "'and'";
    case Tok::KwImplies: return "'implies'";
    case Tok::KwIff: return "'iff'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::DotDot: return "'..'";
    case Tok::Star: return "'*'";
    case Tok::Bang: return "'!'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Semicolon: return "';'";
    case Tok::End: return "end of input";
    }
    return "?";
}

namespace {

constexpr std::array<std::pair<std::string_view, Tok>, 10> keywords{{
    {"feature", Tok::KwFeature},
    {"card", Tok::KwCard},
    {"mandatory", Tok::KwMandatory},
    {"optional", Tok::KwOptional},
    {"or", Tok::KwOr},
    {"xor", Tok::KwXor},
    {"constraints", Tok::KwConstraints},
    {"and", Tok::KwAnd},
    {"implies", Tok::KwImplies},
    {"iff", Tok::KwIff},
}};

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            if (pos_ >= text_.size()) {
                out.push_back({Tok::End, {}, span_from(pos_, line_, col_)});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else {
                break;
            }
        }
    }

    SourceSpan span_from(std::size_t start, unsigned line, unsigned col) const {
        return SourceSpan{start, pos_, line, col};
    }

    Token make(Tok kind, std::size_t start, unsigned line, unsigned col) {
        return Token{kind, text_.substr(start, pos_ - start), span_from(start, line, col)};
    }

    Token next() {
        const std::size_t start = pos_;
        const unsigned line = line_, col = col_;
        const char c = text_[pos_];

        if (is_alpha(c) || c == '_') {
            while (pos_ < text_.size() && (is_alpha(text_[pos_]) || is_digit(text_[pos_]) || text_[pos_] == '_'))
                advance();
            auto word = text_.substr(start, pos_ - start);
            for (auto [kw, tok] : keywords)
                if (word == kw)
                    return make(tok, start, line, col);
            return make(Tok::Name, start, line, col);
        }
        if (is_digit(c)) {
            while (pos_ < text_.size() && is_digit(text_[pos_]))
                advance();
            return make(Tok::Nat, start, line, col);
        }
        if (c == '.' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '.') {
            advance();
            advance();
            return make(Tok::DotDot, start, line, col);
        }
        Tok kind;
        switch (c) {
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        case '[': kind = Tok::LBracket; break;
        case ']': kind = Tok::RBracket; break;
        case '*': kind = Tok::Star; break;
        case '!': kind = Tok::Bang; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case ';': kind = Tok::Semicolon; break;
        default: {
            advance();
            const auto byte = static_cast<unsigned char>(c);
            std::string shown;
            if (byte < 0x20 || byte >= 0x7f) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "0x%02x", byte);
                shown = std::string("byte ") + buf;
            } else {
                shown = std::string("'") + c + "'";
            }
            throw ParseError(ParseError::Kind::Lexical, span_from(start, line, col), "unexpected character " + shown);
        }
        }
        advance();
        return make(kind, start, line, col);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    unsigned line_ = 1;
    unsigned col_ = 1;
};

} // namespace

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

} // namespace fm::detail
