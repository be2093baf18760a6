#ifndef FM_PARSE_LEXER_HPP
#define FM_PARSE_LEXER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "fm/parse.hpp"

namespace fm::detail {

enum class Tok {
    Name,
    Nat,
    KwFeature,
    KwCard,
    KwMandatory,
    KwOptional,
    KwOr,
    KwXor,
    KwConstraints,
    KwAnd,
    KwImplies,
    KwIff,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    DotDot,
    Star,
    Bang,
    LParen,
    RParen,
    Semicolon,
    End,
};

std::string describe(Tok t);

struct Token {
    Tok kind;
    std::string_view text;
    SourceSpan span;
};

/// Whole-input tokenization; the last token is always End.
std::vector<Token> tokenize(std::string_view text);

} // namespace fm::detail

#endif // FM_PARSE_LEXER_HPP
