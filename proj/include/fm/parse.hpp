#ifndef FM_PARSE_HPP
#define FM_PARSE_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fm/core.hpp"
#include "fm/normalize.hpp"

namespace fm {

struct SourceSpan {
    std::size_t start = 0; ///< byte offset, inclusive
    std::size_t end = 0;   ///< byte offset, exclusive
    unsigned line = 1;     ///< 1-based
    unsigned column = 1;   ///< 1-based, in bytes
};

class ParseError : public Error {
public:
    enum class Kind { Lexical, Syntax, Validation };

    ParseError(Kind kind, SourceSpan span, std::string message, std::vector<std::string> expected = {});

    Kind kind() const { return kind_; }
    const SourceSpan& span() const { return span_; }
    /// Message without the location prefix.
    const std::string& message() const { return message_; }
    /// Token kinds that would have been accepted at span.
    const std::vector<std::string>& expected() const { return expected_; }

private:
    Kind kind_;
    SourceSpan span_;
    std::string message_;
    std::vector<std::string> expected_;
};

/// Raised by the JSON readers for malformed documents or schema violations.
class SchemaError : public Error {
public:
    using Error::Error;
};

struct ParseOptions {
    /// Accept `_`-prefixed names (synthetic nodes produced by normalization).
    bool allow_reserved_names = false;
};

/// A tree as written, before validation, with source locations for reporting.
struct ParsedModel {
    FeatureTree tree;
    std::vector<SourceSpan> name_spans;       ///< per node
    std::vector<SourceSpan> card_spans;       ///< per node; group keyword or card bracket
    std::vector<SourceSpan> constraint_spans; ///< per constraint
    /// Per constraint, every variable occurrence and its location.
    std::vector<std::vector<std::pair<std::string, SourceSpan>>> variable_spans;

    /// Best location for reporting a validation violation.
    SourceSpan locate(const Violation& v) const;
};

/// Grammar:
///
///     model            := featureDecl constraintsBlock?
///     featureDecl      := "feature" NAME groupSpec?
///     groupSpec        := (groupKind | "card" "[" NAT ".." (NAT | "*") "]") "{" featureDecl+ "}"
///     groupKind        := "mandatory" | "optional" | "or" | "xor"
///     constraintsBlock := "constraints" "{" formula+ "}"
///
/// Formulas are separated by newlines or `;`; `#` starts a comment. Group
/// keywords are desugared to card labels and `*` resolves to the child count.
/// Syntax errors only; the returned tree is not validated.
ParsedModel parse_model_unchecked(std::string_view text, const ParseOptions& options = {});

/// Parse and validate. The first violation is raised as a ParseError of kind
/// Validation pointing at the offending declaration.
FeatureTree parse_model(std::string_view text, const ParseOptions& options = {});

/// Precedence, tightest first: `!`, `and`, `or`, `implies` (right
/// associative), `iff` (left associative). Parentheses override.
Formula parse_formula(std::string_view text);

/// Inverse of parse_formula: parse_formula(format_formula(f)) == f.
std::string format_formula(const Formula& f);

/// `.fm` text of a tree. Cards are always written as `card [l..h]`.
std::string emit_model(const FeatureTree& tree);

/// `{"root":..,"features":[{"name","card":{"low","high"}?,"children":[..]?}],"constraints":[..]}`
/// with features in preorder and constraints in DSL formula syntax.
std::string emit_json(const FeatureTree& tree, int indent = -1);

/// Throws SchemaError for malformed JSON or schema violations (including
/// duplicate or unknown feature names) and ValidationError when the tree is
/// ill-formed. Reserved `_` names are accepted.
FeatureTree read_json(std::string_view text);

/// Same schema, but a feature may appear in several children lists. Features
/// keep their listed order, which fixes each node's first parent.
FeatureGraph read_graph_json(std::string_view text);
std::string emit_graph_json(const FeatureGraph& graph, int indent = -1);

} // namespace fm

#endif // FM_PARSE_HPP
