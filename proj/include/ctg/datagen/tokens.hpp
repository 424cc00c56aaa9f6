#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctg/fol/term.hpp"

namespace ctg {

using Tokens = std::vector<std::string>;

/// Separates literals inside a multi-literal source sequence.
inline constexpr const char* kLiteralSeparator = "#";

/// Symbol names plus the punctuation tokens `(`, `)`, `,`, `=` and `~`.
/// Equality is infix; a negated equality is `~` followed by the infix form.
Tokens tokenize_literal(const Literal& l, const SymbolTable& symbols);

/// Parses a token stream back into a literal. Unknown symbols are added to
/// `symbols`; returns nullopt for malformed streams, including arity
/// clashes and symbols that look like reserved tokens (`<...>`).
std::optional<Literal> detokenize_literal(const Tokens& tokens, SymbolTable& symbols);

/// Splits literal text such as `m1_subset_1(np__1,k4_ordinal1)` into
/// tokens. `!=` becomes `~` before the left operand.
Tokens lex_literal(std::string_view text);

std::string join_tokens(const Tokens& tokens);
Tokens split_tokens(const std::string& line);

}  // namespace ctg
