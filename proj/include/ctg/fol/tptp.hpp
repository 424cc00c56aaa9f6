#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ctg/fol/matrix.hpp"

namespace ctg {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses `cnf(name, role, l1 | ... | ln).` statements. `%` starts a line
/// comment. Throws ParseError (with position) or ArityError.
Matrix parse_tptp_cnf(std::string_view text);

/// Resolves variable names to ids while parsing literals outside a matrix
/// (proof files). Unknown names receive fresh ids.
using VarResolver = std::function<VarId(std::string_view)>;

/// Parses a single literal in TPTP syntax against an existing symbol table.
/// Unknown functors are rejected unless `symbols` is mutable.
Literal parse_literal(std::string_view text, const SymbolTable& symbols, const VarResolver& vars);
Literal parse_literal(std::string_view text, SymbolTable& symbols, const VarResolver& vars);

/// Maps a variable id to its printed name.
using VarNamer = std::function<std::string(VarId)>;

std::string print(const Term& t, const SymbolTable& symbols, const VarNamer& names);
std::string print(const Literal& l, const SymbolTable& symbols, const VarNamer& names);
std::string print(const Clause& c, const SymbolTable& symbols, const VarNamer& names);

/// Printing against a matrix uses its source variable names.
std::string print(const Term& t, const Matrix& m);
std::string print(const Literal& l, const Matrix& m);
std::string print(const Clause& c, const Matrix& m);
/// Whole matrix as `cnf(...)` statements, one per line.
std::string print(const Matrix& m);

}  // namespace ctg
