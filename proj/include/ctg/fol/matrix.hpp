#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctg/fol/term.hpp"

namespace ctg {

/// Name of a variable id as printed. Ids below the matrix variable count
/// carry their source names; fresh ids print as `X_<id>`.
std::string fresh_var_name(VarId id);

/// An immutable clause set together with its symbol table.
///
/// Variable ids are clause-local in meaning but globally distinct: each
/// clause owns a contiguous id range, so no two clauses share a variable.
class Matrix {
 public:
  Matrix(std::vector<Clause> clauses, std::shared_ptr<const SymbolTable> symbols,
         std::vector<std::string> var_names);

  const std::vector<Clause>& clauses() const { return clauses_; }
  const SymbolTable& symbols() const { return *symbols_; }
  const std::shared_ptr<const SymbolTable>& symbols_ptr() const { return symbols_; }
  std::size_t var_count() const { return var_names_.size(); }
  std::span<const std::string> var_names() const { return var_names_; }
  std::string var_name(VarId id) const;

  std::optional<std::size_t> index_of(std::string_view clause_name) const;
  const Clause* find(std::string_view clause_name) const;
  bool empty() const { return clauses_.empty(); }

 private:
  std::vector<Clause> clauses_;
  std::shared_ptr<const SymbolTable> symbols_;
  std::vector<std::string> var_names_;
};

/// Hands out variable ids that are unused by a matrix and by every id
/// previously produced from the same supply.
class VarSupply {
 public:
  explicit VarSupply(VarId first = 0) : next_(first) {}
  VarId fresh() { return next_++; }
  VarId peek() const { return next_; }

 private:
  VarId next_;
};

Clause rename_apart(const Clause& c, VarSupply& supply);

}  // namespace ctg
