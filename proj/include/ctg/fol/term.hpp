#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ctg {

using SymbolId = std::uint32_t;
using VarId = std::uint32_t;

class ArityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Interned function/predicate names with their arities.
///
/// Every table starts with three reserved entries: the normalization
/// constants VAR and SKLM, and the binary equality predicate.
class SymbolTable {
 public:
  static constexpr SymbolId kVar = 0;
  static constexpr SymbolId kSklm = 1;
  static constexpr SymbolId kEquals = 2;

  SymbolTable();

  /// Returns the id for `name`, registering it on first use. Throws
  /// ArityError when the name was already seen with another arity.
  SymbolId intern(std::string_view name, std::size_t arity);
  std::optional<SymbolId> find(std::string_view name) const;

  const std::string& name(SymbolId id) const { return names_.at(id); }
  std::size_t arity(SymbolId id) const { return arities_.at(id); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::vector<std::size_t> arities_;
  std::unordered_map<std::string, SymbolId> index_;
};

/// A first-order term: a variable or a functor applied to arguments.
/// Constants are zero-arity applications.
class Term {
 public:
  static Term var(VarId id) { return Term(true, id, {}); }
  static Term app(SymbolId functor, std::vector<Term> args = {}) {
    return Term(false, functor, std::move(args));
  }

  bool is_var() const { return is_var_; }
  VarId var_id() const { return id_; }
  SymbolId functor() const { return id_; }
  const std::vector<Term>& args() const { return args_; }

  bool is_ground() const;
  bool contains_var(VarId v) const;
  void collect_vars(std::vector<VarId>& out) const;

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  Term(bool is_var, std::uint32_t id, std::vector<Term> args)
      : is_var_(is_var), id_(id), args_(std::move(args)) {}

  bool is_var_;
  std::uint32_t id_;
  std::vector<Term> args_;
};

struct Literal {
  bool positive = true;
  Term atom = Term::app(SymbolTable::kEquals);

  Literal complement() const { return {!positive, atom}; }
  friend bool operator==(const Literal&, const Literal&) = default;
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
    if (a.positive != b.positive) return a.positive ? std::strong_ordering::greater : std::strong_ordering::less;
    return a.atom <=> b.atom;
  }
};

struct Clause {
  std::string name;
  std::string role = "axiom";
  std::vector<Literal> literals;

  bool all_positive() const;
  friend bool operator==(const Clause&, const Clause&) = default;
};

}  // namespace ctg
