#pragma once

#include <map>
#include <optional>

#include "ctg/fol/term.hpp"

namespace ctg {

/// Idempotent variable bindings: no bound variable occurs in any binding's
/// right-hand side, so a single application fully instantiates a term.
class Substitution {
 public:
  Substitution() = default;

  const Term* lookup(VarId v) const;
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::map<VarId, Term>& bindings() const { return bindings_; }

  Term apply(const Term& t) const;
  Literal apply(const Literal& l) const;
  Clause apply(const Clause& c) const;

  /// Adds v -> t. `t` must already be instantiated by this substitution and
  /// must not contain v. Existing right-hand sides are rewritten so the
  /// result stays idempotent.
  void bind(VarId v, Term t);

  /// The substitution equivalent to applying `*this` then `next`.
  Substitution then(const Substitution& next) const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::map<VarId, Term> bindings_;
};

struct UnifyOptions {
  bool occurs_check = true;
};

/// Most general unifier of `a` and `b` extending `start`, or nothing on a
/// clash or occurs-check failure. `start` is never modified.
std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& start,
                                  UnifyOptions options = {});

/// Bindings produced by one-way matching. Unlike Substitution these are
/// never composed, so pattern and instance variables may share ids.
using Instantiation = std::map<VarId, Term>;

/// One-way matching: extends `theta` so that theta(pattern) == instance.
/// Variables of `instance` are treated as constants.
std::optional<Instantiation> match(const Term& pattern, const Term& instance, Instantiation theta = {});

}  // namespace ctg
