#include "ctg/fol/substitution.hpp"

#include <utility>

namespace ctg {

const Term* Substitution::lookup(VarId v) const {
  auto it = bindings_.find(v);
  return it == bindings_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
  if (bindings_.empty()) return t;
  if (t.is_var()) {
    const Term* b = lookup(t.var_id());
    return b ? *b : t;
  }
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(apply(a));
  return Term::app(t.functor(), std::move(args));
}

Literal Substitution::apply(const Literal& l) const { return {l.positive, apply(l.atom)}; }

Clause Substitution::apply(const Clause& c) const {
  Clause out{c.name, c.role, {}};
  out.literals.reserve(c.literals.size());
  for (const auto& l : c.literals) out.literals.push_back(apply(l));
  return out;
}

namespace {

Term replace_var(const Term& t, VarId v, const Term& by) {
  if (t.is_var()) return t.var_id() == v ? by : t;
  if (!t.contains_var(v)) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(replace_var(a, v, by));
  return Term::app(t.functor(), std::move(args));
}

constexpr std::size_t kUncheckedStepLimit = 100000;

}  // namespace

void Substitution::bind(VarId v, Term t) {
  for (auto& [_, rhs] : bindings_) rhs = replace_var(rhs, v, t);
  bindings_.insert_or_assign(v, std::move(t));
}

Substitution Substitution::then(const Substitution& next) const {
  Substitution out;
  for (const auto& [v, rhs] : bindings_) {
    Term t = next.apply(rhs);
    if (t.is_var() && t.var_id() == v) continue;
    out.bindings_.emplace(v, std::move(t));
  }
  for (const auto& [v, rhs] : next.bindings_) {
    if (!bindings_.contains(v)) out.bindings_.emplace(v, rhs);
  }
  return out;
}

std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& start,
                                  UnifyOptions options) {
  Substitution sigma = start;
  std::vector<std::pair<Term, Term>> work;
  work.emplace_back(a, b);
  // Cyclic bindings (occurs check off) can make decomposition diverge.
  std::size_t steps = 0;
  while (!work.empty()) {
    if (!options.occurs_check && ++steps > kUncheckedStepLimit) return std::nullopt;
    auto [s0, t0] = std::move(work.back());
    work.pop_back();
    Term s = sigma.apply(s0);
    Term t = sigma.apply(t0);
    if (s == t) continue;
    if (!s.is_var() && t.is_var()) std::swap(s, t);
    if (s.is_var()) {
      if (t.contains_var(s.var_id())) {
        if (options.occurs_check) return std::nullopt;
        // Without the occurs check the cyclic binding is recorded as is.
        // Idempotence no longer holds for such substitutions.
      }
      sigma.bind(s.var_id(), std::move(t));
      continue;
    }
    if (s.functor() != t.functor() || s.args().size() != t.args().size()) return std::nullopt;
    for (std::size_t i = s.args().size(); i-- > 0;) work.emplace_back(s.args()[i], t.args()[i]);
  }
  return sigma;
}

std::optional<Instantiation> match(const Term& pattern, const Term& instance, Instantiation theta) {
  std::vector<std::pair<const Term*, const Term*>> work{{&pattern, &instance}};
  while (!work.empty()) {
    auto [p, t] = work.back();
    work.pop_back();
    if (p->is_var()) {
      auto [it, inserted] = theta.try_emplace(p->var_id(), *t);
      if (!inserted && !(it->second == *t)) return std::nullopt;
      continue;
    }
    if (t->is_var() || p->functor() != t->functor() || p->args().size() != t->args().size()) {
      return std::nullopt;
    }
    for (std::size_t i = p->args().size(); i-- > 0;) work.emplace_back(&p->args()[i], &t->args()[i]);
  }
  return theta;
}

}  // namespace ctg
