#include "ctg/fol/term.hpp"

#include <algorithm>

#include "ctg/fol/matrix.hpp"

namespace ctg {

SymbolTable::SymbolTable() {
  intern("VAR", 0);
  intern("SKLM", 0);
  intern("=", 2);
}

SymbolId SymbolTable::intern(std::string_view name, std::size_t arity) {
  if (auto it = index_.find(std::string(name)); it != index_.end()) {
    if (arities_[it->second] != arity) {
      throw ArityError("symbol '" + std::string(name) + "' used with arity " + std::to_string(arity) +
                       " but previously with arity " + std::to_string(arities_[it->second]));
    }
    return it->second;
  }
  const auto id = static_cast<SymbolId>(names_.size());
  names_.emplace_back(name);
  arities_.push_back(arity);
  index_.emplace(std::string(name), id);
  return id;
}

std::optional<SymbolId> SymbolTable::find(std::string_view name) const {
  if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
  return std::nullopt;
}

bool Term::is_ground() const {
  if (is_var_) return false;
  return std::all_of(args_.begin(), args_.end(), [](const Term& a) { return a.is_ground(); });
}

bool Term::contains_var(VarId v) const {
  if (is_var_) return id_ == v;
  return std::any_of(args_.begin(), args_.end(), [v](const Term& a) { return a.contains_var(v); });
}

void Term::collect_vars(std::vector<VarId>& out) const {
  if (is_var_) {
    if (std::find(out.begin(), out.end(), id_) == out.end()) out.push_back(id_);
    return;
  }
  for (const auto& a : args_) a.collect_vars(out);
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.is_var_ != b.is_var_) return a.is_var_ ? std::strong_ordering::less : std::strong_ordering::greater;
  if (auto c = a.id_ <=> b.id_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.args_.begin(), a.args_.end(), b.args_.begin(),
                                                b.args_.end());
}

bool Clause::all_positive() const {
  return std::all_of(literals.begin(), literals.end(), [](const Literal& l) { return l.positive; });
}

std::string fresh_var_name(VarId id) { return "X_" + std::to_string(id); }

Matrix::Matrix(std::vector<Clause> clauses, std::shared_ptr<const SymbolTable> symbols,
               std::vector<std::string> var_names)
    : clauses_(std::move(clauses)), symbols_(std::move(symbols)), var_names_(std::move(var_names)) {
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    if (clauses_[i].literals.empty()) {
      throw std::invalid_argument("clause '" + clauses_[i].name + "' is empty");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (clauses_[j].name == clauses_[i].name) {
        throw std::invalid_argument("duplicate clause name '" + clauses_[i].name + "'");
      }
    }
  }
}

std::string Matrix::var_name(VarId id) const {
  if (id < var_names_.size()) return var_names_[id];
  return fresh_var_name(id);
}

std::optional<std::size_t> Matrix::index_of(std::string_view clause_name) const {
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    if (clauses_[i].name == clause_name) return i;
  }
  return std::nullopt;
}

const Clause* Matrix::find(std::string_view clause_name) const {
  auto i = index_of(clause_name);
  return i ? &clauses_[*i] : nullptr;
}

namespace {

Term rename_term(const Term& t, std::vector<std::pair<VarId, VarId>>& map, VarSupply& supply) {
  if (t.is_var()) {
    for (const auto& [from, to] : map) {
      if (from == t.var_id()) return Term::var(to);
    }
    const VarId to = supply.fresh();
    map.emplace_back(t.var_id(), to);
    return Term::var(to);
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(rename_term(a, map, supply));
  return Term::app(t.functor(), std::move(args));
}

}  // namespace

Clause rename_apart(const Clause& c, VarSupply& supply) {
  std::vector<std::pair<VarId, VarId>> map;
  Clause out{c.name, c.role, {}};
  out.literals.reserve(c.literals.size());
  for (const auto& l : c.literals) out.literals.push_back({l.positive, rename_term(l.atom, map, supply)});
  return out;
}

}  // namespace ctg
