#include "ctg/gen/herbrand.hpp"

#include <map>
#include <set>

#include "ctg/fol/substitution.hpp"

namespace ctg {

namespace {

class Dpll {
 public:
  explicit Dpll(const PropClauses& clauses) : clauses_(clauses) {
    int n = 0;
    for (const auto& c : clauses_) {
      for (int l : c) n = std::max(n, std::abs(l));
    }
    value_.assign(static_cast<std::size_t>(n) + 1, 0);
  }

  bool solve() {
    std::vector<int> trail;
    if (!propagate(trail)) {
      undo(trail);
      return false;
    }
    const int v = pick();
    if (v == 0) return true;
    for (int sign : {1, -1}) {
      std::vector<int> local{v * sign};
      assign(v * sign);
      if (solve()) return true;
      undo(local);
    }
    undo(trail);
    return false;
  }

 private:
  int lit_value(int l) const {
    const int v = value_[static_cast<std::size_t>(std::abs(l))];
    return l > 0 ? v : -v;
  }
  void assign(int l) { value_[static_cast<std::size_t>(std::abs(l))] = l > 0 ? 1 : -1; }
  void undo(const std::vector<int>& trail) {
    for (int l : trail) value_[static_cast<std::size_t>(std::abs(l))] = 0;
  }

  bool propagate(std::vector<int>& trail) {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& c : clauses_) {
        int unassigned = 0, last = 0;
        bool sat = false;
        for (int l : c) {
          const int v = lit_value(l);
          if (v > 0) {
            sat = true;
            break;
          }
          if (v == 0) {
            ++unassigned;
            last = l;
          }
        }
        if (sat) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) {
          assign(last);
          trail.push_back(last);
          changed = true;
        }
      }
    }
    return true;
  }

  int pick() const {
    for (const auto& c : clauses_) {
      bool sat = false;
      int open = 0;
      for (int l : c) {
        const int v = lit_value(l);
        if (v > 0) sat = true;
        if (v == 0 && open == 0) open = std::abs(l);
      }
      if (!sat && open) return open;
    }
    return 0;
  }

  const PropClauses& clauses_;
  std::vector<int> value_;
};

void ground_subterms(const Term& t, std::set<Term>& out) {
  if (!t.is_ground()) {
    for (const auto& a : t.args()) ground_subterms(a, out);
    return;
  }
  out.insert(t);
  for (const auto& a : t.args()) ground_subterms(a, out);
}

}  // namespace

bool dpll_satisfiable(const PropClauses& clauses) { return Dpll(clauses).solve(); }

const char* to_string(GroundVerdict v) {
  switch (v) {
    case GroundVerdict::Unsatisfiable: return "unsatisfiable";
    case GroundVerdict::SatisfiableOnUniverse: return "satisfiable-on-universe";
    case GroundVerdict::TooLarge: return "too-large";
  }
  return "?";
}

GroundCheck ground_check(const Matrix& m, std::size_t max_instances) {
  std::set<Term> universe_set;
  for (const auto& c : m.clauses()) {
    for (const auto& l : c.literals) {
      for (const auto& a : l.atom.args()) ground_subterms(a, universe_set);
    }
  }
  if (universe_set.empty()) universe_set.insert(Term::app(SymbolTable::kSklm));
  const std::vector<Term> universe(universe_set.begin(), universe_set.end());

  GroundCheck out;
  out.universe = universe.size();

  std::size_t total = 0;
  std::vector<std::vector<VarId>> clause_vars;
  for (const auto& c : m.clauses()) {
    std::vector<VarId> vars;
    for (const auto& l : c.literals) l.atom.collect_vars(vars);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::size_t count = 1;
    for (std::size_t i = 0; i < vars.size() && count <= max_instances; ++i) count *= universe.size();
    total += count;
    if (total > max_instances) return out;
    clause_vars.push_back(std::move(vars));
  }

  std::map<Term, int> atoms;
  PropClauses ground;
  for (std::size_t ci = 0; ci < m.clauses().size(); ++ci) {
    const auto& vars = clause_vars[ci];
    std::vector<std::size_t> pick(vars.size(), 0);
    for (;;) {
      Substitution s;
      for (std::size_t i = 0; i < vars.size(); ++i) s.bind(vars[i], universe[pick[i]]);
      std::vector<int> gc;
      for (const auto& l : m.clauses()[ci].literals) {
        auto [it, fresh] = atoms.emplace(s.apply(l.atom), static_cast<int>(atoms.size()) + 1);
        gc.push_back(l.positive ? it->second : -it->second);
      }
      ground.push_back(std::move(gc));
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == universe.size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
  }
  out.ground_clauses = ground.size();
  out.atoms = atoms.size();
  out.verdict = dpll_satisfiable(ground) ? GroundVerdict::SatisfiableOnUniverse : GroundVerdict::Unsatisfiable;
  return out;
}

}  // namespace ctg
