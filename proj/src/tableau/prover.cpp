#include "ctg/tableau/prover.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <type_traits>

namespace ctg {

void SearchLimits::validate() const {
  if (max_depth == 0 || depth_start == 0 || depth_step == 0 || node_budget == 0) {
    throw std::invalid_argument("search limits must be positive");
  }
}

const char* to_string(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::Proved: return "proved";
    case SearchOutcome::DepthExhausted: return "depth";
    case SearchOutcome::SearchExhausted: return "exhausted";
    case SearchOutcome::BudgetExhausted: return "budget";
    case SearchOutcome::TimeExhausted: return "time";
  }
  return "?";
}

namespace {

/// Non-owning reference to a callable returning bool.
class Continuation {
 public:
  template <class F>
    requires(!std::is_same_v<std::remove_cvref_t<F>, Continuation>)
  Continuation(F& f) : obj_(&f), call_([](void* o) { return (*static_cast<F*>(o))(); }) {}

  bool operator()() const { return call_(obj_); }

 private:
  void* obj_;
  bool (*call_)(void*);
};

bool connects(const Literal& goal, const Literal& lit) {
  return goal.positive != lit.positive && goal.atom.functor() == lit.atom.functor() &&
         goal.atom.args().size() == lit.atom.args().size();
}

void add_candidate(std::vector<Candidate>& out, const Literal& goal, const Matrix& m, std::size_t ci,
                   std::size_t li, const Substitution& sigma, VarSupply& supply, UnifyOptions options) {
  Clause inst = rename_apart(m.clauses()[ci], supply);
  auto s = unify(goal.atom, inst.literals[li].atom, sigma, options);
  if (s) out.push_back(Candidate{ci, li, std::move(inst), std::move(*s)});
}

struct Interrupted {
  SearchOutcome outcome;
};

class Search {
 public:
  Search(const Matrix& m, const SearchLimits& limits, const ClauseOrdering& ordering, const ProverFlags& flags)
      : m_(m),
        limits_(limits),
        ordering_(ordering),
        flags_(flags),
        supply_(static_cast<VarId>(m.var_count())),
        rng_(ordering.seed),
        start_(std::chrono::steady_clock::now()) {
    for (std::size_t ci = 0; ci < m.clauses().size(); ++ci) {
      const auto& lits = m.clauses()[ci].literals;
      for (std::size_t li = 0; li < lits.size(); ++li) {
        index_[{lits[li].positive, lits[li].atom.functor()}].emplace_back(ci, li);
      }
    }
  }

  ProveResult run(std::string problem_id) {
    ProveResult result;
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < m_.clauses().size(); ++i) {
      if (m_.clauses()[i].all_positive()) starts.push_back(i);
    }
    if (starts.empty()) {
      starts.resize(m_.clauses().size());
      std::iota(starts.begin(), starts.end(), 0);
    }

    result.stats.outcome = SearchOutcome::DepthExhausted;
    try {
      for (limit_ = limits_.depth_start; limit_ <= limits_.max_depth; limit_ += limits_.depth_step) {
        result.stats.depth = limit_;
        depth_cut_ = false;
        for (std::size_t s : starts) {
          if (try_start(s)) {
            result.proof = build(problem_id, m_.clauses()[s].name);
            result.stats.outcome = SearchOutcome::Proved;
            break;
          }
        }
        if (result.proof) break;
        if (!depth_cut_) {
          result.stats.outcome = SearchOutcome::SearchExhausted;
          break;
        }
      }
    } catch (const Interrupted& i) {
      result.stats.outcome = i.outcome;
      result.proof.reset();
    }
    result.stats.inferences = inferences_;
    result.stats.scorer_fallbacks = fallbacks_;
    result.stats.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    return result;
  }

 private:
  struct Node {
    Literal literal;
    std::size_t depth;
    Closure closure = OpenLeaf{};
    std::vector<std::size_t> children;
  };

  void tick() {
    if (++inferences_ > limits_.node_budget) throw Interrupted{SearchOutcome::BudgetExhausted};
    if (limits_.time_budget_ms && (inferences_ & 1023) == 0) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_);
      if (static_cast<std::uint64_t>(ms.count()) > limits_.time_budget_ms) {
        throw Interrupted{SearchOutcome::TimeExhausted};
      }
    }
  }

  bool try_start(std::size_t clause_index) {
    nodes_.clear();
    path_.clear();
    sigma_ = Substitution{};
    Clause inst = rename_apart(m_.clauses()[clause_index], supply_);
    roots_.clear();
    for (auto& l : inst.literals) {
      roots_.push_back(nodes_.size());
      nodes_.push_back(Node{std::move(l), 1, OpenLeaf{}, {}});
    }
    auto done = [] { return true; };
    tick();
    return prove_all(roots_, 0, Continuation(done));
  }

  bool prove_all(const std::vector<std::size_t>& todo, std::size_t i, Continuation k) {
    if (i == todo.size()) return k();
    auto rest = [&] { return prove_all(todo, i + 1, k); };
    return prove_node(todo[i], Continuation(rest));
  }

  bool prove_node(std::size_t n, Continuation k) {
    const Literal goal = sigma_.apply(nodes_[n].literal);
    const std::size_t depth = nodes_[n].depth;

    if (flags_.regularity) {
      for (std::size_t a : path_) {
        if (sigma_.apply(nodes_[a].literal) == goal) return false;
      }
    }

    const UnifyOptions uopts{flags_.occurs_check};
    // Nearest ancestor first. The continuation may grow path_, so index it.
    for (std::size_t i = path_.size(); i-- > 0;) {
      const Node& anc = nodes_[path_[i]];
      if (!connects(goal, anc.literal)) continue;
      tick();
      auto s = unify(goal.atom, anc.literal.atom, sigma_, uopts);
      if (!s) continue;
      const std::size_t anc_depth = anc.depth;
      Substitution saved = std::exchange(sigma_, std::move(*s));
      nodes_[n].closure = Reduction{anc_depth};
      if (k()) return true;
      sigma_ = std::move(saved);
    }
    nodes_[n].closure = OpenLeaf{};

    if (depth > limit_) {
      depth_cut_ = true;
      return false;
    }

    std::vector<Candidate> cands;
    if (auto it = index_.find({!goal.positive, goal.atom.functor()}); it != index_.end()) {
      for (auto [ci, li] : it->second) {
        if (connects(goal, m_.clauses()[ci].literals[li])) {
          add_candidate(cands, goal, m_, ci, li, sigma_, supply_, uopts);
        }
      }
    }
    order(cands, goal);

    for (auto& c : cands) {
      tick();
      const std::size_t mark = nodes_.size();
      Substitution saved = std::exchange(sigma_, std::move(c.sigma));
      std::vector<std::size_t> children;
      for (std::size_t j = 0; j < c.instance.literals.size(); ++j) {
        if (j == c.literal_index) continue;
        children.push_back(nodes_.size());
        nodes_.push_back(Node{std::move(c.instance.literals[j]), depth + 1, OpenLeaf{}, {}});
      }
      nodes_[n].closure = Extension{m_.clauses()[c.clause_index].name, c.literal_index};
      nodes_[n].children = children;

      path_.push_back(n);
      auto after = [&] {
        path_.pop_back();
        const bool ok = k();
        path_.push_back(n);
        return ok;
      };
      const bool ok = prove_all(children, 0, Continuation(after));
      path_.pop_back();
      if (ok) return true;

      nodes_.resize(mark);
      nodes_[n].children.clear();
      sigma_ = std::move(saved);
    }
    nodes_[n].closure = OpenLeaf{};
    return false;
  }

  void order(std::vector<Candidate>& cands, const Literal& goal) {
    if (cands.size() < 2) return;
    switch (ordering_.strategy) {
      case ClauseOrdering::Strategy::InputOrder: return;
      case ClauseOrdering::Strategy::Random: {
        for (std::size_t i = cands.size() - 1; i > 0; --i) {
          std::swap(cands[i], cands[rng_() % (i + 1)]);
        }
        return;
      }
      case ClauseOrdering::Strategy::ModelGuided: {
        std::vector<Literal> path;
        for (std::size_t a : path_) path.push_back(sigma_.apply(nodes_[a].literal));
        path.push_back(goal);
        std::vector<std::string> names;
        for (const auto& c : cands) names.push_back(m_.clauses()[c.clause_index].name);
        std::vector<double> scores;
        try {
          if (!ordering_.scorer) throw std::runtime_error("no scorer");
          scores = ordering_.scorer->score(m_, path, names);
        } catch (const std::exception&) {
          scores.clear();
        }
        if (scores.size() != cands.size() ||
            std::any_of(scores.begin(), scores.end(), [](double s) { return std::isnan(s); })) {
          ++fallbacks_;
          return;
        }
        std::vector<std::size_t> idx(cands.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
        std::vector<Candidate> sorted;
        sorted.reserve(cands.size());
        for (std::size_t i : idx) sorted.push_back(std::move(cands[i]));
        cands = std::move(sorted);
        return;
      }
    }
  }

  TableauNode materialize(std::size_t n) const {
    TableauNode out{sigma_.apply(nodes_[n].literal), nodes_[n].closure, {}};
    for (std::size_t c : nodes_[n].children) out.children.push_back(materialize(c));
    return out;
  }

  ProofTree build(std::string problem_id, std::string start) const {
    ProofTree p{std::move(problem_id), std::move(start), {}};
    for (std::size_t r : roots_) p.roots.push_back(materialize(r));
    return p;
  }

  const Matrix& m_;
  SearchLimits limits_;
  ClauseOrdering ordering_;
  ProverFlags flags_;
  std::map<std::pair<bool, SymbolId>, std::vector<std::pair<std::size_t, std::size_t>>> index_;

  std::vector<Node> nodes_;
  std::vector<std::size_t> roots_;
  std::vector<std::size_t> path_;
  Substitution sigma_;
  VarSupply supply_;
  std::mt19937_64 rng_;
  std::size_t limit_ = 0;
  bool depth_cut_ = false;
  std::uint64_t inferences_ = 0;
  std::uint64_t fallbacks_ = 0;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

std::vector<Candidate> candidate_extensions(const Literal& goal, const Matrix& m, const Substitution& sigma,
                                            VarSupply& supply, UnifyOptions options) {
  const Literal g = sigma.apply(goal);
  std::vector<Candidate> out;
  for (std::size_t ci = 0; ci < m.clauses().size(); ++ci) {
    const auto& lits = m.clauses()[ci].literals;
    for (std::size_t li = 0; li < lits.size(); ++li) {
      if (connects(g, lits[li])) add_candidate(out, g, m, ci, li, sigma, supply, options);
    }
  }
  return out;
}

ProveResult prove(const Matrix& m, const SearchLimits& limits, const ClauseOrdering& ordering,
                  const ProverFlags& flags, std::string problem_id) {
  limits.validate();
  if (m.empty()) throw std::invalid_argument("cannot prove an empty matrix");
  Search search(m, limits, ordering, flags);
  return search.run(std::move(problem_id));
}

}  // namespace ctg
