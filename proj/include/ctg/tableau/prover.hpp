#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctg/fol/substitution.hpp"
#include "ctg/tableau/proof.hpp"

namespace ctg {

struct SearchLimits {
  /// Largest path length (literals on the branch, roots count 1) at which
  /// a node may still be extended.
  std::size_t max_depth = 12;
  std::size_t depth_start = 1;
  std::size_t depth_step = 1;
  /// Inference budget over all deepening rounds.
  std::uint64_t node_budget = 2'000'000;
  /// Wall-clock budget in milliseconds; 0 disables the clock.
  std::uint64_t time_budget_ms = 0;

  void validate() const;
};

struct ProverFlags {
  bool regularity = true;
  bool occurs_check = true;
};

struct Candidate {
  std::size_t clause_index = 0;
  std::size_t literal_index = 0;
  /// The clause renamed apart.
  Clause instance;
  Substitution sigma;
};

/// Every (clause, literal) whose literal unifies with the complement of
/// sigma(goal), in input order, each with the extended unifier.
std::vector<Candidate> candidate_extensions(const Literal& goal, const Matrix& m, const Substitution& sigma,
                                            VarSupply& supply, UnifyOptions options = {});

/// Scores candidate clauses at a choice point. `path` holds the literals
/// from the root to the goal (inclusive), instantiated by the current
/// substitution. Implementations must be safe to call concurrently.
class ClauseScorer {
 public:
  virtual ~ClauseScorer() = default;
  virtual std::vector<double> score(const Matrix& m, std::span<const Literal> path,
                                    std::span<const std::string> clause_names) const = 0;
};

struct ClauseOrdering {
  enum class Strategy { InputOrder, Random, ModelGuided };

  Strategy strategy = Strategy::InputOrder;
  std::uint64_t seed = 0;
  std::shared_ptr<const ClauseScorer> scorer;

  static ClauseOrdering input_order() { return {}; }
  static ClauseOrdering random(std::uint64_t seed) { return {Strategy::Random, seed, nullptr}; }
  static ClauseOrdering guided(std::shared_ptr<const ClauseScorer> scorer) {
    return {Strategy::ModelGuided, 0, std::move(scorer)};
  }
};

enum class SearchOutcome {
  Proved,
  /// No proof up to max_depth, but some branch hit the depth limit.
  DepthExhausted,
  /// No proof at any depth: a round finished without hitting the limit.
  SearchExhausted,
  BudgetExhausted,
  TimeExhausted,
};

const char* to_string(SearchOutcome o);

struct SearchStats {
  SearchOutcome outcome = SearchOutcome::SearchExhausted;
  std::uint64_t inferences = 0;
  /// Depth limit of the last round that ran.
  std::size_t depth = 0;
  /// Number of times the guided scorer failed and input order was used.
  std::uint64_t scorer_fallbacks = 0;
  double elapsed_ms = 0.0;
};

struct ProveResult {
  std::optional<ProofTree> proof;
  SearchStats stats;
};

/// Iterative-deepening connection tableau search. Start clauses are the
/// all-positive clauses, or every clause when none is all-positive.
ProveResult prove(const Matrix& m, const SearchLimits& limits, const ClauseOrdering& ordering = {},
                  const ProverFlags& flags = {}, std::string problem_id = "problem");

}  // namespace ctg
