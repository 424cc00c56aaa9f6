#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ctg {

/// Shape of the shared background theory and of the problems drawn from it.
struct GeneratorConfig {
  std::size_t predicates = 10;
  /// Function symbols; roughly half are binary, the rest unary.
  std::size_t functions = 8;
  std::size_t constants = 5;
  /// Rules per predicate, each keyed by a distinct head function symbol.
  std::size_t rules_per_predicate = 3;
  /// Chance that a rule gets a decoy sibling with the same head and a body
  /// that can never be closed.
  double decoy_rate = 0.35;
  std::size_t max_term_depth = 4;
  /// Problem-specific unit hypotheses about Skolem symbols.
  std::size_t hypotheses = 2;
  std::uint64_t theory_seed = 1;

  void validate() const;
};

struct GeneratedProblem {
  std::string name;
  std::string text;
};

/// Random dual-Horn problems over one background theory. Theory clauses
/// `ax_<k>` read `~p(f(X,Y)) | q(X) | r(Y)` (p holds of f(s,t) when q holds
/// of s and r of t) and `~p(c)`; hypotheses `hyp_<k>` add facts about
/// esk1_0 and esk<k>_1(X); the negated conjecture is `p(t)` for a derivable
/// ground t, so every problem is unsatisfiable by construction.
class ProblemGenerator {
 public:
  explicit ProblemGenerator(GeneratorConfig cfg);

  /// Same seed, same text.
  GeneratedProblem generate(std::uint64_t seed, const std::string& name) const;
  const std::string& theory_text() const { return theory_text_; }

 private:
  struct Rule {
    std::string name;
    std::size_t head;
    std::size_t function;
    std::vector<std::size_t> body;
    bool decoy;
  };
  struct Fact {
    std::string name;
    std::size_t predicate;
    std::size_t constant;
  };

  GeneratorConfig cfg_;
  std::vector<std::size_t> arity_;
  std::vector<Rule> rules_;
  std::vector<Fact> facts_;
  std::string theory_text_;
};

/// Problems `<prefix><i>` for i = 1..count, seeded from `seed`, each
/// confirmed unsatisfiable by ground_check.
std::vector<GeneratedProblem> generate_problems(const GeneratorConfig& cfg, std::size_t count, std::uint64_t seed,
                                                const std::string& prefix = "gen");

}  // namespace ctg
