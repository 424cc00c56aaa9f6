#include "ctg/gen/generator.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>

#include "ctg/fol/tptp.hpp"
#include "ctg/gen/herbrand.hpp"

namespace ctg {

void GeneratorConfig::validate() const {
  if (predicates < 2 || functions == 0 || constants == 0 || rules_per_predicate == 0 || max_term_depth == 0) {
    throw std::invalid_argument("generator sizes must be positive (at least two predicates)");
  }
  if (rules_per_predicate > functions) throw std::invalid_argument("more rules per predicate than functions");
  if (decoy_rate < 0.0 || decoy_rate > 1.0) throw std::invalid_argument("decoy rate must lie in [0, 1]");
}

namespace {

std::size_t below(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }
bool chance(std::mt19937_64& rng, double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; }

std::string pred(std::size_t i) { return "p" + std::to_string(i + 1); }
std::string func(std::size_t i) { return "f" + std::to_string(i + 1); }
std::string cnst(std::size_t i) { return "c" + std::to_string(i + 1); }

}  // namespace

ProblemGenerator::ProblemGenerator(GeneratorConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  std::mt19937_64 rng(cfg_.theory_seed);
  for (std::size_t f = 0; f < cfg_.functions; ++f) arity_.push_back(f % 2 == 0 ? 1 : 2);

  // Predicate "dead" never occurs negatively, so decoy bodies cannot close.
  std::vector<std::pair<std::string, std::string>> clauses;
  std::vector<Rule> rules;
  for (std::size_t p = 0; p < cfg_.predicates; ++p) {
    std::vector<std::size_t> fs(cfg_.functions);
    std::iota(fs.begin(), fs.end(), 0);
    std::shuffle(fs.begin(), fs.end(), rng);
    for (std::size_t r = 0; r < cfg_.rules_per_predicate; ++r) {
      Rule rule{"", p, fs[r], {}, false};
      for (std::size_t a = 0; a < arity_[fs[r]]; ++a) rule.body.push_back(below(rng, cfg_.predicates));
      rules.push_back(rule);
      if (chance(rng, cfg_.decoy_rate)) {
        Rule decoy = rule;
        decoy.decoy = true;
        decoy.body.back() = cfg_.predicates;
        rules.push_back(decoy);
      }
    }
    facts_.push_back(Fact{"", p, below(rng, cfg_.constants)});
  }
  std::shuffle(rules.begin(), rules.end(), rng);

  auto var = [](std::size_t i) { return std::string(1, static_cast<char>('X' + i)); };
  std::size_t k = 0;
  for (auto& r : rules) {
    r.name = "ax_" + std::to_string(++k);
    std::string head = "~" + pred(r.head) + "(" + func(r.function) + "(";
    std::string body;
    for (std::size_t a = 0; a < r.body.size(); ++a) {
      head += (a ? "," : "") + var(a);
      body += " | " + (r.body[a] == cfg_.predicates ? std::string("dead") : pred(r.body[a])) + "(" + var(a) + ")";
    }
    clauses.emplace_back(r.name, head + "))" + body);
  }
  for (auto& f : facts_) {
    f.name = "ax_" + std::to_string(++k);
    clauses.emplace_back(f.name, "~" + pred(f.predicate) + "(" + cnst(f.constant) + ")");
  }
  rules_ = std::move(rules);
  for (const auto& [name, body] : clauses) theory_text_ += "cnf(" + name + ",axiom," + body + ").\n";
}

GeneratedProblem ProblemGenerator::generate(std::uint64_t seed, const std::string& name) const {
  std::mt19937_64 rng(seed);

  // Hypotheses: ~p(esk1_0) or ~p(esk<j>_1(X)).
  struct Hyp {
    std::size_t predicate;
    std::string skolem;
    bool unary;
  };
  std::vector<Hyp> hyps;
  for (std::size_t h = 0; h < cfg_.hypotheses; ++h) {
    const bool unary = chance(rng, 0.5);
    hyps.push_back({below(rng, cfg_.predicates), unary ? "esk" + std::to_string(h + 2) + "_1" : "esk1_0", unary});
  }

  std::function<std::string(std::size_t, std::size_t)> derive = [&](std::size_t p, std::size_t depth) {
    std::vector<const Rule*> live;
    for (const auto& r : rules_) {
      if (r.head == p && !r.decoy) live.push_back(&r);
    }
    if (depth > 0 && !live.empty() && chance(rng, 0.85)) {
      const Rule& r = *live[below(rng, live.size())];
      std::string t = func(r.function) + "(";
      for (std::size_t a = 0; a < r.body.size(); ++a) t += (a ? "," : "") + derive(r.body[a], depth - 1);
      return t + ")";
    }
    std::vector<const Hyp*> own;
    for (const auto& h : hyps) {
      if (h.predicate == p) own.push_back(&h);
    }
    if (!own.empty() && chance(rng, 0.5)) {
      const Hyp& h = *own[below(rng, own.size())];
      return h.unary ? h.skolem + "(" + cnst(below(rng, cfg_.constants)) + ")" : h.skolem;
    }
    return cnst(facts_[p].constant);
  };

  const std::size_t goals = 1 + below(rng, 2);
  std::string goal;
  for (std::size_t g = 0; g < goals; ++g) {
    const std::size_t p = below(rng, cfg_.predicates);
    goal += (g ? " | " : "") + pred(p) + "(" + derive(p, cfg_.max_term_depth < 2 ? 1 : 2 + below(rng, cfg_.max_term_depth - 1)) + ")";
  }

  GeneratedProblem out{name, "% generated problem " + name + "\n" + theory_text_};
  for (std::size_t h = 0; h < hyps.size(); ++h) {
    const auto& hy = hyps[h];
    out.text += "cnf(hyp_" + std::to_string(h + 1) + ",hypothesis,~" + pred(hy.predicate) + "(" + hy.skolem +
                (hy.unary ? "(X)" : "") + ")).\n";
  }
  out.text += "cnf(goal,negated_conjecture," + goal + ").\n";
  return out;
}

std::vector<GeneratedProblem> generate_problems(const GeneratorConfig& cfg, std::size_t count, std::uint64_t seed,
                                                const std::string& prefix) {
  ProblemGenerator gen(cfg);
  std::mt19937_64 seeds(seed);
  std::vector<GeneratedProblem> out;
  for (std::size_t i = 1; i <= count; ++i) {
    auto p = gen.generate(seeds(), prefix + std::to_string(i));
    const auto check = ground_check(parse_tptp_cnf(p.text));
    if (check.verdict != GroundVerdict::Unsatisfiable) {
      throw std::logic_error("generated problem " + p.name + " is not refuted on its ground universe: " +
                             to_string(check.verdict));
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace ctg
