#pragma once

// Independent recount of predictive accuracy straight from the corpus and
// prediction files, using only string handling.

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ctg/evalkit/evalkit.hpp"

namespace ctg::testing {

inline std::vector<std::string> raw_lines(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

/// Key for the reference map: kind and steps from the meta line, then the
/// raw source line.
inline std::string raw_key(const std::string& meta, const std::string& src) {
  std::istringstream in(meta);
  std::string problem, proof, node, length, kind, steps;
  in >> problem >> proof >> node >> length >> kind >> steps;
  return kind + "|" + steps + "|" + src;
}

/// (successes, total) for the first k predictions of each test line.
inline std::pair<std::uint64_t, std::uint64_t> recount(const std::vector<std::filesystem::path>& reference_stems,
                                                       const std::filesystem::path& test_stem,
                                                       const std::filesystem::path& predictions, std::size_t k) {
  std::map<std::string, std::set<std::string>> refs;
  for (const auto& stem : reference_stems) {
    auto src = raw_lines(stem.string() + ".src"), tgt = raw_lines(stem.string() + ".tgt"),
         meta = raw_lines(stem.string() + ".meta");
    for (std::size_t i = 0; i < src.size(); ++i) refs[raw_key(meta[i], src[i])].insert(tgt[i]);
  }
  auto src = raw_lines(test_stem.string() + ".src"), meta = raw_lines(test_stem.string() + ".meta");
  std::map<std::size_t, std::vector<std::pair<std::size_t, std::string>>> preds;
  for (const auto& line : raw_lines(predictions)) {
    std::istringstream in(line);
    std::string index, rank, score;
    std::getline(in, index, '\t');
    std::getline(in, rank, '\t');
    std::getline(in, score, '\t');
    std::string tokens;
    std::getline(in, tokens);
    preds[std::stoul(index)].emplace_back(std::stoul(rank), tokens);
  }
  std::uint64_t ok = 0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto& ref = refs[raw_key(meta[i], src[i])];
    bool hit = false;
    for (const auto& [rank, tokens] : preds[i]) hit = hit || (rank < k && ref.count(tokens));
    ok += hit;
  }
  return {ok, src.size()};
}

/// A random corpus over a tiny alphabet, so sources repeat and reference
/// sets grow beyond one element, plus random predictions.
struct RandomEvalCase {
  std::vector<PathExample> all, test;
  std::vector<Prediction> preds;
};

inline RandomEvalCase random_eval_case(std::mt19937_64& rng) {
  RandomEvalCase c;
  const char* sym[] = {"p", "q", "(", ")", "#", "a"};
  const char* cls[] = {"c1", "c2", "c3", "c4"};
  const std::size_t n = 5 + rng() % 40;
  for (std::size_t i = 0; i < n; ++i) {
    PathExample e;
    e.kind = rng() % 2 ? ExampleKind::Literals : ExampleKind::Clauses;
    e.steps = 1 + rng() % 2;
    const std::size_t len = 1 + rng() % 3;
    for (std::size_t j = 0; j < len; ++j) e.source.push_back(sym[rng() % 6]);
    for (std::size_t j = 0; j < e.steps; ++j) e.target.push_back(cls[rng() % 4]);
    e.problem = "prob" + std::to_string(rng() % 5);
    e.proof = rng() % 2;
    e.node = {0, static_cast<std::size_t>(rng() % 3)};
    e.input_length = len;
    c.all.push_back(e);
    if (rng() % 2) c.test.push_back(e);
  }
  if (c.test.empty()) c.test.push_back(c.all[0]);
  for (std::size_t i = 0; i < c.test.size(); ++i) {
    Prediction p{i, {}, {}};
    const std::size_t width = 1 + rng() % 10;
    for (std::size_t r = 0; r < width; ++r) {
      Tokens t;
      for (std::size_t j = 0; j < c.test[i].steps; ++j) t.push_back(cls[rng() % 4]);
      p.decoded.push_back(t);
      p.scores.push_back(-static_cast<double>(r) - 0.5);
    }
    c.preds.push_back(std::move(p));
  }
  return c;
}

}  // namespace ctg::testing
