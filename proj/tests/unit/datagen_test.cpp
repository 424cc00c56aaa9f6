#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "ctg/datagen/examples.hpp"
#include "ctg/datagen/vocab.hpp"
#include "ctg/tableau/prover.hpp"
#include "test_util.hpp"

namespace ctg {
namespace {

namespace fs = std::filesystem;

CheckedProof fig1_proof(const Matrix& m) {
  auto r = prove(m, SearchLimits{}, ClauseOrdering::input_order(), {}, "fig1");
  return certify(m, *r.proof);
}

std::vector<std::pair<std::string, std::string>> pairs(const std::vector<PathExample>& ex) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : ex) out.emplace_back(join_tokens(e.source), join_tokens(e.target));
  return out;
}

/// Proofs of random first-order problems, for property tests.
std::vector<std::pair<Matrix, CheckedProof>> random_proofs(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Matrix, CheckedProof>> out;
  for (int t = 0; t < trials; ++t) {
    Matrix m = parse_tptp_cnf(testing::random_cnf_text(rng, 6));
    SearchLimits limits{6};
    limits.node_budget = 20000;
    auto r = prove(m, limits, ClauseOrdering::random(t), {}, "rnd" + std::to_string(t));
    if (!r.proof) continue;
    CheckedProof cp = certify(m, *r.proof);
    out.emplace_back(std::move(m), std::move(cp));
  }
  return out;
}

TEST(Tokenize, Examples) {
  Matrix m = parse_tptp_cnf("cnf(a,axiom,~r(a,b)).\ncnf(b,axiom,m1_subset_1(esk1_0,esk2_1(X))).\ncnf(c,axiom,a != b).");
  EXPECT_EQ(join_tokens(tokenize_literal(m.clauses()[0].literals[0], m.symbols())), "~ r ( a , b )");
  EXPECT_EQ(join_tokens(tokenize_literal(m.clauses()[2].literals[0], m.symbols())), "~ a = b");
  const Literal sk = normalize(m.clauses()[1].literals[0], m.symbols(), prefix_detector({"esk"}));
  EXPECT_EQ(join_tokens(tokenize_literal(sk, m.symbols())), "m1_subset_1 ( SKLM , SKLM )");
  SymbolTable copy = m.symbols();
  for (const Literal& l : {m.clauses()[0].literals[0], sk, m.clauses()[2].literals[0]}) {
    auto back = detokenize_literal(tokenize_literal(l, m.symbols()), copy);
    ASSERT_TRUE(back);
    EXPECT_EQ(*back, l);
  }
}

TEST(Tokenize, MalformedStreams) {
  SymbolTable s;
  for (const char* text : {"k2_tarski ( SKLM , SKLM ) = k2_tarski ( SKLM", "", "p (", "p ( )", "( p )", "p ) (",
                           "~", "p = = q", "p ( a ) q", "p ( a # b )", "<unk>", "p ( a , )"}) {
    EXPECT_FALSE(detokenize_literal(split_tokens(text), s)) << text;
  }
  EXPECT_TRUE(detokenize_literal(split_tokens("k2_tarski ( SKLM , SKLM ) = k2_tarski ( SKLM , SKLM )"), s));
  // Arity clash with an earlier use.
  EXPECT_TRUE(detokenize_literal(split_tokens("q ( a )"), s));
  EXPECT_FALSE(detokenize_literal(split_tokens("q ( a , a )"), s));
}

TEST(Extract, FigureOneLiteralPaths) {
  Matrix m = parse_tptp_cnf(testing::kFig1Bundled);
  CheckedProof p = fig1_proof(m);
  auto ex = extract_clause_choice_examples(p, ExampleKind::Literals, 1);
  using P = std::pair<std::string, std::string>;
  EXPECT_EQ(pairs(ex), (std::vector<P>{
                           {"p ( a ) # r ( a , b )", "c6"},
                           {"p ( a ) # r ( a , b ) # q ( b )", "c5"},
                           {"p ( a ) # q ( b )", "c3"},
                           {"p ( a ) # q ( b ) # s ( b )", "c4"},
                       }));
  EXPECT_EQ(ex[0].node, (NodePath{0, 0}));
  EXPECT_EQ(ex[0].input_length, 2u);
  EXPECT_EQ(ex[3].input_length, 3u);
  EXPECT_EQ(ex[3].problem, "fig1");
}

TEST(Extract, FigureOneClausePaths) {
  Matrix m = parse_tptp_cnf(testing::kFig1Bundled);
  CheckedProof p = fig1_proof(m);
  auto ex = extract_clause_choice_examples(p, ExampleKind::Clauses, 1);
  using P = std::pair<std::string, std::string>;
  EXPECT_EQ(pairs(ex), (std::vector<P>{
                           {"c1 c2", "c6"},
                           {"c1 c2 c6", "c5"},
                           {"c1 c2", "c3"},
                           {"c1 c2 c3", "c4"},
                       }));
}

TEST(Extract, FigureOneMultiStep) {
  Matrix m = parse_tptp_cnf(testing::kFig1Bundled);
  CheckedProof p = fig1_proof(m);
  auto two = extract_clause_choice_examples(p, ExampleKind::Literals, 2);
  using P = std::pair<std::string, std::string>;
  EXPECT_EQ(pairs(two), (std::vector<P>{{"p ( a ) # r ( a , b )", "c6 c5"}, {"p ( a ) # q ( b )", "c3 c4"}}));
  EXPECT_TRUE(extract_clause_choice_examples(p, ExampleKind::Clauses, 3).empty());
}

TEST(Extract, FigureOneConjecturing) {
  Matrix m = parse_tptp_cnf(testing::kFig1Bundled);
  CheckedProof p = fig1_proof(m);
  auto ex = extract_conjecturing_examples(p);
  ASSERT_EQ(ex.size(), 6u);
  EXPECT_EQ(join_tokens(ex[0].source), "p ( a )");
  EXPECT_EQ(join_tokens(ex[0].target), "r ( a , b )");
  EXPECT_EQ(ex[0].input_length, 1u);
  EXPECT_EQ(join_tokens(ex[2].target), "~ r ( a , b )");
}

TEST(Extract, SingleNodeProofHasNoConjecturingExamples) {
  // The only tableau is the start clause q alone, closed by one extension
  // whose clause ~q contributes no further nodes.
  Matrix m = parse_tptp_cnf("cnf(a,axiom,q).\ncnf(b,axiom,~q).");
  auto r = prove(m, SearchLimits{});
  CheckedProof p = certify(m, *r.proof);
  EXPECT_TRUE(extract_conjecturing_examples(p).empty());
  EXPECT_TRUE(extract_clause_choice_examples(p, ExampleKind::Literals, 1).empty());
}

TEST(Extract, RejectsBadArguments) {
  Matrix m = parse_tptp_cnf(testing::kFig1Bundled);
  CheckedProof p = fig1_proof(m);
  EXPECT_THROW(extract_clause_choice_examples(p, ExampleKind::Conjecture, 1), std::invalid_argument);
  EXPECT_THROW(extract_clause_choice_examples(p, ExampleKind::Literals, 0), std::invalid_argument);
}

TEST(ExtractProperty, CountsAndAlignment) {
  int checked = 0;
  for (const auto& [m, p] : random_proofs(31, 1500)) {
    std::size_t non_root = 0;
    for (const auto& e : record_expansions(p)) non_root += e.node.size() > 1;
    auto lits = extract_clause_choice_examples(p, ExampleKind::Literals, 1);
    auto cls = extract_clause_choice_examples(p, ExampleKind::Clauses, 1);
    ASSERT_EQ(lits.size(), non_root);
    ASSERT_EQ(cls.size(), non_root);
    for (std::size_t i = 0; i < lits.size(); ++i) {
      EXPECT_EQ(lits[i].node, cls[i].node);
      EXPECT_EQ(lits[i].target, cls[i].target);
      // One clause per literal above n plus the start clause, minus n's own.
      EXPECT_EQ(cls[i].input_length, lits[i].input_length);
    }
    for (std::size_t steps : {2u, 3u}) {
      for (const auto& e : extract_clause_choice_examples(p, ExampleKind::Literals, steps)) {
        EXPECT_EQ(e.target.size(), steps);
      }
    }
    SymbolTable symbols = p.symbols();
    for (const auto& e : extract_conjecturing_examples(p)) {
      auto lit = detokenize_literal(e.target, symbols);
      ASSERT_TRUE(lit) << join_tokens(e.target);
      EXPECT_EQ(tokenize_literal(*lit, symbols), e.target);
    }
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(Split, Sizes) {
  auto ids = [](std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back("p" + std::to_string(i));
    return v;
  };
  auto s = split_by_proofs(ids(10), 1);
  EXPECT_EQ(s.train.size(), 6u);
  EXPECT_EQ(s.valid.size(), 1u);
  EXPECT_EQ(s.test.size(), 3u);
  auto big = split_by_proofs(ids(13822), 1);
  EXPECT_EQ(big.train.size(), 8293u);
  EXPECT_EQ(big.valid.size(), 1382u);
  EXPECT_EQ(big.test.size(), 4147u);
}

TEST(Split, DeterministicDisjointCovering) {
  std::vector<std::string> v;
  for (int i = 0; i < 57; ++i) v.push_back("q" + std::to_string(i));
  auto a = split_by_proofs(v, 9);
  std::reverse(v.begin(), v.end());
  auto b = split_by_proofs(v, 9);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  std::set<std::string> all;
  for (const auto* part : {&a.train, &a.valid, &a.test}) all.insert(part->begin(), part->end());
  EXPECT_EQ(all.size(), v.size());
  EXPECT_NE(split_by_proofs(v, 10).train, a.train);
  EXPECT_THROW(split_by_proofs({"x", "x"}, 1), std::invalid_argument);
}

class TempDir : public ::testing::Test {
 protected:
  fs::path dir = fs::temp_directory_path() / ("ctg_datagen_" + std::to_string(::getpid()));
  void SetUp() override { fs::create_directories(dir); }
  void TearDown() override { fs::remove_all(dir); }
};

TEST_F(TempDir, CorpusRoundTrip) {
  Matrix m = parse_tptp_cnf(testing::kFig1Bundled);
  CheckedProof p = fig1_proof(m);
  auto ex = extract_clause_choice_examples(p, ExampleKind::Literals, 1);
  auto conj = extract_conjecturing_examples(p);
  ex.insert(ex.end(), conj.begin(), conj.end());
  write_corpus(ex, dir / "all");
  EXPECT_EQ(read_corpus(dir / "all"), ex);

  write_corpus({}, dir / "empty");
  EXPECT_EQ(fs::file_size(dir / "empty.src"), 0u);
  EXPECT_TRUE(read_corpus(dir / "empty").empty());
}

TEST_F(TempDir, MisalignedCorpusIsError) {
  Matrix m = parse_tptp_cnf(testing::kFig1Bundled);
  write_corpus(extract_clause_choice_examples(fig1_proof(m), ExampleKind::Literals, 1), dir / "c");
  std::ofstream(dir / "c.tgt", std::ios::app) << "c9\n";
  EXPECT_THROW(read_corpus(dir / "c"), CorpusFormatError);
  std::ofstream(dir / "d.src") << "a\n";
  std::ofstream(dir / "d.tgt") << "b\n";
  std::ofstream(dir / "d.meta") << "fig1 0 zero\n";
  EXPECT_THROW(read_corpus(dir / "d"), CorpusFormatError);
}

TEST_F(TempDir, VocabularyReservedFirstAndRoundTrip) {
  Vocabulary v = Vocabulary::build({{"p", "(", "VAR", ")"}, {"c1", "p"}});
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{"<pad>", "<unk>", "<s>", "</s>", "VAR", "SKLM", "#", "p", "(", ")",
                                                  "c1"}));
  EXPECT_EQ(v.id("nonexistent"), Vocabulary::kUnk);
  EXPECT_EQ(v.decode(v.encode({"p", "c1"})), (Tokens{"p", "c1"}));
  v.save(dir / "v.txt");
  Vocabulary back = Vocabulary::load(dir / "v.txt");
  EXPECT_EQ(back, v);
  EXPECT_EQ(back.hash(), v.hash());
  EXPECT_NE(Vocabulary::build({{"q"}}).hash(), v.hash());
}

}  // namespace
}  // namespace ctg
