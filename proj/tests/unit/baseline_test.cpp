#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "ctg/baseline/baseline.hpp"
#include "ctg/datagen/examples.hpp"
#include "ctg/tableau/prover.hpp"
#include "test_util.hpp"

namespace ctg {
namespace {

namespace fs = std::filesystem;

Literal lit(const std::string& text, SymbolTable& s) {
  auto l = detokenize_literal(split_tokens(text), s);
  EXPECT_TRUE(l) << text;
  return *l;
}

using Walks = std::map<std::string, double>;

TEST(Features, Walks) {
  SymbolTable s;
  EXPECT_EQ(literal_walks(lit("q ( b )", s), s), (Walks{{"q", 1}, {"q>b", 1}}));
  EXPECT_EQ(literal_walks(lit("~ r ( a , b )", s), s), (Walks{{"~r", 1}, {"~r>a", 1}, {"~r>b", 1}}));
  EXPECT_EQ(literal_walks(lit("p ( VAR , SKLM )", s), s), (Walks{{"p", 1}, {"p>VAR", 1}, {"p>SKLM", 1}}));
  EXPECT_EQ(literal_walks(lit("m1_subset_1 ( SKLM , k1_zfmisc_1 ( SKLM ) )", s), s),
            (Walks{{"m1_subset_1", 1},
                   {"m1_subset_1>SKLM", 1},
                   {"m1_subset_1>k1_zfmisc_1", 1},
                   {"k1_zfmisc_1", 1},
                   {"k1_zfmisc_1>SKLM", 1}}));
  EXPECT_EQ(literal_walks(lit("t ( a , a )", s), s), (Walks{{"t", 1}, {"t>a", 2}}));
  EXPECT_EQ(literal_walks(lit("~ z", s), s), (Walks{{"~z", 1}}));
}

TEST(Features, HashingDeterministicAndSeeded) {
  FeatureHasher a{0, 20}, b{0, 20}, c{1, 20};
  EXPECT_EQ(a("q>b"), b("q>b"));
  EXPECT_LT(a("q>b"), 1u << 20);
  EXPECT_NE(a("q>b"), c("q>b"));
}

TEST(Features, PathWeighting) {
  SymbolTable s;
  const Literal l0 = lit("q ( b )", s), l1 = lit("~ r ( a , b )", s);
  EXPECT_EQ(featurize_path({l0}, s, 0.3), featurize_literal(l0, s));
  EXPECT_EQ(featurize_path({l0, l0}, s, 1.0), featurize_literal(l0, s));
  // l0 is nearest (last). Weights 1 and 0.5 normalize to 2/3 and 1/3.
  const FeatureVector mixed = featurize_path({l1, l0}, s, 0.5);
  const FeatureHasher h;
  EXPECT_NEAR(mixed.at(h("q")), 2.0 / 3, 1e-15);
  EXPECT_NEAR(mixed.at(h("q>b")), 2.0 / 3, 1e-15);
  EXPECT_NEAR(mixed.at(h("~r")), 1.0 / 3, 1e-15);
  EXPECT_NEAR(mixed.at(h("~r>a")), 1.0 / 3, 1e-15);
  // gamma = 1 is the unweighted mean.
  const FeatureVector mean = featurize_path({l1, l0, lit("q ( a )", s)}, s, 1.0);
  EXPECT_NEAR(mean.at(h("q")), 2.0 / 3, 1e-15);
  EXPECT_NEAR(mean.at(h("q>a")), 1.0 / 3, 1e-15);
  EXPECT_THROW(featurize_path({}, s, 0.8), std::invalid_argument);
  EXPECT_THROW(featurize_path({l0}, s, 0.0), std::invalid_argument);
}

TEST(Features, ParseLiteralPath) {
  SymbolTable s;
  auto path = parse_literal_path(split_tokens("p ( a ) # ~ r ( a , b )"), s);
  ASSERT_EQ(path.size(), 2u);
  EXPECT_FALSE(path[1].positive);
  EXPECT_THROW(parse_literal_path(split_tokens("p ( a ) # ( )"), s), std::invalid_argument);
}

/// Two clusters of sparse points; label "a" iff feature 0 outweighs 1.
std::vector<LabeledExample> separable(double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<LabeledExample> out;
  for (int i = 0; i < 60; ++i) {
    const bool a = i % 2 == 0;
    const double big = 1.0 + u(rng), small = u(rng) * 0.5;
    FeatureVector fv{{0, scale * (a ? big : small)}, {1, scale * (a ? small : big)}, {7 + static_cast<std::uint32_t>(i % 3), scale}};
    out.push_back({fv, a ? "a" : "b"});
  }
  return out;
}

TEST(Multilabel, SeparableToySet) {
  auto data = separable(1.0, 3);
  auto m = train_multilabel(data, {});
  EXPECT_EQ(m.training_accuracy(), 1.0);
  // Exhaustive check of the decision rule on every training point.
  for (const auto& e : data) EXPECT_EQ(m.predict_topk(e.features, 1)[0], e.label);
  EXPECT_EQ(m.predict_topk(data[0].features, 2).size(), 2u);
}

TEST(Multilabel, ScaleInvarianceOfRankings) {
  auto base = separable(1.0, 5), scaled = separable(3.0, 5);
  auto m1 = train_multilabel(base, {});
  auto m2 = train_multilabel(scaled, {});
  for (std::size_t i = 0; i < base.size(); ++i) {
    EXPECT_EQ(m1.predict_topk(base[i].features, 2), m2.predict_topk(scaled[i].features, 2));
  }
}

TEST(Multilabel, BiasOnlyAndTies) {
  std::vector<LabeledExample> data{{{{1, 1.0}}, "c2"}, {{{2, 1.0}}, "c1"}, {{{2, 1.0}}, "c1"}, {{{3, 1.0}}, "c3"}};
  auto m = train_multilabel(data, {});
  const auto all = m.predict_topk({}, 10);
  ASSERT_EQ(all.size(), 3u);
  // c1 is the most frequent label, so its bias is largest.
  EXPECT_EQ(all[0], "c1");
  const Eigen::VectorXd b = m.scores({});
  const Eigen::VectorXd unseen = m.scores({{999, 5.0}});
  EXPECT_EQ(b, unseen);

  std::vector<LabeledExample> tied{{{{1, 1.0}}, "z"}, {{{1, 1.0}}, "y"}};
  auto t = train_multilabel(tied, {});
  EXPECT_EQ(t.predict_topk({}, 2), (std::vector<std::string>{"y", "z"}));
}

TEST(Multilabel, DeterministicAndRoundTrip) {
  auto data = separable(1.0, 9);
  MultilabelParams hp;
  hp.seed = 4;
  auto a = train_multilabel(data, hp), b = train_multilabel(data, hp);
  EXPECT_EQ(a, b);
  const fs::path p = fs::temp_directory_path() / ("ctg_baseline_" + std::to_string(::getpid()));
  a.save(p);
  auto back = MultilabelModel::load(p);
  fs::remove(p);
  EXPECT_EQ(back, a);
  EXPECT_THROW(train_multilabel({{{}, "only"}, {{}, "only"}}, hp), SingleLabelCorpus);
}

TEST(Multilabel, BeatsUniformOnFigureOneCorpus) {
  Matrix m = parse_tptp_cnf(testing::kFig1Bundled);
  auto r = prove(m, SearchLimits{});
  CheckedProof p = certify(m, *r.proof);
  std::vector<LabeledExample> data;
  SymbolTable symbols;
  for (const auto& e : extract_clause_choice_examples(p, ExampleKind::Literals, 1)) {
    data.push_back({featurize_path(parse_literal_path(e.source, symbols), symbols, 0.8), e.target[0]});
  }
  auto model = train_multilabel(data, {});
  std::size_t correct = 0;
  for (const auto& e : data) correct += model.predict_topk(e.features, 1)[0] == e.label;
  EXPECT_GT(static_cast<double>(correct) / static_cast<double>(data.size()), 1.0 / static_cast<double>(model.labels().size()));
}

}  // namespace
}  // namespace ctg
