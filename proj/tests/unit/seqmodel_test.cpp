#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>

#include "ctg/seqmodel/checkpoint.hpp"
#include "ctg/seqmodel/decode.hpp"
#include "ctg/seqmodel/train.hpp"

namespace ctg {
namespace {

namespace fs = std::filesystem;

Vocabulary vocab_of(std::size_t extra, const std::string& prefix) {
  Tokens t;
  for (std::size_t i = 0; i < extra; ++i) t.push_back(prefix + std::to_string(i));
  return Vocabulary::build({t});
}

ModelConfig tiny(std::size_t embed, std::size_t hidden, std::size_t layers, bool attention, std::uint64_t seed) {
  ModelConfig c;
  c.embed = embed;
  c.hidden = hidden;
  c.layers = layers;
  c.attention = attention;
  c.seed = seed;
  return c;
}

std::int32_t first_free(const Vocabulary&) { return static_cast<std::int32_t>(Vocabulary::reserved().size()); }

std::vector<SeqPair> random_batch(std::mt19937_64& rng, const SeqModel& m, std::size_t n, std::size_t max_len) {
  const auto lo = first_free(m.src_vocab);
  std::vector<SeqPair> out;
  for (std::size_t i = 0; i < n; ++i) {
    SeqPair p;
    const std::size_t s = 1 + rng() % max_len, t = 1 + rng() % max_len;
    for (std::size_t j = 0; j < s; ++j) p.src.push_back(lo + static_cast<std::int32_t>(rng() % (m.config.src_vocab - lo)));
    for (std::size_t j = 0; j < t; ++j) p.tgt.push_back(lo + static_cast<std::int32_t>(rng() % (m.config.tgt_vocab - lo)));
    out.push_back(std::move(p));
  }
  return out;
}

TEST(Init, DeterministicPerSeed) {
  auto a = init_model(tiny(4, 5, 2, true, 3), vocab_of(3, "s"), vocab_of(2, "t"));
  auto b = init_model(tiny(4, 5, 2, true, 3), vocab_of(3, "s"), vocab_of(2, "t"));
  auto c = init_model(tiny(4, 5, 2, true, 4), vocab_of(3, "s"), vocab_of(2, "t"));
  EXPECT_EQ(a.params.src_embedding, b.params.src_embedding);
  EXPECT_EQ(a.params.output_w, b.params.output_w);
  EXPECT_NE(a.params.output_w, c.params.output_w);
  const double s = 1 / std::sqrt(5.0);
  a.params.visit([s](const std::string&, const Mat& t) { EXPECT_LT(t.cwiseAbs().maxCoeff(), s); });
}

TEST(Init, RejectsZeroDimension) {
  EXPECT_THROW(init_model(tiny(4, 0, 1, true, 1), vocab_of(1, "s"), vocab_of(1, "t")), std::invalid_argument);
  EXPECT_THROW(init_model(tiny(4, 3, 0, true, 1), vocab_of(1, "s"), vocab_of(1, "t")), std::invalid_argument);
}

TEST(Init, ParameterCountByHand) {
  // V_s = 7 + 3 = 10, V_t = 7 + 2 = 9, E = 4, H = 5, two layers.
  // embeddings 4*10 + 4*9 = 76
  // layer 0 (input 4): 15*4 + 15*5 + 15 + 15 = 165, twice (enc, dec) = 330
  // layer 1 (input 5): 15*5 + 15*5 + 30 = 180, twice = 360
  // attention 5*5 + 5*10 + 5 = 80; output 9*5 + 9 = 54
  auto a = init_model(tiny(4, 5, 2, true, 1), vocab_of(3, "s"), vocab_of(2, "t"));
  EXPECT_EQ(a.params.parameter_count(), 76u + 330 + 360 + 80 + 54);
  auto b = init_model(tiny(4, 5, 2, false, 1), vocab_of(3, "s"), vocab_of(2, "t"));
  EXPECT_EQ(b.params.parameter_count(), 76u + 330 + 360 + 54);
}

TEST(Forward, UntrainedLossNearUniform) {
  // Small weights give near-uniform outputs.
  auto m = init_model(tiny(8, 32, 1, true, 2), vocab_of(20, "s"), vocab_of(40, "t"));
  m.params.visit([](const std::string&, Mat& t) { t *= 0.1; });
  std::mt19937_64 rng(1);
  auto batch = random_batch(rng, m, 16, 5);
  const double loss = forward_loss(m, batch).loss;
  const double uniform = std::log(static_cast<double>(m.config.tgt_vocab));
  EXPECT_NEAR(loss, uniform, 0.1 * uniform);
}

TEST(Forward, Errors) {
  auto m = init_model(tiny(3, 3, 1, true, 2), vocab_of(2, "s"), vocab_of(2, "t"));
  EXPECT_THROW(forward_loss(m, std::vector<SeqPair>{}), std::invalid_argument);
  EXPECT_THROW(forward_loss(m, std::vector<SeqPair>{{{}, {7}}}), std::invalid_argument);
  EXPECT_THROW(forward_loss(m, std::vector<SeqPair>{{{99}, {7}}}), std::invalid_argument);
  EXPECT_THROW(forward_loss(m, std::vector<SeqPair>{{{7}, {-1}}}), std::invalid_argument);
}

TEST(Backward, MatchesFiniteDifferences) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 4; ++trial) {
    const bool attention = trial % 2 == 0;
    auto m = init_model(tiny(3 + trial % 3, 4 + trial % 4, 1 + trial / 2, attention, 100 + trial), vocab_of(4, "s"),
                        vocab_of(3, "t"));
    auto batch = random_batch(rng, m, 3, 5);
    auto r = gradient_check(m, batch);
    EXPECT_LT(r.max_relative_error, 1e-4) << "worst tensor " << r.worst_tensor;
    std::size_t tensors = 0;
    m.params.visit([&tensors](const std::string&, const Mat&) { ++tensors; });
    EXPECT_EQ(r.per_tensor.size(), tensors);
  }
}

TEST(Backward, EmptyTargetContributesNothing) {
  auto m = init_model(tiny(3, 4, 1, true, 5), vocab_of(3, "s"), vocab_of(3, "t"));
  std::vector<SeqPair> only_empty{{{7, 8}, {}}};
  auto f = forward_loss(m, only_empty);
  EXPECT_EQ(f.tokens, 0u);
  EXPECT_EQ(global_norm(backward(m, f)), 0.0);

  std::vector<SeqPair> one{{{7, 9}, {8, 7}}};
  std::vector<SeqPair> with_empty{{{7, 9}, {8, 7}}, {{8, 8, 9}, {}}};
  auto g1 = backward(m, forward_loss(m, one));
  auto g2 = backward(m, forward_loss(m, with_empty));
  std::vector<Mat> a, b;
  g1.visit([&a](const std::string&, const Mat& t) { a.push_back(t); });
  g2.visit([&b](const std::string&, const Mat& t) { b.push_back(t); });
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LT((a[i] - b[i]).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Backward, RepeatableOnOneCache) {
  auto m = init_model(tiny(3, 4, 1, true, 5), vocab_of(3, "s"), vocab_of(3, "t"));
  std::mt19937_64 rng(2);
  auto f = forward_loss(m, random_batch(rng, m, 4, 4));
  auto g1 = backward(m, f), g2 = backward(m, f);
  EXPECT_EQ(g1.output_w, g2.output_w);
  EXPECT_EQ(g1.encoder[0].w_hidden, g2.encoder[0].w_hidden);
}

TEST(Train, SgdDecreasesLossOnFixedBatch) {
  auto m = init_model(tiny(4, 6, 1, true, 8), vocab_of(4, "s"), vocab_of(4, "t"));
  std::mt19937_64 rng(3);
  auto batch = random_batch(rng, m, 6, 4);
  TrainConfig tc;
  tc.optimizer = TrainConfig::Optimizer::Sgd;
  tc.learning_rate = 1e-3;
  Optimizer opt(tc, m.params);
  double prev = forward_loss(m, batch).loss;
  for (int step = 0; step < 5; ++step) {
    auto f = forward_loss(m, batch);
    opt.step(m.params, backward(m, f));
    const double now = forward_loss(m, batch).loss;
    EXPECT_LT(now, prev);
    prev = now;
  }
}

TEST(Train, ZeroLearningRateKeepsLossConstant) {
  auto m = init_model(tiny(4, 6, 1, true, 8), vocab_of(4, "s"), vocab_of(4, "t"));
  std::mt19937_64 rng(3);
  auto corpus = random_batch(rng, m, 20, 4);
  TrainConfig tc;
  tc.learning_rate = 0;
  tc.batch_size = 7;
  tc.epochs = 4;
  auto r = train(m, corpus, tc);
  ASSERT_EQ(r.epoch_loss.size(), 4u);
  for (double l : r.epoch_loss) EXPECT_NEAR(l, r.epoch_loss[0], 1e-12);
}

TEST(Train, DeterministicAndOverfitsOnePair) {
  auto make = [] { return init_model(tiny(6, 12, 1, true, 9), vocab_of(4, "s"), vocab_of(4, "t")); };
  std::vector<SeqPair> corpus{{{7, 8, 9}, {10, 8}}};
  TrainConfig tc;
  tc.learning_rate = 0.05;
  tc.epochs = 150;
  auto a = make(), b = make();
  train(a, corpus, tc);
  train(b, corpus, tc);
  EXPECT_EQ(a.params.output_w, b.params.output_w);
  EXPECT_EQ(a.params.decoder[0].w_input, b.params.decoder[0].w_input);
  EXPECT_LT(forward_loss(a, corpus).loss, 0.01);
}

TEST(Train, DivergenceIsReported) {
  auto m = init_model(tiny(3, 4, 1, true, 1), vocab_of(3, "s"), vocab_of(3, "t"));
  m.params.output_b(7, 0) = std::numeric_limits<double>::infinity();
  std::vector<SeqPair> corpus{{{7}, {8}}};
  TrainConfig tc;
  tc.epochs = 1;
  EXPECT_THROW(train(m, corpus, tc), TrainingDiverged);
}

TEST(Decode, WidthOneEqualsGreedy) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = init_model(tiny(4, 6, 1 + trial % 2, trial % 3 != 0, 1000 + trial), vocab_of(5, "s"), vocab_of(4, "t"));
    // Sharpen the output layer so greedy paths vary.
    m.params.output_w *= 8;
    auto src = random_batch(rng, m, 1, 5)[0].src;
    auto beam = beam_decode(m, src, BeamOptions{1, 6, false});
    auto greedy = greedy_decode(m, src, 6);
    ASSERT_EQ(beam.size(), 1u);
    EXPECT_EQ(beam[0].ids, greedy.ids);
    EXPECT_DOUBLE_EQ(beam[0].score, greedy.score);
    EXPECT_EQ(beam[0].complete, greedy.complete);
  }
}

TEST(Decode, WideBeamMatchesExhaustiveEnumeration) {
  // Two ordinary target tokens; with </s>, <unk> and the two reserved
  // normalization tokens there are 6 emittable ids. Enumerate every output
  // of at most 3 tokens and score it by teacher forcing.
  auto m = init_model(tiny(3, 4, 1, true, 77), vocab_of(3, "s"), vocab_of(2, "t"));
  m.params.output_w *= 4;
  const std::vector<std::int32_t> src{7, 9, 8};
  std::vector<std::int32_t> emit;
  for (std::int32_t v = 0; v < static_cast<std::int32_t>(m.config.tgt_vocab); ++v) {
    if (v != Vocabulary::kPad && v != Vocabulary::kBos) emit.push_back(v);
  }
  const std::size_t max_len = 3;
  std::vector<BeamHypothesis> all;
  std::function<void(std::vector<std::int32_t>)> grow = [&](std::vector<std::int32_t> prefix) {
    for (auto v : emit) {
      auto seq = prefix;
      if (v == Vocabulary::kEos) {
        auto lp = token_log_probs(m, SeqPair{src, seq});
        double score = 0;
        for (double x : lp) score += x;
        seq.push_back(v);
        all.push_back({seq, score, true});
        continue;
      }
      seq.push_back(v);
      if (seq.size() == max_len) {
        auto lp = token_log_probs(m, SeqPair{src, seq});
        double score = 0;
        for (std::size_t i = 0; i < seq.size(); ++i) score += lp[i];
        all.push_back({seq, score, false});
      } else {
        grow(seq);
      }
    }
  };
  grow({});
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.score > b.score; });

  auto beam = beam_decode(m, src, BeamOptions{all.size() + 5, max_len, false});
  ASSERT_EQ(beam.size(), all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(beam[i].ids, all[i].ids) << i;
    EXPECT_NEAR(beam[i].score, all[i].score, 1e-10);
    EXPECT_EQ(beam[i].complete, all[i].complete);
  }
  // Narrow beams are sorted, bounded and score-consistent.
  auto narrow = beam_decode(m, src, BeamOptions{10, max_len, false});
  ASSERT_EQ(narrow.size(), 10u);
  for (std::size_t i = 1; i < narrow.size(); ++i) EXPECT_GE(narrow[i - 1].score, narrow[i].score);
  EXPECT_EQ(narrow[0].ids, all[0].ids);
}

TEST(Decode, SoftmaxNormalizedAndDeterministic) {
  auto m = init_model(tiny(4, 6, 2, true, 5), vocab_of(3, "s"), vocab_of(6, "t"));
  DecoderSession s(m, {7, 8, 9, 7});
  auto state = s.start();
  for (std::int32_t tok : {7, 8, 12, 9}) {
    EXPECT_NEAR(s.log_probs(state).array().exp().sum(), 1.0, 1e-9);
    state = s.advance(state, tok);
  }
  auto a = beam_decode(m, {7, 8}, BeamOptions{4, 5, false});
  auto b = beam_decode(m, {7, 8}, BeamOptions{4, 5, false});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].ids, b[i].ids);
    EXPECT_EQ(a[i].score, b[i].score);
  }
  EXPECT_THROW(beam_decode(m, {7}, BeamOptions{0, 5, false}), std::invalid_argument);
}

class CheckpointTest : public ::testing::Test {
 protected:
  fs::path dir = fs::temp_directory_path() / ("ctg_seq_" + std::to_string(::getpid()));
  void SetUp() override { fs::create_directories(dir); }
  void TearDown() override { fs::remove_all(dir); }
};

TEST_F(CheckpointTest, RoundTripIsBitwise) {
  for (bool attention : {true, false}) {
    auto m = init_model(tiny(3, 4, 2, attention, 12), vocab_of(3, "s"), vocab_of(2, "t"));
    m.params.output_b(0, 0) = -0.0;
    m.params.output_b(1, 0) = 1e-310;
    save_checkpoint(m, dir / "m.ckpt");
    SeqModel back = load_checkpoint(dir / "m.ckpt");
    EXPECT_EQ(back.config, m.config);
    EXPECT_EQ(back.src_vocab, m.src_vocab);
    EXPECT_EQ(back.tgt_vocab, m.tgt_vocab);
    std::vector<Mat> a, b;
    m.params.visit([&a](const std::string&, const Mat& t) { a.push_back(t); });
    back.params.visit([&b](const std::string&, const Mat& t) { b.push_back(t); });
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSERT_EQ(a[i].size(), b[i].size());
      EXPECT_EQ(std::memcmp(a[i].data(), b[i].data(), sizeof(double) * static_cast<std::size_t>(a[i].size())), 0);
    }
  }
}

TEST_F(CheckpointTest, TruncatedAndVersionErrors) {
  auto m = init_model(tiny(3, 4, 1, true, 12), vocab_of(3, "s"), vocab_of(2, "t"));
  save_checkpoint(m, dir / "m.ckpt");
  const auto size = fs::file_size(dir / "m.ckpt");
  for (auto cut : {size - 1, size / 2, std::uintmax_t{10}}) {
    fs::copy_file(dir / "m.ckpt", dir / "t.ckpt", fs::copy_options::overwrite_existing);
    fs::resize_file(dir / "t.ckpt", cut);
    EXPECT_THROW(load_checkpoint(dir / "t.ckpt"), CheckpointError);
  }
  std::ofstream(dir / "v.ckpt") << "v9 ctg-seq2seq\n";
  EXPECT_THROW(load_checkpoint(dir / "v.ckpt"), CheckpointError);
  EXPECT_THROW(load_checkpoint(dir / "missing.ckpt"), CheckpointError);
}

TEST_F(CheckpointTest, VocabularyMismatch) {
  auto m = init_model(tiny(3, 4, 1, true, 12), vocab_of(3, "s"), vocab_of(2, "t"));
  EXPECT_NO_THROW(m.require_vocab(vocab_of(3, "s"), vocab_of(2, "t")));
  EXPECT_THROW(m.require_vocab(vocab_of(3, "s"), vocab_of(2, "u")), VocabMismatch);
}

}  // namespace
}  // namespace ctg
