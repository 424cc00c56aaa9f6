#pragma once

#include <string>
#include <vector>

#include "ctg/baseline/baseline.hpp"
#include "ctg/gen/generator.hpp"
#include "ctg/seqmodel/model.hpp"
#include "ctg/seqmodel/train.hpp"
#include "ctg/tableau/prover.hpp"
#include "workspace.hpp"

namespace ctg::cli {

struct Common {
  fs::path work = "work";
  std::size_t jobs = 1;

  Workspace ws() const { return Workspace{work}; }
};

struct ProverOptions {
  SearchLimits limits;
  std::string ordering = "input";
  std::uint64_t order_seed = 0;
  bool no_regularity = false;
  bool no_occurs_check = false;
};

struct GenerateOptions {
  std::size_t count = 20;
  std::uint64_t seed = 1;
  GeneratorConfig generator;
};

struct ProveOptions {
  fs::path problems;
  ProverOptions prover;
};

struct CheckOptions {
  fs::path problems;
};

struct ExtractOptions {
  fs::path problems;
  std::size_t max_steps = 3;
};

struct SplitOptions {
  std::uint64_t seed = 1;
};

struct TrainOptions {
  std::string corpus = "literals-1";
  std::string part = "train";
  std::string optimizer = "adam";
  ModelConfig model;
  TrainConfig train;
};

struct DecodeOptions {
  std::string corpus = "literals-1";
  std::string part = "test";
  std::size_t k = 10;
  /// 0: steps + 1 for clause corpora, 64 for conjecture.
  std::size_t max_length = 0;
  bool length_normalize = false;
};

struct EvaluateOptions {
  std::string part = "test";
  /// "all": reference sets from every proof; "part": only from `part`.
  std::string reference = "all";
};

struct BaselineOptions {
  std::string corpus = "literals-1";
  std::string part = "test";
  double gamma = 0.5;
  unsigned hash_bits = 20;
  std::uint64_t hash_seed = 0;
  std::size_t k = 10;
  MultilabelParams params;
};

struct GuidedOptions {
  fs::path problems;
  fs::path model;
  ProverOptions prover;
};

struct CorpusStatsOptions {
  fs::path root;
};

int cmd_generate(const Common& c, const GenerateOptions& o);
int cmd_prove(const Common& c, const ProveOptions& o);
int cmd_check(const Common& c, const CheckOptions& o);
int cmd_extract(const Common& c, const ExtractOptions& o);
int cmd_split(const Common& c, const SplitOptions& o);
int cmd_train(const Common& c, const TrainOptions& o);
int cmd_decode(const Common& c, const DecodeOptions& o);
int cmd_evaluate(const Common& c, const EvaluateOptions& o);
int cmd_baseline(const Common& c, const BaselineOptions& o);
int cmd_guided_prove(const Common& c, const GuidedOptions& o);
int cmd_corpus_stats(const Common& c, const CorpusStatsOptions& o);

}  // namespace ctg::cli
