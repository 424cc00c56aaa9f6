#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "ctg/datagen/external.hpp"

using namespace ctg;
using namespace ctg::cli;

namespace {

void add_prover_flags(CLI::App* cmd, ProverOptions& p) {
  cmd->add_option("--max-depth", p.limits.max_depth, "Largest path length at which a node may be extended");
  cmd->add_option("--depth-start", p.limits.depth_start, "First iterative-deepening limit");
  cmd->add_option("--depth-step", p.limits.depth_step, "Increment of the depth limit");
  cmd->add_option("--budget", p.limits.node_budget, "Inference budget over all rounds");
  cmd->add_option("--time-ms", p.limits.time_budget_ms, "Wall-clock budget per problem in ms (0 = none)");
  cmd->add_option("--ordering", p.ordering, "Clause ordering: input or random")->check(CLI::IsMember({"input", "random"}));
  cmd->add_option("--order-seed", p.order_seed, "Seed of the random ordering");
  cmd->add_flag("--no-regularity", p.no_regularity, "Disable regularity pruning");
  cmd->add_flag("--no-occurs-check", p.no_occurs_check, "Unify without the occurs check");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Connection tableau proving, proof-trace extraction and sequence-model guidance"};
  app.option_defaults()->always_capture_default();
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "key=value file; keys are flag names, [section] per subcommand; flags win");
  app.require_subcommand(1);

  Common common;
  app.add_option("--work", common.work, "Work directory holding every artifact");
  app.add_option("--jobs", common.jobs, "Worker threads for batch commands (training ignores it)")
      ->check(CLI::PositiveNumber);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Write random unsatisfiable problems to <work>/problems");
  generate->add_option("--count", gen.count, "Number of problems");
  generate->add_option("--seed", gen.seed, "Seed of the problem stream");
  generate->add_option("--theory-seed", gen.generator.theory_seed, "Seed of the shared background theory");
  generate->add_option("--predicates", gen.generator.predicates, "Predicates in the theory");
  generate->add_option("--functions", gen.generator.functions, "Function symbols in the theory");
  generate->add_option("--constants", gen.generator.constants, "Constants in the theory");
  generate->add_option("--rules", gen.generator.rules_per_predicate, "Rules per predicate");
  generate->add_option("--decoy-rate", gen.generator.decoy_rate, "Chance of a decoy sibling per rule");
  generate->add_option("--term-depth", gen.generator.max_term_depth, "Largest derivation depth of a goal term");
  generate->add_option("--hypotheses", gen.generator.hypotheses, "Skolem hypotheses per problem");

  ProveOptions prove_opts;
  auto* prove_cmd = app.add_subcommand("prove", "Prove every problem; write proofs and stats.csv");
  prove_cmd->add_option("--problems", prove_opts.problems, "Problem directory (default <work>/problems)");
  add_prover_flags(prove_cmd, prove_opts.prover);

  CheckOptions check_opts;
  auto* check = app.add_subcommand("check", "Re-check every proof file against its problem");
  check->add_option("--problems", check_opts.problems, "Problem directory (default <work>/problems)");

  ExtractOptions extract_opts;
  auto* extract = app.add_subcommand("extract", "Extract literal-path, clause-path and conjecture corpora");
  extract->add_option("--problems", extract_opts.problems, "Problem directory (default <work>/problems)");
  extract->add_option("--max-steps", extract_opts.max_steps, "Longest clause-choice target");

  SplitOptions split_opts;
  auto* split = app.add_subcommand("split", "Split proofs 0.6/0.1/0.3 and partition every corpus");
  split->add_option("--seed", split_opts.seed, "Shuffle seed");

  TrainOptions train_opts;
  auto* train_cmd = app.add_subcommand("train", "Train a sequence model on one corpus part");
  train_cmd->add_option("--corpus", train_opts.corpus, "Corpus name, e.g. literals-1, clauses-2, conjecture");
  train_cmd->add_option("--part", train_opts.part, "Split part to train on");
  train_cmd->add_option("--embed", train_opts.model.embed, "Embedding size");
  train_cmd->add_option("--hidden", train_opts.model.hidden, "GRU state size");
  train_cmd->add_option("--layers", train_opts.model.layers, "GRU layers on each side");
  train_cmd->add_flag("!--no-attention", train_opts.model.attention, "Disable attention");
  train_cmd->add_option("--model-seed", train_opts.model.seed, "Initialization seed");
  train_cmd->add_option("--optimizer", train_opts.optimizer, "adam or sgd")->check(CLI::IsMember({"adam", "sgd"}));
  train_cmd->add_option("--lr", train_opts.train.learning_rate, "Learning rate");
  train_cmd->add_option("--batch", train_opts.train.batch_size, "Batch size");
  train_cmd->add_option("--epochs", train_opts.train.epochs, "Epochs");
  train_cmd->add_option("--clip", train_opts.train.clip_norm, "Global gradient-norm clip");
  train_cmd->add_option("--shuffle-seed", train_opts.train.shuffle_seed, "Batch shuffle seed");

  DecodeOptions decode_opts;
  auto* decode = app.add_subcommand("decode", "Beam-decode one corpus part with its trained model");
  decode->add_option("--corpus", decode_opts.corpus, "Corpus name");
  decode->add_option("--part", decode_opts.part, "Split part to decode");
  decode->add_option("--k", decode_opts.k, "Beam width");
  decode->add_option("--max-length", decode_opts.max_length, "Token limit (0: steps+1, or 64 for conjecture)");
  decode->add_flag("--length-normalize", decode_opts.length_normalize, "Rank hypotheses by score per token");

  EvaluateOptions eval_opts;
  auto* evaluate = app.add_subcommand("evaluate", "Score every decoded corpus; write the report CSVs");
  evaluate->add_option("--part", eval_opts.part, "Split part that was decoded");
  evaluate->add_option("--reference", eval_opts.reference, "Reference sets from all proofs or only the part")
      ->check(CLI::IsMember({"all", "part"}));

  BaselineOptions base_opts;
  auto* baseline = app.add_subcommand("baseline", "Train and score the hashed-feature logistic baseline");
  baseline->add_option("--corpus", base_opts.corpus, "Literal-path corpus with one-step targets");
  baseline->add_option("--part", base_opts.part, "Split part to score");
  baseline->add_option("--gamma", base_opts.gamma, "Decay of earlier literals on the path");
  baseline->add_option("--hash-bits", base_opts.hash_bits, "Hashed feature space is 2^bits");
  baseline->add_option("--hash-seed", base_opts.hash_seed, "Feature hash seed");
  baseline->add_option("--k", base_opts.k, "Labels predicted per example");
  baseline->add_option("--epochs", base_opts.params.epochs, "SGD epochs");
  baseline->add_option("--lr", base_opts.params.learning_rate, "SGD learning rate");
  baseline->add_option("--l2", base_opts.params.l2, "L2 penalty");
  baseline->add_option("--seed", base_opts.params.seed, "Shuffle seed");

  GuidedOptions guided_opts;
  guided_opts.prover.limits.node_budget = 20000;
  auto* guided = app.add_subcommand("guided-prove", "Compare model-guided and unguided search per problem");
  guided->add_option("--problems", guided_opts.problems, "Problem directory (default <work>/problems)");
  guided->add_option("--model", guided_opts.model, "Checkpoint (default <work>/models/literals-1.ckpt)");
  add_prover_flags(guided, guided_opts.prover);

  CorpusStatsOptions stats_opts;
  auto* stats = app.add_subcommand(
      "corpus-stats", std::string("Count proofs and pairs of an external corpus (default $") + kExternalCorpusEnv + ")");
  stats->add_option("--root", stats_opts.root, "Corpus root directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (generate->parsed()) return cmd_generate(common, gen);
    if (prove_cmd->parsed()) return cmd_prove(common, prove_opts);
    if (check->parsed()) return cmd_check(common, check_opts);
    if (extract->parsed()) return cmd_extract(common, extract_opts);
    if (split->parsed()) return cmd_split(common, split_opts);
    if (train_cmd->parsed()) return cmd_train(common, train_opts);
    if (decode->parsed()) return cmd_decode(common, decode_opts);
    if (evaluate->parsed()) return cmd_evaluate(common, eval_opts);
    if (baseline->parsed()) return cmd_baseline(common, base_opts);
    if (guided->parsed()) return cmd_guided_prove(common, guided_opts);
    if (stats->parsed()) return cmd_corpus_stats(common, stats_opts);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
