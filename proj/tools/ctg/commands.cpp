#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "ctg/datagen/examples.hpp"
#include "ctg/datagen/external.hpp"
#include "ctg/datagen/vocab.hpp"
#include "ctg/evalkit/evalkit.hpp"
#include "ctg/fol/tptp.hpp"
#include "ctg/guidance/model_scorer.hpp"
#include "ctg/seqmodel/checkpoint.hpp"
#include "ctg/seqmodel/decode.hpp"

namespace ctg::cli {

namespace {

fs::path or_default(const fs::path& p, const fs::path& fallback) { return p.empty() ? fallback : p; }

std::vector<fs::path> problem_files(const fs::path& dir) {
  require(dir, "generate");
  if (!fs::is_directory(dir)) throw DataError(dir.string() + " is not a directory");
  return files_with_extension(dir, ".p");
}

Matrix load_problem(const fs::path& p) {
  try {
    return parse_tptp_cnf(slurp(p));
  } catch (const ParseError& e) {
    throw DataError(p.string() + ":" + e.what());
  }
}

ClauseOrdering make_ordering(const ProverOptions& o) {
  if (o.ordering == "input") return ClauseOrdering::input_order();
  if (o.ordering == "random") return ClauseOrdering::random(o.order_seed);
  throw DataError("unknown ordering '" + o.ordering + "' (input, random)");
}

ProverFlags make_flags(const ProverOptions& o) { return ProverFlags{!o.no_regularity, !o.no_occurs_check}; }

std::string corpus_name(ExampleKind kind, std::size_t steps) {
  return kind == ExampleKind::Conjecture ? "conjecture" : std::string(to_string(kind)) + "-" + std::to_string(steps);
}

std::vector<PathExample> load_corpus(const fs::path& stem, const std::string& producer) {
  require_corpus(stem, producer);
  try {
    return read_corpus(stem);
  } catch (const CorpusFormatError& e) {
    throw DataError(e.what());
  }
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(6) << v;
  return ss.str();
}

}  // namespace

int cmd_generate(const Common& c, const GenerateOptions& o) {
  const auto ws = c.ws();
  auto problems = generate_problems(o.generator, o.count, o.seed);
  fs::create_directories(ws.problems());
  for (const auto& p : problems) write_text(ws.problems() / (p.name + ".p"), p.text);
  std::cout << "generated " << problems.size() << " problems in " << ws.problems().string() << "\n";
  return 0;
}

int cmd_prove(const Common& c, const ProveOptions& o) {
  const auto ws = c.ws();
  const auto files = problem_files(or_default(o.problems, ws.problems()));
  if (files.empty()) std::cerr << "warning: no .p files in " << or_default(o.problems, ws.problems()).string() << "\n";
  o.prover.limits.validate();
  const auto ordering = make_ordering(o.prover);
  const auto flags = make_flags(o.prover);

  struct Row {
    std::string status, error;
    std::size_t depth = 0;
    std::uint64_t inferences = 0;
    double ms = 0;
    std::string proof_text;
  };
  std::vector<Row> rows(files.size());
  parallel_for(files.size(), c.jobs, [&](std::size_t i) {
    const std::string id = files[i].stem().string();
    Row& row = rows[i];
    Matrix m = [&]() -> Matrix {
      try {
        return parse_tptp_cnf(slurp(files[i]));
      } catch (const ParseError& e) {
        row.status = "parse-error";
        row.error = files[i].string() + ":" + e.what();
        return Matrix({}, std::make_shared<SymbolTable>(), {});
      }
    }();
    if (!row.error.empty()) return;
    if (m.empty()) {
      row.status = "empty";
      return;
    }
    auto r = prove(m, o.prover.limits, ordering, flags, id);
    row.status = to_string(r.stats.outcome);
    row.depth = r.stats.depth;
    row.inferences = r.stats.inferences;
    row.ms = r.stats.elapsed_ms;
    if (r.proof) row.proof_text = write_proofs(m, {*r.proof});
  });

  fs::create_directories(ws.proofs());
  std::string stats = "problem,status,depth,inferences\n", timing = "problem,elapsed_ms\n";
  std::size_t solved = 0;
  bool data_error = false;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const std::string id = files[i].stem().string();
    const Row& row = rows[i];
    if (!row.error.empty()) {
      std::cerr << row.error << "\n";
      data_error = true;
    }
    stats += id + "," + row.status + "," + std::to_string(row.depth) + "," + std::to_string(row.inferences) + "\n";
    timing += id + "," + fmt(row.ms) + "\n";
    const fs::path proof_file = ws.proofs() / (id + ".proof");
    if (!row.proof_text.empty()) {
      write_text(proof_file, row.proof_text);
      ++solved;
    } else {
      fs::remove(proof_file);
    }
  }
  write_text(ws.proofs() / "stats.csv", stats);
  write_text(ws.proofs() / "timing.csv", timing);
  std::cout << "solved " << solved << "/" << files.size() << "\n";
  return data_error ? 2 : 0;
}

int cmd_check(const Common& c, const CheckOptions& o) {
  const auto ws = c.ws();
  require(ws.proofs(), "prove");
  const auto proofs = files_with_extension(ws.proofs(), ".proof");
  const fs::path problems = or_default(o.problems, ws.problems());
  std::size_t rejected = 0;
  for (const auto& pf : proofs) {
    const fs::path problem = problems / (pf.stem().string() + ".p");
    require(problem, "generate");
    Matrix m = load_problem(problem);
    std::vector<ProofTree> trees;
    try {
      trees = read_proofs(slurp(pf), m);
    } catch (const ProofFormatError& e) {
      throw DataError(pf.string() + ": " + e.what());
    }
    for (std::size_t i = 0; i < trees.size(); ++i) {
      auto res = check_proof(m, trees[i]);
      std::cout << pf.stem().string() << "/" << i << " " << (res.accepted() ? "accepted" : res.describe()) << "\n";
      rejected += !res.accepted();
    }
  }
  std::cout << "checked " << proofs.size() << " proof files, " << rejected << " rejected\n";
  return rejected ? 2 : 0;
}

int cmd_extract(const Common& c, const ExtractOptions& o) {
  const auto ws = c.ws();
  if (o.max_steps == 0) throw DataError("--max-steps must be positive");
  require(ws.proofs(), "prove");
  const fs::path problems = or_default(o.problems, ws.problems());
  std::map<std::string, std::vector<PathExample>> corpora;
  std::vector<std::string> names, keys;
  for (std::size_t s = 1; s <= o.max_steps; ++s) {
    names.push_back(corpus_name(ExampleKind::Literals, s));
    names.push_back(corpus_name(ExampleKind::Clauses, s));
  }
  names.push_back("conjecture");
  for (const auto& n : names) corpora[n];

  for (const auto& pf : files_with_extension(ws.proofs(), ".proof")) {
    const fs::path problem = problems / (pf.stem().string() + ".p");
    require(problem, "generate");
    Matrix m = load_problem(problem);
    std::vector<ProofTree> trees;
    try {
      trees = read_proofs(slurp(pf), m);
    } catch (const ProofFormatError& e) {
      throw DataError(pf.string() + ": " + e.what());
    }
    for (std::size_t i = 0; i < trees.size(); ++i) {
      CheckedProof cp = [&] {
        try {
          return certify(m, trees[i], i);
        } catch (const PreconditionError& e) {
          throw DataError(pf.string() + ": " + e.what());
        }
      }();
      keys.push_back(proof_key(cp.tree().problem_id, i));
      for (std::size_t s = 1; s <= o.max_steps; ++s) {
        for (auto kind : {ExampleKind::Literals, ExampleKind::Clauses}) {
          auto ex = extract_clause_choice_examples(cp, kind, s);
          auto& dst = corpora[corpus_name(kind, s)];
          dst.insert(dst.end(), ex.begin(), ex.end());
        }
      }
      auto conj = extract_conjecturing_examples(cp);
      corpora["conjecture"].insert(corpora["conjecture"].end(), conj.begin(), conj.end());
    }
  }
  fs::create_directories(ws.corpus());
  for (const auto& n : names) {
    write_corpus(corpora[n], ws.corpus_stem(n));
    std::cout << n << " " << corpora[n].size() << "\n";
  }
  write_list(ws.corpus() / "corpora.txt", names);
  write_list(ws.corpus() / "proofs.txt", keys);
  return 0;
}

int cmd_split(const Common& c, const SplitOptions& o) {
  const auto ws = c.ws();
  const auto keys = read_list(ws.corpus() / "proofs.txt", "extract");
  const auto names = read_list(ws.corpus() / "corpora.txt", "extract");
  CorpusSplit split;
  try {
    split = split_by_proofs(keys, o.seed);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  save_split(split, ws.corpus() / "split.txt");
  for (const auto& n : names) {
    std::map<std::string, std::vector<PathExample>> parts{{"train", {}}, {"valid", {}}, {"test", {}}};
    for (auto& e : load_corpus(ws.corpus_stem(n), "extract")) {
      const std::string part = split.part_of(proof_key(e.problem, e.proof));
      if (part.empty()) throw DataError("example of unknown proof " + proof_key(e.problem, e.proof) + " in " + n);
      parts[part].push_back(std::move(e));
    }
    for (const auto& [part, ex] : parts) write_corpus(ex, ws.corpus_stem(n, part));
    std::cout << n << " train " << parts["train"].size() << " valid " << parts["valid"].size() << " test "
              << parts["test"].size() << "\n";
  }
  std::cout << "proofs train " << split.train.size() << " valid " << split.valid.size() << " test "
            << split.test.size() << "\n";
  return 0;
}

int cmd_train(const Common& c, const TrainOptions& o) {
  const auto ws = c.ws();
  const auto examples = load_corpus(ws.corpus_stem(o.corpus, o.part), "split");
  if (examples.empty()) throw DataError("corpus " + o.corpus + "." + o.part + " is empty");
  std::vector<Tokens> src, tgt;
  for (const auto& e : examples) {
    src.push_back(e.source);
    tgt.push_back(e.target);
  }
  TrainConfig tc = o.train;
  if (o.optimizer == "adam") {
    tc.optimizer = TrainConfig::Optimizer::Adam;
  } else if (o.optimizer == "sgd") {
    tc.optimizer = TrainConfig::Optimizer::Sgd;
  } else {
    throw DataError("unknown optimizer '" + o.optimizer + "' (adam, sgd)");
  }
  SeqModel m = init_model(o.model, Vocabulary::build(src), Vocabulary::build(tgt));
  std::vector<SeqPair> corpus;
  for (const auto& e : examples) corpus.push_back(encode_pair(m, e.source, e.target));
  std::string curve = "epoch,loss\n";
  train(m, corpus, tc, [&](std::size_t epoch, double loss) {
    std::cout << "epoch " << epoch + 1 << " loss " << fmt(loss) << "\n";
    std::ostringstream row;
    row << epoch + 1 << "," << std::hexfloat << loss << "\n";
    curve += row.str();
    return true;
  });
  fs::create_directories(ws.models());
  save_checkpoint(m, ws.checkpoint(o.corpus));
  write_text(ws.models() / (o.corpus + ".loss.csv"), curve);
  std::cout << "wrote " << ws.checkpoint(o.corpus).string() << "\n";
  return 0;
}

int cmd_decode(const Common& c, const DecodeOptions& o) {
  const auto ws = c.ws();
  const auto examples = load_corpus(ws.corpus_stem(o.corpus, o.part), "split");
  require(ws.checkpoint(o.corpus), "train --corpus " + o.corpus);
  const SeqModel m = [&] {
    try {
      return load_checkpoint(ws.checkpoint(o.corpus));
    } catch (const CheckpointError& e) {
      throw DataError(e.what());
    }
  }();
  if (o.k == 0) throw DataError("--k must be positive");
  std::vector<Prediction> preds(examples.size());
  parallel_for(examples.size(), c.jobs, [&](std::size_t i) {
    const auto& e = examples[i];
    const std::size_t max_len = o.max_length ? o.max_length : e.kind == ExampleKind::Conjecture ? 64 : e.steps + 1;
    auto hyps = beam_decode(m, m.src_vocab.encode(e.source), BeamOptions{o.k, max_len, o.length_normalize});
    preds[i].index = i;
    for (const auto& h : hyps) {
      preds[i].decoded.push_back(m.tgt_vocab.decode(h.ids));
      preds[i].scores.push_back(h.score);
    }
  });
  fs::create_directories(ws.predictions());
  write_predictions(preds, ws.prediction_file(o.corpus, o.part));
  std::cout << "decoded " << preds.size() << " examples into " << ws.prediction_file(o.corpus, o.part).string()
            << "\n";
  return 0;
}

int cmd_evaluate(const Common& c, const EvaluateOptions& o) {
  const auto ws = c.ws();
  if (o.reference != "all" && o.reference != "part") throw DataError("--reference must be all or part");
  const auto names = read_list(ws.corpus() / "corpora.txt", "extract");
  std::vector<ConfigAccuracy> config_rows;
  std::vector<LengthAccuracy> length_rows;
  std::map<Verdict, std::uint64_t> verdicts;
  bool any = false;
  for (const auto& n : names) {
    const fs::path pred_file = ws.prediction_file(n, o.part);
    if (!fs::exists(pred_file)) continue;
    any = true;
    const auto examples = load_corpus(ws.corpus_stem(n, o.part), "split");
    const auto preds = read_predictions(pred_file);
    if (preds.size() != examples.size()) {
      throw DataError(pred_file.string() + " has " + std::to_string(preds.size()) + " entries for " +
                      std::to_string(examples.size()) + " examples; rerun `ctg decode --corpus " + n + "`");
    }
    if (n == "conjecture") {
      for (std::size_t i = 0; i < examples.size(); ++i) {
        const Tokens top = preds[i].decoded.empty() ? Tokens{} : preds[i].decoded[0];
        ++verdicts[classify_conjecture(top, examples[i].target)];
      }
      continue;
    }
    const auto reference = load_corpus(o.reference == "all" ? ws.corpus_stem(n) : ws.corpus_stem(n, o.part), "extract");
    const auto index = ReferenceIndex::build(reference);
    std::vector<PredictionRecord> records;
    std::size_t width = 0;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      records.push_back(make_record(examples[i], preds[i].decoded, preds[i].scores, index));
      width = std::max(width, preds[i].decoded.size());
    }
    if (records.empty()) continue;
    const auto kind = examples[0].kind;
    const auto steps = examples[0].steps;
    for (std::size_t k : {std::size_t{1}, std::size_t{10}}) {
      if (k > 1 && width < k) continue;
      auto report = predictive_accuracy(records, k);
      config_rows.push_back({kind, k, steps, report.overall});
      if (k == 1 && steps == 1) {
        for (const auto& [len, r] : report.by_length) length_rows.push_back({kind, len, r});
      }
    }
  }
  if (!any) throw DataError("no predictions for part '" + o.part + "' in " + ws.predictions().string() +
                            "; run `ctg decode` first");
  fs::create_directories(ws.reports());
  write_accuracy_by_config(config_rows, ws.reports() / "accuracy_by_config.csv");
  write_accuracy_by_length(length_rows, ws.reports() / "accuracy_by_length.csv");
  std::string text = render_config_grid(config_rows) + "\n" + render_length_table(length_rows);
  if (!verdicts.empty()) {
    write_conjecture_validity(verdicts, ws.reports() / "conjecture_validity.csv");
    std::uint64_t total = 0;
    for (const auto& [v, n] : verdicts) total += n;
    text += "\nconjectures " + std::to_string(total);
    for (const auto& [v, n] : verdicts) text += " " + std::string(to_string(v)) + "=" + std::to_string(n);
    text += "\n";
  }
  write_text(ws.reports() / "summary.txt", text);
  std::cout << text;
  return 0;
}

int cmd_baseline(const Common& c, const BaselineOptions& o) {
  const auto ws = c.ws();
  const auto train_ex = load_corpus(ws.corpus_stem(o.corpus, "train"), "split");
  const auto test_ex = load_corpus(ws.corpus_stem(o.corpus, o.part), "split");
  if (train_ex.empty() || test_ex.empty()) throw DataError("baseline needs nonempty train and " + o.part + " parts");
  if (train_ex[0].kind != ExampleKind::Literals || train_ex[0].steps != 1) {
    throw DataError("the baseline predicts single clauses from literal paths; use a literals-1 corpus");
  }
  const FeatureHasher hasher{o.hash_seed, o.hash_bits};
  SymbolTable symbols;
  auto features = [&](const PathExample& e) {
    try {
      return featurize_path(parse_literal_path(e.source, symbols), symbols, o.gamma, hasher);
    } catch (const std::invalid_argument& err) {
      throw DataError("example " + e.problem + " " + to_string(e.node) + ": " + err.what());
    }
  };
  std::vector<LabeledExample> labeled;
  std::map<std::string, std::size_t> label_counts;
  for (const auto& e : train_ex) {
    labeled.push_back({features(e), e.target.at(0)});
    ++label_counts[e.target.at(0)];
  }
  MultilabelModel model;
  try {
    model = train_multilabel(labeled, o.params);
  } catch (const SingleLabelCorpus& e) {
    throw DataError(e.what());
  }
  std::string majority;
  std::size_t best = 0;
  for (const auto& [label, n] : label_counts) {
    if (n > best) {
      best = n;
      majority = label;
    }
  }

  const auto index = ReferenceIndex::build(load_corpus(ws.corpus_stem(o.corpus), "extract"));
  std::vector<PredictionRecord> records, majority_records;
  std::vector<Prediction> preds;
  for (std::size_t i = 0; i < test_ex.size(); ++i) {
    const auto fv = features(test_ex[i]);
    const auto labels = model.predict_topk(fv, o.k);
    const Eigen::VectorXd s = model.scores(fv);
    Prediction p{i, {}, {}};
    for (const auto& l : labels) {
      p.decoded.push_back({l});
      const auto at = std::lower_bound(model.labels().begin(), model.labels().end(), l) - model.labels().begin();
      p.scores.push_back(s(at));
    }
    records.push_back(make_record(test_ex[i], p.decoded, p.scores, index));
    majority_records.push_back(make_record(test_ex[i], {{majority}}, {0.0}, index));
    preds.push_back(std::move(p));
  }
  fs::create_directories(ws.models());
  fs::create_directories(ws.predictions());
  fs::create_directories(ws.reports());
  model.save(ws.models() / ("baseline-" + o.corpus + ".txt"));
  write_predictions(preds, ws.prediction_file("baseline-" + o.corpus, o.part));

  std::string csv = "method,k,accuracy,n\n";
  auto row = [&](const std::string& method, std::size_t k, const Ratio& r) {
    csv += method + "," + std::to_string(k) + "," + r.rounded() + "," + std::to_string(r.den) + "\n";
    std::cout << method << " top-" << k << " " << r.rounded() << " (" << r.num << "/" << r.den << ")\n";
  };
  row("logistic", 1, predictive_accuracy(records, 1).overall);
  if (o.k > 1) row("logistic", o.k, predictive_accuracy(records, o.k).overall);
  row("majority", 1, predictive_accuracy(majority_records, 1).overall);
  write_text(ws.reports() / ("baseline-" + o.corpus + ".csv"), csv);
  std::cout << "labels " << model.labels().size() << ", training accuracy " << fmt(model.training_accuracy()) << "\n";
  return 0;
}

int cmd_guided_prove(const Common& c, const GuidedOptions& o) {
  const auto ws = c.ws();
  const auto files = problem_files(or_default(o.problems, ws.problems()));
  const fs::path model_path = or_default(o.model, ws.checkpoint("literals-1"));
  require(model_path, "train --corpus literals-1");
  auto model = std::make_shared<SeqModel>([&] {
    try {
      return load_checkpoint(model_path);
    } catch (const CheckpointError& e) {
      throw DataError(e.what());
    }
  }());
  o.prover.limits.validate();
  const auto baseline = make_ordering(o.prover);
  const auto guided = ClauseOrdering::guided(std::make_shared<ModelClauseScorer>(model));
  const auto flags = make_flags(o.prover);

  struct Row {
    SearchStats plain, guided;
  };
  std::vector<Row> rows(files.size());
  parallel_for(files.size(), c.jobs, [&](std::size_t i) {
    Matrix m = load_problem(files[i]);
    const std::string id = files[i].stem().string();
    rows[i].plain = prove(m, o.prover.limits, baseline, flags, id).stats;
    rows[i].guided = prove(m, o.prover.limits, guided, flags, id).stats;
  });
  std::string csv = "problem," + o.prover.ordering + "_status," + o.prover.ordering +
                    "_inferences,guided_status,guided_inferences,scorer_fallbacks\n";
  std::size_t plain_solved = 0, guided_solved = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto& r = rows[i];
    csv += files[i].stem().string() + "," + to_string(r.plain.outcome) + "," + std::to_string(r.plain.inferences) +
           "," + to_string(r.guided.outcome) + "," + std::to_string(r.guided.inferences) + "," +
           std::to_string(r.guided.scorer_fallbacks) + "\n";
    plain_solved += r.plain.outcome == SearchOutcome::Proved;
    guided_solved += r.guided.outcome == SearchOutcome::Proved;
  }
  std::string summary = o.prover.ordering + " solved " + std::to_string(plain_solved) + "/" +
                        std::to_string(files.size()) + ", guided solved " + std::to_string(guided_solved) + "/" +
                        std::to_string(files.size()) + " with a budget of " +
                        std::to_string(o.prover.limits.node_budget) + " inferences\n";
  if (guided_solved < plain_solved) {
    summary += "shortfall: guided search solved " + std::to_string(plain_solved - guided_solved) + " fewer problems\n";
  }
  write_text(ws.reports() / "guided.csv", csv);
  write_text(ws.reports() / "guided_summary.txt", summary);
  std::cout << summary;
  return 0;
}

int cmd_corpus_stats(const Common&, const CorpusStatsOptions& o) {
  fs::path root = o.root;
  if (root.empty()) {
    const char* env = std::getenv(kExternalCorpusEnv);
    if (!env || !*env) {
      throw DataError(std::string("no corpus given; pass --root or set ") + kExternalCorpusEnv);
    }
    root = env;
  }
  ExternalCorpusStats s;
  try {
    s = scan_external_corpus(root);
  } catch (const ExternalCorpusError& e) {
    throw DataError(e.what());
  }
  auto show = [](const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string("absent"); };
  std::cout << "proofs " << s.proofs << "\nliteral_pairs " << show(s.literal_pairs) << "\nclause_pairs "
            << show(s.clause_pairs) << "\n";
  return 0;
}

}  // namespace ctg::cli
