#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ctg/datagen/tokens.hpp"

namespace ctg {

/// Hashed feature id -> weight.
using FeatureVector = std::map<std::uint32_t, double>;

/// Walk features of a literal: every function symbol with arguments, and
/// every parent>child symbol edge, counted. Negative literals prefix every
/// feature with `~`.
std::map<std::string, double> literal_walks(const Literal& l, const SymbolTable& symbols);

struct FeatureHasher {
  std::uint64_t seed = 0;
  unsigned bits = 20;

  std::uint32_t operator()(const std::string& feature) const;
};

FeatureVector featurize_literal(const Literal& l, const SymbolTable& symbols, const FeatureHasher& h = {});

/// sum_d gamma^d f(lit_d) / sum_d gamma^d, with d = 0 for the last literal.
/// Throws std::invalid_argument for an empty path or gamma outside (0, 1].
FeatureVector featurize_path(const std::vector<Literal>& lits, const SymbolTable& symbols, double gamma,
                             const FeatureHasher& h = {});

/// Splits a literal-path source at the separator and parses each literal.
/// Throws std::invalid_argument when a segment is malformed.
std::vector<Literal> parse_literal_path(const Tokens& source, SymbolTable& symbols);

struct LabeledExample {
  FeatureVector features;
  std::string label;
};

struct MultilabelParams {
  std::size_t epochs = 30;
  double learning_rate = 0.5;
  double l2 = 1e-5;
  std::uint64_t seed = 1;
};

class SingleLabelCorpus : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One-vs-rest logistic regression over the features seen in training.
class MultilabelModel {
 public:
  /// Labels sorted lexicographically.
  const std::vector<std::string>& labels() const { return labels_; }
  double training_accuracy() const { return training_accuracy_; }

  /// Score per label, in label order.
  Eigen::VectorXd scores(const FeatureVector& fv) const;
  /// Best k labels by descending score; ties go to the smaller label.
  std::vector<std::string> predict_topk(const FeatureVector& fv, std::size_t k) const;

  void save(const std::filesystem::path& p) const;
  static MultilabelModel load(const std::filesystem::path& p);

  friend MultilabelModel train_multilabel(const std::vector<LabeledExample>& examples, const MultilabelParams& hp);
  friend bool operator==(const MultilabelModel&, const MultilabelModel&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::uint32_t> features_;  // sorted hashed ids
  Eigen::MatrixXd weights_;              // labels x features
  Eigen::VectorXd bias_;
  double training_accuracy_ = 0;
};

/// SGD over shuffled examples, deterministic per seed. Throws
/// SingleLabelCorpus with fewer than two distinct labels.
MultilabelModel train_multilabel(const std::vector<LabeledExample>& examples, const MultilabelParams& hp);

}  // namespace ctg
