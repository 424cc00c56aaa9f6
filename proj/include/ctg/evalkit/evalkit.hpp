#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ctg/datagen/examples.hpp"

namespace ctg {

/// Maps (kind, steps, source) to every target observed for that source.
class ReferenceIndex {
 public:
  void add(const PathExample& e);
  static ReferenceIndex build(const std::vector<PathExample>& examples);

  /// Empty set when the key was never observed.
  const std::set<Tokens>& lookup(ExampleKind kind, std::size_t steps, const Tokens& source) const;
  std::size_t size() const { return sets_.size(); }

 private:
  using Key = std::tuple<ExampleKind, std::size_t, Tokens>;
  std::map<Key, std::set<Tokens>> sets_;
};

/// A fraction kept exact until reporting.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 0;

  double value() const { return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0; }
  /// Rounded half up to two decimals, e.g. "0.67".
  std::string rounded() const;
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

struct PredictionRecord {
  PathExample example;
  /// Decoded sequences, best first.
  std::vector<Tokens> decoded;
  std::vector<double> scores;
  std::set<Tokens> reference;

  /// Some of the first k decoded sequences lies in the reference set.
  bool success(std::size_t k) const;
};

PredictionRecord make_record(const PathExample& e, std::vector<Tokens> decoded, std::vector<double> scores,
                             const ReferenceIndex& index);

struct AccuracyReport {
  Ratio overall;
  std::map<std::size_t, Ratio> by_length;
};

/// Successes among the first k decoded sequences. Throws
/// std::invalid_argument for an empty record set.
AccuracyReport predictive_accuracy(const std::vector<PredictionRecord>& records, std::size_t k);

enum class Verdict { ExactMatch, WellFormedMismatch, Malformed };
const char* to_string(Verdict v);

/// Malformed when the tokens do not parse, exact-match when they parse to
/// the gold literal. Throws std::invalid_argument when the gold tokens do
/// not parse.
Verdict classify_conjecture(const Tokens& predicted, const Tokens& gold);

/// One row of a Table-1-style grid.
struct ConfigAccuracy {
  ExampleKind kind;
  std::size_t k;
  std::size_t steps;
  Ratio accuracy;
};

struct LengthAccuracy {
  ExampleKind kind;
  std::size_t length;
  Ratio accuracy;
};

void write_accuracy_by_config(const std::vector<ConfigAccuracy>& rows, const std::filesystem::path& p);
void write_accuracy_by_length(const std::vector<LengthAccuracy>& rows, const std::filesystem::path& p);
void write_conjecture_validity(const std::map<Verdict, std::uint64_t>& counts, const std::filesystem::path& p);

/// Rows i = 1..3, columns literals k=1, literals k=10, clauses k=1,
/// clauses k=10; missing cells print as "-".
std::string render_config_grid(const std::vector<ConfigAccuracy>& rows);
std::string render_length_table(const std::vector<LengthAccuracy>& rows);

/// Decoded hypotheses of one corpus, one line each:
/// `index<TAB>rank<TAB>score<TAB>tokens`, score as a hex float.
struct Prediction {
  std::size_t index = 0;
  std::vector<Tokens> decoded;
  std::vector<double> scores;
};
void write_predictions(const std::vector<Prediction>& preds, const std::filesystem::path& p);
std::vector<Prediction> read_predictions(const std::filesystem::path& p);

}  // namespace ctg
