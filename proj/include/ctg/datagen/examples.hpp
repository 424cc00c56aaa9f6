#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ctg/datagen/tokens.hpp"
#include "ctg/fol/normalize.hpp"
#include "ctg/tableau/proof.hpp"

namespace ctg {

/// literals/clauses: clause-choice examples over literal or clause paths.
/// conjecture: next-literal examples over literal paths.
enum class ExampleKind { Literals, Clauses, Conjecture };

const char* to_string(ExampleKind k);
ExampleKind parse_example_kind(const std::string& s);

struct PathExample {
  ExampleKind kind = ExampleKind::Literals;
  /// Number of consecutive clause choices in the target (1 for conjecture).
  std::size_t steps = 1;
  Tokens source;
  Tokens target;
  std::string problem;
  std::size_t proof = 0;
  NodePath node;
  /// Literals or clauses in the source path.
  std::size_t input_length = 0;

  friend bool operator==(const PathExample&, const PathExample&) = default;
};

struct ExtractOptions {
  SkolemDetector is_skolem = prefix_detector(default_skolem_prefixes());
};

/// Tokens of the normalized literals joined by the literal separator.
Tokens literal_path_tokens(const std::vector<Literal>& path, const SymbolTable& symbols,
                           const ExtractOptions& opts = {});

/// One example per extension-closed non-root node n and per chain of
/// `steps` extension-closed nodes starting at n and descending along a
/// single branch. Literal sources run from the root to n inclusive; clause
/// sources run from the start clause through the expansions above n.
std::vector<PathExample> extract_clause_choice_examples(const CheckedProof& p, ExampleKind kind,
                                                        std::size_t steps, const ExtractOptions& opts = {});

/// One example per non-root node: the literal path from the root to the
/// parent predicts the node's normalized literal.
std::vector<PathExample> extract_conjecturing_examples(const CheckedProof& p, const ExtractOptions& opts = {});

class CorpusFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes `<stem>.src`, `<stem>.tgt` and `<stem>.meta`, line-aligned. Meta
/// lines are `problem proof node input_length kind steps`.
void write_corpus(const std::vector<PathExample>& examples, const std::filesystem::path& stem);
std::vector<PathExample> read_corpus(const std::filesystem::path& stem);

}  // namespace ctg
