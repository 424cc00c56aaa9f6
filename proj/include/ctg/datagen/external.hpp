#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>

namespace ctg {

/// Statistics of an externally supplied proof corpus laid out as
///   <root>/proofs/**        one regular file per proof
///   <root>/paths_lits/*.src literal-path sources, one pair per line
///   <root>/paths_cls/*.src  clause-path sources, one pair per line
/// `lits`/`literals` and `cls`/`clauses` are accepted as directory names.
struct ExternalCorpusStats {
  std::uint64_t proofs = 0;
  std::optional<std::uint64_t> literal_pairs;
  std::optional<std::uint64_t> clause_pairs;
};

class ExternalCorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws ExternalCorpusError when `root` or its proofs directory is missing.
ExternalCorpusStats scan_external_corpus(const std::filesystem::path& root);

/// Name of the environment variable pointing at the external corpus.
inline constexpr const char* kExternalCorpusEnv = "CTG_MML_CORPUS";

}  // namespace ctg
