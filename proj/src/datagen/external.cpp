#include "ctg/datagen/external.hpp"

#include <algorithm>
#include <fstream>

namespace ctg {

namespace fs = std::filesystem;

namespace {

std::uint64_t count_lines(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw ExternalCorpusError("cannot read " + p.string());
  std::uint64_t n = 0;
  char last = '\n';
  char buf[1 << 16];
  while (is.read(buf, sizeof buf) || is.gcount() > 0) {
    const auto got = static_cast<std::size_t>(is.gcount());
    n += static_cast<std::uint64_t>(std::count(buf, buf + got, '\n'));
    last = buf[got - 1];
  }
  return n + (last != '\n');
}

std::optional<std::uint64_t> count_pairs(const fs::path& root, std::initializer_list<const char*> names) {
  for (const char* name : names) {
    const fs::path dir = root / name;
    if (!fs::is_directory(dir)) continue;
    std::uint64_t total = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".src") total += count_lines(entry.path());
    }
    return total;
  }
  return std::nullopt;
}

}  // namespace

ExternalCorpusStats scan_external_corpus(const fs::path& root) {
  if (!fs::is_directory(root)) throw ExternalCorpusError("external corpus not found at " + root.string());
  const fs::path proofs = root / "proofs";
  if (!fs::is_directory(proofs)) throw ExternalCorpusError("no proofs directory under " + root.string());
  ExternalCorpusStats s;
  for (const auto& entry : fs::recursive_directory_iterator(proofs)) {
    if (entry.is_regular_file()) ++s.proofs;
  }
  s.literal_pairs = count_pairs(root, {"paths_lits", "lits", "literals"});
  s.clause_pairs = count_pairs(root, {"paths_cls", "cls", "clauses"});
  return s;
}

}  // namespace ctg
