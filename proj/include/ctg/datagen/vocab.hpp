#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctg/datagen/tokens.hpp"

namespace ctg {

/// Token <-> id map. The reserved tokens come first, in this order:
/// <pad> <unk> <s> </s> VAR SKLM #
class Vocabulary {
 public:
  static constexpr std::int32_t kPad = 0;
  static constexpr std::int32_t kUnk = 1;
  static constexpr std::int32_t kBos = 2;
  static constexpr std::int32_t kEos = 3;
  static const std::vector<std::string>& reserved();

  Vocabulary();
  /// Reserved tokens followed by every other token of `sequences` in order
  /// of first appearance.
  static Vocabulary build(const std::vector<Tokens>& sequences);
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  std::int32_t id(const std::string& token) const;
  bool contains(const std::string& token) const { return index_.count(token) != 0; }
  const std::string& token(std::int32_t id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  /// Unknown tokens map to <unk>.
  std::vector<std::int32_t> encode(const Tokens& tokens) const;
  /// Stops at </s>; skips <pad> and <s>.
  Tokens decode(const std::vector<std::int32_t>& ids) const;

  /// FNV-1a over the token list; identifies a vocabulary in checkpoints.
  std::uint64_t hash() const;

  void save(const std::filesystem::path& p) const;
  static Vocabulary load(const std::filesystem::path& p);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  void add(const std::string& token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> index_;
};

struct CorpusSplit {
  std::vector<std::string> train, valid, test;
  std::uint64_t seed = 0;

  /// "train", "valid", "test", or empty when `proof_id` is in no part.
  std::string part_of(const std::string& proof_id) const;
};

/// Shuffles the sorted ids with the seed and cuts them into parts of size
/// round(0.6 n), floor(0.1 n) and the remainder. Order of `proof_ids` does
/// not matter; duplicates are rejected.
CorpusSplit split_by_proofs(std::vector<std::string> proof_ids, std::uint64_t seed);

void save_split(const CorpusSplit& s, const std::filesystem::path& p);
CorpusSplit load_split(const std::filesystem::path& p);

/// Key identifying one proof in a split: `<problem>/<proof index>`.
std::string proof_key(const std::string& problem, std::size_t proof);

}  // namespace ctg
