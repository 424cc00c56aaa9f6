#include "ctg/datagen/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include "ctg/datagen/examples.hpp"

namespace ctg {

const std::vector<std::string>& Vocabulary::reserved() {
  static const std::vector<std::string> r{"<pad>", "<unk>", "<s>", "</s>", "VAR", "SKLM", kLiteralSeparator};
  return r;
}

Vocabulary::Vocabulary() {
  for (const auto& t : reserved()) add(t);
}

void Vocabulary::add(const std::string& token) {
  if (index_.count(token)) return;
  index_.emplace(token, static_cast<std::int32_t>(tokens_.size()));
  tokens_.push_back(token);
}

Vocabulary Vocabulary::build(const std::vector<Tokens>& sequences) {
  Vocabulary v;
  for (const auto& s : sequences) {
    for (const auto& t : s) v.add(t);
  }
  return v;
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  const auto& r = reserved();
  if (tokens.size() < r.size() || !std::equal(r.begin(), r.end(), tokens.begin())) {
    throw std::invalid_argument("vocabulary must start with the reserved tokens");
  }
  Vocabulary v;
  for (std::size_t i = r.size(); i < tokens.size(); ++i) {
    if (v.contains(tokens[i])) throw std::invalid_argument("duplicate vocabulary token '" + tokens[i] + "'");
    v.add(tokens[i]);
  }
  return v;
}

std::int32_t Vocabulary::id(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

std::vector<std::int32_t> Vocabulary::encode(const Tokens& tokens) const {
  std::vector<std::int32_t> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(id(t));
  return out;
}

Tokens Vocabulary::decode(const std::vector<std::int32_t>& ids) const {
  Tokens out;
  for (auto i : ids) {
    if (i == kEos) break;
    if (i == kPad || i == kBos) continue;
    out.push_back(token(i));
  }
  return out;
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& t : tokens_) {
    for (char c : t) mix(static_cast<unsigned char>(c));
    mix(0);
  }
  return h;
}

void Vocabulary::save(const std::filesystem::path& p) const {
  std::ofstream os(p, std::ios::binary);
  for (const auto& t : tokens_) os << t << '\n';
  if (!os) throw std::runtime_error("cannot write vocabulary " + p.string());
}

Vocabulary Vocabulary::load(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read vocabulary " + p.string());
  std::vector<std::string> tokens;
  for (std::string line; std::getline(is, line);) tokens.push_back(line);
  return from_tokens(std::move(tokens));
}

std::string CorpusSplit::part_of(const std::string& proof_id) const {
  auto in = [&](const std::vector<std::string>& v) { return std::find(v.begin(), v.end(), proof_id) != v.end(); };
  if (in(train)) return "train";
  if (in(valid)) return "valid";
  if (in(test)) return "test";
  return "";
}

CorpusSplit split_by_proofs(std::vector<std::string> proof_ids, std::uint64_t seed) {
  std::sort(proof_ids.begin(), proof_ids.end());
  if (std::adjacent_find(proof_ids.begin(), proof_ids.end()) != proof_ids.end()) {
    throw std::invalid_argument("duplicate proof id in split input");
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = proof_ids.size(); i > 1; --i) {
    std::swap(proof_ids[i - 1], proof_ids[rng() % i]);
  }
  const std::size_t n = proof_ids.size();
  const std::size_t n_train = (6 * n + 5) / 10;
  const std::size_t n_valid = n / 10;
  CorpusSplit s;
  s.seed = seed;
  auto b = proof_ids.begin();
  s.train.assign(b, b + n_train);
  s.valid.assign(b + n_train, b + n_train + n_valid);
  s.test.assign(b + n_train + n_valid, proof_ids.end());
  return s;
}

void save_split(const CorpusSplit& s, const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  os << "seed " << s.seed << '\n';
  for (const auto& id : s.train) os << "train " << id << '\n';
  for (const auto& id : s.valid) os << "valid " << id << '\n';
  for (const auto& id : s.test) os << "test " << id << '\n';
  if (!os) throw std::runtime_error("cannot write split " + p.string());
}

CorpusSplit load_split(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read split " + p.string());
  CorpusSplit s;
  std::string part, id;
  std::size_t line = 0;
  while (is >> part >> id) {
    ++line;
    if (part == "seed") {
      s.seed = std::stoull(id);
    } else if (part == "train") {
      s.train.push_back(id);
    } else if (part == "valid") {
      s.valid.push_back(id);
    } else if (part == "test") {
      s.test.push_back(id);
    } else {
      throw std::runtime_error(p.string() + ": bad entry " + std::to_string(line));
    }
  }
  return s;
}

std::string proof_key(const std::string& problem, std::size_t proof) { return problem + "/" + std::to_string(proof); }

}  // namespace ctg
