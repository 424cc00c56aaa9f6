#include "ctg/evalkit/evalkit.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ctg {

void ReferenceIndex::add(const PathExample& e) { sets_[Key{e.kind, e.steps, e.source}].insert(e.target); }

ReferenceIndex ReferenceIndex::build(const std::vector<PathExample>& examples) {
  ReferenceIndex r;
  for (const auto& e : examples) r.add(e);
  return r;
}

const std::set<Tokens>& ReferenceIndex::lookup(ExampleKind kind, std::size_t steps, const Tokens& source) const {
  static const std::set<Tokens> empty;
  auto it = sets_.find(Key{kind, steps, source});
  return it == sets_.end() ? empty : it->second;
}

std::string Ratio::rounded() const {
  if (den == 0) return "-";
  // round(100 num / den), half up, in integers.
  const std::uint64_t hundredths = (200 * num + den) / (2 * den);
  std::ostringstream os;
  os << hundredths / 100 << '.' << std::setw(2) << std::setfill('0') << hundredths % 100;
  return os.str();
}

bool PredictionRecord::success(std::size_t k) const {
  for (std::size_t i = 0; i < std::min(k, decoded.size()); ++i) {
    if (reference.count(decoded[i])) return true;
  }
  return false;
}

PredictionRecord make_record(const PathExample& e, std::vector<Tokens> decoded, std::vector<double> scores,
                             const ReferenceIndex& index) {
  PredictionRecord r;
  r.example = e;
  r.decoded = std::move(decoded);
  r.scores = std::move(scores);
  r.reference = index.lookup(e.kind, e.steps, e.source);
  return r;
}

AccuracyReport predictive_accuracy(const std::vector<PredictionRecord>& records, std::size_t k) {
  if (records.empty()) throw std::invalid_argument("no prediction records");
  AccuracyReport out;
  for (const auto& r : records) {
    const bool ok = r.success(k);
    out.overall.num += ok;
    ++out.overall.den;
    Ratio& bucket = out.by_length[r.example.input_length];
    bucket.num += ok;
    ++bucket.den;
  }
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::ExactMatch: return "exact-match";
    case Verdict::WellFormedMismatch: return "well-formed-mismatch";
    case Verdict::Malformed: return "malformed";
  }
  return "?";
}

Verdict classify_conjecture(const Tokens& predicted, const Tokens& gold) {
  SymbolTable symbols;
  auto g = detokenize_literal(gold, symbols);
  if (!g) throw std::invalid_argument("gold literal is malformed: " + join_tokens(gold));
  auto p = detokenize_literal(predicted, symbols);
  if (!p) {
    // A symbol reused with another arity than in the gold literal still
    // parses on its own; that is a mismatch, not a syntax error.
    SymbolTable alone;
    return detokenize_literal(predicted, alone) ? Verdict::WellFormedMismatch : Verdict::Malformed;
  }
  return *p == *g ? Verdict::ExactMatch : Verdict::WellFormedMismatch;
}

namespace {

std::ofstream open_csv(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

std::string share(std::uint64_t n, std::uint64_t total) { return Ratio{n, total}.rounded(); }

}  // namespace

void write_accuracy_by_config(const std::vector<ConfigAccuracy>& rows, const std::filesystem::path& p) {
  auto os = open_csv(p);
  os << "kind,k,i,accuracy,n\n";
  for (const auto& r : rows) {
    os << to_string(r.kind) << ',' << r.k << ',' << r.steps << ',' << r.accuracy.rounded() << ',' << r.accuracy.den
       << '\n';
  }
}

void write_accuracy_by_length(const std::vector<LengthAccuracy>& rows, const std::filesystem::path& p) {
  auto os = open_csv(p);
  os << "kind,length,accuracy,n\n";
  for (const auto& r : rows) {
    if (r.accuracy.den == 0) continue;
    os << to_string(r.kind) << ',' << r.length << ',' << r.accuracy.rounded() << ',' << r.accuracy.den << '\n';
  }
}

void write_conjecture_validity(const std::map<Verdict, std::uint64_t>& counts, const std::filesystem::path& p) {
  auto os = open_csv(p);
  std::uint64_t total = 0;
  for (const auto& [v, n] : counts) total += n;
  os << "verdict,count,share\n";
  for (Verdict v : {Verdict::ExactMatch, Verdict::WellFormedMismatch, Verdict::Malformed}) {
    auto it = counts.find(v);
    const std::uint64_t n = it == counts.end() ? 0 : it->second;
    os << to_string(v) << ',' << n << ',' << share(n, total) << '\n';
  }
}

std::string render_config_grid(const std::vector<ConfigAccuracy>& rows) {
  auto cell = [&](ExampleKind kind, std::size_t k, std::size_t i) -> std::string {
    for (const auto& r : rows) {
      if (r.kind == kind && r.k == k && r.steps == i && r.accuracy.den) return r.accuracy.rounded();
    }
    return "-";
  };
  std::ostringstream os;
  os << std::left << std::setw(4) << "i" << std::setw(12) << "lits k=1" << std::setw(12) << "lits k=10" << std::setw(12)
     << "cls k=1" << "cls k=10\n";
  for (std::size_t i = 1; i <= 3; ++i) {
    os << std::setw(4) << i << std::setw(12) << cell(ExampleKind::Literals, 1, i) << std::setw(12)
       << cell(ExampleKind::Literals, 10, i) << std::setw(12) << cell(ExampleKind::Clauses, 1, i)
       << cell(ExampleKind::Clauses, 10, i) << '\n';
  }
  return os.str();
}

std::string render_length_table(const std::vector<LengthAccuracy>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(12) << "kind" << std::setw(8) << "length" << std::setw(10) << "accuracy" << "n\n";
  for (const auto& r : rows) {
    if (r.accuracy.den == 0) continue;
    os << std::setw(12) << to_string(r.kind) << std::setw(8) << r.length << std::setw(10) << r.accuracy.rounded()
       << r.accuracy.den << '\n';
  }
  return os.str();
}

void write_predictions(const std::vector<Prediction>& preds, const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  char buf[64];
  for (const auto& pr : preds) {
    for (std::size_t r = 0; r < pr.decoded.size(); ++r) {
      std::snprintf(buf, sizeof buf, "%a", r < pr.scores.size() ? pr.scores[r] : 0.0);
      os << pr.index << '\t' << r << '\t' << buf << '\t' << join_tokens(pr.decoded[r]) << '\n';
    }
  }
  if (!os) throw std::runtime_error("cannot write " + p.string());
}

std::vector<Prediction> read_predictions(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  std::vector<Prediction> out;
  std::size_t lineno = 0;
  for (std::string line; std::getline(is, line);) {
    ++lineno;
    std::vector<std::string> f;
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
      const auto tab = line.find('\t', pos);
      if (tab == std::string::npos) throw std::runtime_error(p.string() + " line " + std::to_string(lineno) + ": malformed");
      f.push_back(line.substr(pos, tab - pos));
      pos = tab + 1;
    }
    f.push_back(line.substr(pos));
    std::size_t index = 0, rank = 0;
    double score = 0;
    try {
      index = std::stoul(f[0]);
      rank = std::stoul(f[1]);
      score = std::stod(f[2]);
    } catch (const std::exception&) {
      throw std::runtime_error(p.string() + " line " + std::to_string(lineno) + ": malformed");
    }
    if (out.empty() || out.back().index != index) {
      if (!out.empty() && index < out.back().index) {
        throw std::runtime_error(p.string() + " line " + std::to_string(lineno) + ": indices out of order");
      }
      out.push_back(Prediction{index, {}, {}});
    }
    if (rank != out.back().decoded.size()) {
      throw std::runtime_error(p.string() + " line " + std::to_string(lineno) + ": ranks out of order");
    }
    out.back().decoded.push_back(split_tokens(f[3]));
    out.back().scores.push_back(score);
  }
  return out;
}

}  // namespace ctg
