#include "ctg/datagen/examples.hpp"

#include <fstream>
#include <sstream>

namespace ctg {

const char* to_string(ExampleKind k) {
  switch (k) {
    case ExampleKind::Literals: return "literals";
    case ExampleKind::Clauses: return "clauses";
    case ExampleKind::Conjecture: return "conjecture";
  }
  return "?";
}

ExampleKind parse_example_kind(const std::string& s) {
  if (s == "literals") return ExampleKind::Literals;
  if (s == "clauses") return ExampleKind::Clauses;
  if (s == "conjecture") return ExampleKind::Conjecture;
  throw std::invalid_argument("unknown example kind '" + s + "'");
}

Tokens literal_path_tokens(const std::vector<Literal>& path, const SymbolTable& symbols, const ExtractOptions& opts) {
  Tokens out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out.push_back(kLiteralSeparator);
    Tokens t = tokenize_literal(normalize(path[i], symbols, opts.is_skolem), symbols);
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

namespace {

class Walker {
 public:
  Walker(const CheckedProof& proof, const ExtractOptions& opts) : proof_(proof), opts_(opts) {
    clauses_.push_back(proof.tree().start_clause);
  }

  std::vector<PathExample> clause_choice(ExampleKind kind, std::size_t steps) {
    for (std::size_t r = 0; r < proof_.tree().roots.size(); ++r) {
      path_ = {r};
      visit_choice(proof_.tree().roots[r], kind, steps);
    }
    return std::move(out_);
  }

  std::vector<PathExample> conjecture() {
    for (std::size_t r = 0; r < proof_.tree().roots.size(); ++r) {
      path_ = {r};
      visit_conjecture(proof_.tree().roots[r]);
    }
    return std::move(out_);
  }

 private:
  PathExample base(ExampleKind kind, std::size_t steps) const {
    PathExample e;
    e.kind = kind;
    e.steps = steps;
    e.problem = proof_.tree().problem_id;
    e.proof = proof_.proof_index();
    e.node = path_;
    return e;
  }

  static void chains(const TableauNode& n, std::size_t steps, Tokens& prefix, std::vector<Tokens>& found) {
    const Extension* ext = n.extension();
    if (!ext) return;
    prefix.push_back(ext->clause);
    if (prefix.size() == steps) {
      found.push_back(prefix);
    } else {
      for (const auto& c : n.children) chains(c, steps, prefix, found);
    }
    prefix.pop_back();
  }

  void visit_choice(const TableauNode& n, ExampleKind kind, std::size_t steps) {
    lits_.push_back(n.literal);
    const Extension* ext = n.extension();
    if (path_.size() > 1 && ext) {
      std::vector<Tokens> targets;
      Tokens prefix;
      chains(n, steps, prefix, targets);
      for (auto& t : targets) {
        PathExample e = base(kind, steps);
        if (kind == ExampleKind::Literals) {
          e.source = literal_path_tokens(lits_, proof_.symbols(), opts_);
          e.input_length = lits_.size();
        } else {
          e.source = clauses_;
          e.input_length = clauses_.size();
        }
        e.target = std::move(t);
        out_.push_back(std::move(e));
      }
    }
    if (ext) {
      clauses_.push_back(ext->clause);
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        path_.push_back(i);
        visit_choice(n.children[i], kind, steps);
        path_.pop_back();
      }
      clauses_.pop_back();
    }
    lits_.pop_back();
  }

  void visit_conjecture(const TableauNode& n) {
    const SymbolTable& symbols = proof_.symbols();
    if (!lits_.empty()) {
      PathExample e = base(ExampleKind::Conjecture, 1);
      e.source = literal_path_tokens(lits_, symbols, opts_);
      e.input_length = lits_.size();
      e.target = tokenize_literal(normalize(n.literal, symbols, opts_.is_skolem), symbols);
      out_.push_back(std::move(e));
    }
    lits_.push_back(n.literal);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      path_.push_back(i);
      visit_conjecture(n.children[i]);
      path_.pop_back();
    }
    lits_.pop_back();
  }

  const CheckedProof& proof_;
  const ExtractOptions& opts_;
  std::vector<Literal> lits_;
  Tokens clauses_;
  NodePath path_;
  std::vector<PathExample> out_;
};

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw CorpusFormatError("cannot write " + p.string());
  return os;
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw CorpusFormatError("cannot read " + p.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(is, line);) lines.push_back(std::move(line));
  return lines;
}

NodePath parse_node_path(const std::string& s) {
  NodePath out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t dot = std::min(s.find('.', pos), s.size());
    out.push_back(std::stoul(s.substr(pos, dot - pos)));
    pos = dot + 1;
  }
  return out;
}

}  // namespace

std::vector<PathExample> extract_clause_choice_examples(const CheckedProof& p, ExampleKind kind, std::size_t steps,
                                                        const ExtractOptions& opts) {
  if (kind == ExampleKind::Conjecture) throw std::invalid_argument("conjecture is not a clause-choice kind");
  if (steps == 0) throw std::invalid_argument("steps must be positive");
  return Walker(p, opts).clause_choice(kind, steps);
}

std::vector<PathExample> extract_conjecturing_examples(const CheckedProof& p, const ExtractOptions& opts) {
  return Walker(p, opts).conjecture();
}

void write_corpus(const std::vector<PathExample>& examples, const std::filesystem::path& stem) {
  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
  auto src = open_out(stem.string() + ".src");
  auto tgt = open_out(stem.string() + ".tgt");
  auto meta = open_out(stem.string() + ".meta");
  for (const auto& e : examples) {
    src << join_tokens(e.source) << '\n';
    tgt << join_tokens(e.target) << '\n';
    meta << e.problem << ' ' << e.proof << ' ' << to_string(e.node) << ' ' << e.input_length << ' '
         << to_string(e.kind) << ' ' << e.steps << '\n';
  }
  if (!src || !tgt || !meta) throw CorpusFormatError("write failed for " + stem.string());
}

std::vector<PathExample> read_corpus(const std::filesystem::path& stem) {
  const auto src = read_lines(stem.string() + ".src");
  const auto tgt = read_lines(stem.string() + ".tgt");
  const auto meta = read_lines(stem.string() + ".meta");
  if (src.size() != tgt.size() || src.size() != meta.size()) {
    throw CorpusFormatError(stem.string() + ": aligned files differ in length (" + std::to_string(src.size()) + "/" +
                            std::to_string(tgt.size()) + "/" + std::to_string(meta.size()) + " lines)");
  }
  std::vector<PathExample> out;
  out.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    PathExample e;
    e.source = split_tokens(src[i]);
    e.target = split_tokens(tgt[i]);
    std::istringstream in(meta[i]);
    std::string node, kind, extra;
    if (!(in >> e.problem >> e.proof >> node >> e.input_length >> kind >> e.steps) || (in >> extra)) {
      throw CorpusFormatError(stem.string() + ".meta line " + std::to_string(i + 1) + ": malformed");
    }
    try {
      e.node = parse_node_path(node);
      e.kind = parse_example_kind(kind);
    } catch (const std::exception&) {
      throw CorpusFormatError(stem.string() + ".meta line " + std::to_string(i + 1) + ": malformed");
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace ctg
