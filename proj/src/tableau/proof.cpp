#include "ctg/tableau/proof.hpp"

#include <charconv>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "ctg/fol/substitution.hpp"
#include "ctg/fol/tptp.hpp"

namespace ctg {

std::string to_string(const NodePath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path[i]);
  }
  return out;
}

std::string CheckResult::describe() const {
  if (accepted()) return "accepted";
  return std::string("condition (") + static_cast<char>(violated) + ") at node " +
         (node.empty() ? std::string("<start>") : to_string(node)) + ": " + message;
}

namespace {

std::optional<Instantiation> match_literal(const Literal& pattern, const Literal& instance, Instantiation theta) {
  if (pattern.positive != instance.positive) return std::nullopt;
  return match(pattern.atom, instance.atom, std::move(theta));
}

class Checker {
 public:
  explicit Checker(const Matrix& m) : m_(m) {}

  CheckResult run(const ProofTree& p) {
    const Clause* start = m_.find(p.start_clause);
    if (!start) return fail(CheckResult::Condition::ClauseInstance, {}, "unknown start clause '" + p.start_clause + "'");
    if (start->literals.size() != p.roots.size()) {
      return fail(CheckResult::Condition::ClauseInstance, {}, "start clause has " +
                                                                   std::to_string(start->literals.size()) +
                                                                   " literals but the tableau has " +
                                                                   std::to_string(p.roots.size()) + " roots");
    }
    Instantiation theta;
    for (std::size_t i = 0; i < p.roots.size(); ++i) {
      auto next = match_literal(start->literals[i], p.roots[i].literal, std::move(theta));
      if (!next) return fail(CheckResult::Condition::ClauseInstance, {i}, "root is not an instance of the start clause");
      theta = std::move(*next);
    }
    std::vector<const Literal*> branch;
    for (std::size_t i = 0; i < p.roots.size(); ++i) {
      NodePath path{i};
      if (!node(p.roots[i], branch, path)) return result_;
    }
    return {};
  }

 private:
  bool node(const TableauNode& n, std::vector<const Literal*>& branch, NodePath& path) {
    if (std::holds_alternative<OpenLeaf>(n.closure)) {
      return fail_b(CheckResult::Condition::Closed, path, "open leaf");
    }
    if (const auto* red = std::get_if<Reduction>(&n.closure)) {
      if (red->ancestor_depth == 0 || red->ancestor_depth > branch.size()) {
        return fail_b(CheckResult::Condition::Reduction, path,
                      "reduction cites depth " + std::to_string(red->ancestor_depth) + " outside the branch");
      }
      if (!(*branch[red->ancestor_depth - 1] == n.literal.complement())) {
        return fail_b(CheckResult::Condition::Reduction, path, "cited ancestor is not the complement");
      }
      if (!n.children.empty()) return fail_b(CheckResult::Condition::Closed, path, "reduction-closed node has children");
      return true;
    }

    const auto& ext = std::get<Extension>(n.closure);
    const Clause* c = m_.find(ext.clause);
    if (!c) return fail_b(CheckResult::Condition::ClauseInstance, path, "unknown clause '" + ext.clause + "'");
    if (ext.literal_index >= c->literals.size()) {
      return fail_b(CheckResult::Condition::ClauseInstance, path, "literal index out of range for " + ext.clause);
    }
    auto theta = match_literal(c->literals[ext.literal_index], n.literal.complement(), {});
    if (!theta) {
      return fail_b(CheckResult::Condition::ClauseInstance, path,
                    "connecting literal of " + ext.clause + " does not match the complement");
    }
    if (n.children.size() + 1 != c->literals.size()) {
      return fail_b(CheckResult::Condition::ExtensionChildren, path,
                    "expected " + std::to_string(c->literals.size() - 1) + " children for " + ext.clause);
    }
    for (std::size_t j = 0, k = 0; j < c->literals.size(); ++j) {
      if (j == ext.literal_index) continue;
      theta = match_literal(c->literals[j], n.children[k].literal, std::move(*theta));
      if (!theta) {
        return fail_b(CheckResult::Condition::ExtensionChildren, path,
                      "child " + std::to_string(k) + " does not match literal " + std::to_string(j) + " of " +
                          ext.clause);
      }
      ++k;
    }

    branch.push_back(&n.literal);
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      path.push_back(k);
      const bool ok = node(n.children[k], branch, path);
      path.pop_back();
      if (!ok) return false;
    }
    branch.pop_back();
    return true;
  }

  CheckResult fail(CheckResult::Condition c, NodePath path, std::string msg) {
    return CheckResult{c, std::move(path), std::move(msg)};
  }

  bool fail_b(CheckResult::Condition c, const NodePath& path, std::string msg) {
    result_ = CheckResult{c, path, std::move(msg)};
    return false;
  }

  const Matrix& m_;
  CheckResult result_;
};

void collect_expansions(const TableauNode& n, NodePath& path, std::vector<ExpansionRecord>& out) {
  if (const auto* ext = n.extension()) out.push_back({path, ext->clause});
  for (std::size_t k = 0; k < n.children.size(); ++k) {
    path.push_back(k);
    collect_expansions(n.children[k], path, out);
    path.pop_back();
  }
}

}  // namespace

CheckResult check_proof(const Matrix& m, const ProofTree& p) { return Checker(m).run(p); }

CheckedProof certify(const Matrix& m, ProofTree p, std::size_t proof_index) {
  CheckResult r = check_proof(m, p);
  if (!r.accepted()) throw PreconditionError("proof of " + p.problem_id + " rejected: " + r.describe());
  return CheckedProof(std::move(p), m.symbols_ptr(), proof_index);
}

std::vector<ExpansionRecord> record_expansions(const CheckedProof& p) {
  std::vector<ExpansionRecord> out;
  for (std::size_t i = 0; i < p.tree().roots.size(); ++i) {
    NodePath path{i};
    collect_expansions(p.tree().roots[i], path, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// v1 text format

namespace {

VarNamer proof_namer() {
  return [](VarId v) { return fresh_var_name(v); };
}

void write_node(std::ostream& os, const Matrix& m, const TableauNode& n, std::size_t depth) {
  const auto names = proof_namer();
  os << depth << ' ' << print(n.literal, m.symbols(), names);
  if (const auto* red = std::get_if<Reduction>(&n.closure)) {
    os << " red " << red->ancestor_depth << '\n';
    return;
  }
  const auto* ext = n.extension();
  if (!ext) {
    os << '\n';
    return;
  }
  os << " ext " << ext->clause << ' ' << ext->literal_index << '\n';
  const std::size_t width = n.children.size() + 1;
  for (std::size_t j = 0, k = 0; j < width; ++j) {
    if (j == ext->literal_index) {
      os << depth + 1 << ' ' << print(n.literal.complement(), m.symbols(), names) << '\n';
    } else {
      write_node(os, m, n.children[k++], depth + 1);
    }
  }
}

struct Line {
  std::size_t number;
  std::size_t depth;
  std::string literal;
  Closure closure;
  bool has_closure;
};

std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(std::move(w));
  return out;
}

Line parse_line(const std::vector<std::string>& w, std::size_t number) {
  auto depth = parse_index(w[0]);
  if (!depth || *depth == 0 || w.size() < 2) throw ProofFormatError("expected '<depth> <literal> [closure]'", number);
  Line line{number, *depth, {}, OpenLeaf{}, false};
  std::size_t lit_end = w.size();
  if (w.size() >= 5 && w[w.size() - 3] == "ext" && parse_index(w.back())) {
    line.closure = Extension{w[w.size() - 2], *parse_index(w.back())};
    line.has_closure = true;
    lit_end = w.size() - 3;
  } else if (w.size() >= 4 && w[w.size() - 2] == "red" && parse_index(w.back())) {
    line.closure = Reduction{*parse_index(w.back())};
    line.has_closure = true;
    lit_end = w.size() - 2;
  }
  for (std::size_t i = 1; i < lit_end; ++i) {
    if (i > 1) line.literal += ' ';
    line.literal += w[i];
  }
  return line;
}

class ProofReader {
 public:
  ProofReader(const Matrix& m, std::vector<Line> lines) : m_(m), lines_(std::move(lines)) {}

  std::vector<TableauNode> roots() {
    std::vector<TableauNode> out;
    while (pos_ < lines_.size()) {
      if (lines_[pos_].depth != 1) throw ProofFormatError("expected a root at depth 1", lines_[pos_].number);
      out.push_back(node());
    }
    return out;
  }

 private:
  Literal literal(const Line& l) {
    auto vars = [this](std::string_view name) -> VarId {
      if (name.starts_with("X_")) {
        if (auto id = parse_index(name.substr(2)); id && *id >= m_.var_count()) return static_cast<VarId>(*id);
      }
      auto [it, inserted] = named_.try_emplace(std::string(name), 0);
      if (inserted) it->second = next_named_--;
      return it->second;
    };
    try {
      return parse_literal(l.literal, m_.symbols(), vars);
    } catch (const ParseError& e) {
      throw ProofFormatError(e.what(), l.number);
    }
  }

  TableauNode node() {
    const Line& line = lines_[pos_++];
    TableauNode n{literal(line), line.closure, {}};
    const auto* ext = n.extension();
    if (!ext) return n;
    std::size_t j = 0;
    bool saw_connection = false;
    while (pos_ < lines_.size() && lines_[pos_].depth > line.depth) {
      const Line& child = lines_[pos_];
      if (child.depth != line.depth + 1) throw ProofFormatError("depth jumps by more than one", child.number);
      if (j == ext->literal_index) {
        if (child.has_closure) throw ProofFormatError("connecting literal must not carry a closure", child.number);
        if (!(literal(child) == n.literal.complement())) {
          throw ProofFormatError("connecting literal is not the complement of its parent", child.number);
        }
        saw_connection = true;
        ++pos_;
      } else {
        n.children.push_back(node());
      }
      ++j;
    }
    if (!saw_connection) throw ProofFormatError("extension without its connecting literal", line.number);
    return n;
  }

  const Matrix& m_;
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  std::map<std::string, VarId> named_;
  VarId next_named_ = std::numeric_limits<VarId>::max();
};

}  // namespace

void write_proofs(std::ostream& os, const Matrix& m, const std::vector<ProofTree>& proofs) {
  os << "v1\n";
  for (const auto& p : proofs) {
    os << "proof " << p.problem_id << ' ' << p.start_clause << '\n';
    for (const auto& r : p.roots) write_node(os, m, r, 1);
  }
}

std::string write_proofs(const Matrix& m, const std::vector<ProofTree>& proofs) {
  std::ostringstream os;
  write_proofs(os, m, proofs);
  return os.str();
}

std::vector<ProofTree> read_proofs(std::istream& is, const Matrix& m) {
  std::vector<ProofTree> out;
  std::string text;
  std::size_t number = 0;
  bool versioned = false;
  std::optional<ProofTree> current;
  std::vector<Line> body;

  auto flush = [&] {
    if (!current) return;
    current->roots = ProofReader(m, std::move(body)).roots();
    body.clear();
    out.push_back(std::move(*current));
    current.reset();
  };

  while (std::getline(is, text)) {
    ++number;
    auto w = split_ws(text);
    if (w.empty() || w[0].starts_with('%')) continue;
    if (!versioned) {
      if (w.size() != 1 || w[0] != "v1") throw ProofFormatError("missing 'v1' version tag", number);
      versioned = true;
      continue;
    }
    if (w[0] == "proof") {
      if (w.size() != 3) throw ProofFormatError("expected 'proof <problem-id> <start-clause>'", number);
      flush();
      current = ProofTree{w[1], w[2], {}};
      continue;
    }
    if (!current) throw ProofFormatError("node line before any 'proof' header", number);
    body.push_back(parse_line(w, number));
  }
  if (!versioned) throw ProofFormatError("empty proof file", number);
  flush();
  return out;
}

std::vector<ProofTree> read_proofs(const std::string& text, const Matrix& m) {
  std::istringstream is(text);
  return read_proofs(is, m);
}

}  // namespace ctg
