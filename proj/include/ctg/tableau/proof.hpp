#pragma once

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ctg/fol/matrix.hpp"

namespace ctg {

struct OpenLeaf {
  friend bool operator==(const OpenLeaf&, const OpenLeaf&) = default;
};

/// Closed against the ancestor at `ancestor_depth` (roots have depth 1).
struct Reduction {
  std::size_t ancestor_depth = 0;
  friend bool operator==(const Reduction&, const Reduction&) = default;
};

/// Expanded with an instance of `clause`, connecting its literal
/// `literal_index` to this node.
struct Extension {
  std::string clause;
  std::size_t literal_index = 0;
  friend bool operator==(const Extension&, const Extension&) = default;
};

using Closure = std::variant<OpenLeaf, Reduction, Extension>;

/// A tableau node. For an extension, `children` holds the clause instance
/// without the connecting literal, in clause order.
struct TableauNode {
  Literal literal;
  Closure closure = OpenLeaf{};
  std::vector<TableauNode> children;

  bool is_extension() const { return std::holds_alternative<Extension>(closure); }
  const Extension* extension() const { return std::get_if<Extension>(&closure); }
  friend bool operator==(const TableauNode&, const TableauNode&) = default;
};

/// A connection tableau with the final substitution applied to every
/// literal. Remaining variables are rigid and print as `X_<id>`.
struct ProofTree {
  std::string problem_id;
  std::string start_clause;
  std::vector<TableauNode> roots;

  friend bool operator==(const ProofTree&, const ProofTree&) = default;
};

/// Position of a node: root index followed by child indices.
using NodePath = std::vector<std::size_t>;
std::string to_string(const NodePath& path);

struct CheckResult {
  enum class Condition : char {
    None = '-',
    ClauseInstance = 'a',
    ExtensionChildren = 'b',
    Reduction = 'c',
    Closed = 'd',
  };

  Condition violated = Condition::None;
  NodePath node;
  std::string message;

  bool accepted() const { return violated == Condition::None; }
  std::string describe() const;
};

/// Accepts iff (a) the start clause and every extension clause are
/// instances of matrix clauses, (b) extension children are exactly the
/// remaining literals of the cited instance, (c) every reduction cites an
/// ancestor holding the exact complement and (d) no leaf is open.
CheckResult check_proof(const Matrix& m, const ProofTree& p);

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A proof tree that passed check_proof against its matrix. Only
/// `certify` creates one, so consumers need not re-check.
class CheckedProof {
 public:
  const ProofTree& tree() const { return tree_; }
  const SymbolTable& symbols() const { return *symbols_; }
  const std::shared_ptr<const SymbolTable>& symbols_ptr() const { return symbols_; }
  /// Distinguishes several proofs of one problem.
  std::size_t proof_index() const { return proof_index_; }

 private:
  friend CheckedProof certify(const Matrix&, ProofTree, std::size_t);
  CheckedProof(ProofTree t, std::shared_ptr<const SymbolTable> s, std::size_t index)
      : tree_(std::move(t)), symbols_(std::move(s)), proof_index_(index) {}

  ProofTree tree_;
  std::shared_ptr<const SymbolTable> symbols_;
  std::size_t proof_index_;
};

/// Runs check_proof; throws PreconditionError describing the first
/// violation when the tree is rejected.
CheckedProof certify(const Matrix& m, ProofTree p, std::size_t proof_index = 0);

struct ExpansionRecord {
  NodePath node;
  std::string clause;
};

/// One entry per extension-closed node in depth-first preorder.
std::vector<ExpansionRecord> record_expansions(const CheckedProof& p);

class ProofFormatError : public std::runtime_error {
 public:
  ProofFormatError(const std::string& message, std::size_t line)
      : std::runtime_error("proof line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Line format, after a leading `v1` line:
///   proof <problem-id> <start-clause-id>
///   <depth> <literal> [ext <clause-id> <lit-idx> | red <ancestor-depth>]
/// Nodes are in preorder. An extension's children are the whole clause
/// instance; the connecting literal is a leaf with no closure field.
void write_proofs(std::ostream& os, const Matrix& m, const std::vector<ProofTree>& proofs);
std::string write_proofs(const Matrix& m, const std::vector<ProofTree>& proofs);
std::vector<ProofTree> read_proofs(std::istream& is, const Matrix& m);
std::vector<ProofTree> read_proofs(const std::string& text, const Matrix& m);

}  // namespace ctg
