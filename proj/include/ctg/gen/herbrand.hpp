#pragma once

#include <cstddef>
#include <vector>

#include "ctg/fol/matrix.hpp"

namespace ctg {

/// Propositional clauses over atoms 1..n; a negative number is a negated atom.
using PropClauses = std::vector<std::vector<int>>;

/// DPLL with unit propagation.
bool dpll_satisfiable(const PropClauses& clauses);

enum class GroundVerdict {
  Unsatisfiable,
  /// The ground instances over the bounded universe are satisfiable. Says
  /// nothing about the full Herbrand universe.
  SatisfiableOnUniverse,
  /// More instances than the cap.
  TooLarge,
};

const char* to_string(GroundVerdict v);

struct GroundCheck {
  GroundVerdict verdict = GroundVerdict::TooLarge;
  std::size_t universe = 0;
  std::size_t ground_clauses = 0;
  std::size_t atoms = 0;
};

/// Instantiates every clause over the ground subterms occurring in the
/// matrix (or a single dummy constant when there are none) and runs DPLL.
/// Unsatisfiable is sound: a finite unsatisfiable set of ground instances
/// refutes the matrix. Equality is an uninterpreted predicate, as in the
/// prover.
GroundCheck ground_check(const Matrix& m, std::size_t max_instances = 200000);

}  // namespace ctg
