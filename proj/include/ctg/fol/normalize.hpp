#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ctg/fol/term.hpp"

namespace ctg {

using SkolemDetector = std::function<bool(std::string_view)>;

/// Matches any symbol name starting with one of `prefixes`.
SkolemDetector prefix_detector(std::vector<std::string> prefixes);

/// Prefixes used when none are configured: "esk", "skolem", "sk".
const std::vector<std::string>& default_skolem_prefixes();

/// Replaces every variable by the constant VAR and every argument subterm
/// whose head is a Skolem symbol by the constant SKLM (the whole subterm
/// collapses). The predicate symbol itself is never replaced.
Literal normalize(const Literal& lit, const SymbolTable& symbols, const SkolemDetector& is_skolem);

bool is_normalized(const Literal& lit, const SymbolTable& symbols, const SkolemDetector& is_skolem);

}  // namespace ctg
