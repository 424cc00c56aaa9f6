#include "ctg/fol/normalize.hpp"

#include <algorithm>

namespace ctg {

SkolemDetector prefix_detector(std::vector<std::string> prefixes) {
  return [prefixes = std::move(prefixes)](std::string_view name) {
    return std::any_of(prefixes.begin(), prefixes.end(),
                       [name](const std::string& p) { return name.starts_with(p); });
  };
}

const std::vector<std::string>& default_skolem_prefixes() {
  static const std::vector<std::string> prefixes{"esk", "skolem", "sk"};
  return prefixes;
}

namespace {

Term normalize_arg(const Term& t, const SymbolTable& symbols, const SkolemDetector& is_skolem) {
  if (t.is_var()) return Term::app(SymbolTable::kVar);
  if (is_skolem(symbols.name(t.functor()))) return Term::app(SymbolTable::kSklm);
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(normalize_arg(a, symbols, is_skolem));
  return Term::app(t.functor(), std::move(args));
}

bool arg_normalized(const Term& t, const SymbolTable& symbols, const SkolemDetector& is_skolem) {
  if (t.is_var()) return false;
  if (t.functor() != SymbolTable::kSklm && is_skolem(symbols.name(t.functor()))) return false;
  return std::all_of(t.args().begin(), t.args().end(),
                     [&](const Term& a) { return arg_normalized(a, symbols, is_skolem); });
}

}  // namespace

Literal normalize(const Literal& lit, const SymbolTable& symbols, const SkolemDetector& is_skolem) {
  std::vector<Term> args;
  args.reserve(lit.atom.args().size());
  for (const auto& a : lit.atom.args()) args.push_back(normalize_arg(a, symbols, is_skolem));
  return {lit.positive, Term::app(lit.atom.functor(), std::move(args))};
}

bool is_normalized(const Literal& lit, const SymbolTable& symbols, const SkolemDetector& is_skolem) {
  if (lit.atom.is_var()) return false;
  return std::all_of(lit.atom.args().begin(), lit.atom.args().end(),
                     [&](const Term& a) { return arg_normalized(a, symbols, is_skolem); });
}

}  // namespace ctg
