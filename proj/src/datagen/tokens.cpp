#include "ctg/datagen/tokens.hpp"

#include <sstream>

namespace ctg {

namespace {

bool is_punct(const std::string& t) { return t == "(" || t == ")" || t == "," || t == "=" || t == "~"; }

void emit(Tokens& out, const Term& t, const SymbolTable& symbols) {
  if (t.is_var()) {
    out.push_back(symbols.name(SymbolTable::kVar));
    return;
  }
  out.push_back(symbols.name(t.functor()));
  if (t.args().empty()) return;
  out.push_back("(");
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out.push_back(",");
    emit(out, t.args()[i], symbols);
  }
  out.push_back(")");
}

class Reader {
 public:
  Reader(const Tokens& tokens, SymbolTable& symbols) : t_(tokens), symbols_(symbols) {}

  std::optional<Literal> literal() {
    bool positive = true;
    if (at("~")) {
      positive = false;
      ++pos_;
    }
    auto lhs = term();
    if (!lhs) return std::nullopt;
    if (at("=")) {
      ++pos_;
      auto rhs = term();
      if (!rhs) return std::nullopt;
      std::vector<Term> args{std::move(*lhs), std::move(*rhs)};
      return done(Literal{positive, Term::app(SymbolTable::kEquals, std::move(args))});
    }
    return done(Literal{positive, std::move(*lhs)});
  }

 private:
  bool at(const char* s) const { return pos_ < t_.size() && t_[pos_] == s; }

  std::optional<Literal> done(Literal l) {
    if (pos_ != t_.size()) return std::nullopt;
    return l;
  }

  std::optional<Term> term() {
    if (pos_ >= t_.size() || is_punct(t_[pos_]) || t_[pos_].empty() || t_[pos_].front() == '<' ||
        t_[pos_] == kLiteralSeparator) {
      return std::nullopt;
    }
    const std::string& name = t_[pos_++];
    std::vector<Term> args;
    if (at("(")) {
      ++pos_;
      while (true) {
        auto a = term();
        if (!a) return std::nullopt;
        args.push_back(std::move(*a));
        if (at(",")) {
          ++pos_;
          continue;
        }
        if (at(")")) {
          ++pos_;
          break;
        }
        return std::nullopt;
      }
    }
    try {
      const SymbolId id = symbols_.intern(name, args.size());
      return Term::app(id, std::move(args));
    } catch (const ArityError&) {
      return std::nullopt;
    }
  }

  const Tokens& t_;
  SymbolTable& symbols_;
  std::size_t pos_ = 0;
};

}  // namespace

Tokens tokenize_literal(const Literal& l, const SymbolTable& symbols) {
  Tokens out;
  if (!l.positive) out.push_back("~");
  const Term& a = l.atom;
  if (!a.is_var() && a.functor() == SymbolTable::kEquals && a.args().size() == 2) {
    emit(out, a.args()[0], symbols);
    out.push_back("=");
    emit(out, a.args()[1], symbols);
  } else {
    emit(out, a, symbols);
  }
  return out;
}

std::optional<Literal> detokenize_literal(const Tokens& tokens, SymbolTable& symbols) {
  return Reader(tokens, symbols).literal();
}

Tokens lex_literal(std::string_view text) {
  Tokens out;
  std::string word;
  bool negated_eq = false;
  auto flush = [&] {
    if (!word.empty()) out.push_back(std::move(word));
    word.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '!' && i + 1 < text.size() && text[i + 1] == '=') {
      flush();
      out.push_back("=");
      negated_eq = true;
      ++i;
    } else if (c == '(' || c == ')' || c == ',' || c == '=' || c == '~') {
      flush();
      out.emplace_back(1, c);
    } else if (c == ' ' || c == '\t' || c == '\n') {
      flush();
    } else {
      word.push_back(c);
    }
  }
  flush();
  if (negated_eq) out.insert(out.begin(), "~");
  return out;
}

std::string join_tokens(const Tokens& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

Tokens split_tokens(const std::string& line) {
  Tokens out;
  std::istringstream in(line);
  for (std::string t; in >> t;) out.push_back(std::move(t));
  return out;
}

}  // namespace ctg
