#include "ctg/fol/tptp.hpp"

#include <cctype>
#include <map>

namespace ctg {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { LowerWord, UpperWord, LParen, RParen, Comma, Dot, Pipe, Tilde, Eq, Neq, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    const std::size_t line = line_, col = col_;
    if (pos_ >= text_.size()) return {Tok::End, "", line, col};
    const char c = text_[pos_];
    auto single = [&](Tok k) {
      advance();
      return Token{k, std::string(1, c), line, col};
    };
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case ',': return single(Tok::Comma);
      case '.': return single(Tok::Dot);
      case '|': return single(Tok::Pipe);
      case '~': return single(Tok::Tilde);
      case '=': return single(Tok::Eq);
      case '!':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
          advance();
          advance();
          return {Tok::Neq, "!=", line, col};
        }
        break;
      default: break;
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        advance();
      }
      std::string word(text_.substr(start, pos_ - start));
      const bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
      return {upper ? Tok::UpperWord : Tok::LowerWord, std::move(word), line, col};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

const char* describe(Tok k) {
  switch (k) {
    case Tok::LowerWord: return "name";
    case Tok::UpperWord: return "variable";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Pipe: return "'|'";
    case Tok::Tilde: return "'~'";
    case Tok::Eq: return "'='";
    case Tok::Neq: return "'!='";
    case Tok::End: return "end of input";
  }
  return "?";
}

using SymbolSink = std::function<SymbolId(const std::string&, std::size_t, const Token&)>;

class Parser {
 public:
  Parser(std::string_view text, SymbolSink symbols, VarResolver vars)
      : lexer_(text), symbols_(std::move(symbols)), vars_(std::move(vars)) {
    look_ = lexer_.next();
  }

  const Token& peek() const { return look_; }

  Token expect(Tok k) {
    if (look_.kind != k) {
      throw ParseError(std::string("expected ") + describe(k) + ", found " + describe(look_.kind) +
                           (look_.text.empty() ? "" : " '" + look_.text + "'"),
                       look_.line, look_.column);
    }
    Token t = std::move(look_);
    look_ = lexer_.next();
    return t;
  }

  bool accept(Tok k) {
    if (look_.kind != k) return false;
    look_ = lexer_.next();
    return true;
  }

  Term term() {
    if (look_.kind == Tok::UpperWord) {
      Token v = expect(Tok::UpperWord);
      return Term::var(vars_(v.text));
    }
    Token f = expect(Tok::LowerWord);
    std::vector<Term> args;
    if (accept(Tok::LParen)) {
      do {
        args.push_back(term());
      } while (accept(Tok::Comma));
      expect(Tok::RParen);
    }
    const SymbolId id = symbols_(f.text, args.size(), f);
    return Term::app(id, std::move(args));
  }

  Literal literal() {
    bool positive = true;
    while (accept(Tok::Tilde)) positive = !positive;
    if (accept(Tok::LParen)) {
      Literal inner = literal();
      expect(Tok::RParen);
      if (!positive) inner.positive = !inner.positive;
      return inner;
    }
    const Token start = look_;
    Term lhs = term();
    if (look_.kind == Tok::Eq || look_.kind == Tok::Neq) {
      if (look_.kind == Tok::Neq) positive = !positive;
      Token op = look_;
      look_ = lexer_.next();
      Term rhs = term();
      std::vector<Term> args;
      args.push_back(std::move(lhs));
      args.push_back(std::move(rhs));
      const SymbolId eq = symbols_("=", 2, op);
      return {positive, Term::app(eq, std::move(args))};
    }
    if (lhs.is_var()) throw ParseError("a variable cannot be an atom", start.line, start.column);
    return {positive, std::move(lhs)};
  }

  std::vector<Literal> disjunction() {
    std::vector<Literal> lits;
    if (accept(Tok::LParen)) {
      lits = disjunction();
      expect(Tok::RParen);
      return lits;
    }
    do {
      lits.push_back(literal());
    } while (accept(Tok::Pipe));
    return lits;
  }

 private:
  Lexer lexer_;
  Token look_;
  SymbolSink symbols_;
  VarResolver vars_;
};

}  // namespace

Matrix parse_tptp_cnf(std::string_view text) {
  auto table = std::make_shared<SymbolTable>();
  std::vector<std::string> var_names;
  std::map<std::string, VarId, std::less<>> clause_vars;

  auto sink = [&](const std::string& name, std::size_t arity, const Token& at) {
    try {
      return table->intern(name, arity);
    } catch (const ArityError& e) {
      throw ParseError(e.what(), at.line, at.column);
    }
  };
  auto vars = [&](std::string_view name) {
    if (auto it = clause_vars.find(name); it != clause_vars.end()) return it->second;
    const auto id = static_cast<VarId>(var_names.size());
    var_names.emplace_back(name);
    clause_vars.emplace(std::string(name), id);
    return id;
  };

  Parser p(text, sink, vars);
  std::vector<Clause> clauses;
  while (p.peek().kind != Tok::End) {
    Token kw = p.expect(Tok::LowerWord);
    if (kw.text != "cnf") throw ParseError("expected 'cnf', found '" + kw.text + "'", kw.line, kw.column);
    clause_vars.clear();
    p.expect(Tok::LParen);
    Token name = p.peek();
    if (name.kind != Tok::LowerWord && name.kind != Tok::UpperWord) p.expect(Tok::LowerWord);
    p.accept(name.kind);
    p.expect(Tok::Comma);
    Token role = p.expect(Tok::LowerWord);
    p.expect(Tok::Comma);
    std::vector<Literal> lits = p.disjunction();
    p.expect(Tok::RParen);
    p.expect(Tok::Dot);
    for (const auto& c : clauses) {
      if (c.name == name.text) throw ParseError("duplicate clause name '" + name.text + "'", name.line, name.column);
    }
    clauses.push_back(Clause{name.text, role.text, std::move(lits)});
  }
  return Matrix(std::move(clauses), std::move(table), std::move(var_names));
}

Literal parse_literal(std::string_view text, const SymbolTable& symbols, const VarResolver& vars) {
  auto sink = [&](const std::string& name, std::size_t arity, const Token& at) -> SymbolId {
    auto id = symbols.find(name);
    if (!id) throw ParseError("unknown symbol '" + name + "'", at.line, at.column);
    if (symbols.arity(*id) != arity) {
      throw ParseError("symbol '" + name + "' has arity " + std::to_string(symbols.arity(*id)), at.line, at.column);
    }
    return *id;
  };
  Parser p(text, sink, vars);
  Literal l = p.literal();
  p.expect(Tok::End);
  return l;
}

Literal parse_literal(std::string_view text, SymbolTable& symbols, const VarResolver& vars) {
  auto sink = [&](const std::string& name, std::size_t arity, const Token& at) {
    try {
      return symbols.intern(name, arity);
    } catch (const ArityError& e) {
      throw ParseError(e.what(), at.line, at.column);
    }
  };
  Parser p(text, sink, vars);
  Literal l = p.literal();
  p.expect(Tok::End);
  return l;
}

namespace {

void print_term(std::string& out, const Term& t, const SymbolTable& symbols, const VarNamer& names) {
  if (t.is_var()) {
    out += names(t.var_id());
    return;
  }
  out += symbols.name(t.functor());
  if (t.args().empty()) return;
  out += '(';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ',';
    print_term(out, t.args()[i], symbols, names);
  }
  out += ')';
}

VarNamer matrix_namer(const Matrix& m) {
  return [&m](VarId v) { return m.var_name(v); };
}

}  // namespace

std::string print(const Term& t, const SymbolTable& symbols, const VarNamer& names) {
  std::string out;
  print_term(out, t, symbols, names);
  return out;
}

std::string print(const Literal& l, const SymbolTable& symbols, const VarNamer& names) {
  std::string out;
  if (!l.atom.is_var() && l.atom.functor() == SymbolTable::kEquals && l.atom.args().size() == 2) {
    print_term(out, l.atom.args()[0], symbols, names);
    out += l.positive ? " = " : " != ";
    print_term(out, l.atom.args()[1], symbols, names);
    return out;
  }
  if (!l.positive) out += '~';
  print_term(out, l.atom, symbols, names);
  return out;
}

std::string print(const Clause& c, const SymbolTable& symbols, const VarNamer& names) {
  std::string out;
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    if (i) out += " | ";
    out += print(c.literals[i], symbols, names);
  }
  return out;
}

std::string print(const Term& t, const Matrix& m) { return print(t, m.symbols(), matrix_namer(m)); }
std::string print(const Literal& l, const Matrix& m) { return print(l, m.symbols(), matrix_namer(m)); }
std::string print(const Clause& c, const Matrix& m) { return print(c, m.symbols(), matrix_namer(m)); }

std::string print(const Matrix& m) {
  std::string out;
  for (const auto& c : m.clauses()) {
    out += "cnf(" + c.name + "," + c.role + "," + print(c, m) + ").\n";
  }
  return out;
}

}  // namespace ctg
