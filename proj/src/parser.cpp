#include <cctype>

#include "mluc/errors.hpp"
#include "mluc/frontend.hpp"

namespace mluc {

ExprPtr Expr::var(std::string name) {
  return std::make_shared<const Expr>(Expr{Kind::Var, std::move(name), nullptr, nullptr});
}

ExprPtr Expr::empty() { return std::make_shared<const Expr>(Expr{Kind::Empty, {}, nullptr, nullptr}); }

ExprPtr Expr::binary(Kind kind, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const Expr>(Expr{kind, {}, std::move(lhs), std::move(rhs)});
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Var: return a.name == b.name;
    case Expr::Kind::Empty: return true;
    default: return *a.lhs == *b.lhs && *a.rhs == *b.rhs;
  }
}

bool operator==(const Atom& a, const Atom& b) {
  return a.kind == b.kind && *a.lhs == *b.lhs && *a.rhs == *b.rhs;
}

Atom negate(const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::Eq: return {Atom::Kind::Neq, a.lhs, a.rhs};
    case Atom::Kind::Neq: return {Atom::Kind::Eq, a.lhs, a.rhs};
    case Atom::Kind::Sub: return {Atom::Kind::NotSub, a.lhs, a.rhs};
    case Atom::Kind::NotSub: return {Atom::Kind::Sub, a.lhs, a.rhs};
  }
  return a;
}

FormulaPtr Formula::atom_of(Atom a) {
  return std::make_shared<const Formula>(Formula{Kind::AtomF, std::move(a), nullptr, nullptr});
}

FormulaPtr Formula::negation(FormulaPtr f) {
  return std::make_shared<const Formula>(Formula{Kind::Not, {}, std::move(f), nullptr});
}

FormulaPtr Formula::binary(Kind kind, FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<const Formula>(Formula{kind, {}, std::move(lhs), std::move(rhs)});
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Formula::Kind::AtomF: return a.atom == b.atom;
    case Formula::Kind::Not: return *a.lhs == *b.lhs;
    default: return *a.lhs == *b.lhs && *a.rhs == *b.rhs;
  }
}

namespace {

enum class Tok {
  Ident, Zero, LParen, RParen, Plus, Minus, Amp, Star,
  Eq, Neq, Le, AndAnd, OrOr, Bang, Arrow, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;  // 1-based
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Zero: return "'0'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Amp: return "'&'";
    case Tok::Star: return "'*'";
    case Tok::Eq: return "'='";
    case Tok::Neq: return "'!='";
    case Tok::Le: return "'<='";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Bang: return "'!'";
    case Tok::Arrow: return "'->'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto two = [&](char a, char b) { return i + 1 < s.size() && s[i] == a && s[i + 1] == b; };
  while (i < s.size()) {
    const char c = s[i];
    const std::size_t pos = i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i + 1;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), pos});
      i = j;
      continue;
    }
    if (two('!', '=')) { out.push_back({Tok::Neq, "!=", pos}); i += 2; continue; }
    if (two('<', '=')) { out.push_back({Tok::Le, "<=", pos}); i += 2; continue; }
    if (two('&', '&')) { out.push_back({Tok::AndAnd, "&&", pos}); i += 2; continue; }
    if (two('|', '|')) { out.push_back({Tok::OrOr, "||", pos}); i += 2; continue; }
    if (two('-', '>')) { out.push_back({Tok::Arrow, "->", pos}); i += 2; continue; }
    switch (c) {
      case '0': out.push_back({Tok::Zero, "0", pos}); break;
      case '(': out.push_back({Tok::LParen, "(", pos}); break;
      case ')': out.push_back({Tok::RParen, ")", pos}); break;
      case '+': out.push_back({Tok::Plus, "+", pos}); break;
      case '-': out.push_back({Tok::Minus, "-", pos}); break;
      case '&': out.push_back({Tok::Amp, "&", pos}); break;
      case '*': out.push_back({Tok::Star, "*", pos}); break;
      case '=': out.push_back({Tok::Eq, "=", pos}); break;
      case '!': out.push_back({Tok::Bang, "!", pos}); break;
      default: throw SyntaxError(pos, "a token");
    }
    ++i;
  }
  out.push_back({Tok::End, "", s.size() + 1});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  FormulaPtr formula_to_end() {
    auto f = formula();
    expect(Tok::End);
    return f;
  }

  ExprPtr expr_to_end() {
    auto e = expr();
    expect(Tok::End);
    return e;
  }

 private:
  const Token& peek() const { return toks_[idx_]; }
  bool accept(Tok t) {
    if (peek().kind != t) return false;
    ++idx_;
    return true;
  }
  void expect(Tok t) {
    if (!accept(t)) throw SyntaxError(peek().pos, describe(t));
  }

  FormulaPtr formula() { return imp(); }

  FormulaPtr imp() {
    auto lhs = disj();
    if (accept(Tok::Arrow)) return Formula::binary(Formula::Kind::Implies, lhs, imp());
    return lhs;
  }

  FormulaPtr disj() {
    auto f = conj();
    while (accept(Tok::OrOr)) f = Formula::binary(Formula::Kind::Or, f, conj());
    return f;
  }

  FormulaPtr conj() {
    auto f = lit();
    while (accept(Tok::AndAnd)) f = Formula::binary(Formula::Kind::And, f, lit());
    return f;
  }

  FormulaPtr lit() {
    if (accept(Tok::Bang)) return Formula::negation(lit());
    if (peek().kind == Tok::LParen) {
      // "(" may open a parenthesized formula or the first operand of an atom.
      const std::size_t saved = idx_;
      try {
        ++idx_;
        auto f = formula();
        expect(Tok::RParen);
        return f;
      } catch (const SyntaxError& first) {
        idx_ = saved;
        try {
          return Formula::atom_of(atom());
        } catch (const SyntaxError& second) {
          if (first.position() > second.position()) throw first;
          throw;
        }
      }
    }
    return Formula::atom_of(atom());
  }

  Atom atom() {
    auto lhs = expr();
    Atom::Kind kind;
    if (accept(Tok::Eq)) kind = Atom::Kind::Eq;
    else if (accept(Tok::Neq)) kind = Atom::Kind::Neq;
    else if (accept(Tok::Le)) kind = Atom::Kind::Sub;
    else throw SyntaxError(peek().pos, "'=', '!=' or '<='");
    return Atom{kind, lhs, expr()};
  }

  ExprPtr expr() {
    auto e = term();
    while (true) {
      if (accept(Tok::Plus)) e = Expr::binary(Expr::Kind::Union, e, term());
      else if (accept(Tok::Minus)) e = Expr::binary(Expr::Kind::Diff, e, term());
      else return e;
    }
  }

  ExprPtr term() {
    auto e = factor();
    while (true) {
      if (accept(Tok::Amp)) e = Expr::binary(Expr::Kind::Inter, e, factor());
      else if (accept(Tok::Star)) e = Expr::binary(Expr::Kind::Prod, e, factor());
      else return e;
    }
  }

  ExprPtr factor() {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      ++idx_;
      return Expr::var(t.text);
    }
    if (accept(Tok::Zero)) return Expr::empty();
    if (accept(Tok::LParen)) {
      auto e = expr();
      expect(Tok::RParen);
      return e;
    }
    throw SyntaxError(t.pos, "identifier, '0' or '('");
  }

  std::vector<Token> toks_;
  std::size_t idx_ = 0;
};

const char* op_text(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Union: return " + ";
    case Expr::Kind::Diff: return " - ";
    case Expr::Kind::Inter: return " & ";
    case Expr::Kind::Prod: return " * ";
    default: return "";
  }
}

bool is_binary(const Expr& e) { return e.kind != Expr::Kind::Var && e.kind != Expr::Kind::Empty; }

std::string operand(const Expr& e) { return is_binary(e) ? "(" + print(e) + ")" : print(e); }

std::string operand(const Formula& f) {
  return f.kind == Formula::Kind::AtomF ? print(f) : "(" + print(f) + ")";
}

}  // namespace

FormulaPtr parse(std::string_view text) { return Parser(text).formula_to_end(); }

ExprPtr parse_expr(std::string_view text) { return Parser(text).expr_to_end(); }

std::string print(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Var: return e.name;
    case Expr::Kind::Empty: return "0";
    default: return operand(*e.lhs) + op_text(e.kind) + operand(*e.rhs);
  }
}

std::string print(const Atom& a) {
  const char* rel = "";
  switch (a.kind) {
    case Atom::Kind::Eq: rel = " = "; break;
    case Atom::Kind::Neq: rel = " != "; break;
    case Atom::Kind::Sub: rel = " <= "; break;
    case Atom::Kind::NotSub: return "!(" + print(*a.lhs) + " <= " + print(*a.rhs) + ")";
  }
  return print(*a.lhs) + rel + print(*a.rhs);
}

std::string print(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::AtomF:
      return print(f.atom);
    case Formula::Kind::Not:
      return "!(" + print(*f.lhs) + ")";
    case Formula::Kind::And:
      return operand(*f.lhs) + " && " + operand(*f.rhs);
    case Formula::Kind::Or:
      return operand(*f.lhs) + " || " + operand(*f.rhs);
    case Formula::Kind::Implies:
      return operand(*f.lhs) + " -> " + operand(*f.rhs);
  }
  return {};
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Var) out.insert(e.name);
  if (e.lhs) collect_vars(*e.lhs, out);
  if (e.rhs) collect_vars(*e.rhs, out);
}

void collect_vars(const Formula& f, std::set<std::string>& out) {
  if (f.kind == Formula::Kind::AtomF) {
    collect_vars(*f.atom.lhs, out);
    collect_vars(*f.atom.rhs, out);
    return;
  }
  if (f.lhs) collect_vars(*f.lhs, out);
  if (f.rhs) collect_vars(*f.rhs, out);
}

std::set<std::string> vars_of(const Formula& f) {
  std::set<std::string> out;
  collect_vars(f, out);
  return out;
}

}  // namespace mluc
