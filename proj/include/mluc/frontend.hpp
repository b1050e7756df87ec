#ifndef MLUC_FRONTEND_HPP
#define MLUC_FRONTEND_HPP

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mluc {

// ---------------------------------------------------------------------------
// Surface syntax
//
//   formula := imp
//   imp     := or ("->" imp)?
//   or      := and ("||" and)*
//   and     := lit ("&&" lit)*
//   lit     := "!" lit | "(" formula ")" | atom
//   atom    := expr ("=" | "!=" | "<=") expr
//   expr    := term (("+" | "-") term)*
//   term    := factor (("&" | "*") factor)*
//   factor  := ident | "0" | "(" expr ")"
//
// '+' union, '-' difference, '&' intersection, '*' unordered product,
// '0' the empty set.
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Var, Empty, Union, Inter, Diff, Prod };
  Kind kind;
  std::string name;  // Var only
  ExprPtr lhs, rhs;  // binary kinds only

  static ExprPtr var(std::string name);
  static ExprPtr empty();
  static ExprPtr binary(Kind kind, ExprPtr lhs, ExprPtr rhs);
};

bool operator==(const Expr& a, const Expr& b);

struct Atom {
  enum class Kind { Eq, Neq, Sub, NotSub };
  Kind kind;
  ExprPtr lhs, rhs;
};

bool operator==(const Atom& a, const Atom& b);
Atom negate(const Atom& a);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { AtomF, Not, And, Or, Implies };
  Kind kind;
  Atom atom;             // AtomF only
  FormulaPtr lhs, rhs;   // Not uses lhs

  static FormulaPtr atom_of(Atom a);
  static FormulaPtr negation(FormulaPtr f);
  static FormulaPtr binary(Kind kind, FormulaPtr lhs, FormulaPtr rhs);
};

bool operator==(const Formula& a, const Formula& b);

/// Throws SyntaxError with a 1-based offset.
FormulaPtr parse(std::string_view text);
ExprPtr parse_expr(std::string_view text);

std::string print(const Expr& e);
std::string print(const Atom& a);
std::string print(const Formula& f);

void collect_vars(const Expr& e, std::set<std::string>& out);
void collect_vars(const Formula& f, std::set<std::string>& out);
std::set<std::string> vars_of(const Formula& f);

// ---------------------------------------------------------------------------
// Disjunctive normal form
// ---------------------------------------------------------------------------

using Branch = std::vector<Atom>;

inline constexpr std::size_t kDefaultDnfCap = 4096;

/// Branches whose disjunction is equivalent to f.  Throws SizeLimit when the
/// branch count would exceed cap.
std::vector<Branch> to_dnf(const Formula& f, std::size_t cap = kDefaultDnfCap);

// ---------------------------------------------------------------------------
// Normalized conjunctions
// ---------------------------------------------------------------------------

struct NormAtom {
  enum class Kind { UnionA, DiffA, ProdEq, ProdSub, NonEmpty };
  Kind kind;
  std::string x, y, z;  // NonEmpty uses x only

  static NormAtom union_of(std::string x, std::string y, std::string z);
  static NormAtom diff_of(std::string x, std::string y, std::string z);
  static NormAtom prod_eq(std::string x, std::string y, std::string z);
  static NormAtom prod_sub(std::string x, std::string y, std::string z);
  static NormAtom non_empty(std::string x);

  bool is_product() const { return kind == Kind::ProdEq || kind == Kind::ProdSub; }

  friend auto operator<=>(const NormAtom&, const NormAtom&) = default;
};

std::string print(const NormAtom& a);

struct NormConj {
  std::vector<NormAtom> atoms;
  std::set<std::string> original_vars;
  std::vector<std::string> fresh_vars;  // creation order: _f0, _f1, ...

  /// Original variables (sorted) followed by fresh ones in creation order.
  std::vector<std::string> variables() const;
};

std::string print(const NormConj& c);

/// Rewrites one DNF branch into an equisatisfiable conjunction of
/// union/difference/product/non-emptiness atoms over variables.
/// `extra_vars` are added to original_vars (e.g. the other variables of the
/// whole formula, so that models cover them).
NormConj normalize_branch(const Branch& branch, const std::set<std::string>& extra_vars = {});

}  // namespace mluc

#endif  // MLUC_FRONTEND_HPP
