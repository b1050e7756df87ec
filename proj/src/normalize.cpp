#include <algorithm>
#include <map>

#include "mluc/errors.hpp"
#include "mluc/frontend.hpp"

namespace mluc {

// ---------------------------------------------------------------------------
// DNF
// ---------------------------------------------------------------------------

namespace {

void push_unique(Branch& b, const Atom& a) {
  if (std::find(b.begin(), b.end(), a) == b.end()) b.push_back(a);
}

bool contradictory(const Branch& b) {
  for (const auto& a : b) {
    const Atom na = negate(a);
    if (std::find(b.begin(), b.end(), na) != b.end()) return true;
  }
  return false;
}

// DNF of f (positive) or of !f (negative).  Branches may still hold
// complementary literals; they are dropped by the caller.
std::vector<Branch> dnf(const Formula& f, bool positive, std::size_t cap) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::AtomF:
      return {Branch{positive ? f.atom : negate(f.atom)}};
    case K::Not:
      return dnf(*f.lhs, !positive, cap);
    case K::And:
    case K::Or:
    case K::Implies: {
      // Or(a, b), And(a, b) and Implies(a, b) = Or(!a, b) under polarity.
      const bool lhs_pos = f.kind == K::Implies ? !positive : positive;
      const bool disjunctive = (f.kind == K::And) ? !positive : positive;
      auto l = dnf(*f.lhs, lhs_pos, cap);
      auto r = dnf(*f.rhs, positive, cap);
      if (disjunctive) {
        if (l.size() + r.size() > cap) {
          throw SizeLimit("DNF branch count exceeds cap " + std::to_string(cap));
        }
        l.insert(l.end(), r.begin(), r.end());
        return l;
      }
      std::vector<Branch> out;
      for (const auto& bl : l) {
        for (const auto& br : r) {
          Branch b = bl;
          for (const auto& a : br) push_unique(b, a);
          if (contradictory(b)) continue;
          if (out.size() >= cap) {
            throw SizeLimit("DNF branch count exceeds cap " + std::to_string(cap));
          }
          out.push_back(std::move(b));
        }
      }
      return out;
    }
  }
  return {};
}

}  // namespace

std::vector<Branch> to_dnf(const Formula& f, std::size_t cap) {
  auto raw = dnf(f, true, cap);
  std::vector<Branch> out;
  for (auto& b : raw) {
    Branch clean;
    for (const auto& a : b) push_unique(clean, a);
    if (!contradictory(clean)) out.push_back(std::move(clean));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

NormAtom NormAtom::union_of(std::string x, std::string y, std::string z) {
  return {Kind::UnionA, std::move(x), std::move(y), std::move(z)};
}
NormAtom NormAtom::diff_of(std::string x, std::string y, std::string z) {
  return {Kind::DiffA, std::move(x), std::move(y), std::move(z)};
}
NormAtom NormAtom::prod_eq(std::string x, std::string y, std::string z) {
  return {Kind::ProdEq, std::move(x), std::move(y), std::move(z)};
}
NormAtom NormAtom::prod_sub(std::string x, std::string y, std::string z) {
  return {Kind::ProdSub, std::move(x), std::move(y), std::move(z)};
}
NormAtom NormAtom::non_empty(std::string x) { return {Kind::NonEmpty, std::move(x), {}, {}}; }

std::string print(const NormAtom& a) {
  switch (a.kind) {
    case NormAtom::Kind::UnionA: return a.x + " = " + a.y + " + " + a.z;
    case NormAtom::Kind::DiffA: return a.x + " = " + a.y + " - " + a.z;
    case NormAtom::Kind::ProdEq: return a.x + " = " + a.y + " * " + a.z;
    case NormAtom::Kind::ProdSub: return a.x + " <= " + a.y + " * " + a.z;
    case NormAtom::Kind::NonEmpty: return a.x + " != 0";
  }
  return {};
}

std::vector<std::string> NormConj::variables() const {
  std::vector<std::string> out(original_vars.begin(), original_vars.end());
  out.insert(out.end(), fresh_vars.begin(), fresh_vars.end());
  return out;
}

std::string print(const NormConj& c) {
  std::string s;
  for (const auto& a : c.atoms) {
    if (!s.empty()) s += " && ";
    s += print(a);
  }
  return s.empty() ? "true" : s;
}

namespace {

using EK = Expr::Kind;

bool is_empty(const ExprPtr& e) { return e->kind == EK::Empty; }

// Folds the empty set out of an expression: afterwards 0 occurs only as the
// whole expression.
ExprPtr simplify(const ExprPtr& e) {
  if (e->kind == EK::Var || e->kind == EK::Empty) return e;
  auto l = simplify(e->lhs);
  auto r = simplify(e->rhs);
  switch (e->kind) {
    case EK::Union:
      if (is_empty(l)) return r;
      if (is_empty(r)) return l;
      break;
    case EK::Diff:
      if (is_empty(l)) return l;
      if (is_empty(r)) return l;
      break;
    case EK::Inter:
    case EK::Prod:
      if (is_empty(l)) return l;
      if (is_empty(r)) return r;
      break;
    default:
      break;
  }
  if (l == e->lhs && r == e->rhs) return e;
  return Expr::binary(e->kind, l, r);
}

class Normalizer {
 public:
  explicit Normalizer(NormConj& out) : out_(out) {}

  void atom(const Atom& a) {
    auto lhs = simplify(a.lhs);
    auto rhs = simplify(a.rhs);
    switch (a.kind) {
      case Atom::Kind::Eq: equal(lhs, rhs); break;
      case Atom::Kind::Sub: subset(lhs, rhs); break;
      case Atom::Kind::Neq: {
        auto d = simplify(Expr::binary(EK::Union, Expr::binary(EK::Diff, lhs, rhs),
                                       Expr::binary(EK::Diff, rhs, lhs)));
        non_empty(d);
        break;
      }
      case Atom::Kind::NotSub:
        non_empty(simplify(Expr::binary(EK::Diff, lhs, rhs)));
        break;
    }
  }

 private:
  std::string fresh() {
    std::string name = "_f" + std::to_string(out_.fresh_vars.size());
    out_.fresh_vars.push_back(name);
    return name;
  }

  void emit(NormAtom a) { out_.atoms.push_back(std::move(a)); }

  void make_empty(const std::string& x) { emit(NormAtom::diff_of(x, x, x)); }

  // x = e for a binary expression e whose operands get flattened.
  void define(const std::string& x, const ExprPtr& e) {
    if (e->kind == EK::Var) {
      emit(NormAtom::union_of(x, e->name, e->name));
      return;
    }
    if (e->kind == EK::Empty) {
      make_empty(x);
      return;
    }
    const std::string y = flatten(e->lhs);
    const std::string z = flatten(e->rhs);
    switch (e->kind) {
      case EK::Union: emit(NormAtom::union_of(x, y, z)); break;
      case EK::Diff: emit(NormAtom::diff_of(x, y, z)); break;
      case EK::Prod: emit(NormAtom::prod_eq(x, y, z)); break;
      case EK::Inter: {
        // y & z = y - (y - z)
        const std::string w = fresh();
        emit(NormAtom::diff_of(w, y, z));
        emit(NormAtom::diff_of(x, y, w));
        break;
      }
      default: break;
    }
  }

  std::string flatten(const ExprPtr& e) {
    if (e->kind == EK::Var) return e->name;
    const std::string w = fresh();
    define(w, e);
    return w;
  }

  void equal(const ExprPtr& lhs, const ExprPtr& rhs) {
    if (is_empty(lhs) && is_empty(rhs)) return;
    if (is_empty(lhs)) return make_empty(flatten(rhs));
    if (is_empty(rhs)) return make_empty(flatten(lhs));
    if (lhs->kind == EK::Var) return define(lhs->name, rhs);
    if (rhs->kind == EK::Var) return define(rhs->name, lhs);
    define(flatten(lhs), rhs);
  }

  void subset(const ExprPtr& lhs, const ExprPtr& rhs) {
    if (is_empty(lhs)) return;
    if (is_empty(rhs)) return make_empty(flatten(lhs));
    if (rhs->kind == EK::Prod) {
      const std::string x = flatten(lhs);
      const std::string y = flatten(rhs->lhs);
      const std::string z = flatten(rhs->rhs);
      emit(NormAtom::prod_sub(x, y, z));
      return;
    }
    // x <= y  iff  x = x - (x - y)
    const std::string x = flatten(lhs);
    const std::string y = flatten(rhs);
    const std::string w = fresh();
    emit(NormAtom::diff_of(w, x, y));
    emit(NormAtom::diff_of(x, x, w));
  }

  void non_empty(const ExprPtr& e) {
    if (is_empty(e)) {
      // 0 != 0: an empty variable that must be nonempty.
      const std::string w = fresh();
      make_empty(w);
      emit(NormAtom::non_empty(w));
      return;
    }
    emit(NormAtom::non_empty(flatten(e)));
  }

  NormConj& out_;
};

}  // namespace

NormConj normalize_branch(const Branch& branch, const std::set<std::string>& extra_vars) {
  NormConj out;
  out.original_vars = extra_vars;
  for (const auto& a : branch) {
    collect_vars(*a.lhs, out.original_vars);
    collect_vars(*a.rhs, out.original_vars);
  }
  Normalizer n(out);
  for (const auto& a : branch) n.atom(a);
  // Drop duplicate atoms, keeping first occurrences.
  std::vector<NormAtom> unique;
  for (auto& a : out.atoms) {
    if (std::find(unique.begin(), unique.end(), a) == unique.end()) unique.push_back(std::move(a));
  }
  out.atoms = std::move(unique);
  return out;
}

}  // namespace mluc
