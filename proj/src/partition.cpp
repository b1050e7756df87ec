#include "mluc/partition.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "mluc/errors.hpp"

namespace mluc {

HFSet Partition::domain() const {
  std::vector<HFSet> all;
  for (const auto& b : blocks) {
    auto els = b.elements();
    all.insert(all.end(), els.begin(), els.end());
  }
  return HFSet::of(std::move(all));
}

void Partition::validate() const {
  std::unordered_set<HFSet, HFSetHash> seen;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].empty()) throw ContractViolation("partition block " + std::to_string(i) + " is empty");
    for (const auto& e : blocks[i].elements()) {
      if (!seen.insert(e).second) {
        throw ContractViolation("partition blocks overlap at element " + e.str());
      }
    }
  }
}

SetAssignment PartitionAssignment::induced() const {
  SetAssignment M;
  for (const auto& v : vars) {
    HFSet acc;
    auto it = imap.find(v);
    if (it != imap.end()) {
      for (int id : it->second) acc = set_union(acc, partition.blocks.at(static_cast<std::size_t>(id)));
    }
    M[v] = acc;
  }
  return M;
}

namespace {

const HFSet& lookup(const SetAssignment& M, const std::string& v) {
  auto it = M.find(v);
  if (it == M.end()) throw UnboundVariable(v);
  return it->second;
}

}  // namespace

bool eval_literal(const SetAssignment& M, const NormAtom& a) {
  const HFSet& x = lookup(M, a.x);
  switch (a.kind) {
    case NormAtom::Kind::NonEmpty:
      return !x.empty();
    case NormAtom::Kind::UnionA:
      return x == set_union(lookup(M, a.y), lookup(M, a.z));
    case NormAtom::Kind::DiffA:
      return x == set_difference(lookup(M, a.y), lookup(M, a.z));
    case NormAtom::Kind::ProdEq:
      return x == otimes(lookup(M, a.y), lookup(M, a.z));
    case NormAtom::Kind::ProdSub: {
      const HFSet& y = lookup(M, a.y);
      const HFSet& z = lookup(M, a.z);
      // Membership test per element avoids building y * z.
      for (const auto& t : x.elements()) {
        auto els = t.elements();
        if (els.size() == 1) {
          if (!(y.contains(els[0]) && z.contains(els[0]))) return false;
        } else if (els.size() == 2) {
          const bool ok = (y.contains(els[0]) && z.contains(els[1])) ||
                          (y.contains(els[1]) && z.contains(els[0]));
          if (!ok) return false;
        } else {
          return false;
        }
      }
      return true;
    }
  }
  return false;
}

bool eval_all(const SetAssignment& M, const NormConj& c) {
  return std::all_of(c.atoms.begin(), c.atoms.end(),
                     [&](const NormAtom& a) { return eval_literal(M, a); });
}

HFSet eval_expr(const SetAssignment& M, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Var: return lookup(M, e.name);
    case Expr::Kind::Empty: return HFSet{};
    case Expr::Kind::Union: return set_union(eval_expr(M, *e.lhs), eval_expr(M, *e.rhs));
    case Expr::Kind::Inter: return set_intersection(eval_expr(M, *e.lhs), eval_expr(M, *e.rhs));
    case Expr::Kind::Diff: return set_difference(eval_expr(M, *e.lhs), eval_expr(M, *e.rhs));
    case Expr::Kind::Prod: return otimes(eval_expr(M, *e.lhs), eval_expr(M, *e.rhs));
  }
  return HFSet{};
}

bool eval_atom(const SetAssignment& M, const Atom& a) {
  const HFSet l = eval_expr(M, *a.lhs);
  const HFSet r = eval_expr(M, *a.rhs);
  switch (a.kind) {
    case Atom::Kind::Eq: return l == r;
    case Atom::Kind::Neq: return l != r;
    case Atom::Kind::Sub: return is_subset(l, r);
    case Atom::Kind::NotSub: return !is_subset(l, r);
  }
  return false;
}

bool eval_formula(const SetAssignment& M, const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::AtomF: return eval_atom(M, f.atom);
    case Formula::Kind::Not: return !eval_formula(M, *f.lhs);
    case Formula::Kind::And: return eval_formula(M, *f.lhs) && eval_formula(M, *f.rhs);
    case Formula::Kind::Or: return eval_formula(M, *f.lhs) || eval_formula(M, *f.rhs);
    case Formula::Kind::Implies: return !eval_formula(M, *f.lhs) || eval_formula(M, *f.rhs);
  }
  return false;
}

VennResult venn_of(const SetAssignment& M, std::vector<std::string> vars) {
  if (vars.empty()) {
    for (const auto& [v, _] : M) vars.push_back(v);
  }
  if (vars.size() > 31) throw SizeLimit("venn_of: too many variables");
  // Signature of every element of the set domain.
  std::map<HFSet, unsigned> sig;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (const auto& e : lookup(M, vars[i]).elements()) sig[e] |= 1u << i;
  }
  std::map<unsigned, std::vector<HFSet>> regions;
  for (auto& [e, s] : sig) regions[s].push_back(e);  // sorted input stays sorted

  VennResult out;
  out.assignment.vars = vars;
  for (const auto& v : vars) out.assignment.imap[v];
  for (auto& [s, els] : regions) {
    const int id = static_cast<int>(out.assignment.partition.blocks.size());
    out.assignment.partition.blocks.push_back(HFSet::from_sorted(std::move(els)));
    out.signatures.push_back(s);
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (s >> i & 1) out.assignment.imap[vars[i]].insert(id);
    }
  }
  return out;
}

bool check_boolean_on_signatures(const std::map<std::string, std::set<int>>& imap,
                                 const NormAtom& a) {
  static const std::set<int> kNone;
  auto get = [&](const std::string& v) -> const std::set<int>& {
    auto it = imap.find(v);
    return it == imap.end() ? kNone : it->second;
  };
  const auto& x = get(a.x);
  switch (a.kind) {
    case NormAtom::Kind::NonEmpty:
      return !x.empty();
    case NormAtom::Kind::UnionA: {
      std::set<int> u;
      std::set_union(get(a.y).begin(), get(a.y).end(), get(a.z).begin(), get(a.z).end(),
                     std::inserter(u, u.end()));
      return u == x;
    }
    case NormAtom::Kind::DiffA: {
      std::set<int> d;
      std::set_difference(get(a.y).begin(), get(a.y).end(), get(a.z).begin(), get(a.z).end(),
                          std::inserter(d, d.end()));
      return d == x;
    }
    default:
      throw std::invalid_argument("check_boolean_on_signatures: product atom");
  }
}

nlohmann::json model_to_json(const SetAssignment& M) {
  nlohmann::json vars = nlohmann::json::object();
  for (const auto& [v, s] : M) vars[v] = to_json(s);
  return nlohmann::json{{"vars", vars}};
}

SetAssignment model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("vars") || !j["vars"].is_object()) {
    throw BadModel("model JSON must be an object with a \"vars\" object");
  }
  SetAssignment M;
  for (const auto& [v, s] : j["vars"].items()) M[v] = hfset_from_json(s);
  return M;
}

nlohmann::json partition_to_json(const VennResult& v) {
  nlohmann::json out = nlohmann::json::array();
  const auto& vars = v.assignment.vars;
  for (std::size_t b = 0; b < v.signatures.size(); ++b) {
    nlohmann::json sig = nlohmann::json::array();
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (v.signatures[b] >> i & 1) sig.push_back(vars[i]);
    }
    out.push_back({{"signature", sig}, {"block", to_json(v.assignment.partition.blocks[b])}});
  }
  return out;
}

}  // namespace mluc
