#include <algorithm>

#include "mluc/errors.hpp"
#include "mluc/solver.hpp"

namespace mluc {

int PlaceCertificate::var_index(const std::string& v) const {
  auto it = std::find(vars.begin(), vars.end(), v);
  return it == vars.end() ? -1 : static_cast<int>(it - vars.begin());
}

bool PlaceCertificate::in(PlaceId p, const std::string& v) const {
  const int i = var_index(v);
  return i >= 0 && (signatures.at(static_cast<std::size_t>(p)) >> i & 1u);
}

std::set<PlaceId> PlaceCertificate::I(const std::string& v) const {
  std::set<PlaceId> out;
  const int i = var_index(v);
  if (i < 0) return out;
  for (std::size_t p = 0; p < signatures.size(); ++p) {
    if (signatures[p] >> i & 1u) out.insert(static_cast<PlaceId>(p));
  }
  return out;
}

void PlaceCertificate::validate() const {
  if (vars.size() > 31) throw ContractViolation("certificate has more than 31 variables");
  if (graph.place_count() != signatures.size()) {
    throw ContractViolation("graph has " + std::to_string(graph.place_count()) + " places but " +
                            std::to_string(signatures.size()) + " signatures were given");
  }
  const Signature mask = vars.size() == 32 ? ~Signature{0} : (Signature{1} << vars.size()) - 1;
  std::set<Signature> seen;
  for (Signature s : signatures) {
    if (s == 0) throw ContractViolation("empty signature");
    if (s & ~mask) throw ContractViolation("signature mentions an unknown variable");
    if (!seen.insert(s).second) throw ContractViolation("repeated signature");
  }
  graph.validate();
}

std::string PlaceCertificate::place_label(PlaceId p) const {
  std::string s = "{";
  const Signature sig = signatures.at(static_cast<std::size_t>(p));
  bool first = true;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!(sig >> i & 1u)) continue;
    if (!first) s += ",";
    s += vars[i];
    first = false;
  }
  return s + "}";
}

namespace {

VerifyResult fail(int condition, std::string reason) { return {false, condition, std::move(reason)}; }

}  // namespace

VerifyResult verify_certificate(const NormConj& phi, const PlaceCertificate& c) {
  try {
    c.validate();
  } catch (const ContractViolation& e) {
    return fail(0, std::string("malformed certificate: ") + e.what());
  }
  const auto n = static_cast<PlaceId>(c.place_count());
  const TGraph& g = c.graph;

  auto index = [&](const std::string& v) { return c.var_index(v); };
  for (const auto& a : phi.atoms) {
    for (const std::string* v : {&a.x, &a.y, &a.z}) {
      if (!v->empty() && index(*v) < 0) return fail(0, "variable '" + *v + "' missing from certificate");
    }
  }
  auto bit = [&](PlaceId p, int i) { return (c.signatures[static_cast<std::size_t>(p)] >> i & 1u) != 0; };

  // (1) Boolean atoms on signatures.
  for (const auto& a : phi.atoms) {
    const int x = index(a.x);
    switch (a.kind) {
      case NormAtom::Kind::UnionA:
      case NormAtom::Kind::DiffA: {
        const int y = index(a.y);
        const int z = index(a.z);
        for (PlaceId p = 0; p < n; ++p) {
          const bool want = a.kind == NormAtom::Kind::UnionA ? (bit(p, y) || bit(p, z))
                                                             : (bit(p, y) && !bit(p, z));
          if (bit(p, x) != want) {
            return fail(1, "place " + c.place_label(p) + " violates " + print(a));
          }
        }
        break;
      }
      case NormAtom::Kind::NonEmpty: {
        bool covered = false;
        for (PlaceId p = 0; p < n && !covered; ++p) covered = bit(p, x);
        if (!covered) return fail(1, "no place lies in " + a.x + " (" + print(a) + ")");
        break;
      }
      default:
        break;
    }
  }

  std::vector<std::size_t> indegree(static_cast<std::size_t>(n), 0);
  for (const auto& [node, ts] : g.edges()) {
    for (PlaceId t : ts) ++indegree[static_cast<std::size_t>(t)];
  }

  // (2) Product places and compatible sources.
  for (const auto& a : phi.atoms) {
    if (!a.is_product()) continue;
    const int x = index(a.x);
    const int y = index(a.y);
    const int z = index(a.z);
    for (PlaceId p = 0; p < n; ++p) {
      if (!bit(p, x)) continue;
      if (!g.is_otimes(p)) return fail(2, "place " + c.place_label(p) + " in " + a.x + " is not a product place");
      if (indegree[static_cast<std::size_t>(p)] == 0) {
        return fail(2, "place " + c.place_label(p) + " in " + a.x + " has no incoming node");
      }
    }
    for (const auto& [node, ts] : g.edges()) {
      const bool ok = node.singleton()
                          ? bit(node.lo, y) && bit(node.lo, z)
                          : (bit(node.lo, y) && bit(node.hi, z)) || (bit(node.hi, y) && bit(node.lo, z));
      if (ok) continue;
      for (PlaceId t : ts) {
        if (bit(t, x)) {
          return fail(2, "node " + nlohmann::json(to_json(node)).dump() + " feeds " + c.place_label(t) +
                             " but is not drawn from " + a.y + " x " + a.z);
        }
      }
    }
  }

  // (3) Saturation forced by equalities.
  for (const auto& a : phi.atoms) {
    if (a.kind != NormAtom::Kind::ProdEq) continue;
    const int x = index(a.x);
    const int y = index(a.y);
    const int z = index(a.z);
    for (PlaceId s1 = 0; s1 < n; ++s1) {
      if (!bit(s1, y)) continue;
      for (PlaceId s2 = 0; s2 < n; ++s2) {
        if (!bit(s2, z)) continue;
        const Node node = Node::of(s1, s2);
        const std::string where = nlohmann::json(to_json(node)).dump();
        if (!g.is_saturated(node)) return fail(3, "node " + where + " must be saturated for " + print(a));
        const auto& ts = g.targets(node);
        if (ts.empty()) return fail(3, "saturated node " + where + " has no targets");
        for (PlaceId t : ts) {
          if (!bit(t, x)) {
            return fail(3, "node " + where + " feeds " + c.place_label(t) + " outside " + a.x);
          }
        }
      }
    }
  }

  // (4) Every product place is fed.
  for (PlaceId p = 0; p < n; ++p) {
    if (g.is_otimes(p) && indegree[static_cast<std::size_t>(p)] == 0) {
      return fail(4, "product place " + c.place_label(p) + " has indegree 0");
    }
  }

  // (5) Realizability.
  const Closure cl = population_closure(g);
  if (!cl.all_populated) {
    for (PlaceId p = 0; p < n; ++p) {
      if (!cl.populated[static_cast<std::size_t>(p)]) {
        return fail(5, "place " + c.place_label(p) + " is never populated");
      }
    }
  }
  return {};
}

PlaceCertificate certificate_of(const SetAssignment& m, const std::vector<std::string>& vars) {
  const VennResult venn = venn_of(m, vars);
  PlaceCertificate c;
  c.vars = venn.assignment.vars;
  c.signatures.assign(venn.signatures.begin(), venn.signatures.end());
  c.graph = induce_from_partition(venn.assignment.partition);
  std::vector<std::string> labels;
  for (std::size_t p = 0; p < c.signatures.size(); ++p) labels.push_back(c.place_label(static_cast<PlaceId>(p)));
  c.graph.set_labels(std::move(labels));
  return c;
}

std::string status_name(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::Unsat: return "unsat";
    case Verdict::Status::SatFinite: return "sat-finite";
    case Verdict::Status::SatInfiniteOnly: return "sat-infinite-only";
  }
  return "unknown";
}

nlohmann::json to_json(const PlaceCertificate& c) {
  nlohmann::json out = to_json(c.graph);
  nlohmann::json places = nlohmann::json::array();
  for (Signature s : c.signatures) {
    nlohmann::json sig = nlohmann::json::array();
    for (std::size_t i = 0; i < c.vars.size(); ++i) {
      if (s >> i & 1u) sig.push_back(c.vars[i]);
    }
    places.push_back(sig);
  }
  out["places"] = places;
  return out;
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json out{{"status", status_name(v.status)}};
  if (v.model) out["model"] = model_to_json(*v.model);
  if (v.cert) out["certificate"] = to_json(*v.cert);
  if (v.cycle) out["cycle"] = to_json(*v.cycle);
  return out;
}

}  // namespace mluc
