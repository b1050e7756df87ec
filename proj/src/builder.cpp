#include <algorithm>
#include <limits>
#include <unordered_set>

#include "mluc/errors.hpp"
#include "mluc/solver.hpp"

namespace mluc {

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kMax / a) return kMax;
  return a * b;
}

std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    r = sat_mul(r, base);
    if (r == kMax || r == 0) break;
  }
  return r;
}

// Blocks under construction: contents per place plus the whole domain.
struct Workspace {
  std::vector<std::vector<HFSet>> content;
  std::unordered_set<HFSet, HFSetHash> domain;
  std::size_t element_budget;

  void add(PlaceId p, HFSet e) {
    if (!domain.insert(e).second) throw ContractViolation("element placed twice: " + e.str());
    content[static_cast<std::size_t>(p)].push_back(std::move(e));
    if (domain.size() > element_budget) {
      throw BudgetExhausted("element budget of " + std::to_string(element_budget) + " exhausted");
    }
  }

  // Members of P*<=2 over the node's blocks that are not yet placed, in
  // canonical order.  `upto` restricts each block to a prefix.
  std::vector<HFSet> fresh_pairs(const Node& n, const std::vector<std::size_t>* upto = nullptr) const {
    std::vector<HFSet> out;
    const auto lo = static_cast<std::size_t>(n.lo);
    const auto hi = static_cast<std::size_t>(n.hi);
    const auto& a = content[lo];
    const auto& b = content[hi];
    const std::size_t na = upto ? (*upto)[lo] : a.size();
    const std::size_t nb = upto ? (*upto)[hi] : b.size();
    auto consider = [&](HFSet e) {
      if (!domain.count(e)) out.push_back(std::move(e));
    };
    if (n.singleton()) {
      for (std::size_t i = 0; i < na; ++i) {
        consider(HFSet::singleton(a[i]));
        for (std::size_t j = i + 1; j < na; ++j) consider(HFSet::pair(a[i], a[j]));
      }
    } else {
      for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) consider(HFSet::pair(a[i], b[j]));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Round-robin over targets; distributes the first `limit` items.
  std::vector<PlaceId> distribute(const std::vector<HFSet>& items, const std::set<PlaceId>& targets,
                                  std::size_t limit) {
    const std::vector<PlaceId> ts(targets.begin(), targets.end());
    const std::size_t count = std::min(limit, items.size());
    for (std::size_t i = 0; i < count; ++i) add(ts[i % ts.size()], items[i]);
    return ts;
  }

  std::vector<HFSet> blocks() const {
    std::vector<HFSet> out;
    out.reserve(content.size());
    for (const auto& c : content) out.push_back(HFSet::of(c));
    return out;
  }
};

Workspace workspace_of(const std::vector<HFSet>& blocks, std::size_t element_budget) {
  Workspace w{{}, {}, element_budget};
  for (const auto& b : blocks) {
    w.content.emplace_back(b.elements().begin(), b.elements().end());
    for (const auto& e : b.elements()) w.domain.insert(e);
  }
  return w;
}

void saturate(Workspace& w, const TGraph& g, std::size_t budget) {
  std::vector<Node> stack(g.saturated().rbegin(), g.saturated().rend());
  std::set<Node> queued(g.saturated().begin(), g.saturated().end());
  std::size_t pops = 0;
  while (!stack.empty()) {
    if (++pops > budget) {
      throw BudgetExhausted("cart_saturate: " + std::to_string(budget) + " pops without emptying the stack");
    }
    const Node node = stack.back();
    stack.pop_back();
    queued.erase(node);
    auto fresh = w.fresh_pairs(node);
    if (fresh.empty()) continue;
    const auto& targets = g.targets(node);
    if (targets.empty()) {
      throw ContractViolation("saturated node " + to_json(node).dump() + " has pairs but no targets");
    }
    w.distribute(fresh, targets, fresh.size());
    for (const auto& other : g.saturated()) {
      bool touched = false;
      for (PlaceId t : targets) touched = touched || other.contains(t);
      if (touched && queued.insert(other).second) stack.push_back(other);
    }
  }
}

unsigned max_rank_of(const std::vector<std::vector<HFSet>>& content) {
  unsigned r = 0;
  for (const auto& c : content) {
    for (const auto& e : c) r = std::max(r, e.rank());
  }
  return r;
}

}  // namespace

std::vector<HFSet> cart_saturate(std::vector<HFSet> blocks, const TGraph& g, std::size_t budget,
                                 std::size_t element_budget) {
  if (blocks.size() != g.place_count()) throw ContractViolation("cart_saturate: block count mismatch");
  Workspace w = workspace_of(blocks, element_budget);
  saturate(w, g, budget);
  return w.blocks();
}

BuilderPlan plan_build(const PlaceCertificate& c) {
  const Closure cl = population_closure(c.graph);
  if (!cl.all_populated) throw ContractViolation("plan_build: certificate has unpopulated places");
  BuilderPlan plan;
  plan.P = c.place_count();
  for (std::size_t p = 0; p < plan.P; ++p) {
    const auto layer = static_cast<std::size_t>(cl.layer[p]);
    if (plan.layers.size() <= layer) plan.layers.resize(layer + 1);
    plan.layers[layer].push_back(static_cast<PlaceId>(p));
  }
  plan.k = longest_otimes_path(c.graph);
  plan.charge = std::max<std::uint64_t>(sat_pow(plan.P, plan.k), 2 * plan.P);
  const std::size_t base = plan.layers.empty() ? 0 : plan.layers[0].size();
  plan.H = std::max(2u, ackermann_rank_below(sat_mul(plan.charge, base)) + 2);
  return plan;
}

BuildReport build_model_report(const NormConj& phi, const PlaceCertificate& c, const SolverLimits& limits) {
  if (auto v = verify_certificate(phi, c); !v) {
    throw ContractViolation("build_model: certificate does not verify: " + v.reason);
  }
  if (detect_saturation_cycle(c.graph)) throw ContractViolation("build_model: certificate has a saturation cycle");

  BuildReport rep;
  rep.plan = plan_build(c);
  const BuilderPlan& plan = rep.plan;
  const std::uint64_t P = plan.P;
  const std::size_t base = plan.layers.empty() ? 0 : plan.layers[0].size();
  if (sat_mul(plan.charge, base) > limits.element_budget) {
    throw SizeLimit("build_model: " + std::to_string(base) + " x " + std::to_string(plan.charge) +
                    " atoms exceed the element budget of " + std::to_string(limits.element_budget));
  }
  const Closure cl = population_closure(c.graph);
  const TGraph& g = c.graph;

  Workspace w{std::vector<std::vector<HFSet>>(plan.P), {}, limits.element_budget};
  std::uint64_t next_atom = 0;
  if (!plan.layers.empty()) {
    for (PlaceId p : plan.layers[0]) {
      for (std::uint64_t i = 0; i < plan.charge; ++i) w.add(p, atom_of_rank(next_atom++, plan.H));
    }
  }

  // Layered distribution: a node fires once, in the first round that
  // starts with all of its places nonempty.
  std::set<Node> fired;
  std::size_t j = 1;
  for (;; ++j) {
    // Pairs are drawn from the blocks as they stood when the round began.
    std::vector<std::size_t> snapshot(plan.P);
    for (std::size_t p = 0; p < plan.P; ++p) snapshot[p] = w.content[p].size();
    std::vector<Node> firing;
    for (const auto& [node, ts] : g.edges()) {
      if (ts.empty() || fired.count(node)) continue;
      if (snapshot[static_cast<std::size_t>(node.lo)] && snapshot[static_cast<std::size_t>(node.hi)]) {
        firing.push_back(node);
      }
    }
    if (firing.empty()) break;
    const std::uint64_t need = sat_pow(P, plan.k + 1 > j ? plan.k + 1 - j : 0);
    const std::uint64_t quota = std::max<std::uint64_t>(sat_pow(P, plan.k > j ? plan.k - j : 0), 2 * P);
    for (const auto& node : firing) {
      fired.insert(node);
      const auto fresh = w.fresh_pairs(node, &snapshot);
      const auto& ts = g.targets(node);
      if (fresh.size() < need || fresh.size() < sat_mul(quota, ts.size())) {
        throw ContractViolation("A2: node " + to_json(node).dump() + " offers " + std::to_string(fresh.size()) +
                                " pairs in round " + std::to_string(j) + ", needs " +
                                std::to_string(std::max(need, sat_mul(quota, ts.size()))));
      }
      w.distribute(fresh, ts, static_cast<std::size_t>(quota * ts.size()));
    }
    for (std::size_t p = 0; p < plan.P; ++p) {
      if (cl.layer[p] <= static_cast<int>(j) && w.content[p].empty()) {
        throw ContractViolation("A1: place " + c.place_label(static_cast<PlaceId>(p)) + " empty after round " +
                                std::to_string(j));
      }
    }
    if (max_rank_of(w.content) > plan.H + j) {
      throw ContractViolation("A4: element rank exceeds H + " + std::to_string(j));
    }
  }
  rep.rounds = j - 1;

  rep.saturation_depth = saturation_depth(g);
  saturate(w, g, limits.pop_budget);

  rep.max_element_rank = max_rank_of(w.content);
  if (rep.max_element_rank > plan.H + rep.rounds + rep.saturation_depth) {
    throw ContractViolation("A4: model rank " + std::to_string(rep.max_element_rank) + " exceeds H + " +
                            std::to_string(rep.rounds + rep.saturation_depth));
  }

  rep.blocks = w.blocks();
  Partition sigma{rep.blocks};
  sigma.validate();  // A3; also rejects empty blocks (A1)

  std::vector<PlaceId> identity(plan.P);
  for (std::size_t p = 0; p < plan.P; ++p) identity[p] = static_cast<PlaceId>(p);
  if (!is_weak_isomorphism(induce_from_partition(sigma), g, identity)) {
    throw ContractViolation("A5: induced graph is not weakly isomorphic to the certificate graph");
  }

  for (std::size_t i = 0; i < c.vars.size(); ++i) {
    std::vector<HFSet> els;
    for (std::size_t p = 0; p < plan.P; ++p) {
      if (c.signatures[p] >> i & 1u) {
        const auto& e = w.content[p];
        els.insert(els.end(), e.begin(), e.end());
      }
    }
    rep.model[c.vars[i]] = HFSet::of(std::move(els));
  }
  for (const auto& a : phi.atoms) {
    if (!eval_literal(rep.model, a)) throw ContractViolation("built model falsifies " + print(a));
  }
  return rep;
}

SetAssignment build_model(const NormConj& phi, const PlaceCertificate& c, const SolverLimits& limits) {
  return build_model_report(phi, c, limits).model;
}

unsigned model_rank(const SetAssignment& m) {
  unsigned r = 0;
  for (const auto& [_, s] : m) {
    for (const auto& e : s.elements()) r = std::max(r, e.rank());
  }
  return r;
}

unsigned rank_bound(const NormConj& phi) {
  const std::size_t n = phi.variables().size();
  const std::uint64_t places = n >= 64 ? kMax : (std::uint64_t{1} << n) - 1;
  const bool products = std::any_of(phi.atoms.begin(), phi.atoms.end(), [](const NormAtom& a) { return a.is_product(); });
  // The longest product path is shorter than the place count.
  const std::uint64_t kmax = products && places > 0 ? places - 1 : 0;
  const std::uint64_t charge = std::max<std::uint64_t>(sat_pow(places, kmax), sat_mul(2, places));
  const unsigned H = std::max(2u, ackermann_rank_below(sat_mul(charge, places)) + 2);
  // Layered rounds plus saturation depth, each at most the place count.
  const std::uint64_t growth = products ? sat_mul(2, places) : 0;
  const std::uint64_t bound = growth > std::numeric_limits<unsigned>::max() - H ? std::numeric_limits<unsigned>::max()
                                                                                : H + growth;
  return static_cast<unsigned>(bound);
}

}  // namespace mluc
