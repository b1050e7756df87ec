#include <algorithm>
#include <map>

#include "mluc/errors.hpp"
#include "mluc/solver.hpp"

namespace mluc {

namespace {

struct VarAtom {
  NormAtom::Kind kind;
  int x, y, z;
};

class Searcher {
 public:
  Searcher(const NormConj& phi, const SolverLimits& limits) : phi_(phi), limits_(limits), vars_(phi.variables()) {
    if (vars_.size() > limits.max_vars) {
      throw SizeLimit("search: " + std::to_string(vars_.size()) + " variables exceed the limit of " +
                      std::to_string(limits.max_vars));
    }
    auto idx = [&](const std::string& v) {
      if (v.empty()) return -1;
      auto it = std::find(vars_.begin(), vars_.end(), v);
      if (it == vars_.end()) throw UnboundVariable(v);
      return static_cast<int>(it - vars_.begin());
    };
    for (const auto& a : phi.atoms) atoms_.push_back({a.kind, idx(a.x), idx(a.y), idx(a.z)});
  }

  Verdict run() {
    const auto admissible = admissible_signatures();
    std::optional<PlaceCertificate> infinite;
    for (std::size_t size = 0; size <= admissible.size(); ++size) {
      std::vector<std::size_t> pick(size);
      for (std::size_t i = 0; i < size; ++i) pick[i] = i;
      for (;;) {
        tick();
        std::vector<Signature> sigs;
        for (std::size_t i : pick) sigs.push_back(admissible[i]);
        if (covers_nonempty(sigs)) {
          auto found = try_places(sigs, infinite);
          if (found) return *found;
        }
        if (!next_combination(pick, admissible.size())) break;
      }
    }
    Verdict v;
    if (infinite) {
      v.status = Verdict::Status::SatInfiniteOnly;
      v.cycle = detect_saturation_cycle(infinite->graph);
      v.cert = std::move(infinite);
    }
    return v;
  }

 private:
  static bool bit(Signature s, int i) { return (s >> i & 1u) != 0; }

  void tick() {
    if (++steps_ > limits_.search_budget) {
      throw SizeLimit("search budget of " + std::to_string(limits_.search_budget) + " candidates exhausted");
    }
  }

  static bool next_combination(std::vector<std::size_t>& pick, std::size_t n) {
    const std::size_t k = pick.size();
    for (std::size_t i = k; i-- > 0;) {
      if (pick[i] < n - k + i) {
        ++pick[i];
        for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
        return true;
      }
    }
    return false;
  }

  // Nonempty signatures on which every Boolean atom holds pointwise.
  std::vector<Signature> admissible_signatures() const {
    std::vector<Signature> out;
    const Signature top = Signature{1} << vars_.size();
    for (Signature s = 1; s < top; ++s) {
      bool ok = true;
      for (const auto& a : atoms_) {
        if (a.kind == NormAtom::Kind::UnionA) ok = bit(s, a.x) == (bit(s, a.y) || bit(s, a.z));
        else if (a.kind == NormAtom::Kind::DiffA) ok = bit(s, a.x) == (bit(s, a.y) && !bit(s, a.z));
        if (!ok) break;
      }
      if (ok) out.push_back(s);
    }
    return out;
  }

  bool covers_nonempty(const std::vector<Signature>& sigs) const {
    for (const auto& a : atoms_) {
      if (a.kind != NormAtom::Kind::NonEmpty) continue;
      if (std::none_of(sigs.begin(), sigs.end(), [&](Signature s) { return bit(s, a.x); })) return false;
    }
    return true;
  }

  // Builds the certificate on `sigs` with every admissible edge.  It verifies
  // iff some certificate on these places does.  `forced` receives each node
  // that condition (3) saturates, with the targets it may use.
  PlaceCertificate max_certificate(const std::vector<Signature>& sigs, std::map<Node, std::set<PlaceId>>& forced,
                                   bool& feasible) const {
    const auto n = static_cast<PlaceId>(sigs.size());
    PlaceCertificate c;
    c.vars = vars_;
    c.signatures = sigs;
    c.graph = TGraph(sigs.size());
    std::vector<std::string> labels;
    for (PlaceId p = 0; p < n; ++p) labels.push_back(c.place_label(p));
    c.graph.set_labels(std::move(labels));
    for (PlaceId p = 0; p < n; ++p) {
      for (const auto& a : atoms_) {
        if (is_product(a.kind) && bit(sigs[static_cast<std::size_t>(p)], a.x)) c.graph.set_otimes(p);
      }
    }
    auto sig = [&](PlaceId p) { return sigs[static_cast<std::size_t>(p)]; };
    auto compatible = [&](const Node& b, const VarAtom& a) {
      if (b.singleton()) return bit(sig(b.lo), a.y) && bit(sig(b.lo), a.z);
      return (bit(sig(b.lo), a.y) && bit(sig(b.hi), a.z)) || (bit(sig(b.hi), a.y) && bit(sig(b.lo), a.z));
    };
    feasible = true;
    forced.clear();
    for (const auto& node : c.graph.all_nodes()) {
      std::set<PlaceId> allowed;
      for (PlaceId t = 0; t < n; ++t) {
        if (!c.graph.is_otimes(t)) continue;
        bool ok = true;
        for (const auto& a : atoms_) {
          if (is_product(a.kind) && bit(sig(t), a.x) && !compatible(node, a)) ok = false;
        }
        if (ok) allowed.insert(t);
      }
      bool is_forced = false;
      for (const auto& a : atoms_) {
        if (a.kind != NormAtom::Kind::ProdEq) continue;
        const bool hit = (bit(sig(node.lo), a.y) && bit(sig(node.hi), a.z)) ||
                         (bit(sig(node.hi), a.y) && bit(sig(node.lo), a.z));
        if (!hit) continue;
        is_forced = true;
        std::erase_if(allowed, [&](PlaceId t) { return !bit(sig(t), a.x); });
      }
      if (is_forced) {
        if (allowed.empty()) feasible = false;
        forced[node] = allowed;
        c.graph.set_saturated(node);
      }
      for (PlaceId t : allowed) c.graph.add_edge(node, t);
    }
    return c;
  }

  static bool is_product(NormAtom::Kind k) { return k == NormAtom::Kind::ProdEq || k == NormAtom::Kind::ProdSub; }

  std::optional<Verdict> try_places(const std::vector<Signature>& sigs, std::optional<PlaceCertificate>& infinite) {
    std::map<Node, std::set<PlaceId>> forced;
    bool feasible = false;
    PlaceCertificate c = max_certificate(sigs, forced, feasible);
    if (!feasible || !verify_certificate(phi_, c)) return std::nullopt;
    if (!detect_saturation_cycle(c.graph)) return finite(std::move(c));

    // Shrink the targets of forced nodes, looking for an acyclic choice.
    std::vector<std::pair<Node, std::vector<std::set<PlaceId>>>> options;
    for (const auto& [node, allowed] : forced) options.emplace_back(node, subsets_of(allowed));
    PlaceCertificate trial = c;
    for (const auto& [node, _] : forced) trial.graph.set_saturated(node, false);
    if (choose(trial, options, 0)) return finite(std::move(trial));
    if (!infinite) infinite = std::move(c);
    return std::nullopt;
  }

  // Nonempty subsets, smallest first, lexicographic within a size.
  static std::vector<std::set<PlaceId>> subsets_of(const std::set<PlaceId>& s) {
    const std::vector<PlaceId> items(s.begin(), s.end());
    std::vector<std::set<PlaceId>> out;
    for (std::size_t size = 1; size <= items.size(); ++size) {
      std::vector<std::size_t> pick(size);
      for (std::size_t i = 0; i < size; ++i) pick[i] = i;
      do {
        std::set<PlaceId> sub;
        for (std::size_t i : pick) sub.insert(items[i]);
        out.push_back(std::move(sub));
      } while (next_combination(pick, items.size()));
    }
    return out;
  }

  // Nodes before `i` carry their chosen targets and are saturated; the rest
  // keep every allowed target and are not yet saturated.  Dropping edges
  // only shrinks the closure and adding saturation only adds cycles, so both
  // checks prune soundly.
  bool choose(PlaceCertificate& c, const std::vector<std::pair<Node, std::vector<std::set<PlaceId>>>>& options,
              std::size_t i) {
    tick();
    if (!population_closure(c.graph).all_populated) return false;
    if (detect_saturation_cycle(c.graph)) return false;
    if (i == options.size()) return static_cast<bool>(verify_certificate(phi_, c));
    const auto& [node, subsets] = options[i];
    const std::set<PlaceId> all = c.graph.targets(node);
    c.graph.set_saturated(node);
    for (const auto& sub : subsets) {
      for (PlaceId t : all) {
        if (!sub.count(t)) c.graph.remove_edge(node, t);
      }
      if (choose(c, options, i + 1)) return true;
      for (PlaceId t : all) c.graph.add_edge(node, t);
    }
    c.graph.set_saturated(node, false);
    return false;
  }

  // Optional edges that do not point to a later closure layer only push
  // model ranks up; drop them.
  PlaceCertificate layered(PlaceCertificate c) const {
    const Closure cl = population_closure(c.graph);
    PlaceCertificate out = c;
    for (const auto& [node, targets] : c.graph.edges()) {
      if (c.graph.is_saturated(node)) continue;
      const int from = std::max(cl.layer[static_cast<std::size_t>(node.lo)], cl.layer[static_cast<std::size_t>(node.hi)]);
      for (PlaceId t : targets) {
        if (from >= cl.layer[static_cast<std::size_t>(t)]) out.graph.remove_edge(node, t);
      }
    }
    return verify_certificate(phi_, out) ? out : c;
  }

  Verdict finite(PlaceCertificate c) const {
    c = layered(std::move(c));
    Verdict v;
    v.status = Verdict::Status::SatFinite;
    v.model = build_model(phi_, c, limits_);
    v.cert = std::move(c);
    return v;
  }

  const NormConj& phi_;
  const SolverLimits& limits_;
  std::vector<std::string> vars_;
  std::vector<VarAtom> atoms_;
  std::size_t steps_ = 0;
};

}  // namespace

Verdict search(const NormConj& phi, const SolverLimits& limits) { return Searcher(phi, limits).run(); }

Verdict solve(const Formula& f, const SolverLimits& limits) {
  const auto vars = vars_of(f);
  std::optional<Verdict> infinite;
  for (const auto& branch : to_dnf(f, limits.dnf_cap)) {
    Verdict v = search(normalize_branch(branch, vars), limits);
    if (v.status == Verdict::Status::SatFinite) {
      SetAssignment restricted;
      for (const auto& name : vars) restricted[name] = v.model->at(name);
      v.model = std::move(restricted);
      return v;
    }
    if (v.status == Verdict::Status::SatInfiniteOnly && !infinite) infinite = std::move(v);
  }
  return infinite ? *infinite : Verdict{};
}

Verdict solve(const std::string& text, const SolverLimits& limits) { return solve(*parse(text), limits); }

}  // namespace mluc
