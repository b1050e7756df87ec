#include "mluc/tgraph.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_map>

#include "mluc/errors.hpp"

namespace mluc {

TGraph::TGraph(std::size_t places) : otimes_(places, false) {}

void TGraph::set_otimes(PlaceId p, bool v) { otimes_.at(static_cast<std::size_t>(p)) = v; }

void TGraph::check_node(const Node& n) const {
  if (n.lo < 0 || n.hi >= static_cast<PlaceId>(place_count()) || n.lo > n.hi) {
    throw ContractViolation("node {" + std::to_string(n.lo) + "," + std::to_string(n.hi) +
                            "} references an unknown place");
  }
}

void TGraph::add_edge(const Node& from, PlaceId to) {
  check_node(from);
  if (!is_otimes(to)) {
    throw ContractViolation("distribution edge into non-product place " + std::to_string(to));
  }
  targets_[from].insert(to);
}

void TGraph::remove_edge(const Node& from, PlaceId to) {
  auto it = targets_.find(from);
  if (it == targets_.end()) return;
  it->second.erase(to);
  if (it->second.empty()) targets_.erase(it);
}

bool TGraph::has_edge(const Node& from, PlaceId to) const {
  auto it = targets_.find(from);
  return it != targets_.end() && it->second.count(to) != 0;
}

const std::set<PlaceId>& TGraph::targets(const Node& n) const {
  static const std::set<PlaceId> kNone;
  auto it = targets_.find(n);
  return it == targets_.end() ? kNone : it->second;
}

std::vector<Node> TGraph::incoming(PlaceId p) const {
  std::vector<Node> out;
  for (const auto& [n, ts] : targets_) {
    if (ts.count(p)) out.push_back(n);
  }
  return out;
}

void TGraph::set_saturated(const Node& n, bool v) {
  check_node(n);
  if (v) saturated_.insert(n); else saturated_.erase(n);
}

std::vector<Node> TGraph::all_nodes() const {
  std::vector<Node> out;
  const auto n = static_cast<PlaceId>(place_count());
  for (PlaceId a = 0; a < n; ++a) out.push_back(Node::single(a));
  for (PlaceId a = 0; a < n; ++a) {
    for (PlaceId b = a + 1; b < n; ++b) out.push_back(Node{a, b});
  }
  return out;
}

std::string TGraph::label(PlaceId p) const {
  const auto i = static_cast<std::size_t>(p);
  if (i < labels_.size() && !labels_[i].empty()) return labels_[i];
  return "p" + std::to_string(p);
}

void TGraph::validate() const {
  for (const auto& [n, ts] : targets_) {
    check_node(n);
    for (PlaceId t : ts) {
      if (t < 0 || t >= static_cast<PlaceId>(place_count()) || !is_otimes(t)) {
        throw ContractViolation("edge target " + std::to_string(t) + " is not a product place");
      }
    }
  }
  for (const auto& n : saturated_) check_node(n);
}

// ---------------------------------------------------------------------------

namespace {

std::size_t pair_total(std::size_t a, std::size_t b, bool singleton) {
  return singleton ? a * (a + 1) / 2 : a * b;
}

}  // namespace

TGraph induce_from_partition(const Partition& sigma) {
  sigma.validate();
  const std::size_t n = sigma.blocks.size();
  std::unordered_map<HFSet, PlaceId, HFSetHash> where;
  for (std::size_t b = 0; b < n; ++b) {
    for (const auto& e : sigma.blocks[b].elements()) where.emplace(e, static_cast<PlaceId>(b));
  }
  auto node_of = [&](const HFSet& e) -> std::optional<Node> {
    auto els = e.elements();
    if (els.empty() || els.size() > 2) return std::nullopt;
    auto a = where.find(els[0]);
    if (a == where.end()) return std::nullopt;
    if (els.size() == 1) return Node::single(a->second);
    auto b = where.find(els[1]);
    if (b == where.end()) return std::nullopt;
    return Node::of(a->second, b->second);
  };

  TGraph g(n);
  std::map<Node, std::size_t> produced;
  std::vector<std::vector<Node>> sources(n);
  for (std::size_t b = 0; b < n; ++b) {
    bool all_pairs = true;
    for (const auto& e : sigma.blocks[b].elements()) {
      auto node = node_of(e);
      if (node) {
        ++produced[*node];
        sources[b].push_back(*node);
      } else {
        all_pairs = false;
      }
    }
    g.set_otimes(static_cast<PlaceId>(b), all_pairs);
  }
  for (std::size_t b = 0; b < n; ++b) {
    if (!g.is_otimes(static_cast<PlaceId>(b))) continue;
    for (const auto& node : sources[b]) g.add_edge(node, static_cast<PlaceId>(b));
  }
  for (const auto& node : g.all_nodes()) {
    const std::size_t total = pair_total(sigma.blocks[static_cast<std::size_t>(node.lo)].size(),
                                         sigma.blocks[static_cast<std::size_t>(node.hi)].size(),
                                         node.singleton());
    auto it = produced.find(node);
    if (it != produced.end() && it->second == total) g.set_saturated(node);
  }
  return g;
}

Closure population_closure(const TGraph& g) {
  const std::size_t n = g.place_count();
  Closure c;
  c.populated.assign(n, false);
  c.layer.assign(n, -1);
  for (std::size_t p = 0; p < n; ++p) {
    if (!g.is_otimes(static_cast<PlaceId>(p))) {
      c.populated[p] = true;
      c.layer[p] = 0;
    }
  }
  // Round j admits the targets of nodes whose members were populated
  // before round j.
  for (int round = 1;; ++round) {
    std::vector<PlaceId> fresh;
    for (const auto& [node, ts] : g.edges()) {
      const auto lo = static_cast<std::size_t>(node.lo);
      const auto hi = static_cast<std::size_t>(node.hi);
      if (!c.populated[lo] || !c.populated[hi]) continue;
      if (c.layer[lo] >= round || c.layer[hi] >= round) continue;
      for (PlaceId t : ts) {
        if (!c.populated[static_cast<std::size_t>(t)]) fresh.push_back(t);
      }
    }
    if (fresh.empty()) break;
    for (PlaceId t : fresh) {
      c.populated[static_cast<std::size_t>(t)] = true;
      c.layer[static_cast<std::size_t>(t)] = round;
    }
  }
  c.all_populated = std::all_of(c.populated.begin(), c.populated.end(), [](bool b) { return b; });
  return c;
}

namespace {

struct SatView {
  Closure closure;
  std::vector<std::vector<Node>> nodes_of;  // live saturated nodes per place

  explicit SatView(const TGraph& g) : closure(population_closure(g)), nodes_of(g.place_count()) {
    for (const auto& node : g.saturated()) {
      if (!live(node)) continue;
      nodes_of[static_cast<std::size_t>(node.lo)].push_back(node);
      if (!node.singleton()) nodes_of[static_cast<std::size_t>(node.hi)].push_back(node);
    }
  }
  bool live(const Node& n) const {
    return closure.populated[static_cast<std::size_t>(n.lo)] &&
           closure.populated[static_cast<std::size_t>(n.hi)];
  }
  bool populated(PlaceId p) const { return closure.populated[static_cast<std::size_t>(p)]; }
};

}  // namespace

std::optional<CycleWitness> detect_saturation_cycle(const TGraph& g) {
  const SatView view(g);
  const std::size_t n = g.place_count();
  enum Color { White, Grey, Black };
  std::vector<Color> color(n, White);
  std::vector<std::variant<PlaceId, Node>> stack;
  std::optional<CycleWitness> found;

  std::function<void(PlaceId)> dfs = [&](PlaceId p) {
    color[static_cast<std::size_t>(p)] = Grey;
    stack.emplace_back(p);
    for (const auto& node : view.nodes_of[static_cast<std::size_t>(p)]) {
      for (PlaceId t : g.targets(node)) {
        if (!view.populated(t)) continue;
        if (color[static_cast<std::size_t>(t)] == Grey) {
          CycleWitness w;
          auto it = std::find_if(stack.begin(), stack.end(), [&](const auto& s) {
            return std::holds_alternative<PlaceId>(s) && std::get<PlaceId>(s) == t;
          });
          w.steps.assign(it, stack.end());
          w.steps.emplace_back(node);
          w.steps.emplace_back(t);
          found = std::move(w);
          return;
        }
        if (color[static_cast<std::size_t>(t)] == White) {
          stack.emplace_back(node);
          dfs(t);
          if (found) return;
          stack.pop_back();
        }
      }
    }
    color[static_cast<std::size_t>(p)] = Black;
    stack.pop_back();
  };

  for (std::size_t p = 0; p < n && !found; ++p) {
    if (color[p] == White && view.populated(static_cast<PlaceId>(p))) dfs(static_cast<PlaceId>(p));
  }
  return found;
}

bool is_saturation_cycle(const TGraph& g, const CycleWitness& c) {
  const SatView view(g);
  const auto& s = c.steps;
  if (s.size() < 3 || s.size() % 2 == 0) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((i % 2 == 0) != std::holds_alternative<PlaceId>(s[i])) return false;
  }
  if (std::get<PlaceId>(s.front()) != std::get<PlaceId>(s.back())) return false;
  for (std::size_t i = 1; i < s.size(); i += 2) {
    const Node& node = std::get<Node>(s[i]);
    const PlaceId from = std::get<PlaceId>(s[i - 1]);
    const PlaceId to = std::get<PlaceId>(s[i + 1]);
    if (node.lo < 0 || node.hi >= static_cast<PlaceId>(g.place_count())) return false;
    if (!view.populated(from) || !view.populated(to)) return false;
    if (!g.is_saturated(node) || !view.live(node)) return false;
    if (!node.contains(from) || !g.has_edge(node, to)) return false;
  }
  return true;
}

std::size_t saturation_depth(const TGraph& g) {
  const SatView view(g);
  const std::size_t n = g.place_count();
  std::vector<long> memo(n, -1);
  std::vector<bool> active(n, false);
  std::function<std::size_t(PlaceId)> depth = [&](PlaceId p) -> std::size_t {
    const auto i = static_cast<std::size_t>(p);
    if (memo[i] >= 0) return static_cast<std::size_t>(memo[i]);
    if (active[i]) throw ContractViolation("saturation_depth called on a cyclic graph");
    active[i] = true;
    std::size_t best = 0;
    for (const auto& node : view.nodes_of[i]) {
      std::size_t below = 0;
      for (PlaceId t : g.targets(node)) {
        if (view.populated(t)) below = std::max(below, depth(t));
      }
      best = std::max(best, 1 + below);
    }
    active[i] = false;
    memo[i] = static_cast<long>(best);
    return best;
  };
  std::size_t best = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (view.populated(static_cast<PlaceId>(p))) best = std::max(best, depth(static_cast<PlaceId>(p)));
  }
  return best;
}

std::size_t longest_otimes_path(const TGraph& g, std::size_t max_places) {
  const std::size_t n = g.place_count();
  if (n == 0) return 0;
  if (n > max_places) return n - 1;
  std::vector<std::set<PlaceId>> succ(n);
  for (const auto& [node, ts] : g.edges()) {
    for (PlaceId t : ts) {
      succ[static_cast<std::size_t>(node.lo)].insert(t);
      succ[static_cast<std::size_t>(node.hi)].insert(t);
    }
  }
  std::vector<bool> on(n, false);
  std::size_t best = 0;
  std::size_t steps = 0;
  const std::size_t kStepBudget = 2'000'000;
  bool gave_up = false;
  std::function<void(PlaceId, std::size_t)> walk = [&](PlaceId p, std::size_t len) {
    if (gave_up) return;
    if (++steps > kStepBudget) {
      gave_up = true;
      return;
    }
    best = std::max(best, len);
    on[static_cast<std::size_t>(p)] = true;
    for (PlaceId q : succ[static_cast<std::size_t>(p)]) {
      if (!on[static_cast<std::size_t>(q)]) walk(q, len + 1);
    }
    on[static_cast<std::size_t>(p)] = false;
  };
  for (std::size_t p = 0; p < n; ++p) walk(static_cast<PlaceId>(p), 0);
  return gave_up ? n - 1 : best;
}

// ---------------------------------------------------------------------------
// Weak isomorphism
// ---------------------------------------------------------------------------

namespace {

Node image(const Node& n, const std::vector<PlaceId>& map) {
  return Node::of(map[static_cast<std::size_t>(n.lo)], map[static_cast<std::size_t>(n.hi)]);
}

// Checks every node/target pair whose places are all in `assigned`,
// involving at least one place >= `fresh_from` in assignment order.
bool consistent(const TGraph& a, const TGraph& b, const std::vector<PlaceId>& map,
                const std::vector<bool>& assigned, PlaceId newest, bool strict) {
  const auto n = static_cast<PlaceId>(a.place_count());
  auto ok = [&](PlaceId p) { return assigned[static_cast<std::size_t>(p)]; };
  for (PlaceId x = 0; x < n; ++x) {
    if (!ok(x)) continue;
    const Node node = Node::of(newest, x);
    const Node img = image(node, map);
    if (strict && a.is_saturated(node) != b.is_saturated(img)) return false;
    for (PlaceId t = 0; t < n; ++t) {
      if (!ok(t)) continue;
      if (a.has_edge(node, t) != b.has_edge(img, map[static_cast<std::size_t>(t)])) return false;
    }
  }
  // Nodes not containing `newest` whose edge into `newest` just became checkable.
  for (PlaceId x = 0; x < n; ++x) {
    if (!ok(x) || x == newest) continue;
    for (PlaceId y = x; y < n; ++y) {
      if (!ok(y) || y == newest) continue;
      const Node node{x, y};
      if (a.has_edge(node, newest) !=
          b.has_edge(image(node, map), map[static_cast<std::size_t>(newest)])) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

bool is_weak_isomorphism(const TGraph& a, const TGraph& b, const std::vector<PlaceId>& map,
                         bool strict) {
  const std::size_t n = a.place_count();
  if (b.place_count() != n || map.size() != n) return false;
  std::vector<bool> hit(n, false);
  for (std::size_t p = 0; p < n; ++p) {
    const PlaceId q = map[p];
    if (q < 0 || q >= static_cast<PlaceId>(n) || hit[static_cast<std::size_t>(q)]) return false;
    hit[static_cast<std::size_t>(q)] = true;
    if (a.is_otimes(static_cast<PlaceId>(p)) != b.is_otimes(q)) return false;
  }
  for (const auto& node : a.all_nodes()) {
    const Node img = image(node, map);
    if (strict && a.is_saturated(node) != b.is_saturated(img)) return false;
    for (std::size_t t = 0; t < n; ++t) {
      if (a.has_edge(node, static_cast<PlaceId>(t)) != b.has_edge(img, map[t])) return false;
    }
  }
  return true;
}

std::optional<std::vector<PlaceId>> weak_isomorphic(const TGraph& a, const TGraph& b, bool strict,
                                                    std::size_t max_places) {
  const std::size_t n = a.place_count();
  if (n != b.place_count()) return std::nullopt;
  if (n > max_places) {
    throw SizeLimit("weak_isomorphic: " + std::to_string(n) + " places exceed bound " +
                    std::to_string(max_places));
  }
  // Cheap invariants prune candidate images.
  auto profile = [](const TGraph& g, PlaceId p) {
    std::size_t in = 0, out = 0, sat = 0;
    for (const auto& [node, ts] : g.edges()) {
      if (ts.count(p)) ++in;
      if (node.contains(p)) out += ts.size();
    }
    for (const auto& node : g.saturated()) {
      if (node.contains(p)) ++sat;
    }
    return std::tuple{g.is_otimes(p), in, out, sat};
  };
  std::vector<std::tuple<bool, std::size_t, std::size_t, std::size_t>> pa(n), pb(n);
  for (std::size_t p = 0; p < n; ++p) {
    pa[p] = profile(a, static_cast<PlaceId>(p));
    pb[p] = profile(b, static_cast<PlaceId>(p));
    if (!strict) {
      std::get<3>(pa[p]) = 0;
      std::get<3>(pb[p]) = 0;
    }
  }

  std::vector<PlaceId> map(n, -1);
  std::vector<bool> assigned(n, false), used(n, false);
  std::function<bool(std::size_t)> extend = [&](std::size_t p) -> bool {
    if (p == n) return true;
    for (std::size_t q = 0; q < n; ++q) {
      if (used[q] || pa[p] != pb[q]) continue;
      map[p] = static_cast<PlaceId>(q);
      assigned[p] = true;
      used[q] = true;
      if (consistent(a, b, map, assigned, static_cast<PlaceId>(p), strict) && extend(p + 1)) return true;
      assigned[p] = false;
      used[q] = false;
      map[p] = -1;
    }
    return false;
  };
  if (!extend(0)) return std::nullopt;
  return map;
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

std::string to_dot(const TGraph& g) {
  std::ostringstream os;
  os << "digraph otimes {\n  rankdir=LR;\n";
  for (std::size_t p = 0; p < g.place_count(); ++p) {
    const auto id = static_cast<PlaceId>(p);
    os << "  p" << p << " [label=\"" << g.label(id) << "\", shape="
       << (g.is_otimes(id) ? "doublecircle" : "circle") << "];\n";
  }
  std::set<Node> shown;
  for (const auto& [node, _] : g.edges()) shown.insert(node);
  for (const auto& node : g.saturated()) shown.insert(node);
  auto name = [](const Node& n) { return "n" + std::to_string(n.lo) + "_" + std::to_string(n.hi); };
  for (const auto& node : shown) {
    os << "  " << name(node) << " [label=\"{" << g.label(node.lo);
    if (!node.singleton()) os << "," << g.label(node.hi);
    os << "}\", shape=box" << (g.is_saturated(node) ? ", style=bold" : "") << "];\n";
    os << "  p" << node.lo << " -> " << name(node) << " [style=dashed];\n";
    if (!node.singleton()) os << "  p" << node.hi << " -> " << name(node) << " [style=dashed];\n";
    for (PlaceId t : g.targets(node)) os << "  " << name(node) << " -> p" << t << ";\n";
  }
  os << "}\n";
  return os.str();
}

nlohmann::json to_json(const Node& n) {
  if (n.singleton()) return nlohmann::json::array({n.lo});
  return nlohmann::json::array({n.lo, n.hi});
}

nlohmann::json to_json(const TGraph& g) {
  nlohmann::json places = nlohmann::json::array();
  nlohmann::json otimes = nlohmann::json::array();
  for (std::size_t p = 0; p < g.place_count(); ++p) {
    places.push_back(g.label(static_cast<PlaceId>(p)));
    if (g.is_otimes(static_cast<PlaceId>(p))) otimes.push_back(p);
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [node, ts] : g.edges()) {
    edges.push_back({{"from", to_json(node)}, {"to", std::vector<PlaceId>(ts.begin(), ts.end())}});
  }
  nlohmann::json sat = nlohmann::json::array();
  for (const auto& node : g.saturated()) sat.push_back(to_json(node));
  return {{"places", places}, {"otimes", otimes}, {"edges", edges}, {"saturated", sat}};
}

nlohmann::json to_json(const CycleWitness& c) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : c.steps) {
    if (std::holds_alternative<PlaceId>(s)) out.push_back(std::get<PlaceId>(s));
    else out.push_back(to_json(std::get<Node>(s)));
  }
  return out;
}

}  // namespace mluc
