#ifndef MLUC_TGRAPH_HPP
#define MLUC_TGRAPH_HPP

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mluc/hfset.hpp"
#include "mluc/partition.hpp"

namespace mluc {

using PlaceId = int;

/// An unordered set of one or two places.  Larger nodes carry no product
/// content over disjoint blocks and are never represented.
struct Node {
  PlaceId lo = 0;
  PlaceId hi = 0;  // == lo for a singleton

  static Node of(PlaceId a, PlaceId b) { return a <= b ? Node{a, b} : Node{b, a}; }
  static Node single(PlaceId a) { return Node{a, a}; }

  bool singleton() const { return lo == hi; }
  bool contains(PlaceId p) const { return p == lo || p == hi; }

  // Singletons first, then lexicographic.
  friend std::strong_ordering operator<=>(const Node& a, const Node& b) {
    if (auto c = a.singleton() <=> b.singleton(); c != 0) return 0 <=> c;
    if (auto c = a.lo <=> b.lo; c != 0) return c;
    return a.hi <=> b.hi;
  }
  friend bool operator==(const Node&, const Node&) = default;
};

/// Places, product labels, distribution edges (node -> product place) and
/// saturation flags.  Membership edges (place -> node containing it) are
/// implicit.
class TGraph {
 public:
  TGraph() = default;
  explicit TGraph(std::size_t places);

  std::size_t place_count() const { return otimes_.size(); }
  bool is_otimes(PlaceId p) const { return otimes_.at(static_cast<std::size_t>(p)); }
  void set_otimes(PlaceId p, bool v = true);

  /// Requires `to` to be a product place.
  void add_edge(const Node& from, PlaceId to);
  void remove_edge(const Node& from, PlaceId to);
  bool has_edge(const Node& from, PlaceId to) const;
  const std::set<PlaceId>& targets(const Node& n) const;
  const std::map<Node, std::set<PlaceId>>& edges() const { return targets_; }
  std::vector<Node> incoming(PlaceId p) const;

  void set_saturated(const Node& n, bool v = true);
  bool is_saturated(const Node& n) const { return saturated_.count(n) != 0; }
  const std::set<Node>& saturated() const { return saturated_; }

  /// Every node of size 1 or 2 over the places, in Node order.
  std::vector<Node> all_nodes() const;

  void set_labels(std::vector<std::string> labels) { labels_ = std::move(labels); }
  std::string label(PlaceId p) const;

  /// Throws ContractViolation when an invariant is broken.
  void validate() const;

  friend bool operator==(const TGraph&, const TGraph&) = default;

 private:
  void check_node(const Node& n) const;

  std::vector<bool> otimes_;
  std::map<Node, std::set<PlaceId>> targets_;
  std::set<Node> saturated_;
  std::vector<std::string> labels_;
};

/// The graph a concrete partition complies with: product places are blocks
/// made only of 1- and 2-element sets over the partition domain; node B
/// targets product place q when q meets P*<=2 of B's blocks; B is saturated
/// when all of P*<=2 of its blocks lies in the domain.
TGraph induce_from_partition(const Partition& sigma);

struct Closure {
  std::vector<bool> populated;
  std::vector<int> layer;  // -1 when unpopulated; 0 for non-product places
  bool all_populated = false;
};

/// Least fixpoint: non-product places are populated; a product place is
/// populated once some node targeting it has all members populated.
Closure population_closure(const TGraph& g);

/// Alternating place / node sequence, first place == last place.
struct CycleWitness {
  std::vector<std::variant<PlaceId, Node>> steps;
};

/// Cycle through populated places and saturated nodes with populated
/// members (place -> node by membership, node -> place by distribution).
std::optional<CycleWitness> detect_saturation_cycle(const TGraph& g);
bool is_saturation_cycle(const TGraph& g, const CycleWitness& c);

/// Longest path, counted in saturated nodes, of the saturation graph.
/// Only meaningful when detect_saturation_cycle returns nothing.
std::size_t saturation_depth(const TGraph& g);

/// Longest repetition-free path through distribution edges, counted in
/// edges.  Exhaustive up to `max_places`, place_count - 1 beyond.
std::size_t longest_otimes_path(const TGraph& g, std::size_t max_places = 16);

inline constexpr std::size_t kDefaultIsoPlaces = 16;

/// Checks a given place bijection (map[p] = image of p).
bool is_weak_isomorphism(const TGraph& a, const TGraph& b, const std::vector<PlaceId>& map,
                         bool strict = false);
/// Searches a bijection preserving product labels and distribution edges
/// both ways (and saturation when strict).  Throws SizeLimit above
/// max_places.
std::optional<std::vector<PlaceId>> weak_isomorphic(const TGraph& a, const TGraph& b,
                                                    bool strict = false,
                                                    std::size_t max_places = kDefaultIsoPlaces);

std::string to_dot(const TGraph& g);
nlohmann::json to_json(const TGraph& g);
nlohmann::json to_json(const Node& n);
nlohmann::json to_json(const CycleWitness& c);

}  // namespace mluc

#endif  // MLUC_TGRAPH_HPP
