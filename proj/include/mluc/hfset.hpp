#ifndef MLUC_HFSET_HPP
#define MLUC_HFSET_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace mluc {

/// A hereditarily finite set in canonical form.
///
/// Elements are kept strictly increasing under the canonical order
/// (length-lexicographic on the recursively ordered element lists), so
/// structural equality coincides with set equality.  Values are immutable
/// and share their representation; copying is cheap.
class HFSet {
 public:
  HFSet() = default;  // the empty set

  /// Builds a set from arbitrary elements (sorted and deduplicated here).
  static HFSet of(std::vector<HFSet> elements);
  /// Builds a set from elements already strictly increasing.  Unchecked.
  static HFSet from_sorted(std::vector<HFSet> elements);

  static HFSet singleton(const HFSet& a);
  /// {a, b}; collapses to {a} when a == b.
  static HFSet pair(const HFSet& a, const HFSet& b);

  std::span<const HFSet> elements() const noexcept;
  std::size_t size() const noexcept { return rep_ ? rep_->elements.size() : 0; }
  bool empty() const noexcept { return size() == 0; }
  unsigned rank() const noexcept { return rep_ ? rep_->rank : 0; }
  std::size_t hash() const noexcept { return rep_ ? rep_->hash : kEmptyHash; }

  bool contains(const HFSet& e) const;

  friend bool operator==(const HFSet& a, const HFSet& b);
  friend std::strong_ordering operator<=>(const HFSet& a, const HFSet& b);

  /// Compact nested-array text, e.g. "[[],[[]]]".
  std::string str() const;

 private:
  struct Rep {
    std::vector<HFSet> elements;
    unsigned rank = 0;
    std::size_t hash = 0;
  };
  static constexpr std::size_t kEmptyHash = 0x9e3779b97f4a7c15ULL;

  std::shared_ptr<const Rep> rep_;
};

struct HFSetHash {
  std::size_t operator()(const HFSet& s) const noexcept { return s.hash(); }
};

// A family of hereditarily finite sets is itself a hereditarily finite set.
using HFFamily = HFSet;

unsigned rank(const HFSet& s);

HFSet set_union(const HFSet& a, const HFSet& b);
HFSet set_intersection(const HFSet& a, const HFSet& b);
HFSet set_difference(const HFSet& a, const HFSet& b);
bool is_subset(const HFSet& a, const HFSet& b);
bool intersects(const HFSet& a, const HFSet& b);
/// Union of all members of a family.
HFSet big_union(const HFFamily& family);

/// Unordered Cartesian product: { {u,u'} : u in s, u' in t }.
HFSet otimes(const HFSet& s, const HFSet& t);

inline constexpr std::size_t kDefaultPowStarCap = 20;

/// Subsets of the union of S meeting every member of S.
/// Throws SizeLimit when |union S| exceeds cap.
HFFamily pow_star(const HFFamily& family, std::size_t cap = kDefaultPowStarCap);
/// Members of pow_star of cardinality at most 2.  Enumerates only the small
/// subsets, so the cap applies to |union S| squared rather than 2^|union S|.
HFFamily pow_star_le2(const HFFamily& family, std::size_t cap = kDefaultPowStarCap);
/// Members of pow_star of cardinality greater than 2.
HFFamily pow_star_gt2(const HFFamily& family, std::size_t cap = kDefaultPowStarCap);

/// von Neumann ordinal n.
HFSet von_neumann(unsigned n);
/// Ackermann coding of a natural: ack(i) = { ack(j) : bit j of i is set }.
HFSet ackermann(std::uint64_t i);
/// rank(ackermann(i)) without building the set.
unsigned ackermann_rank(std::uint64_t i);
/// max rank(ackermann(i)) over i < count (0 when count <= 1).
unsigned ackermann_rank_below(std::uint64_t count);

/// {vN(H-1), ack(index)}: a set of rank exactly H, injective in index.
/// Throws BadRank unless H >= rank(ack(index)) + 2.
HFSet atom_of_rank(std::uint64_t index, unsigned H);

/// The first `count` hereditarily finite sets of rank <= max_rank, ordered
/// by rank and then canonically.  Throws SizeLimit when enumeration would
/// need the full level V_6 or beyond.
std::vector<HFSet> first_sets_by_rank(unsigned max_rank, std::size_t count);

nlohmann::json to_json(const HFSet& s);
/// Accepts nested arrays; duplicates are merged, order is irrelevant.
HFSet hfset_from_json(const nlohmann::json& j);
HFSet parse_hfset(const std::string& text);

}  // namespace mluc

template <>
struct std::hash<mluc::HFSet> {
  std::size_t operator()(const mluc::HFSet& s) const noexcept { return s.hash(); }
};

#endif  // MLUC_HFSET_HPP
