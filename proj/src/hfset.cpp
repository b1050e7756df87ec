#include "mluc/hfset.hpp"

#include <algorithm>
#include <bit>

#include "mluc/errors.hpp"

namespace mluc {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

HFSet HFSet::from_sorted(std::vector<HFSet> elements) {
  if (elements.empty()) return HFSet{};
  auto rep = std::make_shared<Rep>();
  unsigned r = 0;
  std::size_t h = 0xcbf29ce484222325ULL ^ elements.size();
  for (const auto& e : elements) {
    r = std::max(r, e.rank() + 1);
    h = mix(h, e.hash());
  }
  rep->elements = std::move(elements);
  rep->rank = r;
  rep->hash = h;
  HFSet s;
  s.rep_ = std::move(rep);
  return s;
}

HFSet HFSet::of(std::vector<HFSet> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return from_sorted(std::move(elements));
}

HFSet HFSet::singleton(const HFSet& a) { return from_sorted({a}); }

HFSet HFSet::pair(const HFSet& a, const HFSet& b) {
  auto c = a <=> b;
  if (c == 0) return singleton(a);
  if (c < 0) return from_sorted({a, b});
  return from_sorted({b, a});
}

std::span<const HFSet> HFSet::elements() const noexcept {
  if (!rep_) return {};
  return rep_->elements;
}

bool HFSet::contains(const HFSet& e) const {
  auto els = elements();
  return std::binary_search(els.begin(), els.end(), e);
}

bool operator==(const HFSet& a, const HFSet& b) {
  if (a.rep_ == b.rep_) return true;
  if (a.size() != b.size() || a.hash() != b.hash() || a.rank() != b.rank()) return false;
  auto ea = a.elements();
  auto eb = b.elements();
  return std::equal(ea.begin(), ea.end(), eb.begin());
}

std::strong_ordering operator<=>(const HFSet& a, const HFSet& b) {
  if (a.rep_ == b.rep_) return std::strong_ordering::equal;
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  auto ea = a.elements();
  auto eb = b.elements();
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (auto c = ea[i] <=> eb[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string HFSet::str() const { return to_json(*this).dump(); }

unsigned rank(const HFSet& s) { return s.rank(); }

HFSet set_union(const HFSet& a, const HFSet& b) {
  std::vector<HFSet> out;
  out.reserve(a.size() + b.size());
  auto ea = a.elements();
  auto eb = b.elements();
  std::set_union(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(out));
  return HFSet::from_sorted(std::move(out));
}

HFSet set_intersection(const HFSet& a, const HFSet& b) {
  std::vector<HFSet> out;
  auto ea = a.elements();
  auto eb = b.elements();
  std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(out));
  return HFSet::from_sorted(std::move(out));
}

HFSet set_difference(const HFSet& a, const HFSet& b) {
  std::vector<HFSet> out;
  auto ea = a.elements();
  auto eb = b.elements();
  std::set_difference(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(out));
  return HFSet::from_sorted(std::move(out));
}

bool is_subset(const HFSet& a, const HFSet& b) {
  auto ea = a.elements();
  auto eb = b.elements();
  return std::includes(eb.begin(), eb.end(), ea.begin(), ea.end());
}

bool intersects(const HFSet& a, const HFSet& b) {
  auto ea = a.elements();
  auto eb = b.elements();
  auto i = ea.begin();
  auto j = eb.begin();
  while (i != ea.end() && j != eb.end()) {
    auto c = *i <=> *j;
    if (c == 0) return true;
    if (c < 0) ++i; else ++j;
  }
  return false;
}

HFSet big_union(const HFFamily& family) {
  std::vector<HFSet> all;
  for (const auto& m : family.elements()) {
    auto els = m.elements();
    all.insert(all.end(), els.begin(), els.end());
  }
  return HFSet::of(std::move(all));
}

HFSet otimes(const HFSet& s, const HFSet& t) {
  std::vector<HFSet> out;
  out.reserve(s.size() * t.size());
  for (const auto& u : s.elements()) {
    for (const auto& v : t.elements()) out.push_back(HFSet::pair(u, v));
  }
  return HFSet::of(std::move(out));
}

namespace {

bool meets_all(const HFSet& t, const HFFamily& family) {
  for (const auto& s : family.elements()) {
    if (!intersects(t, s)) return false;
  }
  return true;
}

HFSet checked_union(const HFFamily& family, std::size_t cap) {
  HFSet u = big_union(family);
  if (u.size() > cap) {
    throw SizeLimit("intersecting power set: |union S| = " + std::to_string(u.size()) +
                    " exceeds cap " + std::to_string(cap));
  }
  return u;
}

}  // namespace

HFFamily pow_star(const HFFamily& family, std::size_t cap) {
  HFSet u = checked_union(family, std::min<std::size_t>(cap, 62));
  auto els = u.elements();
  std::vector<HFSet> out;
  const std::uint64_t n = els.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<HFSet> picked;
    for (std::uint64_t i = 0; i < n; ++i) {
      if (mask >> i & 1) picked.push_back(els[i]);
    }
    HFSet t = HFSet::from_sorted(std::move(picked));
    if (meets_all(t, family)) out.push_back(std::move(t));
  }
  return HFSet::of(std::move(out));
}

HFFamily pow_star_le2(const HFFamily& family, std::size_t cap) {
  HFSet u = checked_union(family, cap);
  auto els = u.elements();
  std::vector<HFSet> out;
  if (meets_all(HFSet{}, family)) out.emplace_back();
  for (std::size_t i = 0; i < els.size(); ++i) {
    HFSet one = HFSet::singleton(els[i]);
    if (meets_all(one, family)) out.push_back(one);
    for (std::size_t j = i + 1; j < els.size(); ++j) {
      HFSet two = HFSet::from_sorted({els[i], els[j]});
      if (meets_all(two, family)) out.push_back(std::move(two));
    }
  }
  return HFSet::of(std::move(out));
}

HFFamily pow_star_gt2(const HFFamily& family, std::size_t cap) {
  HFFamily all = pow_star(family, cap);
  std::vector<HFSet> out;
  for (const auto& t : all.elements()) {
    if (t.size() > 2) out.push_back(t);
  }
  return HFSet::from_sorted(std::move(out));
}

HFSet von_neumann(unsigned n) {
  std::vector<HFSet> els;
  HFSet cur;
  for (unsigned i = 0; i < n; ++i) {
    els.push_back(cur);
    cur = HFSet::of(els);
  }
  return cur;
}

HFSet ackermann(std::uint64_t i) {
  std::vector<HFSet> els;
  for (unsigned b = 0; b < 64; ++b) {
    if (i >> b & 1) els.push_back(ackermann(b));
  }
  return HFSet::of(std::move(els));
}

unsigned ackermann_rank(std::uint64_t i) {
  if (i == 0) return 0;
  return 1 + ackermann_rank(static_cast<std::uint64_t>(std::bit_width(i) - 1));
}

unsigned ackermann_rank_below(std::uint64_t count) {
  // rank(ack(i)) is nondecreasing in i.
  return count <= 1 ? 0 : ackermann_rank(count - 1);
}

HFSet atom_of_rank(std::uint64_t index, unsigned H) {
  const unsigned r = ackermann_rank(index);
  if (H < r + 2) {
    throw BadRank("atom_of_rank: H = " + std::to_string(H) + " too small for index " +
                  std::to_string(index) + " (needs >= " + std::to_string(r + 2) + ")");
  }
  return HFSet::pair(von_neumann(H - 1), ackermann(index));
}

std::vector<HFSet> first_sets_by_rank(unsigned max_rank, std::size_t count) {
  std::vector<HFSet> out;
  if (count == 0) return out;
  out.emplace_back();  // the only set of rank 0
  // All sets of rank < r, canonically sorted.
  std::vector<HFSet> below{HFSet{}};
  for (unsigned r = 1; r <= max_rank && out.size() < count; ++r) {
    // Sets of rank exactly r are the subsets of `below` holding an element
    // of rank r - 1.  Index-lexicographic combinations of a canonically
    // sorted base come out in canonical order.
    const std::size_t n = below.size();
    for (std::size_t k = 1; k <= n && out.size() < count; ++k) {
      std::vector<std::size_t> idx(k);
      for (std::size_t i = 0; i < k; ++i) idx[i] = i;
      while (true) {
        bool top = false;
        std::vector<HFSet> els;
        els.reserve(k);
        for (auto i : idx) {
          els.push_back(below[i]);
          top = top || below[i].rank() == r - 1;
        }
        if (top) {
          out.push_back(HFSet::from_sorted(std::move(els)));
          if (out.size() >= count) break;
        }
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
      }
    }
    if (out.size() >= count || r == max_rank) break;
    if (n > 16) throw SizeLimit("first_sets_by_rank: level beyond V_5 requested");
    std::vector<HFSet> next;
    next.reserve(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<HFSet> els;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1) els.push_back(below[i]);
      }
      next.push_back(HFSet::from_sorted(std::move(els)));
    }
    std::sort(next.begin(), next.end());
    below = std::move(next);
  }
  return out;
}

nlohmann::json to_json(const HFSet& s) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : s.elements()) j.push_back(to_json(e));
  return j;
}

HFSet hfset_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw BadModel("hereditarily finite set must be a nested array");
  std::vector<HFSet> els;
  els.reserve(j.size());
  for (const auto& e : j) els.push_back(hfset_from_json(e));
  return HFSet::of(std::move(els));
}

HFSet parse_hfset(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw BadModel(std::string("bad set literal: ") + e.what());
  }
  return hfset_from_json(j);
}

}  // namespace mluc
