#ifndef MLUC_TESTS_SUPPORT_HPP
#define MLUC_TESTS_SUPPORT_HPP

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mluc/frontend.hpp"
#include "mluc/hfset.hpp"
#include "mluc/partition.hpp"
#include "mluc/tgraph.hpp"

namespace testing {

using namespace mluc;

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

// All 16 sets of rank <= 3.
inline const std::vector<HFSet>& small_pool() {
  static const std::vector<HFSet> pool = first_sets_by_rank(3, 16);
  return pool;
}

/// Random set of rank <= 4 with at most `max_size` elements.
inline HFSet random_set(Rng& rng, std::size_t max_size = 6) {
  const auto& pool = small_pool();
  const std::size_t n = pick(rng, max_size + 1);
  std::vector<HFSet> els;
  for (std::size_t i = 0; i < n; ++i) els.push_back(pool[pick(rng, pool.size())]);
  return HFSet::of(els);
}

/// Random partition of distinct pool elements into `blocks` nonempty blocks.
inline Partition random_partition(Rng& rng, std::size_t blocks, std::size_t per_block = 3) {
  std::vector<HFSet> pool = first_sets_by_rank(4, 64);
  std::shuffle(pool.begin(), pool.end(), rng);
  Partition sigma;
  std::size_t at = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t n = 1 + pick(rng, per_block);
    std::vector<HFSet> els(pool.begin() + static_cast<long>(at), pool.begin() + static_cast<long>(at + n));
    at += n;
    sigma.blocks.push_back(HFSet::of(els));
  }
  return sigma;
}

// --- formulas --------------------------------------------------------------

inline ExprPtr random_expr(Rng& rng, const std::vector<std::string>& vars, int depth) {
  if (depth == 0 || coin(rng, 0.45)) {
    if (coin(rng, 0.1)) return Expr::empty();
    return Expr::var(vars[pick(rng, vars.size())]);
  }
  static const Expr::Kind kinds[] = {Expr::Kind::Union, Expr::Kind::Inter, Expr::Kind::Diff, Expr::Kind::Prod};
  return Expr::binary(kinds[pick(rng, 4)], random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1));
}

/// Eq/Neq/Sub atoms only: NotSub prints as a negated Sub.
inline Atom random_atom(Rng& rng, const std::vector<std::string>& vars, int depth) {
  static const Atom::Kind kinds[] = {Atom::Kind::Eq, Atom::Kind::Neq, Atom::Kind::Sub};
  return Atom{kinds[pick(rng, 3)], random_expr(rng, vars, depth), random_expr(rng, vars, depth)};
}

inline FormulaPtr random_formula(Rng& rng, const std::vector<std::string>& vars, int depth, int expr_depth = 1) {
  if (depth == 0 || coin(rng, 0.35)) return Formula::atom_of(random_atom(rng, vars, expr_depth));
  switch (pick(rng, 4)) {
    case 0: return Formula::negation(random_formula(rng, vars, depth - 1, expr_depth));
    case 1: return Formula::binary(Formula::Kind::And, random_formula(rng, vars, depth - 1, expr_depth),
                                   random_formula(rng, vars, depth - 1, expr_depth));
    case 2: return Formula::binary(Formula::Kind::Or, random_formula(rng, vars, depth - 1, expr_depth),
                                   random_formula(rng, vars, depth - 1, expr_depth));
    default: return Formula::binary(Formula::Kind::Implies, random_formula(rng, vars, depth - 1, expr_depth),
                                    random_formula(rng, vars, depth - 1, expr_depth));
  }
}

/// Random normalized conjunction over `vars` with 1..max_atoms atoms.
inline NormConj random_conj(Rng& rng, const std::vector<std::string>& vars, std::size_t max_atoms) {
  NormConj c;
  c.original_vars = {vars.begin(), vars.end()};
  const std::size_t n = 1 + pick(rng, max_atoms);
  auto v = [&] { return vars[pick(rng, vars.size())]; };
  for (std::size_t i = 0; i < n; ++i) {
    switch (pick(rng, 5)) {
      case 0: c.atoms.push_back(NormAtom::union_of(v(), v(), v())); break;
      case 1: c.atoms.push_back(NormAtom::diff_of(v(), v(), v())); break;
      case 2: c.atoms.push_back(NormAtom::prod_eq(v(), v(), v())); break;
      case 3: c.atoms.push_back(NormAtom::prod_sub(v(), v(), v())); break;
      default: c.atoms.push_back(NormAtom::non_empty(v())); break;
    }
  }
  return c;
}

// --- reference routes ------------------------------------------------------

/// Graph of a partition computed straight from the definitions with
/// pow_star_le2 over materialized blocks.
inline TGraph reference_induced(const Partition& sigma) {
  const std::size_t n = sigma.blocks.size();
  const HFSet dom = sigma.domain();
  TGraph g(n);
  auto node_family = [&](const Node& b) {
    std::vector<HFSet> fam{sigma.blocks[static_cast<std::size_t>(b.lo)]};
    if (!b.singleton()) fam.push_back(sigma.blocks[static_cast<std::size_t>(b.hi)]);
    return pow_star_le2(HFSet::of(fam), 64);
  };
  // Product places: every element lies in the P*<=2 of some node.
  std::vector<HFSet> all_pairs;
  for (const auto& b : g.all_nodes()) {
    const HFSet fam = node_family(b);
    for (const auto& e : fam.elements()) all_pairs.push_back(e);
  }
  const HFSet pairs = HFSet::of(all_pairs);
  for (std::size_t p = 0; p < n; ++p) g.set_otimes(static_cast<PlaceId>(p), is_subset(sigma.blocks[p], pairs));
  for (const auto& b : g.all_nodes()) {
    const HFSet fam = node_family(b);
    for (std::size_t q = 0; q < n; ++q) {
      if (g.is_otimes(static_cast<PlaceId>(q)) && intersects(sigma.blocks[q], fam)) g.add_edge(b, static_cast<PlaceId>(q));
    }
    if (is_subset(fam, dom)) g.set_saturated(b);
  }
  return g;
}

}  // namespace testing

#endif  // MLUC_TESTS_SUPPORT_HPP
