#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mluc/errors.hpp"
#include "mluc/oracle.hpp"
#include "support.hpp"

using namespace mluc;
using testing::Rng;

namespace {

const HFSet E{};
const HFSet S1 = HFSet::singleton(E);

NormConj norm(const std::string& text) {
  const auto f = parse(text);
  return normalize_branch(to_dnf(*f).at(0), vars_of(*f));
}

HFSet subset_of(const std::vector<HFSet>& u, std::uint64_t mask) {
  std::vector<HFSet> els;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (mask >> i & 1) els.push_back(u[i]);
  }
  return HFSet::of(els);
}

// Plain odometer over materialized sets, first variable most significant.
std::optional<SetAssignment> naive_search(const NormConj& phi, const std::vector<HFSet>& u) {
  const auto vars = phi.variables();
  const std::uint64_t per = std::uint64_t{1} << u.size();
  std::vector<std::uint64_t> digit(vars.size(), 0);
  while (true) {
    SetAssignment m;
    for (std::size_t v = 0; v < vars.size(); ++v) m[vars[v]] = subset_of(u, digit[v]);
    if (eval_all(m, phi)) return m;
    std::size_t v = vars.size();
    while (v > 0 && ++digit[v - 1] == per) digit[--v] = 0;
    if (v == 0) return std::nullopt;
  }
}

}  // namespace

TEST_CASE("oracle examples") {
  const auto m = oracle_search(NormConj{{NormAtom::diff_of("x", "x", "x")}, {"x"}, {}});
  REQUIRE(m);
  CHECK(m->at("x") == E);

  OracleConfig big;
  big.max_rank = 4;
  big.universe_cap = 10;
  CHECK_FALSE(oracle_search(norm("x != 0 && z = x*x && z <= x"), big));

  const NormConj rel = norm("x != 0 && z <= x*x && z <= x");
  const auto r = oracle_search(rel);
  REQUIRE(r);
  CHECK(eval_all(*r, rel));
  // The hand example is a model too, once the fresh variable is filled in.
  SetAssignment hand{{"x", HFSet::of({E, S1})}, {"z", HFSet::singleton(S1)}};
  for (const auto& f : rel.fresh_vars) hand[f] = E;
  for (const auto& a : rel.atoms) {
    if (a.kind == NormAtom::Kind::DiffA && a.x == rel.fresh_vars.at(0)) {
      hand[a.x] = set_difference(hand.at(a.y), hand.at(a.z));
    }
  }
  CHECK(eval_all(hand, rel));
}

TEST_CASE("oracle universe and caps") {
  OracleConfig cfg;
  CHECK(oracle_universe(cfg).size() == 8);
  cfg.universe_cap = 4;
  CHECK(oracle_universe(cfg) == std::vector<HFSet>{E, S1, HFSet::singleton(S1), HFSet::pair(E, S1)});
  cfg.max_rank = 1;
  CHECK(oracle_universe(cfg).size() == 2);

  OracleConfig bad;
  bad.universe_cap = 65;
  CHECK_THROWS_AS(oracle_search(NormConj{{NormAtom::non_empty("x")}, {"x"}, {}}, bad), SizeLimit);
  bad = {};
  bad.max_rank = 0;
  CHECK_THROWS_AS(bad.validate(), SizeLimit);
  OracleConfig narrow;
  narrow.var_cap = 1;
  CHECK_THROWS_AS(oracle_search(NormConj{{NormAtom::union_of("x", "y", "y")}, {"x", "y"}, {}}, narrow), SizeLimit);
}

TEST_CASE("formula-level oracle") {
  const auto m = oracle_search(*parse("x != 0 && y <= x && x - y != 0"));
  REQUIRE(m);
  CHECK(eval_formula(*m, *parse("x != 0 && y <= x && x - y != 0")));
  CHECK_FALSE(oracle_search(*parse("x != x")));
}

TEST_CASE("property: agrees with a naive enumeration") {
  Rng rng(97);
  OracleConfig cfg;
  cfg.max_rank = 3;
  cfg.universe_cap = 4;
  const auto u = oracle_universe(cfg);
  int found = 0;
  for (int i = 0; i < 150; ++i) {
    const NormConj phi = testing::random_conj(rng, {"x", "y", "z"}, 3);
    const auto fast = oracle_search(phi, cfg);
    const auto slow = naive_search(phi, u);
    INFO(print(phi));
    REQUIRE(fast.has_value() == slow.has_value());
    if (fast) {
      ++found;
      CHECK(*fast == *slow);
    }
  }
  CHECK(found > 20);
}

TEST_CASE("property: enlarging caps keeps found models") {
  Rng rng(101);
  int found = 0;
  for (int i = 0; i < 200; ++i) {
    const NormConj phi = testing::random_conj(rng, {"x", "y"}, 3);
    OracleConfig lo;
    lo.max_rank = 2;
    lo.universe_cap = 3;
    OracleConfig hi;
    hi.max_rank = 3;
    hi.universe_cap = 7;
    if (oracle_search(phi, lo)) {
      ++found;
      CHECK(oracle_search(phi, hi).has_value());
    }
  }
  CHECK(found > 20);
}
