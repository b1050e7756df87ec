#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "mluc/errors.hpp"
#include "mluc/oracle.hpp"
#include "support.hpp"

using namespace mluc;
using testing::pick;
using testing::Rng;

namespace {

const HFSet E{};
const HFSet S1 = HFSet::singleton(E);
const HFSet SS = HFSet::singleton(S1);
const HFSet S2 = HFSet::pair(E, S1);

std::map<std::string, std::set<int>> random_imap(Rng& rng, const std::vector<std::string>& vars, int blocks) {
  std::map<std::string, std::set<int>> imap;
  for (const auto& v : vars) {
    auto& ids = imap[v];
    for (int b = 0; b < blocks; ++b) {
      if (testing::coin(rng)) ids.insert(b);
    }
  }
  return imap;
}

}  // namespace

TEST_CASE("eval_literal examples") {
  CHECK(eval_literal({{"x", S1}}, NormAtom::union_of("x", "x", "x")));
  CHECK(eval_literal({{"x", S1}, {"z", SS}}, NormAtom::prod_eq("z", "x", "x")));
  CHECK_FALSE(eval_literal({{"x", E}}, NormAtom::non_empty("x")));
  CHECK(eval_literal({{"x", S2}, {"z", SS}}, NormAtom::prod_sub("z", "x", "x")));
  CHECK_FALSE(eval_literal({{"x", S1}, {"z", HFSet::singleton(S2)}}, NormAtom::prod_sub("z", "x", "x")));
  CHECK(eval_literal({{"x", S1}, {"y", S2}, {"z", S1}}, NormAtom::diff_of("x", "y", "y")) == false);
  CHECK_THROWS_AS(eval_literal({{"x", S1}}, NormAtom::union_of("x", "y", "x")), UnboundVariable);
}

TEST_CASE("eval of surface formulas") {
  const SetAssignment m{{"x", S2}, {"y", S1}};
  CHECK(eval_formula(m, *parse("y <= x && x != y")));
  CHECK(eval_formula(m, *parse("x & y = y")));
  CHECK_FALSE(eval_formula(m, *parse("x - y = 0")));
}

TEST_CASE("venn_of examples") {
  const HFSet a = E, b = S1, c = SS;
  const VennResult v = venn_of({{"x", HFSet::of({a, b})}, {"y", HFSet::of({b, c})}}, {"x", "y"});
  REQUIRE(v.assignment.partition.blocks.size() == 3);
  // Signatures: bit 0 = x, bit 1 = y.
  std::map<unsigned, HFSet> by_sig;
  for (std::size_t i = 0; i < v.signatures.size(); ++i) by_sig[v.signatures[i]] = v.assignment.partition.blocks[i];
  CHECK(by_sig.at(1) == HFSet::singleton(a));
  CHECK(by_sig.at(3) == HFSet::singleton(b));
  CHECK(by_sig.at(2) == HFSet::singleton(c));

  const VennResult none = venn_of({{"x", E}, {"y", E}});
  CHECK(none.assignment.partition.blocks.empty());
}

TEST_CASE("check_boolean_on_signatures examples") {
  CHECK(check_boolean_on_signatures({{"x", {1, 2}}, {"y", {1}}, {"z", {2}}}, NormAtom::union_of("x", "y", "z")));
  CHECK(check_boolean_on_signatures({{"x", {1}}, {"y", {1, 2}}, {"z", {2}}}, NormAtom::diff_of("x", "y", "z")));
  CHECK_FALSE(check_boolean_on_signatures({{"x", {}}}, NormAtom::non_empty("x")));
  CHECK_THROWS_AS(check_boolean_on_signatures({}, NormAtom::prod_eq("x", "y", "z")), std::invalid_argument);
}

TEST_CASE("partition validation") {
  const Partition ok{{S1, SS}};
  const Partition with_empty{{S1, E}};
  const Partition overlapping{{S2, S1}};
  CHECK_NOTHROW(ok.validate());
  CHECK_THROWS_AS(with_empty.validate(), ContractViolation);
  CHECK_THROWS_AS(overlapping.validate(), ContractViolation);
  CHECK(ok.domain() == HFSet::of({E, S1}));
}

TEST_CASE("model json") {
  const SetAssignment m{{"x", S2}, {"y", E}};
  CHECK(model_from_json(model_to_json(m)) == m);
  CHECK(model_to_json(m).dump() == R"({"vars":{"x":[[],[[]]],"y":[]}})");
  CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"x": []})")), BadModel);
  CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"vars": {"x": 3}})")), BadModel);
  const VennResult v = venn_of(m, {"x", "y"});
  CHECK(partition_to_json(v).dump() == R"([{"block":[[],[[]]],"signature":["x"]}])");
}

TEST_CASE("property: Venn partitions reproduce the assignment") {
  Rng rng(51);
  const std::vector<std::string> vars{"u", "v", "w"};
  for (int i = 0; i < 300; ++i) {
    SetAssignment m;
    for (const auto& v : vars) m[v] = testing::random_set(rng);
    const VennResult venn = venn_of(m, vars);
    CHECK_NOTHROW(venn.assignment.partition.validate());
    CHECK(venn.assignment.induced() == m);
    for (std::size_t b = 0; b < venn.signatures.size(); ++b) {
      CHECK(venn.signatures[b] != 0);
      for (std::size_t k = 0; k < vars.size(); ++k) {
        const bool inside = is_subset(venn.assignment.partition.blocks[b], m[vars[k]]);
        const bool outside = !intersects(venn.assignment.partition.blocks[b], m[vars[k]]);
        CHECK(((venn.signatures[b] >> k & 1) ? inside : outside));
      }
    }
  }
}

TEST_CASE("property: Boolean literals depend only on signatures") {
  Rng rng(53);
  const std::vector<std::string> vars{"x", "y", "z"};
  int agreements = 0;
  for (int i = 0; i < 1000; ++i) {
    const int blocks = 1 + static_cast<int>(pick(rng, 4));
    PartitionAssignment pa{testing::random_partition(rng, static_cast<std::size_t>(blocks)), vars,
                           random_imap(rng, vars, blocks)};
    const SetAssignment m = pa.induced();
    auto v = [&] { return vars[pick(rng, 3)]; };
    NormAtom a = NormAtom::non_empty(v());
    switch (pick(rng, 3)) {
      case 0: a = NormAtom::union_of(v(), v(), v()); break;
      case 1: a = NormAtom::diff_of(v(), v(), v()); break;
      default: break;
    }
    const bool semantic = eval_literal(m, a);
    CHECK(semantic == check_boolean_on_signatures(pa.imap, a));
    agreements += semantic;
  }
  CHECK(agreements > 100);
}

TEST_CASE("property: I-set equations survive relabeling by a bijection") {
  Rng rng(57);
  const std::vector<std::string> vars{"x", "y", "z"};
  for (int i = 0; i < 300; ++i) {
    const int blocks = 1 + static_cast<int>(pick(rng, 5));
    const auto imap = random_imap(rng, vars, blocks);
    std::vector<int> beta(static_cast<std::size_t>(blocks));
    std::iota(beta.begin(), beta.end(), 0);
    std::shuffle(beta.begin(), beta.end(), rng);
    std::map<std::string, std::set<int>> moved;
    for (const auto& [v, ids] : imap) {
      for (int id : ids) moved[v].insert(beta[static_cast<std::size_t>(id)]);
    }
    for (const auto& a : {NormAtom::union_of("x", "y", "z"), NormAtom::diff_of("x", "y", "z"),
                          NormAtom::union_of("z", "x", "x"), NormAtom::non_empty("y")}) {
      CHECK(check_boolean_on_signatures(imap, a) == check_boolean_on_signatures(moved, a));
    }
  }
}

TEST_CASE("relaxed example: oracle model survives the Venn round trip") {
  const auto branches = to_dnf(*parse("x != 0 && z <= x*x && z <= x"));
  const NormConj phi = normalize_branch(branches.at(0));
  const auto m = oracle_search(phi);
  REQUIRE(m.has_value());
  const VennResult v = venn_of(*m, phi.variables());
  const SetAssignment back = v.assignment.induced();
  for (const auto& a : phi.atoms) CHECK(eval_literal(back, a));
}
