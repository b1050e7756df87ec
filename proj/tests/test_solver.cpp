#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mluc/errors.hpp"
#include "mluc/oracle.hpp"
#include "mluc/solver.hpp"
#include "support.hpp"

using namespace mluc;
using testing::pick;
using testing::Rng;

namespace {

const char* kInf = "x != 0 && z = x*x && z <= x";
const char* kRelaxed = "x != 0 && z <= x*x && z <= x";

NormConj norm(const std::string& text) {
  const auto f = parse(text);
  const auto branches = to_dnf(*f);
  REQUIRE(branches.size() == 1);
  return normalize_branch(branches[0], vars_of(*f));
}

// Places {x} and {x,z}; {x,z} is the product place fed by every node.
PlaceCertificate inf_certificate(const NormConj& phi) {
  PlaceCertificate c;
  c.vars = phi.variables();
  REQUIRE(c.vars[0] == "x");
  REQUIRE(c.vars[1] == "z");
  c.signatures = {0b001, 0b011};
  c.graph = TGraph(2);
  c.graph.set_otimes(1);
  for (const auto& n : {Node::single(0), Node::single(1), Node::of(0, 1)}) {
    c.graph.add_edge(n, 1);
    c.graph.set_saturated(n);
  }
  return c;
}

}  // namespace

TEST_CASE("verify_certificate examples") {
  const NormConj phi = norm(kInf);
  const PlaceCertificate c = inf_certificate(phi);
  CHECK(verify_certificate(phi, c));
  CHECK(c.place_label(1) == "{x,z}");
  CHECK(c.I("z") == std::set<PlaceId>{1});

  PlaceCertificate cut = c;
  cut.graph.remove_edge(Node::single(1), 1);
  const VerifyResult r = verify_certificate(phi, cut);
  CHECK_FALSE(r);
  CHECK(r.condition == 3);

  PlaceCertificate all = c;
  all.graph = TGraph(2);
  all.graph.set_otimes(0);
  all.graph.set_otimes(1);
  all.graph.add_edge(Node::single(0), 1);
  all.graph.add_edge(Node::single(1), 0);
  const VerifyResult r5 = verify_certificate(NormConj{{NormAtom::non_empty("x")}, {"x", "z"}, {}}, all);
  CHECK_FALSE(r5);
  CHECK(r5.condition == 5);

  PlaceCertificate dup = c;
  dup.signatures = {1, 1};
  CHECK(verify_certificate(phi, dup).condition == 0);

  // Condition 1: x must be nonempty.
  PlaceCertificate nox = c;
  nox.signatures = {0b010, 0b110};
  CHECK(verify_certificate(phi, nox).condition == 1);
}

TEST_CASE("search examples") {
  const Verdict inf = search(norm(kInf));
  CHECK(inf.status == Verdict::Status::SatInfiniteOnly);
  REQUIRE(inf.cert);
  REQUIRE(inf.cycle);
  CHECK(verify_certificate(norm(kInf), *inf.cert));
  CHECK(is_saturation_cycle(inf.cert->graph, *inf.cycle));
  CHECK_FALSE(inf.model);

  const Verdict rel = search(norm(kRelaxed));
  CHECK(rel.status == Verdict::Status::SatFinite);
  REQUIRE(rel.model);
  CHECK(eval_all(*rel.model, norm(kRelaxed)));

  CHECK(search(norm("x = x - x && x != 0")).status == Verdict::Status::Unsat);
  CHECK(status_name(Verdict::Status::SatInfiniteOnly) == "sat-infinite-only");
}

TEST_CASE("solve handles disjunctions and restricts models") {
  // Every element of y would have to be a pair of elements of y: no
  // well-founded set does that.
  CHECK(solve("y != 0 && y = y*y").status == Verdict::Status::Unsat);
  const Verdict v = solve("(x = x - x && x != 0) || (y != 0 && z = y*y && z <= y)");
  CHECK(v.status == Verdict::Status::SatInfiniteOnly);
  const char* text = "(x = x - x && x != 0) || (y != 0 && z <= y*y && z <= y)";
  const Verdict w = solve(text);
  REQUIRE(w.status == Verdict::Status::SatFinite);
  CHECK(w.model->size() == 3);
  CHECK(eval_formula(*w.model, *parse(text)));
  CHECK(solve("x = x").status == Verdict::Status::SatFinite);
  const auto j = to_json(solve(kInf));
  CHECK(j["status"] == "sat-infinite-only");
  CHECK(j.contains("cycle"));
  CHECK(j["certificate"]["places"].size() == 2);
}

TEST_CASE("search limits") {
  SolverLimits small;
  small.max_vars = 2;
  CHECK_THROWS_AS(search(norm("x != 0 && y != 0 && z != 0"), small), SizeLimit);
  CHECK_THROWS_AS(solve("a=b&&c=d&&e=f&&g=h&&i=j&&k!=l"), SizeLimit);
}

TEST_CASE("build_model examples") {
  const NormConj rel = norm(kRelaxed);
  const Verdict v = search(rel);
  REQUIRE(v.cert);
  const BuildReport rep = build_model_report(rel, *v.cert);
  CHECK(eval_all(rep.model, rel));
  CHECK(is_subset(rep.model.at("z"), otimes(rep.model.at("x"), rep.model.at("x"))));
  // A5 from the outside.
  const PlaceCertificate back = certificate_of(rep.model, rel.variables());
  REQUIRE(back.place_count() == v.cert->place_count());
  CHECK(weak_isomorphic(back.graph, v.cert->graph));
  CHECK(model_rank(rep.model) <= rank_bound(rel));

  const NormConj boolean = norm("x = y + z && y != 0 && z - y != 0");
  const Verdict bv = search(boolean);
  REQUIRE(bv.cert);
  const BuildReport brep = build_model_report(boolean, *bv.cert);
  CHECK(model_rank(brep.model) == brep.plan.H);
  CHECK(brep.plan.k == 0);
  CHECK(brep.plan.layers.size() == 1);

  // A cyclic certificate is refused.
  CHECK_THROWS_AS(build_model(norm(kInf), inf_certificate(norm(kInf))), ContractViolation);
}

TEST_CASE("cart_saturate examples") {
  const HFSet a = atom_of_rank(0, 3), b = atom_of_rank(1, 3);
  TGraph g(2);
  g.set_otimes(1);
  g.add_edge(Node::single(0), 1);
  const std::vector<HFSet> start{HFSet::of({a, b}), HFSet::singleton(HFSet::singleton(a))};
  CHECK(cart_saturate(start, g, 100) == start);

  g.set_saturated(Node::single(0));
  const auto out = cart_saturate(start, g, 100);
  CHECK(out[0] == start[0]);
  CHECK(out[1] == HFSet::of({HFSet::singleton(a), HFSet::singleton(b), HFSet::pair(a, b)}));

  CHECK_THROWS_AS(cart_saturate({HFSet::of({a}), HFSet::of({HFSet::singleton(a)})}, inf_certificate(norm(kInf)).graph, 1000),
                  BudgetExhausted);
}

TEST_CASE("rank_bound examples") {
  const NormConj two{{NormAtom::union_of("x", "y", "y"), NormAtom::non_empty("x")}, {"x", "y"}, {}};
  const NormConj three{{NormAtom::union_of("x", "y", "y"), NormAtom::non_empty("x")}, {"x", "y", "w"}, {}};
  CHECK(rank_bound(two) <= rank_bound(three));
  const Verdict v = search(two);
  REQUIRE(v.model);
  // 3 possible places, charge 2*3 atoms each, no product layer term.
  CHECK(rank_bound(two) == ackermann_rank_below(6 * 3) + 2);
  CHECK(model_rank(*v.model) <= rank_bound(two));
  const NormConj prod{{NormAtom::prod_sub("x", "y", "y")}, {"x", "y"}, {}};
  CHECK(rank_bound(prod) > rank_bound(two));
  CHECK(rank_bound(norm(kRelaxed)) >= model_rank(*search(norm(kRelaxed)).model));
}

TEST_CASE("property: verdicts are sound and agree with the oracle") {
  Rng rng(83);
  const std::vector<std::string> vars{"x", "y", "z"};
  OracleConfig cfg;
  cfg.max_rank = 3;
  cfg.universe_cap = 5;
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 300; ++i) {
    const NormConj phi = testing::random_conj(rng, vars, 4);
    const Verdict v = search(phi);
    ++counts[static_cast<int>(v.status)];
    if (v.status != Verdict::Status::Unsat) {
      REQUIRE(v.cert);
      CHECK(verify_certificate(phi, *v.cert));
    }
    if (v.status == Verdict::Status::SatFinite) {
      CHECK(eval_all(*v.model, phi));
      CHECK(model_rank(*v.model) <= rank_bound(phi));
      CHECK_FALSE(detect_saturation_cycle(v.cert->graph));
    }
    if (v.status == Verdict::Status::SatInfiniteOnly) CHECK(is_saturation_cycle(v.cert->graph, *v.cycle));
    if (auto m = oracle_search(phi, cfg)) {
      INFO(print(phi));
      CHECK(v.status == Verdict::Status::SatFinite);
      // Model-to-certificate direction.
      CHECK(verify_certificate(phi, certificate_of(*m, phi.variables())));
    }
  }
  CHECK(counts[0] > 10);
  CHECK(counts[1] > 10);
}

TEST_CASE("property: the verdict is deterministic") {
  Rng rng(89);
  const std::vector<std::string> vars{"x", "y"};
  for (int i = 0; i < 100; ++i) {
    const NormConj phi = testing::random_conj(rng, vars, 3);
    CHECK(to_json(search(phi)) == to_json(search(phi)));
  }
}
