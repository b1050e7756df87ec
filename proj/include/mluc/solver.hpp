#ifndef MLUC_SOLVER_HPP
#define MLUC_SOLVER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "mluc/frontend.hpp"
#include "mluc/partition.hpp"
#include "mluc/tgraph.hpp"

namespace mluc {

using Signature = std::uint32_t;  // bit i stands for vars[i]

/// A guessed Venn skeleton: one signature per place plus the place graph.
/// I(v) is always derived from the signatures.
struct PlaceCertificate {
  std::vector<std::string> vars;
  std::vector<Signature> signatures;
  TGraph graph;

  std::size_t place_count() const { return signatures.size(); }
  int var_index(const std::string& v) const;  // -1 when absent
  bool in(PlaceId p, const std::string& v) const;
  std::set<PlaceId> I(const std::string& v) const;
  /// Throws ContractViolation when signatures repeat, are empty or
  /// disagree with the graph size, or when the graph is malformed.
  void validate() const;
  std::string place_label(PlaceId p) const;
};

struct VerifyResult {
  bool ok = true;
  int condition = 0;  // 1..5 on failure, 0 for malformed input
  std::string reason;

  explicit operator bool() const { return ok; }
};

/// Polynomial check of the five certificate conditions.  Never throws.
VerifyResult verify_certificate(const NormConj& phi, const PlaceCertificate& c);

struct SolverLimits {
  std::size_t max_vars = 10;
  std::size_t search_budget = std::size_t{1} << 20;  // candidate certificates
  std::size_t element_budget = 500'000;              // elements materialized by the builder
  std::size_t pop_budget = 1'000'000;                // cart_saturate pops
  std::size_t dnf_cap = kDefaultDnfCap;
};

struct Verdict {
  enum class Status { Unsat, SatFinite, SatInfiniteOnly };
  Status status = Status::Unsat;
  std::optional<SetAssignment> model;
  std::optional<PlaceCertificate> cert;
  std::optional<CycleWitness> cycle;
};

std::string status_name(Verdict::Status s);

/// Decides a normalized conjunction.  Throws SizeLimit when the variable
/// count or the search budget is exceeded.
Verdict search(const NormConj& phi, const SolverLimits& limits = {});

/// Decides a surface formula branch by branch.  Models are restricted to
/// the formula's own variables.
Verdict solve(const Formula& f, const SolverLimits& limits = {});
Verdict solve(const std::string& text, const SolverLimits& limits = {});

struct BuilderPlan {
  std::vector<std::vector<PlaceId>> layers;
  std::size_t k = 0;
  std::size_t P = 0;
  unsigned H = 0;
  std::uint64_t charge = 0;  // atoms per non-product place
};

BuilderPlan plan_build(const PlaceCertificate& c);

struct BuildReport {
  SetAssignment model;
  std::vector<HFSet> blocks;  // one per place
  BuilderPlan plan;
  std::size_t rounds = 0;
  std::size_t saturation_depth = 0;
  unsigned max_element_rank = 0;
};

/// Materializes a model of phi from a verifying acyclic certificate.
/// Every internal assertion failure raises ContractViolation; oversize
/// plans raise SizeLimit.
BuildReport build_model_report(const NormConj& phi, const PlaceCertificate& c,
                               const SolverLimits& limits = {});
SetAssignment build_model(const NormConj& phi, const PlaceCertificate& c,
                          const SolverLimits& limits = {});

/// Distributes the pair content of saturated nodes until no saturated node
/// has undistributed pairs.  Throws BudgetExhausted after `budget` pops or
/// when `element_budget` elements exist.
std::vector<HFSet> cart_saturate(std::vector<HFSet> blocks, const TGraph& g, std::size_t budget,
                                 std::size_t element_budget = SolverLimits{}.element_budget);

/// rank(M): the largest rank of an element of some value (0 for an
/// all-empty assignment).  Atoms of rank H give a pure Boolean model rank H.
unsigned model_rank(const SetAssignment& m);

/// Upper bound on model_rank of any model the builder returns for phi.
unsigned rank_bound(const NormConj& phi);

/// Certificate of a concrete assignment: venn_of + induce_from_partition.
PlaceCertificate certificate_of(const SetAssignment& m, const std::vector<std::string>& vars);

nlohmann::json to_json(const PlaceCertificate& c);
nlohmann::json to_json(const Verdict& v);

}  // namespace mluc

#endif  // MLUC_SOLVER_HPP
