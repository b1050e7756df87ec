#ifndef MLUC_PARTITION_HPP
#define MLUC_PARTITION_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "mluc/frontend.hpp"
#include "mluc/hfset.hpp"

namespace mluc {

using SetAssignment = std::map<std::string, HFSet>;

/// Pairwise-disjoint nonempty blocks.
struct Partition {
  std::vector<HFSet> blocks;

  HFSet domain() const;
  /// Throws ContractViolation when a block is empty or two blocks meet.
  void validate() const;
};

/// (Sigma, V, I): blocks plus, for each variable, the block ids it covers.
struct PartitionAssignment {
  Partition partition;
  std::vector<std::string> vars;
  std::map<std::string, std::set<int>> imap;

  /// M_I(v) = union of the blocks in imap(v).
  SetAssignment induced() const;
};

/// Truth of a normalized atom under ordinary set semantics.
/// Throws UnboundVariable when a variable is missing from M.
bool eval_literal(const SetAssignment& M, const NormAtom& a);
bool eval_all(const SetAssignment& M, const NormConj& c);

/// Set value of an expression / truth of a surface formula.
HFSet eval_expr(const SetAssignment& M, const Expr& e);
bool eval_atom(const SetAssignment& M, const Atom& a);
bool eval_formula(const SetAssignment& M, const Formula& f);

/// Venn partition induced by M over `vars` (all variables of M when empty).
/// Blocks are ordered by signature, where bit i of a signature stands for
/// vars[i].
struct VennResult {
  PartitionAssignment assignment;
  std::vector<unsigned> signatures;  // one per block
};
VennResult venn_of(const SetAssignment& M, std::vector<std::string> vars = {});

/// Evaluates a Boolean or NonEmpty atom directly on block-id sets.
/// Product atoms are rejected with std::invalid_argument.
bool check_boolean_on_signatures(const std::map<std::string, std::set<int>>& imap,
                                 const NormAtom& a);

nlohmann::json model_to_json(const SetAssignment& M);
/// Accepts { "vars": { name: nested-array } }.  Throws BadModel.
SetAssignment model_from_json(const nlohmann::json& j);

nlohmann::json partition_to_json(const VennResult& v);

}  // namespace mluc

#endif  // MLUC_PARTITION_HPP
