#ifndef MLUC_ORACLE_HPP
#define MLUC_ORACLE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "mluc/frontend.hpp"
#include "mluc/hfset.hpp"
#include "mluc/partition.hpp"

namespace mluc {

struct OracleConfig {
  unsigned max_rank = 3;
  std::size_t universe_cap = 8;
  std::size_t var_cap = 3;

  /// Throws SizeLimit for zero fields, universes above 64 elements or
  /// ranks the enumerator cannot reach.
  void validate() const;
};

/// The first universe_cap sets of rank <= max_rank, by rank then canonical
/// order.  Growing either cap only appends elements.
std::vector<HFSet> oracle_universe(const OracleConfig& cfg);

/// First assignment (variables in NormConj::variables() order, each ranging
/// over subsets of the universe in bitmask order) satisfying every atom.
/// Throws SizeLimit when phi has more than var_cap variables.
std::optional<SetAssignment> oracle_search(const NormConj& phi, const OracleConfig& cfg = {});

/// Same enumeration over the formula's variables, evaluating the surface
/// formula.  Additionally throws SizeLimit above 2^24 assignments.
std::optional<SetAssignment> oracle_search(const Formula& f, const OracleConfig& cfg = {});

}  // namespace mluc

#endif  // MLUC_ORACLE_HPP
