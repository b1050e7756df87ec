#include "mluc/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "mluc/errors.hpp"

namespace mluc {

void OracleConfig::validate() const {
  if (max_rank == 0 || universe_cap == 0 || var_cap == 0) throw SizeLimit("oracle caps must be positive");
  if (universe_cap > 64) throw SizeLimit("oracle universe_cap above 64");
  if (max_rank > 5) throw SizeLimit("oracle max_rank above 5");
}

std::vector<HFSet> oracle_universe(const OracleConfig& cfg) {
  cfg.validate();
  return first_sets_by_rank(cfg.max_rank, cfg.universe_cap);
}

namespace {

using Mask = std::uint64_t;

class Enumerator {
 public:
  Enumerator(const NormConj& phi, const OracleConfig& cfg) : phi_(phi), vars_(phi.variables()) {
    if (vars_.size() > cfg.var_cap) {
      throw SizeLimit("oracle: " + std::to_string(vars_.size()) + " variables exceed var_cap " +
                      std::to_string(cfg.var_cap));
    }
    universe_ = oracle_universe(cfg);
    const std::size_t n = universe_.size();
    full_ = n == 64 ? ~Mask{0} : (Mask{1} << n) - 1;
    std::unordered_map<HFSet, int, HFSetHash> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(universe_[i], static_cast<int>(i));
    pair_.assign(n, std::vector<int>(n, -1));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        auto it = index.find(HFSet::pair(universe_[i], universe_[j]));
        if (it != index.end()) pair_[i][j] = it->second;
      }
    }
    // Members of each universe element that is a 1- or 2-set over U.
    members_.resize(n);
    for (std::size_t e = 0; e < n; ++e) {
      const auto els = universe_[e].elements();
      if (els.empty() || els.size() > 2) continue;
      std::vector<int> ids;
      for (const auto& m : els) {
        auto it = index.find(m);
        if (it == index.end()) break;
        ids.push_back(it->second);
      }
      if (ids.size() == els.size()) members_[e] = ids;
    }
    auto idx = [&](const std::string& v) {
      if (v.empty()) return -1;
      auto it = std::find(vars_.begin(), vars_.end(), v);
      if (it == vars_.end()) throw UnboundVariable(v);
      return static_cast<int>(it - vars_.begin());
    };
    due_.resize(vars_.size());
    for (const auto& a : phi.atoms) {
      Bound b{a.kind, idx(a.x), idx(a.y), idx(a.z)};
      const int last = std::max({b.x, b.y, b.z});
      due_[static_cast<std::size_t>(last)].push_back(b);
    }
    value_.assign(vars_.size(), 0);
  }

  std::optional<SetAssignment> run() {
    if (!assign(0)) return std::nullopt;
    SetAssignment m;
    for (std::size_t v = 0; v < vars_.size(); ++v) m[vars_[v]] = materialize(value_[v]);
    for (const auto& a : phi_.atoms) {
      if (!eval_literal(m, a)) throw ContractViolation("oracle produced a model falsifying " + print(a));
    }
    return m;
  }

 private:
  struct Bound {
    NormAtom::Kind kind;
    int x, y, z;
  };

  // y * z as a mask; nullopt when some pair leaves the universe.
  std::optional<Mask> product(Mask y, Mask z) const {
    Mask out = 0;
    for (std::size_t i = 0; i < universe_.size(); ++i) {
      if (!(y >> i & 1)) continue;
      for (std::size_t j = 0; j < universe_.size(); ++j) {
        if (!(z >> j & 1)) continue;
        const int p = pair_[i][j];
        if (p < 0) return std::nullopt;
        out |= Mask{1} << p;
      }
    }
    return out;
  }

  bool within_product(Mask x, Mask y, Mask z) const {
    for (std::size_t e = 0; e < universe_.size(); ++e) {
      if (!(x >> e & 1)) continue;
      const auto& m = members_[e];
      if (m.empty()) return false;
      auto in = [](Mask s, int i) { return (s >> i & 1) != 0; };
      const bool ok = m.size() == 1 ? in(y, m[0]) && in(z, m[0])
                                    : (in(y, m[0]) && in(z, m[1])) || (in(y, m[1]) && in(z, m[0]));
      if (!ok) return false;
    }
    return true;
  }

  bool holds(const Bound& b) const {
    const Mask x = value_[static_cast<std::size_t>(b.x)];
    switch (b.kind) {
      case NormAtom::Kind::NonEmpty: return x != 0;
      case NormAtom::Kind::UnionA: return x == (value(b.y) | value(b.z));
      case NormAtom::Kind::DiffA: return x == (value(b.y) & ~value(b.z));
      case NormAtom::Kind::ProdEq: {
        auto p = product(value(b.y), value(b.z));
        return p && *p == x;
      }
      case NormAtom::Kind::ProdSub: return within_product(x, value(b.y), value(b.z));
    }
    return false;
  }

  Mask value(int v) const { return value_[static_cast<std::size_t>(v)]; }

  bool assign(std::size_t v) {
    if (v == vars_.size()) return true;
    const auto& checks = due_[v];
    // A defining atom with earlier operands pins the value down; every
    // other candidate would fail that atom anyway.
    for (const auto& b : checks) {
      if (b.x != static_cast<int>(v) || b.y >= static_cast<int>(v) || b.z >= static_cast<int>(v)) continue;
      std::optional<Mask> pinned;
      if (b.kind == NormAtom::Kind::UnionA) pinned = value(b.y) | value(b.z);
      else if (b.kind == NormAtom::Kind::DiffA) pinned = value(b.y) & ~value(b.z);
      else if (b.kind == NormAtom::Kind::ProdEq) pinned = product(value(b.y), value(b.z));
      else continue;
      if (!pinned) return false;
      return try_value(v, *pinned);
    }
    for (Mask m = 0;; ++m) {
      if (try_value(v, m)) return true;
      if (m == full_) break;
    }
    return false;
  }

  bool try_value(std::size_t v, Mask m) {
    value_[v] = m;
    for (const auto& b : due_[v]) {
      if (!holds(b)) return false;
    }
    return assign(v + 1);
  }

  HFSet materialize(Mask m) const {
    std::vector<HFSet> els;
    for (std::size_t i = 0; i < universe_.size(); ++i) {
      if (m >> i & 1) els.push_back(universe_[i]);
    }
    return HFSet::of(std::move(els));
  }

  const NormConj& phi_;
  std::vector<std::string> vars_;
  std::vector<HFSet> universe_;
  Mask full_ = 0;
  std::vector<std::vector<int>> pair_;
  std::vector<std::vector<int>> members_;
  std::vector<std::vector<Bound>> due_;
  std::vector<Mask> value_;
};

}  // namespace

std::optional<SetAssignment> oracle_search(const NormConj& phi, const OracleConfig& cfg) {
  return Enumerator(phi, cfg).run();
}

std::optional<SetAssignment> oracle_search(const Formula& f, const OracleConfig& cfg) {
  const auto names = vars_of(f);
  if (names.size() > cfg.var_cap) {
    throw SizeLimit("oracle: " + std::to_string(names.size()) + " variables exceed var_cap " +
                    std::to_string(cfg.var_cap));
  }
  const auto universe = oracle_universe(cfg);
  if (universe.size() * names.size() > 24) throw SizeLimit("oracle: formula enumeration above 2^24 assignments");
  const std::vector<std::string> vars(names.begin(), names.end());
  const Mask full = (Mask{1} << universe.size()) - 1;
  std::vector<Mask> value(vars.size(), 0);
  auto materialize = [&](Mask m) {
    std::vector<HFSet> els;
    for (std::size_t i = 0; i < universe.size(); ++i) {
      if (m >> i & 1) els.push_back(universe[i]);
    }
    return HFSet::of(std::move(els));
  };
  // Odometer with the first variable as the outermost digit.
  for (;;) {
    SetAssignment m;
    for (std::size_t v = 0; v < vars.size(); ++v) m[vars[v]] = materialize(value[v]);
    if (eval_formula(m, f)) return m;
    std::size_t d = vars.size();
    while (d > 0 && value[d - 1] == full) value[--d] = 0;
    if (d == 0) return std::nullopt;
    ++value[d - 1];
  }
}

}  // namespace mluc
