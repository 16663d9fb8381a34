#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linrel/relation.hpp"
#include "linrel/report.hpp"

namespace linrel {

/// A chain index: a positive integer or infinity.
struct ChainIndex {
  std::optional<int> value;

  [[nodiscard]] static ChainIndex infinite() { return {}; }
  [[nodiscard]] static ChainIndex finite(int n) { return ChainIndex{n}; }
  [[nodiscard]] bool is_infinite() const noexcept { return !value.has_value(); }
  friend bool operator==(const ChainIndex&, const ChainIndex&) = default;
};

[[nodiscard]] std::string to_string(const ChainIndex& n);

/// M_0 = X, M_n = B^{-1}(A(M_{n-1})). Stops after max_n steps or once the
/// next element equals the last one; the last element is the stable value.
[[nodiscard]] std::vector<Subspace> m_chain(const LinearRelation& a, const LinearRelation& b, int max_n);
/// N_1 = N(A), N_n = A^{-1}(B(N_{n-1})), same stopping rule.
[[nodiscard]] std::vector<Subspace> n_chain(const LinearRelation& a, const LinearRelation& b, int max_n);

/// Element k of a chain whose first stored entry has index `first`,
/// continued by its last (stable) element.
[[nodiscard]] const Subspace& chain_at(const std::vector<Subspace>& chain, int first, int k);

struct DualChains {
  std::vector<Subspace> m_chain;
  std::vector<Subspace> n_chain;
};

/// The chains of (A', B').
[[nodiscard]] DualChains dual_chains(const LinearRelation& a, const LinearRelation& b, int max_n);

/// Smallest n >= 1 with N(A) not contained in M_n; infinite if none.
[[nodiscard]] ChainIndex nu(const LinearRelation& a, const LinearRelation& b);

struct ChainReport {
  std::vector<Subspace> m_chain;  // M_0, M_1, ...
  std::vector<Subspace> n_chain;  // N_1, N_2, ...
  int stabilized_at = 0;          // first n with M_n = M_{n+1} and N_n = N_{n+1}
  ChainIndex nu;
  /// containment_table[k-1][m] = (N_k subset of M_m) for k, m up to stabilized_at + 1.
  std::vector<std::vector<bool>> containment_table;
};

[[nodiscard]] ChainReport chain_report(const LinearRelation& a, const LinearRelation& b);

struct EquivalentConditions {
  int n = 0;
  std::vector<bool> conditions;  // r = 1..n: N_r subset of M_{n-r+1}
  std::vector<bool> kappa;       // k = 1..n: N_k subset of B^{-1}(A(N_{k+1})) n D(B)
  bool agree = true;
  bool kappa_implied = true;     // all conditions true => all kappa true
};

[[nodiscard]] EquivalentConditions check_equivalent_conditions(const LinearRelation& a, const LinearRelation& b,
                                                               int n);

struct NuDuality {
  bool applicable = false;
  std::string reason;
  bool equality_m = false;
  bool equality_v = false;
  bool adjoint_sequences = false;
  ChainIndex nu;
  ChainIndex nu_dual;
  std::vector<std::string> notes;
};

/// Requires D(A) = D(B) = X and B(0) subset of A(0); otherwise not applicable.
[[nodiscard]] NuDuality verify_nu_duality(const LinearRelation& a, const LinearRelation& b);

}  // namespace linrel
