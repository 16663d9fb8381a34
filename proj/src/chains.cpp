#include "linrel/chains.hpp"

#include <algorithm>

#include "linrel/errors.hpp"

namespace linrel {

namespace {

template <typename Step>
std::vector<Subspace> run_chain(Subspace first, int max_n, Step step) {
  std::vector<Subspace> chain{std::move(first)};
  for (int n = 1; n <= max_n; ++n) {
    Subspace next = step(chain.back());
    if (same(next, chain.back())) {
      break;
    }
    chain.push_back(std::move(next));
  }
  return chain;
}

int default_length(const LinearRelation& a) { return static_cast<int>(a.x_dim()) + 2; }

}  // namespace

std::string to_string(const ChainIndex& n) { return n.is_infinite() ? "inf" : std::to_string(*n.value); }

std::vector<Subspace> m_chain(const LinearRelation& a, const LinearRelation& b, int max_n) {
  if (a.x_dim() != b.x_dim() || a.y_dim() != b.y_dim()) {
    throw DimensionError("m_chain: A and B must have the same shape");
  }
  return run_chain(Subspace::full(a.x_dim()), max_n,
                   [&](const Subspace& prev) { return preimage(b, image(a, prev)); });
}

std::vector<Subspace> n_chain(const LinearRelation& a, const LinearRelation& b, int max_n) {
  if (a.x_dim() != b.x_dim() || a.y_dim() != b.y_dim()) {
    throw DimensionError("n_chain: A and B must have the same shape");
  }
  return run_chain(a.kernel(), std::max(0, max_n - 1),
                   [&](const Subspace& prev) { return preimage(a, image(b, prev)); });
}

const Subspace& chain_at(const std::vector<Subspace>& chain, int first, int k) {
  if (chain.empty() || k < first) {
    throw std::out_of_range("chain_at: index before the start of the chain");
  }
  const auto i = static_cast<std::size_t>(k - first);
  return i < chain.size() ? chain[i] : chain.back();
}

DualChains dual_chains(const LinearRelation& a, const LinearRelation& b, int max_n) {
  const LinearRelation ad = adjoint(a);
  const LinearRelation bd = adjoint(b);
  return {m_chain(ad, bd, max_n), n_chain(ad, bd, max_n)};
}

ChainIndex nu(const LinearRelation& a, const LinearRelation& b) {
  const Subspace& n1 = a.kernel();
  const auto chain = m_chain(a, b, default_length(a));
  for (std::size_t n = 1; n < chain.size(); ++n) {
    if (!contains(chain[n], n1)) {
      return ChainIndex::finite(static_cast<int>(n));
    }
  }
  // Every later M_n equals chain.back(), already checked (or X).
  return ChainIndex::infinite();
}

ChainReport chain_report(const LinearRelation& a, const LinearRelation& b) {
  ChainReport r;
  const int len = default_length(a);
  r.m_chain = m_chain(a, b, len);
  r.n_chain = n_chain(a, b, len);
  // M stable from index size-1, N (indexed from 1) stable from index size.
  r.stabilized_at = std::max(static_cast<int>(r.m_chain.size()) - 1, static_cast<int>(r.n_chain.size()));
  r.nu = nu(a, b);
  const int top = r.stabilized_at + 1;
  for (int k = 1; k <= top; ++k) {
    std::vector<bool> row;
    for (int m = 0; m <= top; ++m) {
      row.push_back(contains(chain_at(r.m_chain, 0, m), chain_at(r.n_chain, 1, k)));
    }
    r.containment_table.push_back(std::move(row));
  }
  return r;
}

EquivalentConditions check_equivalent_conditions(const LinearRelation& a, const LinearRelation& b, int n) {
  if (n < 1) {
    throw std::invalid_argument("check_equivalent_conditions: n must be at least 1");
  }
  EquivalentConditions out;
  out.n = n;
  const auto ms = m_chain(a, b, n);
  const auto ns = n_chain(a, b, n + 1);
  for (int r = 1; r <= n; ++r) {
    out.conditions.push_back(contains(chain_at(ms, 0, n - r + 1), chain_at(ns, 1, r)));
  }
  for (int k = 1; k <= n; ++k) {
    const Subspace& nk = chain_at(ns, 1, k);
    const Subspace target = preimage(b, image(a, chain_at(ns, 1, k + 1)));
    out.kappa.push_back(contains(target, nk) && contains(b.domain(), nk));
  }
  const bool first = out.conditions.front();
  out.agree = std::all_of(out.conditions.begin(), out.conditions.end(), [first](bool c) { return c == first; });
  const bool all_conditions = std::all_of(out.conditions.begin(), out.conditions.end(), [](bool c) { return c; });
  const bool all_kappa = std::all_of(out.kappa.begin(), out.kappa.end(), [](bool c) { return c; });
  out.kappa_implied = !all_conditions || all_kappa;
  return out;
}

NuDuality verify_nu_duality(const LinearRelation& a, const LinearRelation& b) {
  NuDuality out;
  if (!a.domain().is_full() || !b.domain().is_full()) {
    out.reason = "D(A) and D(B) must both be the whole space";
    return out;
  }
  if (!contains(a.multivalued_part(), b.multivalued_part())) {
    out.reason = "B(0) is not contained in A(0)";
    return out;
  }
  out.applicable = true;
  const int len = default_length(a);
  const auto ms = m_chain(a, b, len);
  const auto ns = n_chain(a, b, len);
  const LinearRelation ad = adjoint(a);
  const LinearRelation bd = adjoint(b);
  const int dual_len = default_length(ad);
  const auto msd = m_chain(ad, bd, dual_len);
  const auto nsd = n_chain(ad, bd, dual_len);

  out.equality_m = same(chain_at(msd, 0, 1), annihilator(image(b, a.kernel())));
  if (!out.equality_m) {
    out.notes.push_back("M'_1 differs from the annihilator of B(N_1)");
  }
  out.nu = nu(a, b);
  out.nu_dual = nu(ad, bd);
  out.equality_v = out.nu == out.nu_dual;
  if (!out.equality_v) {
    out.notes.push_back("nu = " + to_string(out.nu) + " but nu' = " + to_string(out.nu_dual));
  }

  out.adjoint_sequences = true;
  const int top = std::max({static_cast<int>(ms.size()), static_cast<int>(ns.size()), static_cast<int>(msd.size()),
                            static_cast<int>(nsd.size())}) + 1;
  for (int n = 1; n <= top; ++n) {
    if (!contains(annihilator(image(b, chain_at(ns, 1, n))), chain_at(msd, 0, n))) {
      out.adjoint_sequences = false;
      out.notes.push_back("M'_" + std::to_string(n) + " not in the annihilator of B(N_" + std::to_string(n) + ")");
    }
    if (!contains(annihilator(image(a, chain_at(ms, 0, n - 1))), chain_at(nsd, 1, n))) {
      out.adjoint_sequences = false;
      out.notes.push_back("N'_" + std::to_string(n) + " not in the annihilator of A(M_" + std::to_string(n - 1) +
                          ")");
    }
  }
  return out;
}

}  // namespace linrel
