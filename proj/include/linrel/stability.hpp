#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linrel/chains.hpp"
#include "linrel/metrics.hpp"
#include "linrel/relation.hpp"
#include "linrel/report.hpp"

namespace linrel {

/// Parameters for a random pair (A, B). beta is determined by the others
/// (dim R(A) = dim D(A) - alpha + mv_dim); when given it must match.
struct InstanceSpec {
  int x_dim = 2;
  int y_dim = 2;
  int alpha = 0;
  std::optional<int> beta;
  int mv_dim = 0;
  int dom_codim = 0;
  bool force_nu_infinite = false;
  std::uint64_t seed = 0;
};

/// The deficiency implied by the other fields; throws InfeasibleSpec naming
/// the violated constraint.
[[nodiscard]] int implied_beta(const InstanceSpec& spec);

struct Measured {
  int alpha = 0;
  int beta = 0;
  int mv_dim = 0;
  int dom_codim = 0;
  double gamma = 0.0;
  ChainIndex nu;
};

[[nodiscard]] Measured measure(const LinearRelation& a, const LinearRelation& b);

struct Instance {
  InstanceSpec spec;
  LinearRelation a;
  LinearRelation b;
  Measured measured;
};

/// A with the requested indices; B everywhere defined with B(0) in A(0) and,
/// when force_nu_infinite, N(A) in N(B). Deterministic in spec.seed.
[[nodiscard]] Instance generate(const InstanceSpec& spec);

struct SweepRecord {
  Scalar lambda;
  int alpha = 0;
  int beta = 0;
  double gamma = 0.0;
  double gap_forward = 0.0;   // gap(N(A), N(A - lambda B))
  double gap_backward = 0.0;  // gap(N(A - lambda B), N(A))
  std::optional<double> bound_finishing;
  bool inside_pencil = false;
  bool inside_alpha = false;
  bool inside_full = false;
  bool indeterminate = false;
};

struct Radii {
  double pencil = 0.0;
  double alpha = 0.0;
  double full = 0.0;
};

struct SweepReport {
  RelativeBound bound;
  Radii radii;
  double gamma_a = 0.0;
  int alpha_a = 0;
  int beta_a = 0;
  bool range_exceeds_mv = false;  // R(A) strictly larger than A(0)
  std::vector<SweepRecord> records;

  [[nodiscard]] int indeterminate_count() const;
};

struct GridOptions {
  int points = 64;
  int phases = 8;
  /// Used as the outer modulus when the radius is infinite.
  double infinite_cap = 10.0;
};

/// lambda = 0 plus `points` moduli log-spaced over [1e-3, 1] * 0.999 r,
/// each at `phases` equally spaced arguments. points = 0 gives no grid.
[[nodiscard]] std::vector<Scalar> default_grid(double radius, const GridOptions& options = {});

/// True when |lambda| is strictly inside radius r with margin 1e-9 max(1, r).
[[nodiscard]] bool strictly_inside(Scalar lambda, double r);

/// Throws HypothesisError if the standing hypotheses fail or the bound does
/// not survive check_relative_bound. Grid points are evaluated in parallel.
[[nodiscard]] SweepReport sweep(const LinearRelation& a, const LinearRelation& b, const RelativeBound& bound,
                                const std::vector<Scalar>& grid);

/// Both perturbation theorems. `supplied` adds a (sigma, tau) pair for the
/// relative-bound version; the exact tau = 0 pair is always tried.
[[nodiscard]] CheckReport verify_perturbation(const LinearRelation& a, const LinearRelation& b,
                                              const std::optional<RelativeBound>& supplied = std::nullopt);

/// Gap bound on the kernel of the pencil. Needs nu(A:B) infinite.
[[nodiscard]] CheckReport verify_gap_bound(const LinearRelation& a, const LinearRelation& b,
                                           const RelativeBound& bound, const std::vector<Scalar>& grid);
[[nodiscard]] CheckReport verify_gap_bound(const SweepReport& report, const ChainIndex& nu_ab);

/// Constancy of alpha and beta, the one-sided alpha bound, the quantitative
/// lower bound on gamma and the degenerate-pencil dichotomy. Gate: nu(A:B)
/// infinite or N(A) in N(B).
[[nodiscard]] CheckReport verify_stability(const LinearRelation& a, const LinearRelation& b,
                                           const RelativeBound& bound, const std::vector<Scalar>& grid);
[[nodiscard]] CheckReport verify_stability(const SweepReport& report, bool gate_open);

/// Whether verify_stability's gate admits the pair.
[[nodiscard]] bool stability_gate(const LinearRelation& a, const LinearRelation& b);

struct AffineGapWitness {
  Vector x0;
  double ratio = 0.0;
  double bound = 0.0;  // (1 - eps)(1 - delta)/(1 + delta), delta = gap(M, N)
  bool found = false;  // ratio >= bound
};

/// Searches the coset x + N for a point far from M relative to its norm.
/// Throws DomainError when x lies in N.
[[nodiscard]] AffineGapWitness affine_gap_witness(const Vector& x, const Subspace& m, const Subspace& n, double eps,
                                                  std::uint64_t seed = 0);

}  // namespace linrel
