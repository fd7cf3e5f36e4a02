#ifndef ESQPT_SOLVER_HPP
#define ESQPT_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "esqpt/constrained.hpp"
#include "esqpt/rng.hpp"

namespace esqpt {

struct SolverConfig {
  int n_starts = 2000;
  int max_iter = 60;
  double residual_tol = 1e-10;
  double dedupe_tol = 1e-7;
  std::uint64_t seed = 1;
  double sv_truncation = 1e-10;  // relative SV cutoff for the rank-deficient Jacobian
  double zero_tol = 1e-7;       // eigenvalue zero threshold for index counting
};

/// Draws a start point (expected on or near the constraint surface).
using StartSampler = std::function<Vec(Rng&)>;

/// Maps a converged (X, E) to its orbit-invariant signature.
using SignatureFn = std::function<Vec(const Vec& X, double energy)>;

/// Dedupe policy. `signature` separates distinct orbits of nondegenerate
/// points. Degenerate points can sit on critical manifolds larger than one
/// orbit, where `signature` varies continuously; when provided,
/// `degenerate_key` re-keys flagged-degenerate points with invariants of the
/// whole manifold so it is reported once.
struct DedupePolicy {
  SignatureFn signature;
  SignatureFn degenerate_key;
};

struct SolveStats {
  int converged = 0;
  int no_convergence = 0;
  int rank_deficient = 0;  // converged onto a point with dependent constraint gradients
};

/// Multistart damped Gauss-Newton on the augmented residual
/// (grad H + sum lambda grad Phi, Phi). Singular values of the Jacobian below
/// sv_truncation (relative) are truncated, so cyclic-orbit rank deficiency is
/// harmless and each start converges to an arbitrary orbit representative.
/// Output is deduplicated per the policy and sorted by (energy, signature);
/// deterministic for a fixed seed regardless of worker count.
std::vector<StationaryPoint> solve_stationary(const ConstrainedSystem& sys,
                                              const SolverConfig& cfg,
                                              const StartSampler& sample_start,
                                              const DedupePolicy& dedupe,
                                              SolveStats* stats = nullptr);

/// One-parameter family of systems (shares the samplers/signatures).
struct SystemFamily {
  std::function<ConstrainedSystem(double)> make;
  StartSampler sample_start;
  DedupePolicy dedupe;
};

struct ScanResult {
  std::vector<double> parameters;
  std::vector<std::vector<StationaryPoint>> points;  // per parameter, sorted by energy
  std::vector<double> emergence;  // parameter values where the real-solution count changes
  std::vector<std::optional<int>> morse_sums;  // per parameter; empty if any point degenerate
};

/// Solves along a sorted grid and localises solution-count changes by
/// bisection to a parameter resolution of 1e-3.
ScanResult scan_parameter(const SystemFamily& family, const std::vector<double>& grid,
                          const SolverConfig& cfg);

/// Sum of (-1)^r over the points; empty when any point is degenerate.
/// For the u(3) single-constraint system the reduced phase space is CP^2
/// (Euler characteristic 3), so a value != 3 flags a likely missed point.
std::optional<int> morse_sum(const std::vector<StationaryPoint>& pts);

}  // namespace esqpt

#endif
