#ifndef ESQPT_U3_SOLVE_HPP
#define ESQPT_U3_SOLVE_HPP

#include "esqpt/solver.hpp"
#include "esqpt/u3.hpp"

namespace esqpt::u3 {

/// Uniform start points on the radius-sqrt(2) 5-sphere (normalised Gaussians).
StartSampler start_sampler();

DedupePolicy dedupe_policy(SystemKind kind);

/// Single-constraint family over xi at fixed eps.
SystemFamily xi_family(double eps);

/// All constrained stationary points of a u(3) system.
std::vector<StationaryPoint> find_stationary(const U3Params& p, const SolverConfig& cfg,
                                             SolveStats* stats = nullptr);

/// Double-constraint version: solves both +-l branches and merges them
/// through the (E, n0, |l|) signature.
std::vector<StationaryPoint> find_stationary(const U3Params& p, double ell,
                                             const SolverConfig& cfg,
                                             SolveStats* stats = nullptr);

}  // namespace esqpt::u3

#endif
