#ifndef ESQPT_HP_ATLAS_HPP
#define ESQPT_HP_ATLAS_HPP

#include <vector>

#include "esqpt/solver.hpp"
#include "esqpt/u3.hpp"

namespace esqpt::hp {

/// Point in the reduced chart sigma^(j): coordinates
/// (q_{k1}, .., q_{km}, p_{k1}, .., p_{km}) for the bosons k != j in
/// ascending order, confined to the ball s^2 = |coords|^2 <= 2.
struct ChartPoint {
  int chart = 0;
  Vec coords;

  double s2() const { return coords.squaredNorm(); }
};

constexpr double kBoundaryTol = 1e-6;  // on |X_j|; the map is singular at 0
constexpr double kChartMargin = 1e-4;  // on s^2 for in-chart searches

/// Forward Holstein-Primakoff chart map M^(j) from a point on the sphere
/// Sigma. Throws BoundarySingularity when the j-boson excitation vanishes
/// (|X_j| < boundary_tol): the point belongs to another chart.
ChartPoint hp_forward(int j, const Vec& X, double boundary_tol = kBoundaryTol);

/// Inverse chart map with the cyclic phase fixed to `phase`: different
/// phases give points on the same U(1) orbit. phi_n(result) = 0 exactly.
Vec hp_inverse(const ChartPoint& x, double phase = 0.0);

/// Coordinate change T^(j -> jp) between charts, equal to
/// hp_forward(jp, hp_inverse(x, phase)) for any phase. Throws
/// BoundarySingularity when the jp-boson excitation vanishes.
ChartPoint hp_transition(int jp, const ChartPoint& x, double boundary_tol = kBoundaryTol);

/// Reduced Hamiltonian H^(j) evaluated by its closed form; equals the
/// pullback classical_h(hp_inverse(x)) on the whole ball.
double reduced_h(int j, const u3::U3Params& p, const Vec& coords);
Vec reduced_h_gradient(int j, const u3::U3Params& p, const Vec& coords);
Mat reduced_h_hessian(int j, const u3::U3Params& p, const Vec& coords);

/// In-chart stationary point: chart coordinates plus the index of the
/// 2f-dimensional Hessian D2H^(j) (no structural zeros here).
struct ChartStationaryPoint {
  ChartPoint x;
  double energy = 0.0;
  int index = 0;
  int zero_count = 0;
  bool degenerate = false;
  Vec signature;  // full-space orbit signature of the embedded point
};

/// Multistart Newton search of grad H^(j) = 0 in the inner region
/// s^2 < 2 - margin; points outside the margin belong to another chart and
/// are discarded.
std::vector<ChartStationaryPoint> chart_stationary(int j, const u3::U3Params& p,
                                                   const SolverConfig& cfg,
                                                   double margin = kChartMargin);

/// Union of the three charts' stationary points, deduplicated by the
/// full-space signature. `chart` records the lowest chart index where each
/// point was found.
struct AtlasPoint {
  int chart = 0;
  ChartStationaryPoint p;
};
std::vector<AtlasPoint> atlas_stationary(const u3::U3Params& p, const SolverConfig& cfg);

/// Signed radial coordinates eta_k = sign(Q_k) sign(P_k) sqrt(2 n_k)
/// (sign(0) = +1), from full phase-space coordinates.
Vec eta_coords(const Vec& X);

/// Same from chart coordinates; the j-th component is that of the
/// phase-0 embedding.
Vec eta_coords(const ChartPoint& x);

}  // namespace esqpt::hp

#endif
