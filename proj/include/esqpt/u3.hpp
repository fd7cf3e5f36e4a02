#ifndef ESQPT_U3_HPP
#define ESQPT_U3_HPP

#include <array>

#include "esqpt/types.hpp"

namespace esqpt::u3 {

/// Model parameters: xi in [0,1] tunes the u(2)-o(3) transition, eps the
/// dipole coupling. Classical energies are per excitation (quantum E / N).
struct U3Params {
  double xi = 0.0;
  double eps = 0.0;
};

// Coordinate layout on the full phase space: (Q0, Q1, Q2, P0, P1, P2).

double classical_h(const U3Params& p, const Vec& X);
Vec classical_h_gradient(const U3Params& p, const Vec& X);
Mat classical_h_hessian(const U3Params& p, const Vec& X);

/// Sphere constraint (1/2) sum_k (Q_k^2 + P_k^2) - 1.
double phi_n(const Vec& X);
Vec phi_n_gradient(const Vec& X);
Mat phi_n_hessian(const Vec& X);

/// Angular-momentum constraint (P1 Q2 - P2 Q1) - branch*ell, unsquared so
/// the gradient is nonzero on the generic surface; branch = +-1 selects one
/// sheet of the squared-l surface.
double phi_l(const Vec& X, double ell, int branch);
Vec phi_l_gradient(const Vec& X);
Mat phi_l_hessian(const Vec& X);

/// Relative excitation numbers n_k = (Q_k^2 + P_k^2) / 2.
std::array<double, 3> occupations(const Vec& X);

/// Classical 2D angular momentum l = P1 Q2 - P2 Q1.
double angular_momentum(const Vec& X);

/// System with the sphere constraint only (c = 1, f = 2).
ConstrainedSystem make_system(const U3Params& p);

/// System with both Phi_N and Phi_l (c = 2, f = 1).
ConstrainedSystem make_system(const U3Params& p, double ell, int branch);

enum class SystemKind { SingleConstraint, DoubleConstraint };

/// Orbit invariants used to deduplicate stationary solutions.
/// Single constraint: (E, n0, n1, n2, l); l keeps its sign, so symmetry
/// partners with opposite angular momentum stay distinct.
/// Double constraint: (E, n0, |l|); stationary orbits are 2-tori of the
/// joint constraint flows along which n1, n2 vary, and the +-l branches
/// merge like the quantum +-l blocks.
Vec orbit_signature(SystemKind kind, const Vec& X, double energy);

/// Key identifying a whole degenerate critical manifold: (E, n0, l).
/// At eps = 0 the O(2) symmetry produces critical circles along which
/// n1, n2 vary but this key stays constant.
Vec degenerate_key(const Vec& X, double energy);

}  // namespace esqpt::u3

#endif
