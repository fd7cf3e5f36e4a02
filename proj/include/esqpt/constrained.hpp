#ifndef ESQPT_CONSTRAINED_HPP
#define ESQPT_CONSTRAINED_HPP

#include <vector>

#include "esqpt/types.hpp"

namespace esqpt {

/// Converged constrained stationary point. `index` counts negative
/// eigenvalues of the restricted Hessian; `zero_count` the (near-)zero ones,
/// of which exactly c are structural for a nondegenerate point.
struct StationaryPoint {
  Vec point;        // phase-space coordinates, length 2(f+c)
  Vec multipliers;  // length c
  double energy = 0.0;
  int index = 0;
  int zero_count = 0;
  bool degenerate = false;
  Vec signature;  // orbit invariants used for dedupe
};

/// L(X, lambda) = H(X) + sum_a lambda_a Phi_a(X).
double lagrange_value(const ConstrainedSystem& sys, const Vec& X, const Vec& lambda);

/// Full gradient of L over (X, lambda): the first 2(f+c) entries are
/// grad H + sum_a lambda_a grad Phi_a, the trailing c entries are Phi_a(X).
/// Vanishes exactly at constrained stationary points.
Vec lagrange_gradient(const ConstrainedSystem& sys, const Vec& X, const Vec& lambda);

/// X-Hessian of L at fixed multipliers: D2H + sum_a lambda_a D2Phi_a.
Mat lagrange_hessian_x(const ConstrainedSystem& sys, const Vec& X, const Vec& lambda);

/// Orthonormal basis of the tangent space of the constraint surface at X
/// (the orthogonal complement of span{grad Phi_a}), as columns of a
/// 2(f+c) x (2f+c) matrix. Built by appending canonical basis vectors to the
/// orthonormalised constraint gradients with modified Gram-Schmidt.
/// Throws DegenerateConstraint when the gradient stack is rank deficient
/// (smallest singular value < rank_tol * largest).
Mat constraint_frame(const ConstrainedSystem& sys, const Vec& X, double rank_tol = 1e-8);

/// B^T (D2H + sum lambda_a D2Phi_a) B with B from constraint_frame at the
/// same X. Spectrum = reduced-space Hessian spectrum plus c structural zeros.
Mat restricted_hessian(const ConstrainedSystem& sys, const Vec& X, const Vec& lambda, const Mat& B);

struct IndexResult {
  int index = 0;       // eigenvalues below -zero_tol*scale
  int zero_count = 0;  // eigenvalues within zero_tol*scale of zero
  bool degenerate = false;
};

/// Classifies the spectrum of a symmetric matrix; zero_tol is relative to
/// the largest |eigenvalue| with an absolute floor of 1e-12. A point is
/// degenerate when more than the c structural zeros are present.
IndexResult stationary_index(const Mat& M, int c, double zero_tol = 1e-7);

enum class SingularityKind { Jump, Log };
enum class Orientation { Up, Down };

struct SingularityType {
  int derivative_order = 0;  // f - 1
  SingularityKind kind = SingularityKind::Jump;
  Orientation orientation = Orientation::Up;
  int sign = +1;  // coefficient sign: of Theta(E-E_st) for jumps, of ln|E-E_st| for logs
};

/// ESQPT singularity generated by a nondegenerate stationary point of
/// index r in a system with f degrees of freedom: a jump (r even) or a
/// logarithmic divergence (r odd) in the (f-1)-th derivative of the smooth
/// level density. Throws std::invalid_argument outside 0 <= r <= 2f.
SingularityType classify_singularity(int r, int f);

}  // namespace esqpt

#endif
