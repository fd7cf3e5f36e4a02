#ifndef ESQPT_TYPES_HPP
#define ESQPT_TYPES_HPP

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>

namespace esqpt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Raised when constraint gradients are linearly dependent at a point,
/// i.e. the constraint surface is ill-posed there and no tangent frame exists.
struct DegenerateConstraint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised by a Holstein-Primakoff chart map evaluated on (or too close to)
/// its singular locus; the caller should switch to another chart.
struct BoundarySingularity : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scalar function on phase space with exact first and second derivatives.
struct ScalarField {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;
};

/// Constraint surface {X : value(X) = 0}; any target value is already
/// absorbed into the field.
struct Constraint {
  ScalarField field;
};

/// Hamiltonian with f+c degrees of freedom plus c constraint functions.
/// Phase points are laid out as (Q_0..Q_{f+c-1}, P_0..P_{f+c-1}).
struct ConstrainedSystem {
  int dof_total = 0;  // f + c
  ScalarField hamiltonian;
  std::vector<Constraint> constraints;

  int dim() const { return 2 * dof_total; }
  int num_constraints() const { return static_cast<int>(constraints.size()); }
  int reduced_dof() const { return dof_total - num_constraints(); }
};

}  // namespace esqpt

#endif
