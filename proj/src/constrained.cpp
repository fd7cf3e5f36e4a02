#include "esqpt/constrained.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace esqpt {

namespace {

void check_dims(const ConstrainedSystem& sys, const Vec& X, const Vec& lambda) {
  if (X.size() != sys.dim())
    throw std::invalid_argument("phase point has wrong dimension");
  if (lambda.size() != sys.num_constraints())
    throw std::invalid_argument("multiplier vector has wrong dimension");
}

}  // namespace

double lagrange_value(const ConstrainedSystem& sys, const Vec& X, const Vec& lambda) {
  check_dims(sys, X, lambda);
  double v = sys.hamiltonian.value(X);
  for (int a = 0; a < sys.num_constraints(); ++a)
    v += lambda[a] * sys.constraints[a].field.value(X);
  return v;
}

Vec lagrange_gradient(const ConstrainedSystem& sys, const Vec& X, const Vec& lambda) {
  check_dims(sys, X, lambda);
  const int d = sys.dim();
  const int c = sys.num_constraints();
  Vec g(d + c);
  g.head(d) = sys.hamiltonian.gradient(X);
  for (int a = 0; a < c; ++a) {
    g.head(d) += lambda[a] * sys.constraints[a].field.gradient(X);
    g[d + a] = sys.constraints[a].field.value(X);
  }
  return g;
}

Mat lagrange_hessian_x(const ConstrainedSystem& sys, const Vec& X, const Vec& lambda) {
  check_dims(sys, X, lambda);
  Mat H = sys.hamiltonian.hessian(X);
  for (int a = 0; a < sys.num_constraints(); ++a)
    H += lambda[a] * sys.constraints[a].field.hessian(X);
  return H;
}

Mat constraint_frame(const ConstrainedSystem& sys, const Vec& X, double rank_tol) {
  const int d = sys.dim();
  const int c = sys.num_constraints();
  Mat G(d, c);
  for (int a = 0; a < c; ++a) G.col(a) = sys.constraints[a].field.gradient(X);

  if (c > 0) {
    Eigen::JacobiSVD<Mat> svd(G);
    const auto& sv = svd.singularValues();
    if (sv[0] <= 0.0 || sv[sv.size() - 1] < rank_tol * sv[0])
      throw DegenerateConstraint("constraint gradients are linearly dependent at this point");
  }

  // Orthonormalise the gradients, then complete with canonical basis
  // vectors; modified Gram-Schmidt applied twice per vector.
  Mat basis(d, d);
  int count = 0;
  auto push = [&](Vec v, double drop_tol) {
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < count; ++i) v -= basis.col(i).dot(v) * basis.col(i);
    const double nv = v.norm();
    if (nv <= drop_tol) return false;
    basis.col(count++) = v / nv;
    return true;
  };
  for (int a = 0; a < c; ++a) {
    if (!push(G.col(a), rank_tol * G.col(a).norm()))
      throw DegenerateConstraint("constraint gradients are linearly dependent at this point");
  }
  for (int i = 0; i < d && count < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = 1.0;
    push(e, 1e-8);
  }
  if (count != d) throw std::runtime_error("tangent-frame completion failed");
  return basis.rightCols(d - c);
}

Mat restricted_hessian(const ConstrainedSystem& sys, const Vec& X, const Vec& lambda,
                       const Mat& B) {
  if (B.rows() != sys.dim() || B.cols() != sys.dim() - sys.num_constraints())
    throw std::invalid_argument("tangent frame has wrong shape");
  const Mat H = lagrange_hessian_x(sys, X, lambda);
  Mat M = B.transpose() * H * B;
  return 0.5 * (M + M.transpose());
}

IndexResult stationary_index(const Mat& M, int c, double zero_tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(M, Eigen::EigenvaluesOnly);
  const Vec ev = es.eigenvalues();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-12);
  IndexResult out;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < -zero_tol * scale)
      ++out.index;
    else if (std::abs(ev[i]) <= zero_tol * scale)
      ++out.zero_count;
  }
  out.degenerate = out.zero_count > c;
  return out;
}

SingularityType classify_singularity(int r, int f) {
  if (r < 0 || r > 2 * f) throw std::invalid_argument("index out of range [0, 2f]");
  SingularityType t;
  t.derivative_order = f - 1;
  if (r % 2 == 0) {
    t.kind = SingularityKind::Jump;
    t.sign = (r / 2) % 2 == 0 ? +1 : -1;
    // sign of the Theta step: positive steps up
    t.orientation = t.sign > 0 ? Orientation::Up : Orientation::Down;
  } else {
    t.kind = SingularityKind::Log;
    t.sign = ((r + 1) / 2) % 2 == 0 ? +1 : -1;
    // coefficient of ln|E - E_st|, which tends to -inf: a negative
    // coefficient diverges upward
    t.orientation = t.sign < 0 ? Orientation::Up : Orientation::Down;
  }
  return t;
}

}  // namespace esqpt
