#include "esqpt/u3.hpp"

#include <cmath>

namespace esqpt::u3 {

namespace {

constexpr int kDim = 6;
// antisymmetric bilinears A_kl = Q_k P_l - P_k Q_l; the Hamiltonian couples
// the pairs (0,1), (0,2), (1,2) and the dipole is A_02
constexpr int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};

inline void check_dim(const Vec& X) {
  if (X.size() != kDim) throw std::invalid_argument("u(3) phase point must have 6 coordinates");
}

inline double bilinear(const Vec& X, int k, int l) {
  return X[k] * X[3 + l] - X[3 + k] * X[l];
}

inline Vec bilinear_gradient(const Vec& X, int k, int l) {
  Vec g = Vec::Zero(kDim);
  g[k] = X[3 + l];
  g[3 + l] = X[k];
  g[l] = -X[3 + k];
  g[3 + k] = -X[l];
  return g;
}

inline Mat bilinear_hessian(int k, int l) {
  Mat H = Mat::Zero(kDim, kDim);
  H(k, 3 + l) = H(3 + l, k) = 1.0;
  H(l, 3 + k) = H(3 + k, l) = -1.0;
  return H;
}

const Mat kDiag12 = (Eigen::VectorXd(6) << 0, 1, 1, 0, 1, 1).finished().asDiagonal();

}  // namespace

double classical_h(const U3Params& p, const Vec& X) {
  check_dim(X);
  const double n12 = 0.5 * (X[1] * X[1] + X[4] * X[4] + X[2] * X[2] + X[5] * X[5]);
  double casimir = 0.0;
  for (auto [k, l] : kPairs) {
    const double a = bilinear(X, k, l);
    casimir += a * a;
  }
  return (1.0 - p.xi) * n12 - p.xi * casimir - p.eps * bilinear(X, 0, 2);
}

Vec classical_h_gradient(const U3Params& p, const Vec& X) {
  check_dim(X);
  Vec g = (1.0 - p.xi) * (kDiag12 * X);
  for (auto [k, l] : kPairs) g -= 2.0 * p.xi * bilinear(X, k, l) * bilinear_gradient(X, k, l);
  g -= p.eps * bilinear_gradient(X, 0, 2);
  return g;
}

Mat classical_h_hessian(const U3Params& p, const Vec& X) {
  check_dim(X);
  Mat H = (1.0 - p.xi) * kDiag12;
  for (auto [k, l] : kPairs) {
    const Vec gA = bilinear_gradient(X, k, l);
    H -= 2.0 * p.xi * (gA * gA.transpose() + bilinear(X, k, l) * bilinear_hessian(k, l));
  }
  H -= p.eps * bilinear_hessian(0, 2);
  return H;
}

double phi_n(const Vec& X) {
  check_dim(X);
  return 0.5 * X.squaredNorm() - 1.0;
}

Vec phi_n_gradient(const Vec& X) {
  check_dim(X);
  return X;
}

Mat phi_n_hessian(const Vec& X) {
  check_dim(X);
  return Mat::Identity(kDim, kDim);
}

double phi_l(const Vec& X, double ell, int branch) {
  check_dim(X);
  return angular_momentum(X) - branch * ell;
}

Vec phi_l_gradient(const Vec& X) {
  // l = P1 Q2 - P2 Q1 = -A_12
  return -bilinear_gradient(X, 1, 2);
}

Mat phi_l_hessian(const Vec& X) {
  check_dim(X);
  return -bilinear_hessian(1, 2);
}

std::array<double, 3> occupations(const Vec& X) {
  check_dim(X);
  return {0.5 * (X[0] * X[0] + X[3] * X[3]), 0.5 * (X[1] * X[1] + X[4] * X[4]),
          0.5 * (X[2] * X[2] + X[5] * X[5])};
}

double angular_momentum(const Vec& X) {
  check_dim(X);
  return X[4] * X[2] - X[5] * X[1];
}

ConstrainedSystem make_system(const U3Params& p) {
  ConstrainedSystem sys;
  sys.dof_total = 3;
  sys.hamiltonian = {[p](const Vec& X) { return classical_h(p, X); },
                     [p](const Vec& X) { return classical_h_gradient(p, X); },
                     [p](const Vec& X) { return classical_h_hessian(p, X); }};
  sys.constraints.push_back({{phi_n, phi_n_gradient, phi_n_hessian}});
  return sys;
}

ConstrainedSystem make_system(const U3Params& p, double ell, int branch) {
  ConstrainedSystem sys = make_system(p);
  sys.constraints.push_back(
      {{[ell, branch](const Vec& X) { return phi_l(X, ell, branch); }, phi_l_gradient,
        phi_l_hessian}});
  return sys;
}

Vec orbit_signature(SystemKind kind, const Vec& X, double energy) {
  const auto n = occupations(X);
  const double l = angular_momentum(X);
  if (kind == SystemKind::SingleConstraint) {
    Vec s(5);
    s << energy, n[0], n[1], n[2], l;
    return s;
  }
  Vec s(3);
  s << energy, n[0], std::abs(l);
  return s;
}

Vec degenerate_key(const Vec& X, double energy) {
  const auto n = occupations(X);
  Vec s(3);
  s << energy, n[0], angular_momentum(X);
  return s;
}

}  // namespace esqpt::u3
