#include "esqpt/hp_atlas.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "esqpt/parallel.hpp"

namespace esqpt::hp {

namespace {

// pair k of X = (Q_0..Q_m-1, P_0..P_m-1)
inline Eigen::Vector2d pair_of(const Vec& X, int k) {
  const int m = static_cast<int>(X.size()) / 2;
  return {X[k], X[m + k]};
}

inline double dot2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.dot(b); }

// symplectic product a.W.b with W = [[0,1],[-1,0]]
inline double symp2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a[0] * b[1] - a[1] * b[0];
}

std::vector<int> other_bosons(int pairs, int j) {
  std::vector<int> ks;
  for (int k = 0; k < pairs; ++k)
    if (k != j) ks.push_back(k);
  return ks;
}

inline void check_chart(int j, int pairs = 3) {
  if (j < 0 || j >= pairs) throw std::invalid_argument("chart index out of range");
}

}  // namespace

ChartPoint hp_forward(int j, const Vec& X, double boundary_tol) {
  const int m = static_cast<int>(X.size()) / 2;
  if (X.size() % 2 != 0 || m < 2) throw std::invalid_argument("phase point must hold >= 2 pairs");
  check_chart(j, m);
  if (std::abs(0.5 * X.squaredNorm() - 1.0) > 1e-6)
    throw std::invalid_argument("point is not on the constraint sphere");

  const Eigen::Vector2d Xj = pair_of(X, j);
  const double nj = Xj.norm();
  if (nj < boundary_tol)
    throw BoundarySingularity("no excitation in the eliminated boson; use another chart");

  const auto ks = other_bosons(m, j);
  const int f = static_cast<int>(ks.size());
  ChartPoint out;
  out.chart = j;
  out.coords.resize(2 * f);
  for (int t = 0; t < f; ++t) {
    const Eigen::Vector2d Xk = pair_of(X, ks[t]);
    out.coords[t] = dot2(Xj, Xk) / nj;
    out.coords[f + t] = symp2(Xj, Xk) / nj;
  }
  return out;
}

Vec hp_inverse(const ChartPoint& x, double phase) {
  const int f = static_cast<int>(x.coords.size()) / 2;
  const int m = f + 1;
  check_chart(x.chart, m);
  const double s2 = x.s2();
  if (s2 > 2.0 + 1e-12) throw std::domain_error("chart point outside the radius-sqrt(2) ball");
  const double rho = std::sqrt(std::max(2.0 - s2, 0.0));

  // common U(1) rotation of the phase-0 reconstruction, so any two phases
  // land on the same orbit and hp_forward is an exact left inverse
  const double cp = std::cos(phase), sp = std::sin(phase);
  Vec X = Vec::Zero(2 * m);
  X[x.chart] = rho * cp;
  X[m + x.chart] = rho * sp;
  const auto ks = other_bosons(m, x.chart);
  for (int t = 0; t < f; ++t) {
    const double q = x.coords[t], p = x.coords[f + t];
    X[ks[t]] = q * cp - p * sp;
    X[m + ks[t]] = q * sp + p * cp;
  }
  return X;
}

ChartPoint hp_transition(int jp, const ChartPoint& x, double boundary_tol) {
  const int f = static_cast<int>(x.coords.size()) / 2;
  const int m = f + 1;
  check_chart(jp, m);
  if (jp == x.chart) return x;

  const auto ks = other_bosons(m, x.chart);
  const int tp = static_cast<int>(std::find(ks.begin(), ks.end(), jp) - ks.begin());
  const Eigen::Vector2d xjp(x.coords[tp], x.coords[f + tp]);
  const double njp = xjp.norm();
  if (njp < boundary_tol)
    throw BoundarySingularity("no excitation in the target chart's boson");

  const double rho = std::sqrt(std::max(2.0 - x.s2(), 0.0));
  const auto ks_new = other_bosons(m, jp);
  ChartPoint out;
  out.chart = jp;
  out.coords.resize(2 * f);
  for (int t = 0; t < f; ++t) {
    const int k = ks_new[t];
    if (k == x.chart) {
      out.coords[t] = rho * xjp[0] / njp;
      out.coords[f + t] = -rho * xjp[1] / njp;
    } else {
      const int tk = static_cast<int>(std::find(ks.begin(), ks.end(), k) - ks.begin());
      const Eigen::Vector2d xk(x.coords[tk], x.coords[f + tk]);
      out.coords[t] = dot2(xjp, xk) / njp;
      out.coords[f + t] = symp2(xjp, xk) / njp;
    }
  }
  return out;
}

double reduced_h(int j, const u3::U3Params& p, const Vec& u) {
  check_chart(j);
  if (u.size() != 4) throw std::invalid_argument("u(3) chart point must have 4 coordinates");
  const double qa = u[0], qb = u[1], pa = u[2], pb = u[3];
  const double s2 = u.squaredNorm();
  if (s2 > 2.0 + 1e-12) throw std::domain_error("chart point outside the radius-sqrt(2) ball");
  const double rest = 2.0 - s2;
  const double cross = qa * pb - pa * qb;  // q_a p_b - p_a q_b
  switch (j) {
    case 0:
      // coords (q1, q2, p1, p2)
      return 0.5 * (1.0 - p.xi) * s2 - p.xi * ((pa * pa + pb * pb) * rest + cross * cross) -
             p.eps * pb * std::sqrt(rest);
    case 1:
      // coords (q0, q2, p0, p2)
      return 0.5 * (1.0 - p.xi) * (2.0 - qa * qa - pa * pa) -
             p.xi * ((pa * pa + pb * pb) * rest + cross * cross) - p.eps * cross;
    default:
      // coords (q0, q1, p0, p1); the pullback fixes the dipole sign to +
      return 0.5 * (1.0 - p.xi) * (2.0 - qa * qa - pa * pa) -
             p.xi * ((pa * pa + pb * pb) * rest + cross * cross) + p.eps * pa * std::sqrt(rest);
  }
}

namespace {

// Embedding X(u) of chart coordinates at phase 0: the k != j pairs copy
// through and Q_j = sqrt(2 - s^2), P_j = 0. Gradients and Hessians of H^(j)
// pull back through this map with the exact chain rule.
Vec embed(int j, const Vec& u) {
  ChartPoint x;
  x.chart = j;
  x.coords = u;
  return hp_inverse(x, 0.0);
}

Mat embed_jacobian(int j, const Vec& u) {
  const auto ks = other_bosons(3, j);
  const double rho = std::sqrt(std::max(2.0 - u.squaredNorm(), 0.0));
  Mat J = Mat::Zero(6, 4);
  for (int t = 0; t < 2; ++t) {
    J(ks[t], t) = 1.0;
    J(3 + ks[t], 2 + t) = 1.0;
  }
  for (int i = 0; i < 4; ++i) J(j, i) = -u[i] / rho;  // d sqrt(2-s^2) / du_i
  return J;
}

}  // namespace

Vec reduced_h_gradient(int j, const u3::U3Params& p, const Vec& u) {
  check_chart(j);
  const Vec X = embed(j, u);
  return embed_jacobian(j, u).transpose() * u3::classical_h_gradient(p, X);
}

Mat reduced_h_hessian(int j, const u3::U3Params& p, const Vec& u) {
  check_chart(j);
  const Vec X = embed(j, u);
  const Mat J = embed_jacobian(j, u);
  const Vec g = u3::classical_h_gradient(p, X);
  const double rho = std::sqrt(std::max(2.0 - u.squaredNorm(), 0.0));
  Mat H = J.transpose() * u3::classical_h_hessian(p, X) * J;
  // second derivatives of the only curved embedding component Q_j
  const Mat d2rho = -Mat::Identity(4, 4) / rho - (u * u.transpose()) / (rho * rho * rho);
  H += g[j] * d2rho;
  return 0.5 * (H + H.transpose());
}

std::vector<ChartStationaryPoint> chart_stationary(int j, const u3::U3Params& p,
                                                   const SolverConfig& cfg, double margin) {
  check_chart(j);
  struct Hit {
    bool ok = false;
    Vec u;
  };
  std::vector<Hit> hits(cfg.n_starts);
  parallel_for(cfg.n_starts, [&](std::size_t i) {
    Rng rng(derive_seed(cfg.seed, i));
    Vec u = rng.in_ball(4, std::sqrt(2.0) * 0.999);
    Vec g = reduced_h_gradient(j, p, u);
    double gn = g.norm();
    for (int it = 0; it < cfg.max_iter && gn > cfg.residual_tol; ++it) {
      const Mat H = reduced_h_hessian(j, p, u);
      Eigen::JacobiSVD<Mat> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
      Vec s = svd.singularValues();
      const double cutoff = cfg.sv_truncation * s[0];
      for (int k = 0; k < s.size(); ++k) s[k] = s[k] > cutoff ? 1.0 / s[k] : 0.0;
      const Vec du = -(svd.matrixV() * (s.asDiagonal() * (svd.matrixU().transpose() * g)));
      double t = 1.0;
      bool accepted = false;
      for (int bt = 0; bt < 40; ++bt, t *= 0.5) {
        const Vec ut = u + t * du;
        if (ut.squaredNorm() >= 2.0) continue;
        const Vec gt = reduced_h_gradient(j, p, ut);
        if (gt.norm() < gn) {
          u = ut;
          g = gt;
          gn = g.norm();
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }
    if (gn <= cfg.residual_tol && u.squaredNorm() < 2.0 - margin) hits[i] = {true, u};
  });

  std::vector<ChartStationaryPoint> pts;
  for (const auto& h : hits) {
    if (!h.ok) continue;
    ChartStationaryPoint cp;
    cp.x = {j, h.u};
    cp.energy = reduced_h(j, p, h.u);
    const IndexResult ir = stationary_index(reduced_h_hessian(j, p, h.u), 0, cfg.zero_tol);
    cp.index = ir.index;
    cp.zero_count = ir.zero_count;
    cp.degenerate = ir.degenerate;
    cp.signature =
        u3::orbit_signature(u3::SystemKind::SingleConstraint, embed(j, h.u), cp.energy);
    pts.push_back(std::move(cp));
  }

  std::sort(pts.begin(), pts.end(), [](const ChartStationaryPoint& a, const ChartStationaryPoint& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    for (int i = 0; i < a.signature.size(); ++i)
      if (a.signature[i] != b.signature[i]) return a.signature[i] < b.signature[i];
    return false;
  });
  std::vector<ChartStationaryPoint> unique;
  for (auto& cp : pts) {
    bool dup = false;
    for (const auto& q : unique)
      if ((cp.signature - q.signature).cwiseAbs().maxCoeff() <= cfg.dedupe_tol) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(std::move(cp));
  }
  return unique;
}

std::vector<AtlasPoint> atlas_stationary(const u3::U3Params& p, const SolverConfig& cfg) {
  std::vector<AtlasPoint> all;
  for (int j = 0; j < 3; ++j) {
    for (auto& cp : chart_stationary(j, p, cfg)) {
      bool dup = false;
      for (const auto& q : all)
        if ((cp.signature - q.p.signature).cwiseAbs().maxCoeff() <= cfg.dedupe_tol) {
          dup = true;
          break;
        }
      if (!dup) all.push_back({j, std::move(cp)});
    }
  }
  std::sort(all.begin(), all.end(), [](const AtlasPoint& a, const AtlasPoint& b) {
    return a.p.energy < b.p.energy;
  });
  return all;
}

Vec eta_coords(const Vec& X) {
  const int m = static_cast<int>(X.size()) / 2;
  Vec eta(m);
  for (int k = 0; k < m; ++k) {
    const double q = X[k], p = X[m + k];
    const double sq = q < 0 ? -1.0 : 1.0;
    const double sp = p < 0 ? -1.0 : 1.0;
    eta[k] = sq * sp * std::sqrt(q * q + p * p);
  }
  return eta;
}

Vec eta_coords(const ChartPoint& x) { return eta_coords(hp_inverse(x, 0.0)); }

}  // namespace esqpt::hp
