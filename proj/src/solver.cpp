#include "esqpt/solver.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "esqpt/parallel.hpp"

namespace esqpt {

namespace {

struct StartResult {
  bool converged = false;
  Vec X;
  Vec lambda;
};

Vec residual(const ConstrainedSystem& sys, const Vec& X, const Vec& lambda) {
  return lagrange_gradient(sys, X, lambda);
}

Mat jacobian(const ConstrainedSystem& sys, const Vec& X, const Vec& lambda) {
  const int d = sys.dim();
  const int c = sys.num_constraints();
  Mat J = Mat::Zero(d + c, d + c);
  J.topLeftCorner(d, d) = lagrange_hessian_x(sys, X, lambda);
  for (int a = 0; a < c; ++a) {
    const Vec g = sys.constraints[a].field.gradient(X);
    J.block(0, d + a, d, 1) = g;
    J.block(d + a, 0, 1, d) = g.transpose();
  }
  return J;
}

StartResult run_start(const ConstrainedSystem& sys, const SolverConfig& cfg, const Vec& X0) {
  const int d = sys.dim();
  const int c = sys.num_constraints();

  // initial multipliers from least squares of grad H + G lambda = 0
  Mat G(d, c);
  for (int a = 0; a < c; ++a) G.col(a) = sys.constraints[a].field.gradient(X0);
  const Vec gH = sys.hamiltonian.gradient(X0);
  Vec lambda = G.colPivHouseholderQr().solve(-gH);

  Vec z(d + c);
  z.head(d) = X0;
  z.tail(c) = lambda;

  Vec F = residual(sys, z.head(d), z.tail(c));
  double fnorm = F.norm();
  for (int it = 0; it < cfg.max_iter && fnorm > cfg.residual_tol; ++it) {
    const Mat J = jacobian(sys, z.head(d), z.tail(c));
    Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vec s = svd.singularValues();
    const double cutoff = cfg.sv_truncation * s[0];
    for (int i = 0; i < s.size(); ++i) s[i] = s[i] > cutoff ? 1.0 / s[i] : 0.0;
    const Vec dz = -(svd.matrixV() * (s.asDiagonal() * (svd.matrixU().transpose() * F)));

    double t = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt, t *= 0.5) {
      const Vec zt = z + t * dz;
      const Vec Ft = residual(sys, zt.head(d), zt.tail(c));
      if (Ft.norm() < fnorm) {
        z = zt;
        F = Ft;
        fnorm = F.norm();
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // stalled; will be dropped unless already converged
  }

  StartResult out;
  out.X = z.head(d);
  out.lambda = z.tail(c);
  out.converged = fnorm <= cfg.residual_tol;
  return out;
}

bool within(const Vec& a, const Vec& b, double tol) {
  return a.size() == b.size() && (a - b).cwiseAbs().maxCoeff() <= tol;
}

bool signature_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return a.size() < b.size();
}

}  // namespace

std::vector<StationaryPoint> solve_stationary(const ConstrainedSystem& sys,
                                              const SolverConfig& cfg,
                                              const StartSampler& sample_start,
                                              const DedupePolicy& dedupe,
                                              SolveStats* stats) {
  std::vector<StartResult> results(cfg.n_starts);
  parallel_for(cfg.n_starts, [&](std::size_t i) {
    Rng rng(derive_seed(cfg.seed, i));
    results[i] = run_start(sys, cfg, sample_start(rng));
  });

  SolveStats local;
  std::vector<StationaryPoint> pts;
  for (auto& r : results) {
    if (!r.converged) {
      ++local.no_convergence;
      continue;
    }
    ++local.converged;
    StationaryPoint p;
    p.point = r.X;
    p.multipliers = r.lambda;
    p.energy = sys.hamiltonian.value(r.X);
    try {
      const Mat B = constraint_frame(sys, r.X);
      const Mat M = restricted_hessian(sys, r.X, r.lambda, B);
      const IndexResult ir = stationary_index(M, sys.num_constraints(), cfg.zero_tol);
      p.index = ir.index;
      p.zero_count = ir.zero_count;
      p.degenerate = ir.degenerate;
    } catch (const DegenerateConstraint&) {
      // ill-posed constraint surface at this point (e.g. the angular
      // momentum constraint where bosons 1 and 2 are both empty); the
      // index is undefined there, so the point is only counted
      ++local.rank_deficient;
      continue;
    }
    p.signature = dedupe.signature(r.X, p.energy);
    pts.push_back(std::move(p));
  }

  // primary dedupe on the orbit signature, deterministic order
  std::sort(pts.begin(), pts.end(), [](const StationaryPoint& a, const StationaryPoint& b) {
    return signature_less(a.signature, b.signature);
  });
  std::vector<StationaryPoint> unique;
  for (auto& p : pts) {
    bool dup = false;
    for (const auto& q : unique)
      if (within(p.signature, q.signature, cfg.dedupe_tol)) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(std::move(p));
  }

  // degenerate critical manifolds (index counts > c zero directions) can be
  // larger than one orbit; collapse their representatives by the coarser key
  if (dedupe.degenerate_key) {
    std::vector<StationaryPoint> merged;
    std::vector<Vec> keys;
    for (auto& p : unique) {
      if (!p.degenerate) {
        merged.push_back(std::move(p));
        continue;
      }
      const Vec key = dedupe.degenerate_key(p.point, p.energy);
      bool dup = false;
      for (std::size_t i = 0; i < keys.size(); ++i)
        if (within(key, keys[i], std::max(cfg.dedupe_tol, 1e-6))) {
          dup = true;
          break;
        }
      if (!dup) {
        keys.push_back(key);
        merged.push_back(std::move(p));
      }
    }
    unique = std::move(merged);
  }

  std::sort(unique.begin(), unique.end(), [](const StationaryPoint& a, const StationaryPoint& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return signature_less(a.signature, b.signature);
  });
  if (stats) *stats = local;
  return unique;
}

std::optional<int> morse_sum(const std::vector<StationaryPoint>& pts) {
  int sum = 0;
  for (const auto& p : pts) {
    if (p.degenerate) return std::nullopt;
    sum += p.index % 2 == 0 ? 1 : -1;
  }
  return sum;
}

ScanResult scan_parameter(const SystemFamily& family, const std::vector<double>& grid,
                          const SolverConfig& cfg) {
  ScanResult out;
  out.parameters = grid;
  out.points.resize(grid.size());

  auto solve_at = [&](double v) {
    return solve_stationary(family.make(v), cfg, family.sample_start, family.dedupe);
  };

  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.points[i] = solve_at(grid[i]);
    out.morse_sums.push_back(morse_sum(out.points[i]));
  }

  // localise count changes between adjacent grid values to 1e-3
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    std::size_t na = out.points[i].size();
    const std::size_t nb = out.points[i + 1].size();
    if (na == nb) continue;
    double a = grid[i], b = grid[i + 1];
    while (b - a > 1e-3) {
      const double m = 0.5 * (a + b);
      if (solve_at(m).size() == na)
        a = m;
      else
        b = m;
    }
    out.emergence.push_back(0.5 * (a + b));
  }
  return out;
}

}  // namespace esqpt
