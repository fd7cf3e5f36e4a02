#include "esqpt/u3_solve.hpp"

#include <algorithm>
#include <cmath>

namespace esqpt::u3 {

StartSampler start_sampler() {
  return [](Rng& rng) { return rng.on_sphere(6, std::sqrt(2.0)); };
}

DedupePolicy dedupe_policy(SystemKind kind) {
  DedupePolicy d;
  d.signature = [kind](const Vec& X, double E) { return orbit_signature(kind, X, E); };
  d.degenerate_key = [](const Vec& X, double E) { return degenerate_key(X, E); };
  return d;
}

SystemFamily xi_family(double eps) {
  SystemFamily fam;
  fam.make = [eps](double xi) { return make_system(U3Params{xi, eps}); };
  fam.sample_start = start_sampler();
  fam.dedupe = dedupe_policy(SystemKind::SingleConstraint);
  return fam;
}

std::vector<StationaryPoint> find_stationary(const U3Params& p, const SolverConfig& cfg,
                                             SolveStats* stats) {
  return solve_stationary(make_system(p), cfg, start_sampler(),
                          dedupe_policy(SystemKind::SingleConstraint), stats);
}

std::vector<StationaryPoint> find_stationary(const U3Params& p, double ell,
                                             const SolverConfig& cfg, SolveStats* stats) {
  const auto policy = dedupe_policy(SystemKind::DoubleConstraint);
  SolveStats total;
  std::vector<StationaryPoint> all;
  const bool both = ell != 0.0;
  for (int branch : both ? std::vector<int>{+1, -1} : std::vector<int>{+1}) {
    SolveStats st;
    auto pts = solve_stationary(make_system(p, ell, branch), cfg, start_sampler(), policy, &st);
    all.insert(all.end(), pts.begin(), pts.end());
    total.converged += st.converged;
    total.no_convergence += st.no_convergence;
    total.rank_deficient += st.rank_deficient;
  }
  // merge the branches: the |l| signature identifies mirror partners
  std::sort(all.begin(), all.end(), [](const StationaryPoint& a, const StationaryPoint& b) {
    return a.energy < b.energy;
  });
  std::vector<StationaryPoint> unique;
  for (auto& p2 : all) {
    bool dup = false;
    for (const auto& q : unique)
      if ((p2.signature - q.signature).cwiseAbs().maxCoeff() <= cfg.dedupe_tol) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(std::move(p2));
  }
  if (stats) *stats = total;
  return unique;
}

}  // namespace esqpt::u3
