#include "esqpt/density.hpp"

#include <algorithm>
#include <cmath>

#include "esqpt/hp_atlas.hpp"
#include "esqpt/parallel.hpp"
#include "esqpt/rng.hpp"

namespace esqpt::density {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

inline double kernel(double x, double delta) {
  const double t = x / delta;
  return kInvSqrt2Pi / delta * std::exp(-0.5 * t * t);
}

inline double kernel_derivative(double x, double delta) {
  return -x / (delta * delta) * kernel(x, delta);
}

// Liouville prefactors of the Weyl formula for the u(3) model (f = 2):
// chart route:  Vol(4-ball, sqrt 2) / (2 pi)^2   = 2 pi^2 / 4 pi^2 = 1/2
// sphere route: Area(5-sphere, sqrt 2) / sqrt 2 / (2 pi)^3 = 4 pi^3 / 8 pi^3 = 1/2
constexpr double kWeylPrefactor = 0.5;

struct McAccumulator {
  std::vector<std::uint64_t> counts;
  double lo = 0.0, bin = 0.0;
  std::uint64_t total = 0;

  void add(double value) {
    ++total;  // out-of-range samples still count toward the mean
    const double t = (value - lo) / bin;
    if (t < 0.0 || t >= double(counts.size())) return;
    ++counts[static_cast<std::size_t>(t)];
  }
};

void check_grid(const std::vector<double>& grid) {
  if (grid.size() < 2) throw std::invalid_argument("grid must have at least two points");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (grid[i + 1] <= grid[i]) throw std::invalid_argument("grid must be strictly increasing");
}

DensityCurve mc_density(const std::function<double(Rng&, Vec&)>& draw_energy, int point_dim,
                        std::uint64_t n_samples, std::uint64_t seed,
                        const std::vector<double>& grid, double delta) {
  check_grid(grid);
  if (n_samples < 100000)
    throw std::invalid_argument("Weyl Monte Carlo needs at least 1e5 samples");
  const double lo = grid.front() - 8.0 * delta;
  const double hi = grid.back() + 8.0 * delta;
  const double bin = delta / 40.0;
  const std::size_t nbins = static_cast<std::size_t>(std::ceil((hi - lo) / bin));

  std::vector<McAccumulator> acc(kMcShards);
  parallel_for(kMcShards, [&](std::size_t shard) {
    auto& a = acc[shard];
    a.counts.assign(nbins, 0);
    a.lo = lo;
    a.bin = bin;
    Rng rng(derive_seed(seed, shard));
    const std::uint64_t n = n_samples / kMcShards + (shard < n_samples % kMcShards ? 1 : 0);
    Vec x(point_dim);
    for (std::uint64_t i = 0; i < n; ++i) a.add(draw_energy(rng, x));
  });

  std::vector<std::uint64_t> counts(nbins, 0);
  std::uint64_t total = 0;
  for (const auto& a : acc) {  // shard-ordered merge keeps results bit-stable
    total += a.total;
    for (std::size_t b = 0; b < nbins; ++b) counts[b] += a.counts[b];
  }

  DensityCurve out;
  out.grid = grid;
  out.delta = delta;
  out.provenance = Provenance::Weyl;
  out.total_weight = kWeylPrefactor;
  out.rho.resize(grid.size());
  out.drho.resize(grid.size());
  out.sigma.resize(grid.size());
  const double inv_n = 1.0 / double(total);
  parallel_for(grid.size(), [&](std::size_t gi) {
    const double E = grid[gi];
    const std::size_t b0 =
        static_cast<std::size_t>(std::max(0.0, std::floor((E - 8.0 * delta - lo) / bin)));
    const std::size_t b1 = std::min(nbins, static_cast<std::size_t>(std::max(
                                               0.0, std::ceil((E + 8.0 * delta - lo) / bin))));
    double m1 = 0.0, m2 = 0.0, md = 0.0;
    for (std::size_t b = b0; b < b1; ++b) {
      if (counts[b] == 0) continue;
      const double y = lo + (b + 0.5) * bin;
      const double g = kernel(E - y, delta);
      const double c = double(counts[b]);
      m1 += g * c;
      m2 += g * g * c;
      md += kernel_derivative(E - y, delta) * c;
    }
    m1 *= inv_n;
    m2 *= inv_n;
    md *= inv_n;
    out.rho[gi] = kWeylPrefactor * m1;
    out.drho[gi] = kWeylPrefactor * md;
    out.sigma[gi] = kWeylPrefactor * std::sqrt(std::max(m2 - m1 * m1, 0.0) * inv_n);
  });
  return out;
}

}  // namespace

std::vector<double> make_grid(double lo, double hi, double step) {
  if (step <= 0.0 || hi < lo) throw std::invalid_argument("bad grid bounds");
  std::vector<double> g;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  g.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g.push_back(lo + double(i) * step);
  return g;
}

DensityCurve smooth_density(const std::vector<double>& eigs, double delta,
                            const std::vector<double>& grid) {
  if (eigs.empty()) throw std::invalid_argument("empty spectrum");
  if (delta <= 0.0) throw std::invalid_argument("smoothing width must be positive");
  check_grid(grid);
  DensityCurve out;
  out.grid = grid;
  out.delta = delta;
  out.provenance = Provenance::Quantum;
  out.total_weight = double(eigs.size());
  out.rho.assign(grid.size(), 0.0);
  out.drho.assign(grid.size(), 0.0);
  out.sigma.assign(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t gi) {
    double r = 0.0, d = 0.0;
    for (const double e : eigs) {
      const double x = grid[gi] - e;
      if (std::abs(x) > 10.0 * delta) continue;
      r += kernel(x, delta);
      d += kernel_derivative(x, delta);
    }
    out.rho[gi] = r;
    out.drho[gi] = d;
  });
  return out;
}

DensityCurve weyl_density_chart(int j, const u3::U3Params& p, std::uint64_t n_samples,
                                std::uint64_t seed, const std::vector<double>& grid,
                                double delta) {
  const double radius = std::sqrt(2.0);
  auto draw = [j, p, radius](Rng& rng, Vec& x) {
    x = rng.in_ball(4, radius);
    return hp::reduced_h(j, p, x);
  };
  return mc_density(draw, 4, n_samples, seed, grid, delta);
}

DensityCurve weyl_density_sphere(const u3::U3Params& p, std::uint64_t n_samples,
                                 std::uint64_t seed, const std::vector<double>& grid,
                                 double delta) {
  const double radius = std::sqrt(2.0);
  auto draw = [p, radius](Rng& rng, Vec& x) {
    x = rng.on_sphere(6, radius);
    return u3::classical_h(p, x);
  };
  return mc_density(draw, 6, n_samples, seed, grid, delta);
}

double smooth_step(double t, double delta) {
  return 0.5 * (1.0 + std::erf(t / (delta * std::sqrt(2.0))));
}

std::vector<double> smooth_log(const std::vector<double>& t, double delta) {
  double span = 0.0;
  for (const double u : t) span = std::max(span, std::abs(u));
  span += 10.0 * delta;
  const double bin = delta / 50.0;
  const auto nbins = static_cast<std::size_t>(std::ceil(2.0 * span / bin));
  // exact integral of ln|y| over each bin handles the singular bin
  auto prim = [](double y) { return y == 0.0 ? 0.0 : y * std::log(std::abs(y)) - y; };
  std::vector<double> w(nbins), yc(nbins);
  for (std::size_t b = 0; b < nbins; ++b) {
    const double a = -span + double(b) * bin;
    w[b] = prim(a + bin) - prim(a);
    yc[b] = a + 0.5 * bin;
  }
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto b0 = static_cast<std::size_t>(
        std::max(0.0, std::floor((t[i] - 9.0 * delta + span) / bin)));
    const auto b1 =
        std::min(nbins, static_cast<std::size_t>(
                            std::max(0.0, std::ceil((t[i] + 9.0 * delta + span) / bin))));
    double s = 0.0;
    for (std::size_t b = b0; b < b1; ++b) s += kernel(t[i] - yc[b], delta) * w[b];
    out[i] = -s;
  }
  return out;
}

namespace {

const std::vector<double>& feature_data(const DensityCurve& curve, int f_dof) {
  if (f_dof == 1) return curve.rho;
  if (f_dof == 2) return curve.drho;
  throw std::invalid_argument("singularity location supports f = 1 or 2 only");
}

}  // namespace

std::vector<FeatureReport> locate_singularities(const DensityCurve& curve,
                                                const std::vector<ExpectedFeature>& expected,
                                                int f_dof) {
  if (expected.empty()) return {};
  const auto& data = feature_data(curve, f_dof);
  const double delta = curve.delta;

  double elo = expected.front().energy, ehi = expected.front().energy;
  for (const auto& f : expected) {
    elo = std::min(elo, f.energy);
    ehi = std::max(ehi, f.energy);
  }
  elo -= 6.0 * delta;
  ehi += 6.0 * delta;

  std::vector<std::size_t> sel;
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    if (curve.grid[i] >= elo && curve.grid[i] <= ehi) sel.push_back(i);
  const int rows = static_cast<int>(sel.size());
  const int nfeat = static_cast<int>(expected.size());
  constexpr int kPolyDegree = 6;
  if (rows < nfeat + kPolyDegree + 2)
    throw std::invalid_argument("grid too coarse for the singularity fit");

  // one global linear fit: smoothed singular shapes + polynomial background
  Mat A(rows, nfeat + kPolyDegree + 1);
  Vec y(rows);
  for (int c = 0; c < nfeat; ++c) {
    const bool even = expected[c].index % 2 == 0;
    std::vector<double> off(rows);
    for (int r = 0; r < rows; ++r) off[r] = curve.grid[sel[r]] - expected[c].energy;
    if (even) {
      for (int r = 0; r < rows; ++r) A(r, c) = smooth_step(off[r], delta);
    } else {
      const auto L = smooth_log(off, delta);
      for (int r = 0; r < rows; ++r) A(r, c) = L[r];
    }
  }
  const double mid = 0.5 * (elo + ehi), half = 0.5 * (ehi - elo);
  for (int r = 0; r < rows; ++r) {
    y[r] = data[sel[r]];
    const double t = (curve.grid[sel[r]] - mid) / half;
    double tp = 1.0;
    for (int d = 0; d <= kPolyDegree; ++d, tp *= t) A(r, nfeat + d) = tp;
  }
  const Vec coef = A.colPivHouseholderQr().solve(y);

  std::vector<FeatureReport> out;
  for (int c = 0; c < nfeat; ++c) {
    FeatureReport rep;
    rep.feature = expected[c];
    rep.predicted = classify_singularity(expected[c].index, f_dof);
    rep.coefficient = coef[c];
    // both fitted shapes (unit step, upward log peak) point up for a
    // positive coefficient
    rep.match = (coef[c] > 0.0) == (rep.predicted.orientation == Orientation::Up);
    out.push_back(rep);
  }
  return out;
}

double log_feature_at(const DensityCurve& curve, double energy) {
  const auto& data = feature_data(curve, 1);
  const double delta = curve.delta;
  std::vector<std::size_t> sel;
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    if (std::abs(curve.grid[i] - energy) <= 6.0 * delta) sel.push_back(i);
  if (sel.size() < 8) throw std::invalid_argument("grid too coarse around the candidate energy");
  const int rows = static_cast<int>(sel.size());
  std::vector<double> off(rows);
  for (int r = 0; r < rows; ++r) off[r] = curve.grid[sel[r]] - energy;
  const auto L = smooth_log(off, delta);
  Mat A(rows, 5);
  Vec y(rows);
  for (int r = 0; r < rows; ++r) {
    const double t = off[r] / (6.0 * delta);
    A(r, 0) = 1.0;
    A(r, 1) = t;
    A(r, 2) = t * t;
    A(r, 3) = t * t * t;
    A(r, 4) = L[r];
    y[r] = data[sel[r]];
  }
  return A.colPivHouseholderQr().solve(y)[4];
}

double max_log_feature(const DensityCurve& curve, double lo, double hi) {
  double best = 0.0;
  for (double e = lo; e <= hi; e += 0.5 * curve.delta)
    best = std::max(best, std::abs(log_feature_at(curve, e)));
  return best;
}

}  // namespace esqpt::density
