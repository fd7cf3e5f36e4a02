#ifndef ESQPT_DENSITY_HPP
#define ESQPT_DENSITY_HPP

#include <cstdint>
#include <vector>

#include "esqpt/constrained.hpp"
#include "esqpt/u3.hpp"

namespace esqpt::density {

enum class Provenance { Quantum, Weyl };

/// Smoothed level density on an energy grid, with the analytic-kernel
/// derivative and (for Monte Carlo curves) a 1-sigma statistical band.
struct DensityCurve {
  std::vector<double> grid;
  std::vector<double> rho;
  std::vector<double> drho;
  std::vector<double> sigma;    // zero for quantum curves
  double total_weight = 0.0;    // integral of rho over its support
  double delta = 0.0;           // Gaussian smoothing width
  Provenance provenance = Provenance::Quantum;
};

std::vector<double> make_grid(double lo, double hi, double step);

/// Gaussian-smoothed density of a discrete spectrum:
/// rho(E) = sum_n G_delta(E - E_n), drho/dE from the kernel derivative.
/// total_weight = number of levels. Throws on an empty spectrum.
DensityCurve smooth_density(const std::vector<double>& eigs, double delta,
                            const std::vector<double>& grid);

constexpr int kMcShards = 256;  // fixed shard count; results depend on (seed, shards) only

/// Semiclassical Weyl density of the reduced Hamiltonian H^(j):
/// rho_cl(E) = (1/2pi)^f Vol(ball) <G_delta(E - H)> over uniform ball
/// samples; for f = 2 the prefactor is 1/2. Statistical 1-sigma band filled.
DensityCurve weyl_density_chart(int j, const u3::U3Params& p, std::uint64_t n_samples,
                                std::uint64_t seed, const std::vector<double>& grid,
                                double delta);

/// Same density computed on the full constrained sphere with the full
/// classical Hamiltonian, normalised so it equals weyl_density_chart; the
/// equality of the two routes is the density-reduction invariant.
DensityCurve weyl_density_sphere(const u3::U3Params& p, std::uint64_t n_samples,
                                 std::uint64_t seed, const std::vector<double>& grid,
                                 double delta);

struct ExpectedFeature {
  double energy = 0.0;
  int index = 0;  // Morse index r of the generating stationary point
};

struct FeatureReport {
  ExpectedFeature feature;
  SingularityType predicted;
  double coefficient = 0.0;  // fitted amplitude of the predicted shape
  bool match = false;        // sign(coefficient) agrees with the prediction
};

/// Tests the curve for the singular features the stationary points predict.
/// The (f-1)-th derivative data (drho for f = 2, rho itself for f = 1) is
/// fit globally against exactly-smoothed feature shapes (a Gaussian CDF
/// step per even-r feature, a smoothed -ln|E - E_st| peak per odd-r one)
/// plus a degree-6 polynomial background; each feature's orientation is the
/// sign of its fitted coefficient.
std::vector<FeatureReport> locate_singularities(const DensityCurve& curve,
                                                const std::vector<ExpectedFeature>& expected,
                                                int f_dof);

/// Fitted coefficient of a smoothed-log peak at one candidate energy of an
/// f = 1 density (local window, cubic background).
double log_feature_at(const DensityCurve& curve, double energy);

/// Largest |log_feature_at| over candidate energies in [lo, hi] (stepped by
/// delta/2), used to certify the absence of interior singular features in
/// f = 1 blocks.
double max_log_feature(const DensityCurve& curve, double lo, double hi);

/// Gaussian CDF step Phi(t/delta), the delta-smoothing of a unit jump.
double smooth_step(double t, double delta);

/// Smoothed upward log peak: -(G_delta * ln|.|)(t), computed with exact
/// per-bin integrals of the logarithm.
std::vector<double> smooth_log(const std::vector<double>& t, double delta);

}  // namespace esqpt::density

#endif
