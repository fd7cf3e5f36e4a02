#include "esqpt/verify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "esqpt/density.hpp"
#include "esqpt/hp_atlas.hpp"
#include "esqpt/quantum.hpp"
#include "esqpt/u3_solve.hpp"

namespace esqpt::verify {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

CheckResult make(const std::string& name, bool pass, const std::string& detail) {
  return {name, pass, detail};
}

// ---------------------------------------------------------------------------
// shared helpers

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& X, double h) {
  Vec g(X.size());
  for (int i = 0; i < X.size(); ++i) {
    Vec Xp = X, Xm = X;
    Xp[i] += h;
    Xm[i] -= h;
    g[i] = (f(Xp) - f(Xm)) / (2.0 * h);
  }
  return g;
}

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& X, double h) {
  const Vec f0 = f(X);
  Mat J(f0.size(), X.size());
  for (int i = 0; i < X.size(); ++i) {
    Vec Xp = X, Xm = X;
    Xp[i] += h;
    Xm[i] -= h;
    J.col(i) = (f(Xp) - f(Xm)) / (2.0 * h);
  }
  return J;
}

double rel_err(double err, double scale) { return err / std::max(scale, 1e-8); }

/// (E, r) multiset with energies merged at 1e-8 resolution.
std::vector<std::pair<double, int>> er_multiset(const std::vector<StationaryPoint>& pts) {
  std::vector<std::pair<double, int>> v;
  for (const auto& p : pts) v.push_back({p.energy, p.index});
  std::sort(v.begin(), v.end());
  return v;
}

/// Distinct (energy, index) features for the density fits: points closer
/// than 1e-6 in energy merge into one feature.
std::vector<density::ExpectedFeature> distinct_features(const std::vector<StationaryPoint>& pts) {
  std::vector<density::ExpectedFeature> f;
  for (const auto& p : pts) {
    if (!f.empty() && std::abs(p.energy - f.back().energy) < 1e-6) continue;
    f.push_back({p.energy, p.index});
  }
  return f;
}

SolverConfig solver_config(int n_starts, std::uint64_t seed = 20240901ULL) {
  SolverConfig cfg;
  cfg.n_starts = n_starts;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

MethodAgreement compare_methods(const u3::U3Params& p, const SolverConfig& cfg) {
  MethodAgreement out;
  const auto lag = u3::find_stationary(p, cfg);
  const auto atlas = hp::atlas_stationary(p, cfg);
  out.lagrange_count = lag.size();
  out.atlas_count = atlas.size();
  if (lag.size() != atlas.size()) return out;

  auto le = er_multiset(lag);
  std::vector<std::pair<double, int>> ae;
  for (const auto& a : atlas) ae.push_back({a.p.energy, a.p.index});
  std::sort(ae.begin(), ae.end());

  out.matched = true;
  for (std::size_t i = 0; i < le.size(); ++i) {
    const double de = std::abs(le[i].first - ae[i].first);
    out.max_abs_de = std::max(out.max_abs_de, de);
    if (de > 1e-6 || le[i].second != ae[i].second) out.matched = false;
  }
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// acceptance criteria

CheckResult criterion1_chart1_center() {
  const double eps = 0.3;
  const Vec origin = Vec::Zero(4);
  double max_err = 0.0;
  auto index_at = [&](double xi) {
    const u3::U3Params p{xi, eps};
    max_err = std::max(max_err, std::abs(hp::reduced_h(1, p, origin) - (1.0 - xi)));
    max_err = std::max(max_err, hp::reduced_h_gradient(1, p, origin).norm());
    return stationary_index(hp::reduced_h_hessian(1, p, origin), 0).index;
  };
  bool ok = max_err < 1e-12;
  for (double xi : {0.03, 0.1, 0.3, 0.5, 0.7, 0.9, 0.97}) ok &= index_at(xi) == 3;
  for (double xi : {0.005, 0.015, 0.985, 0.995}) ok &= index_at(xi) == 2;
  ok &= max_err <= 1e-9;

  // locate both index transitions by bisection
  auto transition = [&](double lo, double hi) {
    // index_at(lo) != index_at(hi) by construction
    const int ilo = index_at(lo);
    while (hi - lo > 1e-4) {
      const double m = 0.5 * (lo + hi);
      (index_at(m) == ilo ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
  };
  const double xi_lo = transition(0.005, 0.1);
  const double xi_hi = transition(0.9, 0.995);
  ok &= std::abs(xi_lo - 0.023) <= 0.005 && std::abs(xi_hi - 0.977) <= 0.005;
  return make("criterion 1: chart-1 central point E=1-xi, r transitions at 0.023/0.977",
              ok, "transitions at xi=" + fmt(xi_lo) + ", " + fmt(xi_hi));
}

CheckResult criterion2_emergence() {
  const auto fam = u3::xi_family(0.3);
  std::vector<double> grid;
  for (double xi = 0.40; xi < 0.4405; xi += 0.01) grid.push_back(xi);
  const auto scan = scan_parameter(fam, grid, solver_config(600));
  bool ok = scan.emergence.size() == 1;
  double xi_e = ok ? scan.emergence.front() : 0.0;
  if (ok) ok = std::abs(xi_e - 0.42) <= 0.01;
  // the count must rise by exactly two across the event
  if (ok) {
    std::size_t before = 0, after = 0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
      if (grid[i] <= xi_e && xi_e <= grid[i + 1]) {
        before = scan.points[i].size();
        after = scan.points[i + 1].size();
      }
    ok = after == before + 2;
  }
  return make("criterion 2: two points emerge at xi_e = 0.42 +- 0.01 (eps=0.3)", ok,
              ok ? "xi_e=" + fmt(xi_e) : "events=" + std::to_string(scan.emergence.size()));
}

CheckResult criterion3_method_equivalence() {
  bool ok = true;
  double worst = 0.0;
  std::string fail;
  for (int i = 1; i <= 19; ++i) {
    const double xi = 0.05 * i;
    const auto agree = compare_methods({xi, 0.3}, solver_config(800));
    worst = std::max(worst, agree.max_abs_de);
    if (!agree.matched) {
      ok = false;
      fail = " first failure at xi=" + fmt(xi) + " (lagrange " +
             std::to_string(agree.lagrange_count) + ", atlas " +
             std::to_string(agree.atlas_count) + ")";
      break;
    }
  }
  return make("criterion 3: Lagrange multiset of (E,r) equals 3-chart atlas union", ok,
              "max|dE|=" + fmt(worst) + fail);
}

CheckResult criterion4_qpt() {
  bool ok = true;
  std::string detail;
  for (double xi : {0.10, 0.15, 0.19, 0.21, 0.25, 0.30}) {
    const auto pts = u3::find_stationary({xi, 0.0}, solver_config(400));
    if (pts.empty()) {
      ok = false;
      break;
    }
    const auto n = u3::occupations(pts.front().point);  // lowest energy first
    const double s_min = std::sqrt(std::max(2.0 - 2.0 * n[0], 0.0));
    detail += fmt(s_min) + " ";
    ok &= xi <= 0.19 ? s_min <= 1e-6 : s_min > 0.01;
  }
  return make("criterion 4: order parameter s_min jumps at the xi=1/5 QPT", ok,
              "s_min = " + detail);
}

CheckResult criterion5_figure3() {
  const u3::U3Params p{0.56, 0.3};
  const int N = 150;
  const double delta = std::sqrt(0.0075);

  const auto pts = u3::find_stationary(p, solver_config(1200));
  const auto features = distinct_features(pts);
  if (features.size() != 6)
    return make("criterion 5: figure-3 features and quantum/Weyl agreement", false,
                "expected 6 distinct stationary energies, found " +
                    std::to_string(features.size()));

  const auto grid = density::make_grid(-1.1, 0.9, 0.004);
  const auto basis = quantum::FockBasis::build(N);
  const auto spectrum = quantum::full_spectrum(p, basis);
  auto quantum_curve = density::smooth_density(spectrum, delta, grid);
  const auto weyl = density::weyl_density_chart(0, p, 10'000'000, 77, grid, delta);

  const auto reports = density::locate_singularities(quantum_curve, features, 2);
  bool ok = true;
  std::string orient;
  for (const auto& r : reports) {
    ok &= r.match;
    orient += (r.coefficient > 0 ? "+" : "-");
  }
  // the semiclassical curve carries the same singular features
  for (const auto& r : density::locate_singularities(weyl, features, 2)) ok &= r.match;

  // pointwise quantum/Weyl agreement away from the singular energies
  int eligible = 0, good = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double dist = 1e30;
    for (const auto& f : features) dist = std::min(dist, std::abs(grid[i] - f.energy));
    if (dist <= 4.0 * delta) continue;
    ++eligible;
    const double dq = quantum_curve.rho[i] / double(N) / double(N);
    const double tol = std::max(3.0 * weyl.sigma[i], 3.0 / N);
    if (std::abs(dq - weyl.rho[i]) <= tol) ++good;
  }
  ok &= eligible > 0 && good == eligible;
  return make("criterion 5: figure-3 feature orientations and quantum/Weyl agreement", ok,
              "orientations " + orient + ", pointwise " + std::to_string(good) + "/" +
                  std::to_string(eligible));
}

CheckResult criterion6_figure5() {
  const u3::U3Params p{0.6, 0.0};
  const int N = 150;
  const double delta = 0.01;
  const auto basis = quantum::FockBasis::build(N);

  // unblocked spectrum: the r=2 saddles at E = -0.2 and 0 step down, with
  // the band edges included as background features of the fit
  const auto spectrum = quantum::full_spectrum(p, basis);
  const std::vector<density::ExpectedFeature> features = {
      {-5.0 / 12.0, 0}, {-0.2, 2}, {0.0, 2}, {0.4, 4}};
  const auto grid = density::make_grid(-0.52, 0.5, 0.002);
  const auto curve = density::smooth_density(spectrum, delta, grid);
  const auto reports = density::locate_singularities(curve, features, 2);
  bool ok = reports[1].match && reports[2].match;
  std::string detail = std::string("down-jumps ") + (reports[1].match ? "ok" : "FAIL") + "/" +
                       (reports[2].match ? "ok" : "FAIL");

  // l blocks
  const auto blocks = quantum::l2_blocks(p, basis);
  auto block_of = [&](int l) -> const quantum::SpectrumBlock& {
    for (const auto& b : blocks)
      if (b.l == l) return b;
    throw std::runtime_error("missing l block");
  };

  auto block_curve = [&](const quantum::SpectrumBlock& b) {
    const double lo = b.energies.front(), hi = b.energies.back();
    return density::smooth_density(b.energies, delta,
                                   density::make_grid(lo - 0.08, hi + 0.08, 0.002));
  };

  const auto& b0 = block_of(0);
  const auto c0 = block_curve(b0);
  const auto rep0 = density::locate_singularities(c0, {{0.0, 1}}, 1);
  const double a_ref = density::log_feature_at(c0, 0.0);
  ok &= rep0[0].match && a_ref > 0.0;
  detail += ", l=0 log coef " + fmt(a_ref);

  for (int l : {30, 60, 90, 120}) {
    const auto& b = block_of(l);
    const auto c = block_curve(b);
    const double lo = b.energies.front() + 8.0 * delta;
    const double hi = b.energies.back() - 8.0 * delta;
    const double worst = density::max_log_feature(c, lo, hi);
    ok &= worst < 0.3 * a_ref;
  }

  const auto& btop = block_of(N);
  ok &= btop.dimension == 2;
  for (const double e : btop.energies) ok &= std::abs(e - (1.0 - 2.0 * p.xi)) <= 1e-9;
  detail += ", l=N block at " + fmt(btop.energies.front());
  return make("criterion 6: figure-5 block structure at (0.6, 0)", ok, detail);
}

CheckResult criterion7_u2_oracle() {
  const u3::U3Params p{0.0, 0.0};
  const double delta = 0.02;

  // Weyl curve against the smoothed closed form rho_cl(E) = E on [0,1]
  const auto grid = density::make_grid(0.0, 1.0, 0.005);
  const auto weyl = density::weyl_density_chart(0, p, 1'000'000, 99, grid, delta);
  auto smoothed_ramp = [&](double E) {
    const double s1 = density::smooth_step(1.0 - E, delta);
    const double s0 = density::smooth_step(-E, delta);
    const double g1 = std::exp(-0.5 * (1.0 - E) * (1.0 - E) / (delta * delta));
    const double g0 = std::exp(-0.5 * E * E / (delta * delta));
    const double norm = 1.0 / (std::sqrt(2.0 * M_PI) * delta);
    return E * (s1 - s0) - delta * delta * norm * (g1 - g0);
  };
  int within3 = 0, within5 = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double err = std::abs(weyl.rho[i] - smoothed_ramp(grid[i]));
    if (err <= 3.0 * weyl.sigma[i]) ++within3;
    if (err <= 5.0 * weyl.sigma[i]) ++within5;
  }
  const double frac3 = double(within3) / double(grid.size());
  bool ok = frac3 >= 0.97 && within5 == int(grid.size());

  // quantum u(2)-limit density per N^2
  const int N = 100;
  const auto basis = quantum::FockBasis::build(N);
  const auto spectrum = quantum::full_spectrum(p, basis);
  const auto qgrid = density::make_grid(0.1, 0.9, 0.01);
  const auto qc = density::smooth_density(spectrum, delta, qgrid);
  double max_err = 0.0;
  for (std::size_t i = 0; i < qgrid.size(); ++i)
    max_err = std::max(max_err, std::abs(qc.rho[i] / double(N) / double(N) - qgrid[i]));
  ok &= max_err <= 2.0 / N;
  return make("criterion 7: closed-form u(2)-limit density oracle", ok,
              "weyl 3-sigma fraction " + fmt(frac3) + ", quantum max err " + fmt(max_err));
}

CheckResult criterion8_spectral_range() {
  bool ok = true;
  std::string detail;
  for (int N : {10, 50, 150}) {
    const auto spectrum = quantum::full_spectrum({1.0, 0.0}, quantum::FockBasis::build(N));
    const double lo = spectrum.front();
    detail += "N=" + std::to_string(N) + ": " + fmt(lo) + "  ";
    ok &= std::abs(lo + 1.0) <= 1e-9;
  }
  return make("criterion 8: minimum eigenvalue -1 at xi=1 (N = 10, 50, 150)", ok, detail);
}

CheckResult check_fd_agreement() {
  Rng rng(4242);
  const u3::U3Params p{0.37, 0.21};
  const auto sys2 = u3::make_system(p, 0.3, +1);
  double worst = 0.0;
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec X = rng.gaussian_vector(6);
    // Hamiltonian and both constraints
    const std::vector<ScalarField> fields = {sys2.hamiltonian, sys2.constraints[0].field,
                                             sys2.constraints[1].field};
    for (const auto& fld : fields) {
      const Vec g = fld.gradient(X);
      worst = std::max(worst, rel_err((g - fd_gradient(fld.value, X, h)).norm(), g.norm()));
      const Mat H = fld.hessian(X);
      worst = std::max(worst, rel_err((H - fd_jacobian(fld.gradient, X, h)).norm(), H.norm()));
    }
    // Lagrange function over (X, lambda)
    const Vec lam = rng.gaussian_vector(2);
    Vec z(8);
    z << X, lam;
    auto lag = [&](const Vec& zz) {
      return lagrange_value(sys2, zz.head(6), zz.tail(2));
    };
    const Vec gL = lagrange_gradient(sys2, X, lam);
    worst = std::max(worst, rel_err((gL - fd_gradient(lag, z, h)).norm(), gL.norm()));
  }
  return make("finite-difference agreement of gradients/Hessians (100 points)", worst <= 1e-6,
              "worst rel err " + fmt(worst));
}

CheckResult check_completion_invariance() {
  const u3::U3Params p{0.56, 0.3};
  const auto sys = u3::make_system(p);
  const auto pts = u3::find_stationary(p, solver_config(400));
  Rng rng(1717);
  double worst = 0.0;
  for (const auto& pt : pts) {
    const Mat B1 = constraint_frame(sys, pt.point);
    // random completion: orthonormalise Gaussian vectors against the
    // constraint gradient
    const Vec g = sys.constraints[0].field.gradient(pt.point).normalized();
    Mat B2(6, 5);
    int have = 0;
    while (have < 5) {
      Vec v = rng.gaussian_vector(6);
      v -= g.dot(v) * g;
      for (int i = 0; i < have; ++i) v -= B2.col(i).dot(v) * B2.col(i);
      if (v.norm() < 1e-3) continue;
      B2.col(have++) = v.normalized();
    }
    const Mat M1 = restricted_hessian(sys, pt.point, pt.multipliers, B1);
    const Mat M2 = restricted_hessian(sys, pt.point, pt.multipliers, B2);
    Eigen::SelfAdjointEigenSolver<Mat> e1(M1, Eigen::EigenvaluesOnly), e2(M2, Eigen::EigenvaluesOnly);
    const double scale = std::max(e1.eigenvalues().cwiseAbs().maxCoeff(), 1e-12);
    worst = std::max(worst, (e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff() / scale);
  }
  return make("restricted-Hessian spectrum invariant under completion choice", worst <= 1e-10,
              "worst rel deviation " + fmt(worst));
}

CheckResult check_structural_zeros() {
  bool ok = true;
  std::string detail;
  for (auto [xi, eps] : {std::pair{0.56, 0.3}, std::pair{0.8, 0.3}}) {
    const auto pts = u3::find_stationary({xi, eps}, solver_config(800));
    for (const auto& p : pts) {
      if (p.degenerate) continue;
      ok &= p.zero_count == 1;
    }
    detail += std::to_string(pts.size()) + " pts at xi=" + fmt(xi) + "  ";
  }
  return make("nondegenerate points carry exactly c zero eigenvalues", ok, detail);
}

CheckResult check_morse_saturated() {
  bool ok = true;
  std::string detail;
  for (auto [xi, eps] : {std::pair{0.56, 0.3}, std::pair{0.8, 0.3}}) {
    const auto pts1 = u3::find_stationary({xi, eps}, solver_config(1200));
    const auto pts2 = u3::find_stationary({xi, eps}, solver_config(2400, 555));
    ok &= er_multiset(pts1).size() == er_multiset(pts2).size();
    const auto m1 = morse_sum(pts1), m2 = morse_sum(pts2);
    ok &= m1.has_value() && m2.has_value() && *m1 == 3 && *m2 == 3;
    detail += "xi=" + fmt(xi) + ": n=" + std::to_string(pts1.size()) +
              " sum=" + (m1 ? std::to_string(*m1) : "deg") + "  ";
  }
  return make("Morse sum equals 3 under saturated multistart", ok, detail);
}

CheckResult check_index_classify() {
  bool ok = true;
  // index counting on explicit spectra
  Mat M = Vec::Zero(3).asDiagonal();
  auto r = stationary_index(M, 1);
  ok &= r.index == 0 && r.zero_count == 3 && r.degenerate;
  M = (Eigen::VectorXd(5) << -1, -1, -1, 0, 2).finished().asDiagonal();
  r = stationary_index(M, 1);
  ok &= r.index == 3 && r.zero_count == 1 && !r.degenerate;

  // jump/log table over the whole domain
  for (int f = 1; f <= 3; ++f)
    for (int rr = 0; rr <= 2 * f; ++rr) {
      const auto t = classify_singularity(rr, f);
      ok &= t.derivative_order == f - 1;
      ok &= (t.kind == SingularityKind::Jump) == (rr % 2 == 0);
      const bool up = t.orientation == Orientation::Up;
      ok &= up == (rr % 4 <= 1);
    }
  const auto t02 = classify_singularity(0, 2);
  const auto t22 = classify_singularity(2, 2);
  const auto t11 = classify_singularity(1, 1);
  ok &= t02.orientation == Orientation::Up && t22.orientation == Orientation::Down &&
        t11.kind == SingularityKind::Log && t11.orientation == Orientation::Up &&
        t11.derivative_order == 0;
  return make("index counting and jump/log classification table", ok, "");
}

CheckResult check_hp_identities() {
  Rng rng(99);
  double worst_pull = 0.0, worst_canon = 0.0, worst_round = 0.0;
  const u3::U3Params p{0.56, 0.3};
  const double W = std::sqrt(2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Vec X = rng.on_sphere(6, W);
    const auto n = u3::occupations(X);
    for (int j = 0; j < 3; ++j) {
      if (2.0 * n[j] < 0.05 * 0.05) continue;
      const auto x = hp::hp_forward(j, X);
      worst_pull = std::max(worst_pull,
                            std::abs(hp::reduced_h(j, p, x.coords) - u3::classical_h(p, X)));
      // scalar and symplectic products preserved
      const auto ks = [&] {
        std::vector<int> v;
        for (int k = 0; k < 3; ++k)
          if (k != j) v.push_back(k);
        return v;
      }();
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const Eigen::Vector2d Xa(X[ks[a]], X[3 + ks[a]]), Xb(X[ks[b]], X[3 + ks[b]]);
          const Eigen::Vector2d xa(x.coords[a], x.coords[2 + a]), xb(x.coords[b], x.coords[2 + b]);
          worst_canon = std::max(worst_canon, std::abs(Xa.dot(Xb) - xa.dot(xb)));
          worst_canon = std::max(
              worst_canon, std::abs((Xa[0] * Xb[1] - Xa[1] * Xb[0]) - (xa[0] * xb[1] - xa[1] * xb[0])));
        }
      // inverse round-trip at a random phase
      const double phase = 2.0 * M_PI * rng.uniform01();
      const Vec X2 = hp::hp_inverse(x, phase);
      worst_round = std::max(worst_round, std::abs(u3::phi_n(X2)));
      const auto x2 = hp::hp_forward(j, X2);
      worst_round =
          std::max(worst_round, (x2.coords - x.coords).cwiseAbs().maxCoeff());
      // transitions: round-trip through another chart
      for (int jp = 0; jp < 3; ++jp) {
        if (jp == j || 2.0 * n[jp] < 0.05 * 0.05) continue;
        const auto y = hp::hp_transition(jp, x);
        const auto back = hp::hp_transition(j, y);
        worst_round = std::max(worst_round, (back.coords - x.coords).cwiseAbs().maxCoeff());
      }
    }
  }
  const bool ok = worst_pull <= 1e-10 && worst_canon <= 1e-10 && worst_round <= 1e-10;
  return make("HP pullback identity, canonicality witnesses, round-trips", ok,
              "pullback " + fmt(worst_pull) + ", witnesses " + fmt(worst_canon) + ", trips " +
                  fmt(worst_round));
}

CheckResult criterion9_properties() {
  const CheckResult parts[] = {check_fd_agreement(), check_hp_identities(),
                               check_completion_invariance(), check_structural_zeros(),
                               check_morse_saturated()};
  bool ok = true;
  std::string detail;
  for (const auto& c : parts) {
    ok &= c.pass;
    if (!c.pass) detail += "[" + c.name + "] ";
  }
  return make("criterion 9: property suites", ok, ok ? "all property checks pass" : detail);
}

// ---------------------------------------------------------------------------
// module-suite checks beyond the acceptance list

CheckResult check_density_basics() {
  // kernel moments by quadrature
  const double delta = 0.07;
  double m0 = 0, m1 = 0, m2 = 0;
  const double h = delta / 200.0;
  for (double y = -10 * delta; y <= 10 * delta; y += h) {
    const double g = std::exp(-0.5 * y * y / (delta * delta)) / (std::sqrt(2 * M_PI) * delta);
    m0 += g * h;
    m1 += y * g * h;
    m2 += y * y * g * h;
  }
  bool ok = std::abs(m0 - 1.0) <= 1e-6 && std::abs(m1) <= 1e-9 &&
            std::abs(m2 - delta * delta) <= 1e-6;

  // linearity in the spectrum
  const auto grid = density::make_grid(-1.0, 1.0, 0.01);
  const std::vector<double> s1{-0.4, 0.1}, s2{0.3};
  std::vector<double> s12 = s1;
  s12.insert(s12.end(), s2.begin(), s2.end());
  const auto c1 = density::smooth_density(s1, delta, grid);
  const auto c2 = density::smooth_density(s2, delta, grid);
  const auto c12 = density::smooth_density(s12, delta, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    ok &= std::abs(c12.rho[i] - c1.rho[i] - c2.rho[i]) <= 1e-12;
  return make("smoothing kernel moments and spectrum linearity", ok, "");
}

CheckResult check_sphere_chart_equality() {
  const u3::U3Params p{0.56, 0.3};
  const double delta = std::sqrt(0.0075);
  const auto grid = density::make_grid(-0.8, 0.6, 0.01);
  const auto a = density::weyl_density_chart(0, p, 1'000'000, 7, grid, delta);
  const auto b = density::weyl_density_sphere(p, 1'000'000, 8, grid, delta);
  int good = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = std::sqrt(a.sigma[i] * a.sigma[i] + b.sigma[i] * b.sigma[i]);
    if (std::abs(a.rho[i] - b.rho[i]) <= 3.0 * s) ++good;
  }
  const double frac = double(good) / double(grid.size());
  double ia = 0.0, ib = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    ia += 0.5 * (a.rho[i] + a.rho[i + 1]) * (grid[i + 1] - grid[i]);
    ib += 0.5 * (b.rho[i] + b.rho[i + 1]) * (grid[i + 1] - grid[i]);
  }
  const bool ok = frac >= 0.97 && std::abs(ia - 0.5) <= 0.01 && std::abs(ib - 0.5) <= 0.01;
  return make("sphere- and chart-route Weyl densities agree (3 sigma)", ok,
              "fraction " + fmt(frac) + ", integrals " + fmt(ia) + "/" + fmt(ib));
}

CheckResult check_mc_convergence() {
  const u3::U3Params p{0.56, 0.3};
  const double delta = std::sqrt(0.0075);
  const auto grid = density::make_grid(-0.8, 0.6, 0.01);
  const auto a = density::weyl_density_chart(0, p, 500'000, 21, grid, delta);
  const auto b = density::weyl_density_chart(0, p, 1'000'000, 21, grid, delta);
  // the doubled run extends the same streams, so the pointwise difference
  // has exact standard deviation sigma/sqrt(2); grid points within a kernel
  // width are correlated, so the stable statistics are the rms and the
  // largest normalised deviation rather than a per-point band count
  double zz = 0.0, zmax = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double z = (a.rho[i] - b.rho[i]) / a.sigma[i];
    zz += z * z;
    zmax = std::max(zmax, std::abs(z));
  }
  const double zrms = std::sqrt(zz / double(grid.size()));
  return make("Weyl curve converges when doubling the sample count",
              zrms <= 1.25 && zmax <= 4.0, "z rms " + fmt(zrms) + ", max " + fmt(zmax));
}

CheckResult check_atlas_equivalence_quick() {
  bool ok = true;
  double worst = 0.0;
  for (double xi : {0.3, 0.56}) {
    const auto agree = compare_methods({xi, 0.3}, solver_config(500));
    ok &= agree.matched;
    worst = std::max(worst, agree.max_abs_de);
  }
  return make("Lagrange/atlas equivalence at xi = 0.3, 0.56", ok, "max|dE|=" + fmt(worst));
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& suite) {
  std::vector<CheckResult> out;
  if (suite == "core") {
    out.push_back(check_fd_agreement());
    out.push_back(check_index_classify());
    out.push_back(check_completion_invariance());
    out.push_back(check_structural_zeros());
    out.push_back(check_morse_saturated());
  } else if (suite == "atlas") {
    out.push_back(check_hp_identities());
    out.push_back(check_atlas_equivalence_quick());
  } else if (suite == "density") {
    out.push_back(check_density_basics());
    out.push_back(check_sphere_chart_equality());
    out.push_back(check_mc_convergence());
  } else if (suite == "all") {
    out.push_back(criterion1_chart1_center());
    out.push_back(criterion2_emergence());
    out.push_back(criterion3_method_equivalence());
    out.push_back(criterion4_qpt());
    out.push_back(criterion5_figure3());
    out.push_back(criterion6_figure5());
    out.push_back(criterion7_u2_oracle());
    out.push_back(criterion8_spectral_range());
    out.push_back(criterion9_properties());
  } else {
    throw std::invalid_argument("unknown suite: " + suite);
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace esqpt::verify
