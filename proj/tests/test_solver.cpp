#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "esqpt/u3_solve.hpp"

using namespace esqpt;

namespace {

SolverConfig quick(int starts = 400, std::uint64_t seed = 42) {
  SolverConfig cfg;
  cfg.n_starts = starts;
  cfg.seed = seed;
  return cfg;
}

const StationaryPoint* find_energy(const std::vector<StationaryPoint>& pts, double E,
                                   double tol = 1e-6) {
  for (const auto& p : pts)
    if (std::abs(p.energy - E) <= tol) return &p;
  return nullptr;
}

}  // namespace

TEST_CASE("u(2) limit: ground state and degenerate maximum") {
  const auto pts = u3::find_stationary({0.0, 0.0}, quick());
  REQUIRE_FALSE(pts.empty());

  const auto* mn = find_energy(pts, 0.0, 1e-8);
  REQUIRE(mn != nullptr);
  CHECK(mn->index == 0);
  CHECK(u3::occupations(mn->point)[0] == doctest::Approx(1.0).epsilon(1e-8));

  const auto* mx = find_energy(pts, 1.0, 1e-8);
  REQUIRE(mx != nullptr);
  CHECK(mx->degenerate);
}

TEST_CASE("ESQPT point at E = 1 - xi with index 3") {
  const auto pts = u3::find_stationary({0.5, 0.3}, quick());
  const auto* p = find_energy(pts, 0.5, 1e-9);
  REQUIRE(p != nullptr);
  CHECK(p->index == 3);
  CHECK_FALSE(p->degenerate);
}

TEST_CASE("full stationary structure at (0.56, 0.3)") {
  // seven points; the middle r=2 level is a +-l symmetry pair
  const auto pts = u3::find_stationary({0.56, 0.3}, quick(800));
  REQUIRE(pts.size() == 7);
  const double expected_E[] = {-0.657020, -0.069720, -0.022397, -0.022397,
                               0.050371,  0.440000,  0.473512};
  const int expected_r[] = {0, 1, 2, 2, 2, 3, 4};
  for (int i = 0; i < 7; ++i) {
    CHECK(pts[i].energy == doctest::Approx(expected_E[i]).epsilon(5e-5));
    CHECK(pts[i].index == expected_r[i]);
    CHECK(pts[i].zero_count == 1);
    CHECK_FALSE(pts[i].degenerate);
  }
  CHECK(std::abs(u3::angular_momentum(pts[2].point) + u3::angular_momentum(pts[3].point)) <= 1e-8);
  CHECK(morse_sum(pts).value() == 3);

  SUBCASE("points re-verify against the Lagrange gradient") {
    const auto sys = u3::make_system({0.56, 0.3});
    for (const auto& p : pts) {
      CHECK(lagrange_gradient(sys, p.point, p.multipliers).norm() <= 1e-10);
      CHECK(std::abs(u3::phi_n(p.point)) <= 1e-10);
    }
  }
  SUBCASE("doubling the start count is saturated") {
    const auto pts2 = u3::find_stationary({0.56, 0.3}, quick(1600, 4242));
    REQUIRE(pts2.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(pts2[i].energy == doctest::Approx(pts[i].energy).epsilon(1e-8));
      CHECK(pts2[i].index == pts[i].index);
    }
  }
}

TEST_CASE("solver output is invariant under U(1) re-phasing of the starts") {
  const u3::U3Params p{0.45, 0.3};
  const auto base = u3::find_stationary(p, quick(300, 7));

  const double th = 0.9;
  StartSampler rotated = [th](Rng& rng) {
    Vec X = rng.on_sphere(6, std::sqrt(2.0));
    Vec Y(6);
    for (int k = 0; k < 3; ++k) {
      Y[k] = std::cos(th) * X[k] - std::sin(th) * X[3 + k];
      Y[3 + k] = std::sin(th) * X[k] + std::cos(th) * X[3 + k];
    }
    return Y;
  };
  auto cfg = quick(300, 7);
  const auto alt = solve_stationary(u3::make_system(p), cfg, rotated,
                                    u3::dedupe_policy(u3::SystemKind::SingleConstraint));
  REQUIRE(alt.size() == base.size());
  for (std::size_t i = 0; i < base.size(); ++i)
    CHECK((alt[i].signature - base[i].signature).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("parameter scan") {
  SUBCASE("constant family produces no emergence events") {
    SystemFamily fam = u3::xi_family(0.3);
    fam.make = [](double) { return u3::make_system({0.5, 0.3}); };
    const auto scan = scan_parameter(fam, {0.1, 0.2, 0.3}, quick(200));
    CHECK(scan.emergence.empty());
    CHECK(scan.points[0].size() == scan.points[2].size());
    REQUIRE(scan.morse_sums.size() == 3);
    for (const auto& m : scan.morse_sums) CHECK(m.value() == 3);
  }
  SUBCASE("the pair emerging near xi = 0.42 carries indices 1 and 2") {
    const auto before = u3::find_stationary({0.40, 0.3}, quick(500));
    const auto after = u3::find_stationary({0.44, 0.3}, quick(500));
    REQUIRE(after.size() == before.size() + 2);
    int count_before[5] = {0}, count_after[5] = {0};
    for (const auto& p : before) ++count_before[p.index];
    for (const auto& p : after) ++count_after[p.index];
    CHECK(count_after[1] == count_before[1] + 1);
    CHECK(count_after[2] == count_before[2] + 1);
    CHECK(count_after[0] == count_before[0]);
    CHECK(count_after[3] == count_before[3]);
    CHECK(count_after[4] == count_before[4]);
  }
  SUBCASE("QPT order parameter at eps = 0") {
    for (double xi : {0.15, 0.25}) {
      const auto pts = u3::find_stationary({xi, 0.0}, quick(300));
      REQUIRE_FALSE(pts.empty());
      const double n0 = u3::occupations(pts.front().point)[0];
      const double s_min = std::sqrt(std::max(2.0 - 2.0 * n0, 0.0));
      if (xi < 0.2) {
        CHECK(s_min <= 1e-7);
      } else {
        // closed form sqrt((5 xi - 1) / (4 xi))
        CHECK(s_min == doctest::Approx(std::sqrt((5 * xi - 1) / (4 * xi))).epsilon(1e-6));
        CHECK(pts.front().energy ==
              doctest::Approx(-std::pow(5 * xi - 1, 2) / (16 * xi)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("double-constraint system at (0.6, 0)") {
  SUBCASE("l = 0.4 leaves only the global minimum and maximum") {
    const auto pts = u3::find_stationary({0.6, 0.0}, 0.4, quick(400));
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].energy == doctest::Approx(-0.379080).epsilon(2e-5));
    CHECK(pts[0].index == 0);
    CHECK(pts[1].energy == doctest::Approx(0.304).epsilon(2e-5));  // (1-xi) - xi l^2
    CHECK(pts[1].index == 2);
    CHECK_FALSE(pts[0].degenerate);
    CHECK_FALSE(pts[1].degenerate);
    CHECK(pts[0].zero_count == 2);
  }
  SUBCASE("l = 0 drops the ill-posed pole points but keeps min and max") {
    SolveStats stats;
    const auto pts = u3::find_stationary({0.6, 0.0}, 0.0, quick(400), &stats);
    REQUIRE(pts.size() >= 2);
    CHECK(pts.front().energy == doctest::Approx(-5.0 / 12.0).epsilon(1e-6));
    CHECK(pts.back().energy == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(find_energy(pts, 0.0, 1e-6) == nullptr);
  }
}
