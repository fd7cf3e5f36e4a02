#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "esqpt/hp_atlas.hpp"
#include "esqpt/rng.hpp"

using namespace esqpt;

namespace {

Vec point6(std::initializer_list<double> v) {
  Vec X(6);
  int i = 0;
  for (double x : v) X[i++] = x;
  return X;
}

Vec fd_gradient4(const std::function<double(const Vec&)>& f, const Vec& u, double h = 1e-6) {
  Vec g(4);
  for (int i = 0; i < 4; ++i) {
    Vec up = u, um = u;
    up[i] += h;
    um[i] -= h;
    g[i] = (f(up) - f(um)) / (2 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("forward chart map") {
  const double root2 = std::sqrt(2.0);
  const double rooth = std::sqrt(0.5);

  SUBCASE("scalar point maps to the chart-0 origin") {
    const auto x = hp::hp_forward(0, point6({root2, 0, 0, 0, 0, 0}));
    CHECK(x.coords.norm() <= 1e-14);
  }
  SUBCASE("scalar point is singular in chart 1") {
    CHECK_THROWS_AS(hp::hp_forward(1, point6({root2, 0, 0, 0, 0, 0})), BoundarySingularity);
  }
  SUBCASE("worked example") {
    const auto x = hp::hp_forward(0, point6({1, rooth, rooth, 0, 0, 0}));
    CHECK(x.coords[0] == doctest::Approx(rooth).epsilon(1e-12));
    CHECK(x.coords[1] == doctest::Approx(rooth).epsilon(1e-12));
    CHECK(std::abs(x.coords[2]) <= 1e-14);
    CHECK(std::abs(x.coords[3]) <= 1e-14);
    CHECK(x.s2() == doctest::Approx(2.0 - 1.0).epsilon(1e-12));  // 2 - |X_0|^2
  }
  SUBCASE("off-sphere points are rejected") {
    CHECK_THROWS_AS(hp::hp_forward(0, point6({1, 0, 0, 0, 0, 0})), std::invalid_argument);
  }
}

TEST_CASE("inverse chart map") {
  const double root2 = std::sqrt(2.0);
  const double rooth = std::sqrt(0.5);

  SUBCASE("chart-0 origin reconstructs the scalar point") {
    const Vec X = hp::hp_inverse({0, Vec::Zero(4)}, 0.0);
    CHECK(X[0] == doctest::Approx(root2));
    CHECK(X.tail(5).norm() <= 1e-14);
  }
  SUBCASE("round trip of the worked example") {
    hp::ChartPoint x{0, (Eigen::VectorXd(4) << rooth, rooth, 0, 0).finished()};
    const Vec X = hp::hp_inverse(x, 0.0);
    CHECK(X[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(X[1] == doctest::Approx(rooth).epsilon(1e-12));
    CHECK(X[2] == doctest::Approx(rooth).epsilon(1e-12));
    CHECK(X.tail(3).norm() <= 1e-14);
  }
  SUBCASE("different phases stay on one U(1) orbit") {
    Rng rng(31);
    for (int t = 0; t < 20; ++t) {
      hp::ChartPoint x{1, rng.in_ball(4, 1.2)};
      const Vec A = hp::hp_inverse(x, 0.4);
      const Vec B = hp::hp_inverse(x, -1.1);
      CHECK(std::abs(u3::phi_n(A)) <= 1e-12);
      CHECK(std::abs(u3::phi_n(B)) <= 1e-12);
      const auto na = u3::occupations(A), nb = u3::occupations(B);
      for (int k = 0; k < 3; ++k) CHECK(na[k] == doctest::Approx(nb[k]).epsilon(1e-12));
      // pairwise bilinears are orbit invariants
      for (int k = 0; k < 3; ++k)
        for (int l = k + 1; l < 3; ++l) {
          const double ba = A[k] * A[3 + l] - A[3 + k] * A[l];
          const double bb = B[k] * B[3 + l] - B[3 + k] * B[l];
          CHECK(ba == doctest::Approx(bb).epsilon(1e-10));
        }
      // and hp_forward undoes hp_inverse at any phase
      const auto xa = hp::hp_forward(1, A);
      CHECK((xa.coords - x.coords).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  SUBCASE("points outside the ball are rejected") {
    CHECK_THROWS_AS(hp::hp_inverse({0, (Eigen::VectorXd(4) << 1.2, 1, 0, 0).finished()}, 0.0),
                    std::domain_error);
  }
}

TEST_CASE("transition maps") {
  const double rooth = std::sqrt(0.5);
  SUBCASE("worked example into chart 1") {
    hp::ChartPoint x{0, (Eigen::VectorXd(4) << rooth, rooth, 0, 0).finished()};
    const auto y = hp::hp_transition(1, x);
    // chart-1 coordinates are (q0, q2, p0, p2)
    CHECK(y.coords[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(y.coords[1] == doctest::Approx(rooth).epsilon(1e-12));
    CHECK(std::abs(y.coords[2]) <= 1e-14);
    CHECK(std::abs(y.coords[3]) <= 1e-14);
  }
  SUBCASE("identity transition") {
    hp::ChartPoint x{2, (Eigen::VectorXd(4) << 0.3, -0.2, 0.1, 0.4).finished()};
    const auto y = hp::hp_transition(2, x);
    CHECK((y.coords - x.coords).norm() == 0.0);
  }
  SUBCASE("transition equals forward of inverse, and round trips close") {
    Rng rng(13);
    int tested = 0;
    while (tested < 50) {
      const Vec X = rng.on_sphere(6, std::sqrt(2.0));
      const auto n = u3::occupations(X);
      if (std::sqrt(2 * n[0]) < 0.1 || std::sqrt(2 * n[1]) < 0.1 || std::sqrt(2 * n[2]) < 0.1)
        continue;
      ++tested;
      for (int j = 0; j < 3; ++j)
        for (int jp = 0; jp < 3; ++jp) {
          if (j == jp) continue;
          const auto x = hp::hp_forward(j, X);
          const auto direct = hp::hp_transition(jp, x);
          const auto via = hp::hp_forward(jp, hp::hp_inverse(x, 0.8271));
          CHECK((direct.coords - via.coords).cwiseAbs().maxCoeff() <= 1e-10);
          const auto back = hp::hp_transition(j, direct);
          CHECK((back.coords - x.coords).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }
  }
  SUBCASE("vanishing target excitation is singular") {
    hp::ChartPoint x{0, (Eigen::VectorXd(4) << 0, 0.5, 0, 0).finished()};  // boson 1 empty
    CHECK_THROWS_AS(hp::hp_transition(1, x), BoundarySingularity);
  }
}

TEST_CASE("reduced Hamiltonians") {
  const u3::U3Params p{0.56, 0.3};

  SUBCASE("chart centres") {
    for (double xi : {0.1, 0.5, 0.9}) {
      CHECK(hp::reduced_h(1, {xi, 0.3}, Vec::Zero(4)) == doctest::Approx(1.0 - xi));
      CHECK(hp::reduced_h(0, {xi, 0.3}, Vec::Zero(4)) == doctest::Approx(0.0).epsilon(1e-15));
    }
  }
  SUBCASE("pullback identity on random sphere points") {
    Rng rng(7);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const Vec X = rng.on_sphere(6, std::sqrt(2.0));
      const auto n = u3::occupations(X);
      for (int j = 0; j < 3; ++j) {
        if (2 * n[j] < 1e-4) continue;
        const auto x = hp::hp_forward(j, X);
        worst = std::max(worst, std::abs(hp::reduced_h(j, p, x.coords) - u3::classical_h(p, X)));
      }
    }
    CHECK(worst <= 1e-10);
  }
  SUBCASE("gradient and Hessian of the pullback match finite differences") {
    Rng rng(77);
    for (int j = 0; j < 3; ++j) {
      const Vec u = rng.in_ball(4, 1.1);
      const Vec g = hp::reduced_h_gradient(j, p, u);
      const Vec gfd = fd_gradient4([&](const Vec& v) { return hp::reduced_h(j, p, v); }, u);
      CHECK((g - gfd).norm() / std::max(g.norm(), 1e-8) <= 1e-6);
      const Mat H = hp::reduced_h_hessian(j, p, u);
      for (int i = 0; i < 4; ++i) {
        Vec up = u, um = u;
        up[i] += 1e-6;
        um[i] -= 1e-6;
        const Vec col = (hp::reduced_h_gradient(j, p, up) - hp::reduced_h_gradient(j, p, um)) / 2e-6;
        CHECK((H.col(i) - col).norm() / std::max(H.norm(), 1e-8) <= 1e-6);
      }
    }
  }
}

TEST_CASE("in-chart stationary search") {
  SolverConfig cfg;
  cfg.n_starts = 300;
  cfg.seed = 5;

  SUBCASE("chart-1 centre at (0.5, 0.3): E = 0.5, r = 3") {
    const auto pts = hp::chart_stationary(1, {0.5, 0.3}, cfg);
    bool found = false;
    for (const auto& q : pts)
      if (q.x.coords.norm() <= 1e-8) {
        found = true;
        CHECK(q.energy == doctest::Approx(0.5));
        CHECK(q.index == 3);
      }
    CHECK(found);
  }
  SUBCASE("chart-1 centre at (0.01, 0.3) flips to r = 2") {
    const auto pts = hp::chart_stationary(1, {0.01, 0.3}, cfg);
    bool found = false;
    for (const auto& q : pts)
      if (q.x.coords.norm() <= 1e-8) {
        found = true;
        CHECK(q.index == 2);
      }
    CHECK(found);
  }
  SUBCASE("chart-0 origin at the u(2) limit is the minimum") {
    const auto pts = hp::chart_stationary(0, {0.0, 0.0}, cfg);
    REQUIRE_FALSE(pts.empty());
    CHECK(pts.front().energy == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(pts.front().index == 0);
  }
}

TEST_CASE("eta coordinates") {
  const double rooth = std::sqrt(0.5);
  const Vec e1 = hp::eta_coords(point6({std::sqrt(2.0), 0, 0, 0, 0, 0}));
  CHECK(e1[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::abs(e1[1]) + std::abs(e1[2]) <= 1e-14);

  const Vec X = point6({1, rooth, rooth, 0, 0, 0});
  const Vec e2 = hp::eta_coords(X);
  CHECK(e2[0] == doctest::Approx(1.0));
  CHECK(e2[1] == doctest::Approx(rooth));
  CHECK(e2[2] == doctest::Approx(rooth));

  SUBCASE("chart and full coordinates agree on the shared components") {
    const auto x = hp::hp_forward(0, X);
    const Vec ec = hp::eta_coords(x);
    CHECK(ec[1] == doctest::Approx(e2[1]).epsilon(1e-12));
    CHECK(ec[2] == doctest::Approx(e2[2]).epsilon(1e-12));
  }
  SUBCASE("eta vectors of sphere points have squared norm 2") {
    Rng rng(41);
    for (int t = 0; t < 100; ++t) {
      const Vec eta = hp::eta_coords(rng.on_sphere(6, std::sqrt(2.0)));
      CHECK(eta.squaredNorm() == doctest::Approx(2.0).epsilon(1e-12));
    }
  }
}
