#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "esqpt/density.hpp"

using namespace esqpt;
using density::DensityCurve;

TEST_CASE("single-level curve is one Gaussian") {
  const double delta = 0.1;
  const auto grid = density::make_grid(-1.0, 1.0, 0.001);
  const auto c = density::smooth_density({0.0}, delta, grid);
  const double peak = 1.0 / std::sqrt(2.0 * M_PI * 0.01);
  CHECK(c.rho[1000] == doctest::Approx(peak).epsilon(1e-12));
  CHECK(std::abs(c.drho[1000]) <= 1e-9);
  CHECK(c.total_weight == 1.0);

  SUBCASE("trapezoid integral recovers the weight") {
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
      integral += 0.5 * (c.rho[i] + c.rho[i + 1]) * 0.001;
    CHECK(std::abs(integral - 1.0) <= 0.005);
  }
}

TEST_CASE("smoothing is linear in the spectrum") {
  const auto grid = density::make_grid(-1.0, 1.0, 0.01);
  const auto a = density::smooth_density({-0.3, 0.2}, 0.05, grid);
  const auto b = density::smooth_density({0.5}, 0.05, grid);
  const auto ab = density::smooth_density({-0.3, 0.2, 0.5}, 0.05, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(ab.rho[i] - a.rho[i] - b.rho[i]) <= 1e-12);
}

TEST_CASE("empty spectrum is rejected") {
  CHECK_THROWS_AS(density::smooth_density({}, 0.1, density::make_grid(0, 1, 0.1)),
                  std::invalid_argument);
}

TEST_CASE("Weyl density in the u(2) limit equals the linear ramp") {
  const double delta = 0.02;
  const auto grid = density::make_grid(0.0, 1.0, 0.01);
  const auto w = density::weyl_density_chart(0, {0.0, 0.0}, 400000, 3, grid, delta);
  CHECK(w.total_weight == doctest::Approx(0.5));

  auto ramp = [&](double E) {
    const double g1 = std::exp(-0.5 * (1 - E) * (1 - E) / (delta * delta));
    const double g0 = std::exp(-0.5 * E * E / (delta * delta));
    const double norm = 1.0 / (std::sqrt(2 * M_PI) * delta);
    return E * (density::smooth_step(1 - E, delta) - density::smooth_step(-E, delta)) -
           delta * delta * norm * (g1 - g0);
  };
  int good = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(w.rho[i] - ramp(grid[i])) <= 3.0 * w.sigma[i]) ++good;
  CHECK(double(good) / double(grid.size()) >= 0.97);

  SUBCASE("total integral is 1/2") {
    const auto wide = density::make_grid(-0.3, 1.3, 0.005);
    const auto ww = density::weyl_density_chart(0, {0.0, 0.0}, 400000, 3, wide, delta);
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < wide.size(); ++i)
      integral += 0.5 * (ww.rho[i] + ww.rho[i + 1]) * 0.005;
    CHECK(integral == doctest::Approx(0.5).epsilon(0.01));
  }
}

TEST_CASE("sphere-route Weyl density reproduces the u(2)-limit ramp") {
  const double delta = 0.02;
  const auto grid = density::make_grid(0.05, 0.95, 0.01);
  const auto w = density::weyl_density_sphere({0.0, 0.0}, 300000, 17, grid, delta);
  int good = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(w.rho[i] - grid[i]) <= 3.0 * w.sigma[i] + 1e-4) ++good;
  CHECK(double(good) / double(grid.size()) >= 0.97);
}

TEST_CASE("sphere sampling agrees with the chart route") {
  const double delta = 0.05;
  const auto grid = density::make_grid(-0.3, 1.0, 0.01);
  const auto a = density::weyl_density_chart(0, {0.2, 0.1}, 300000, 5, grid, delta);
  const auto b = density::weyl_density_sphere({0.2, 0.1}, 300000, 6, grid, delta);
  int good = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = std::hypot(a.sigma[i], b.sigma[i]);
    if (std::abs(a.rho[i] - b.rho[i]) <= 3.0 * s) ++good;
  }
  CHECK(double(good) / double(grid.size()) >= 0.95);
}

TEST_CASE("Monte Carlo curves are reproducible and worker-independent") {
  const auto grid = density::make_grid(-0.2, 1.0, 0.02);
  const auto a = density::weyl_density_chart(0, {0.3, 0.2}, 100000, 9, grid, 0.05);
  const auto b = density::weyl_density_chart(0, {0.3, 0.2}, 100000, 9, grid, 0.05);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a.rho[i] == b.rho[i]);
    CHECK(a.sigma[i] == b.sigma[i]);
  }
  SUBCASE("explicit worker counts give identical bits") {
    setenv("ESQPT_THREADS", "3", 1);
    const auto c = density::weyl_density_chart(0, {0.3, 0.2}, 100000, 9, grid, 0.05);
    setenv("ESQPT_THREADS", "1", 1);
    const auto d = density::weyl_density_chart(0, {0.3, 0.2}, 100000, 9, grid, 0.05);
    unsetenv("ESQPT_THREADS");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(c.rho[i] == d.rho[i]);
      CHECK(c.rho[i] == a.rho[i]);
    }
  }
}

TEST_CASE("synthetic upward jump is detected") {
  // levels at quantiles of a linear-ramp density: rho ~ E on [0, 1], so
  // drho/dE steps up at E = 0 like an index-0 point with f = 2
  std::vector<double> levels;
  const int M = 4000;
  for (int k = 0; k < M; ++k) levels.push_back(std::sqrt((k + 0.5) / M));
  const double delta = 0.03;
  const auto grid = density::make_grid(-0.4, 0.8, 0.002);
  const auto c = density::smooth_density(levels, delta, grid);
  const auto reports = density::locate_singularities(c, {{0.0, 0}}, 2);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].predicted.orientation == Orientation::Up);
  CHECK(reports[0].match);
  CHECK(reports[0].coefficient > 0.0);
}

TEST_CASE("synthetic f = 1 log peak is detected and absence is certified") {
  // quantiles of rho(E) = -ln|E| / 2 on [-1, 1]: F(E) = (E - E ln|E| + 1) / 2
  std::vector<double> levels;
  const int M = 900;
  for (int k = 0; k < M; ++k) {
    const double target = (k + 0.5) / M;
    double lo = -1.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
      const double m = 0.5 * (lo + hi);
      const double F = 0.5 * (m - m * std::log(std::abs(m) + 1e-300) + 1.0);
      (F < target ? lo : hi) = m;
    }
    levels.push_back(0.5 * (lo + hi));
  }
  const double delta = 0.02;
  const auto grid = density::make_grid(-1.1, 1.1, 0.002);
  const auto c = density::smooth_density(levels, delta, grid);
  const auto reports = density::locate_singularities(c, {{0.0, 1}}, 1);
  CHECK(reports[0].match);
  const double a0 = density::log_feature_at(c, 0.0);
  CHECK(a0 > 0.0);
  // away from the peak no comparable log feature exists
  CHECK(density::max_log_feature(c, 0.35, 0.8) < 0.3 * a0);
}
