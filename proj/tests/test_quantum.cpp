#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "esqpt/quantum.hpp"

using namespace esqpt;
using quantum::FockBasis;

TEST_CASE("Fock basis") {
  CHECK(FockBasis::build(1).size() == 3);
  CHECK(FockBasis::build(2).size() == 6);
  CHECK(FockBasis::build(150).size() == 11476);

  const auto b = FockBasis::build(7);
  for (int i = 0; i < b.size(); ++i) {
    const auto s = b.states[i];
    CHECK(s[0] + s[1] + s[2] == 7);
    CHECK(b.index(s[1], s[2]) == i);
  }
}

TEST_CASE("diagonalize returns the sorted spectrum in per-excitation units") {
  Eigen::MatrixXd D = (Eigen::VectorXd(4) << 3.0, -1.0, 2.0, 0.5).finished().asDiagonal();
  const auto ev = quantum::diagonalize(D, 2);
  const double expect[] = {-0.5, 0.25, 1.0, 1.5};
  REQUIRE(ev.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(ev[i] == doctest::Approx(expect[i]).epsilon(1e-14));
  CHECK_THROWS_AS(
      quantum::diagonalize(Eigen::MatrixXd(Eigen::MatrixXd::Random(4, 4)), 2),
      std::invalid_argument);
}

TEST_CASE("Hamiltonian matrix") {
  SUBCASE("Hermitian and real range") {
    const auto b = FockBasis::build(8);
    const auto H = quantum::build_hamiltonian({0.44, 0.17}, b);
    CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("N = 1 closed form {-xi, 1-2xi, 1-2xi}") {
    for (double xi : {0.2, 0.5, 0.8}) {
      const auto b = FockBasis::build(1);
      auto ev = quantum::diagonalize(quantum::build_hamiltonian({xi, 0.0}, b), 1);
      std::vector<double> expect{-xi, 1 - 2 * xi, 1 - 2 * xi};
      std::sort(expect.begin(), expect.end());
      REQUIRE(ev.size() == 3);
      for (int i = 0; i < 3; ++i) CHECK(ev[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    }
  }
  SUBCASE("u(2) limit xi = 0: levels m/N with multiplicity m + 1") {
    const int N = 6;
    const auto ev = quantum::full_spectrum({0.0, 0.0}, FockBasis::build(N));
    std::size_t at = 0;
    for (int m = 0; m <= N; ++m)
      for (int c = 0; c <= m; ++c)
        CHECK(ev[at++] == doctest::Approx(double(m) / N).epsilon(1e-12));
    CHECK(at == ev.size());
  }
  SUBCASE("o(3) limit xi = 1: minimum exactly -1") {
    const auto ev = quantum::full_spectrum({1.0, 0.0}, FockBasis::build(12));
    CHECK(std::abs(ev.front() + 1.0) <= 1e-12);
    CHECK(ev.back() <= 1e-9);  // range tops out at 0 up to O(1/N)
  }
}

TEST_CASE("real-rotated route agrees with the complex Hermitian route") {
  for (auto [xi, eps] : {std::pair{0.56, 0.3}, std::pair{0.3, 0.7}, std::pair{0.9, 0.05}}) {
    const auto b = FockBasis::build(14);
    const auto dense = quantum::diagonalize(quantum::build_hamiltonian({xi, eps}, b), b.N);
    const auto fast = quantum::full_spectrum({xi, eps}, b);
    REQUIRE(dense.size() == fast.size());
    for (std::size_t i = 0; i < dense.size(); ++i)
      CHECK(fast[i] == doctest::Approx(dense[i]).epsilon(1e-11));
  }
}

TEST_CASE("l blocks at eps = 0") {
  SUBCASE("N = 2 block dimensions {l0: 2, l1: 2, l2: 2}") {
    const auto blocks = quantum::l2_blocks({0.5, 0.0}, FockBasis::build(2));
    REQUIRE(blocks.size() == 3);
    for (const auto& blk : blocks) CHECK(blk.dimension == 2);
  }
  SUBCASE("dimensions sum to the basis size and energies match the full spectrum") {
    const int N = 10;
    const u3::U3Params p{0.6, 0.0};
    const auto basis = FockBasis::build(N);
    const auto blocks = quantum::l2_blocks(p, basis);
    int total = 0;
    std::vector<double> merged;
    for (const auto& blk : blocks) {
      total += blk.dimension;
      CHECK(int(blk.energies.size()) == blk.dimension);
      const int expect = blk.l == 0 ? N / 2 + 1 : 2 * ((N - blk.l) / 2 + 1);
      CHECK(blk.dimension == expect);
      merged.insert(merged.end(), blk.energies.begin(), blk.energies.end());
    }
    CHECK(total == basis.size());
    std::sort(merged.begin(), merged.end());
    const auto full = quantum::full_spectrum(p, basis);
    for (std::size_t i = 0; i < full.size(); ++i)
      CHECK(merged[i] == doctest::Approx(full[i]).epsilon(1e-10));
  }
  SUBCASE("stretched block sits at 1 - 2 xi") {
    const int N = 20;
    const double xi = 0.6;
    const auto blocks = quantum::l2_blocks({xi, 0.0}, FockBasis::build(N));
    const auto& top = blocks.back();
    CHECK(top.l == N);
    CHECK(top.dimension == 2);
    for (const double e : top.energies) CHECK(e == doctest::Approx(1 - 2 * xi).epsilon(1e-12));
  }
  SUBCASE("l^2 commutes with H at eps = 0 and not at eps != 0") {
    const auto b = FockBasis::build(12);
    CHECK(quantum::l2_commutator_norm({0.6, 0.0}, b) <= 1e-10);
    CHECK(quantum::l2_commutator_norm({0.6, 0.3}, b) > 1e-3);
    CHECK_THROWS_AS(quantum::l2_blocks({0.6, 0.3}, b), std::invalid_argument);
  }
}
