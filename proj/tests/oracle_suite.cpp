// Brute-force oracle checks, built as their own executable so they can be run
// without the rest of the suite.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ratiostat/eigensolver.hpp"
#include "ratiostat/ising.hpp"
#include "ratiostat/sine_kernel.hpp"

using namespace ratiostat;

TEST_CASE("3x3 eigenvalues match the trigonometric cubic solution") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::Matrix3d a;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
    const auto ours = hermitian_eigenvalues(Eigen::MatrixXd(a));
    const auto ref = oracle::cubic_eigenvalues(a);
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(ours[i] - ref[i]));
  }
  CHECK(worst < 1e-12);
  // Repeated roots.
  const auto ref = oracle::cubic_eigenvalues(Eigen::Matrix3d::Identity() * 2.0);
  const auto ours = hermitian_eigenvalues(Eigen::MatrixXd(Eigen::Matrix3d::Identity() * 2.0));
  for (int i = 0; i < 3; ++i) CHECK(std::abs(ours[i] - ref[i]) < 1e-12);
}

TEST_CASE("translation orbits match a walk over every state") {
  for (int length = 1; length <= 14; ++length) {
    const auto orbits = orbit_representatives(length);
    const auto brute = oracle::enumerate_orbits(length);
    REQUIRE(orbits.size() == brute.size());
    CHECK(static_cast<long>(orbits.size()) == oracle::necklaces(length));
    for (const Orbit& o : orbits) {
      REQUIRE(brute.count(o.representative) == 1);
      CHECK(brute.at(o.representative) == o.period);
    }
  }
  CHECK(oracle::necklaces(4) == 6);
  // Sector j keeps the orbits whose period p satisfies j p = 0 mod L.
  for (int length : {3, 6, 12}) {
    const auto brute = oracle::enumerate_orbits(length);
    for (int j = 0; j < length; ++j) {
      std::size_t expected = 0;
      for (const auto& [rep, period] : brute) expected += (j * period) % length == 0 ? 1 : 0;
      CHECK(sector_basis(length, j).dimension() == expected);
    }
  }
}

TEST_CASE("resolvent diagonal matches a centered difference") {
  for (double t : {0.5, 1.3, 2.0}) {
    const NystromSolution s = solve_qp(t);
    for (double f : {-0.95, -0.5, 0.0, 0.3, 0.9}) {
      const double x = f * t;
      CHECK(std::abs(s.resolvent(x, x) - oracle::resolvent_diagonal_fd(s, x, 1e-5)) < 1e-6);
    }
  }
}

TEST_CASE("Fredholm determinant matches the trace expansion") {
  // First order: det(1 - K) = 1 - 2t + O(t^2).
  CHECK(std::abs(fredholm_det(0.01) - (1 - 2 * 0.01)) < 1e-4);
  // All orders: log det = -sum tr(K^k) / k on an independent Gauss-Legendre grid.
  for (double t : {0.01, 0.25, 0.5, 1.0, 1.5, 2.0}) {
    const double ref = oracle::fredholm_det_trace_series(t, 60);
    CHECK(std::abs(fredholm_det(t) - ref) < 1e-10 * ref);
  }
}
