#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "ratiostat/eigensolver.hpp"

using namespace ratiostat;

namespace {

Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
  return a;
}

Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = g(rng);
    for (int j = 0; j < i; ++j) {
      a(i, j) = {g(rng), g(rng)};
      a(j, i) = std::conj(a(i, j));
    }
  }
  return a;
}

template <class M>
double max_diff_to_eigen(const M& a) {
  Eigen::SelfAdjointEigenSolver<M> es(a, Eigen::EigenvaluesOnly);
  const auto ours = hermitian_eigenvalues(a);
  double worst = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) worst = std::max(worst, std::abs(ours[i] - es.eigenvalues()(i)));
  return worst;
}

}  // namespace

TEST_CASE("small fixed matrices") {
  for (int n : {1, 2, 5, 30}) {
    for (double v : hermitian_eigenvalues(Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n)))) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
  }
  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  const auto ev = hermitian_eigenvalues(swap);
  CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hermitian_eigenvalues(Eigen::MatrixXd(0, 0)).empty());
  for (double v : hermitian_eigenvalues(Eigen::MatrixXd(Eigen::MatrixXd::Zero(6, 6)))) CHECK(v == 0.0);
  CHECK_THROWS(hermitian_eigenvalues(Eigen::MatrixXd(2, 3)));
}

TEST_CASE("agreement with a reference dense solver") {
  std::mt19937_64 rng(3);
  for (int n : {2, 7, 50, 120}) {
    CHECK(max_diff_to_eigen(random_symmetric(n, rng)) < 1e-11 * n);
    CHECK(max_diff_to_eigen(random_hermitian(n, rng)) < 1e-11 * n);
  }
}

TEST_CASE("tridiagonal reduction preserves the spectrum") {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXcd a = random_hermitian(40, rng);
  const Tridiagonal t = householder_tridiagonalize(a);
  REQUIRE(t.diag.size() == 40);
  REQUIRE(t.off.size() == 39);
  for (double o : t.off) CHECK(o >= 0.0);
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(40, 40);
  for (int i = 0; i < 40; ++i) dense(i, i) = t.diag[i];
  for (int i = 0; i < 39; ++i) dense(i + 1, i) = dense(i, i + 1) = t.off[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
  const auto ev = tridiagonal_eigenvalues(t);
  for (int i = 0; i < 40; ++i) CHECK(ev[i] == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-11));
  CHECK_THROWS(tridiagonal_eigenvalues({{1.0, 2.0}, {}}));
}

TEST_CASE("affine covariance and the trace identity") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd a = random_symmetric(20, rng);
    const double s = 0.5 + trial * 0.3;
    const double b = -3.0 + trial;
    const auto ev = hermitian_eigenvalues(a);
    const auto mapped = hermitian_eigenvalues(Eigen::MatrixXd(s * a + b * Eigen::MatrixXd::Identity(20, 20)));
    double sum = 0;
    for (int i = 0; i < 20; ++i) {
      CHECK(std::abs(mapped[i] - (s * ev[i] + b)) < 1e-10);
      sum += ev[i];
    }
    CHECK(std::abs(sum - a.trace()) < 1e-9 * a.norm() * 20);
  }
}

TEST_CASE("non-finite input exhausts the sweep cap") {
  Tridiagonal t{{1.0, NAN, 2.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(tridiagonal_eigenvalues(t), EigenConvergenceError);
}
