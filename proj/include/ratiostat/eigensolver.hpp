#pragma once

// Eigenvalues of dense self-adjoint matrices: Householder reduction to real
// symmetric tridiagonal form, then implicit QL iteration with Wilkinson shifts.

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace ratiostat {

class EigenConvergenceError : public std::runtime_error {
 public:
  EigenConvergenceError(std::size_t index, std::size_t sweeps);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Real symmetric tridiagonal matrix: `diag` of length n, `off` of length n-1
/// (off[i] couples rows i and i+1).
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

/// Householder reduction of a real symmetric or complex Hermitian matrix.
/// Reads the lower triangle only. Complex subdiagonal phases are removed by
/// a diagonal unitary similarity, so `off` holds their magnitudes.
Tridiagonal householder_tridiagonalize(const Eigen::MatrixXd& a);
Tridiagonal householder_tridiagonalize(const Eigen::MatrixXcd& a);

/// Ascending eigenvalues. Total work is capped at 50 n implicit-shift sweeps;
/// exceeding it throws EigenConvergenceError naming the unconverged index.
std::vector<double> tridiagonal_eigenvalues(Tridiagonal t);

/// Ascending eigenvalues of a self-adjoint matrix (lower triangle used).
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXd& a);
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& a);

}  // namespace ratiostat
