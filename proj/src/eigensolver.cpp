#include "ratiostat/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Eigenvalues>

namespace ratiostat {

namespace {

template <class Matrix>
Tridiagonal reduce(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix is not square");
  const Eigen::Index n = a.rows();
  Tridiagonal t;
  if (n == 0) return t;
  if (n == 1) {
    t.diag = {std::real(a(0, 0))};
    return t;
  }
  // Householder reduction; only the lower triangle of a is read.
  const Eigen::Tridiagonalization<Matrix> td(a);
  const Eigen::VectorXd d = td.diagonal();
  const Eigen::VectorXd e = td.subDiagonal();
  t.diag.assign(d.data(), d.data() + n);
  t.off.resize(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 0; i + 1 < n; ++i) t.off[static_cast<std::size_t>(i)] = std::abs(e(i));
  return t;
}

// sqrt(a^2 + b^2), falling back to std::hypot only when the sum of squares
// leaves the safe range.
inline double norm2(double a, double b) {
  const double s = a * a + b * b;
  if (s > 1e-290 && s < 1e290) return std::sqrt(s);
  return std::hypot(a, b);
}

}  // namespace

EigenConvergenceError::EigenConvergenceError(std::size_t index, std::size_t sweeps)
    : std::runtime_error("implicit QL did not converge for eigenvalue " + std::to_string(index) +
                         " after " + std::to_string(sweeps) + " sweeps"),
      index_(index) {}

Tridiagonal householder_tridiagonalize(const Eigen::MatrixXd& a) { return reduce(a); }

Tridiagonal householder_tridiagonalize(const Eigen::MatrixXcd& a) { return reduce(a); }

std::vector<double> tridiagonal_eigenvalues(Tridiagonal t) {
  std::vector<double>& d = t.diag;
  const std::size_t n = d.size();
  if (t.off.size() + 1 != n && !(n == 0 && t.off.empty())) {
    throw std::invalid_argument("tridiagonal: off-diagonal must have length n - 1");
  }
  if (n == 0) return {};
  std::vector<double> e(t.off);
  e.push_back(0.0);

  const double eps = std::numeric_limits<double>::epsilon();
  const std::size_t cap = 50 * n;
  std::size_t sweeps = 0;
  for (std::size_t l = 0; l < n; ++l) {
    std::size_t m = l;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++sweeps > cap) throw EigenConvergenceError(l, sweeps - 1);

      // Shift from the leading 2x2 block (eigenvalue closer to d[l]).
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = norm2(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool deflated = false;
      for (std::size_t i = m; i-- > l;) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = norm2(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          // Underflow split: the rotation chain decoupled at i.
          d[i + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXd& a) {
  return tridiagonal_eigenvalues(householder_tridiagonalize(a));
}

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& a) {
  return tridiagonal_eigenvalues(householder_tridiagonalize(a));
}

}  // namespace ratiostat
