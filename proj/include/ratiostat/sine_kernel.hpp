#pragma once

// Large-N GUE ratio distribution from the sine kernel
//   K(x, y) = sin(pi (x - y)) / (pi (x - y))
// acting on [-t, t]. The Fredholm determinant det(1 - K), the functions
//   Q - K Q = sin(pi x) / pi,   P - K P = cos(pi x),
// and the resolvent R = (Q(x) P(z) - Q(z) P(x)) / (x - z) of (1 - K)^{-1} K
// are computed by Nystrom discretization on a Clenshaw-Curtis grid. The
// density of three consecutive levels at (-t, y, t) with none in between is
//   p(-t, y, t) = det(1 - K) det[R(a, b)]_{a, b in {-t, y, t}}.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ratiostat {

/// Clenshaw-Curtis rule on [-t, t] (Chebyshev extreme points, endpoints included).
struct QuadratureGrid {
  double half_width = 0.0;
  std::vector<double> nodes;    ///< descending from t to -t
  std::vector<double> weights;  ///< all positive, sum 2t
};

/// m >= 2 points, exact for polynomials of degree m - 1.
QuadratureGrid clenshaw_curtis(double t, int m);

/// K(x, y), with K(x, x) = 1 and a series branch for |x - y| < 1e-6.
double sine_kernel(double x, double y);

/// dK/dx (x, y).
double sine_kernel_dx(double x, double y);

/// det(delta_jk - K(x_j, x_k) w_k) on the m-point grid over [-t, t].
double fredholm_det(double t, int m = 60);

class IllConditionedError : public std::runtime_error {
 public:
  IllConditionedError(double t, int m, double condition);
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Discretized operator state at one half-width t. Immutable; safe to share.
class NystromSolution {
 public:
  /// Largest accepted 1-norm condition estimate of (1 - K W).
  static constexpr double max_condition = 1e12;

  const QuadratureGrid& grid() const noexcept { return grid_; }
  double half_width() const noexcept { return grid_.half_width; }
  /// det(1 - K).
  double determinant() const noexcept { return det_; }
  double condition_estimate() const noexcept { return condition_; }
  std::span<const double> q_nodes() const noexcept { return q_; }
  std::span<const double> p_nodes() const noexcept { return p_; }

  /// Nystrom interpolation: Q(x) = sin(pi x)/pi + sum_k w_k K(x, x_k) Q_k.
  double q(double x) const;
  /// P(x) = cos(pi x) + sum_k w_k K(x, x_k) P_k.
  double p(double x) const;
  /// Derivatives of the interpolation formulas.
  double dq(double x) const;
  double dp(double x) const;

  /// R(x, z); for |x - z| < 1e-7 the diagonal limit Q'(x) P(x) - P'(x) Q(x)
  /// at the midpoint.
  double resolvent(double x, double z) const;

  friend NystromSolution solve_qp(double t, int m);

 private:
  struct Values {
    double q, p, dq, dp;
  };
  Values evaluate(double x) const;

  QuadratureGrid grid_;
  double det_ = 1.0;
  double condition_ = 1.0;
  std::vector<double> q_;
  std::vector<double> p_;
};

/// Solves the discretized Q and P equations on [-t, t]; throws
/// IllConditionedError when the system is too close to singular.
NystromSolution solve_qp(double t, int m = 60);

double resolvent(const NystromSolution& sol, double x, double z);

/// Counts negative round-off values of p that were clipped to zero.
struct ClipCounter {
  std::size_t clipped = 0;
};

/// Values of p below this are treated as discretization failure.
inline constexpr double joint_density_clip = 1e-12;

/// p(-t, y, t) from an existing solution; -t < y < t.
double joint_density(const NystromSolution& sol, double y, ClipCounter* clip = nullptr);

/// p(-t, y, t) with a fresh m-point solution.
double joint_density(double t, double y, int m = 60);

struct ExactRatioOptions {
  double t_max = 3.5;          ///< upper limit of the half-width integral
  int n_t = 80;                ///< Gauss-Legendre points in t
  int order = 60;              ///< Clenshaw-Curtis points per Nystrom solve
  int normalization_points = 64;  ///< Gauss-Legendre points in y / t
  unsigned workers = 0;        ///< 0 = hardware concurrency
};

struct ExactRatioTable {
  std::vector<double> r;
  std::vector<double> density;  ///< P_inf(r), normalized to unit mass
  /// Mass of the unnormalized density; analytically 1.
  double raw_normalization = 0.0;
  std::size_t clipped = 0;
};

/// Large-N GUE P(r). With r the ratio of the left to the right spacing,
/// levels sit at (-t, y, t) with y / t = (r - 1) / (r + 1), and
///   u(r) = 4 / (1 + r)^2 int_0^tmax t p(-t, y, t) dt,
/// which is the s-integral of P(rs, s) s after s = 2t / (1 + r). All r share
/// the same Nystrom solutions at the t nodes. The total mass
///   int_0^inf u dr = 2 int_0^tmax int_{-1}^{1} t p(-t, rho t, t) drho dt
/// is computed on its own grid and divides u. Throws std::runtime_error when
/// the last t node still carries more than 1e-8 of the mass.
ExactRatioTable exact_ratio_pdf(std::span<const double> r_grid,
                                const ExactRatioOptions& options = {});

}  // namespace ratiostat
