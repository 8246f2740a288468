#include "ratiostat/sine_kernel.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "parallel.hpp"
#include "ratiostat/quadrature.hpp"

namespace ratiostat {

namespace {

constexpr double pi = std::numbers::pi;

Eigen::MatrixXd nystrom_matrix(const QuadratureGrid& g) {
  const auto m = static_cast<Eigen::Index>(g.nodes.size());
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto jj = static_cast<std::size_t>(j);
      const auto kk = static_cast<std::size_t>(k);
      a(j, k) = (j == k ? 1.0 : 0.0) - sine_kernel(g.nodes[jj], g.nodes[kk]) * g.weights[kk];
    }
  }
  return a;
}

void check_grid_args(double t, int m) {
  if (!(t > 0.0)) throw std::invalid_argument("half-width t must be positive");
  if (m < 2) throw std::invalid_argument("quadrature order must be >= 2");
}

double det3(const double (&a)[3][3]) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

}  // namespace

QuadratureGrid clenshaw_curtis(double t, int m) {
  check_grid_args(t, m);
  const int n = m - 1;
  QuadratureGrid g;
  g.half_width = t;
  g.nodes.resize(static_cast<std::size_t>(m));
  g.weights.assign(static_cast<std::size_t>(m), 0.0);
  if (n == 1) {
    g.nodes = {t, -t};
    g.weights = {t, t};
    return g;
  }
  // Interior weights by the cosine-series formula; endpoints in closed form.
  const double end_weight = n % 2 == 0 ? 1.0 / (n * n - 1.0) : 1.0 / (n * static_cast<double>(n));
  for (int k = 0; k <= n; ++k) {
    const double theta = pi * k / n;
    g.nodes[static_cast<std::size_t>(k)] = t * std::cos(theta);
    if (k == 0 || k == n) {
      g.weights[static_cast<std::size_t>(k)] = t * end_weight;
      continue;
    }
    double v = 1.0;
    if (n % 2 == 0) {
      for (int j = 1; j < n / 2; ++j) v -= 2.0 * std::cos(2.0 * j * theta) / (4.0 * j * j - 1.0);
      v -= std::cos(n * theta) / (n * n - 1.0);
    } else {
      for (int j = 1; j <= (n - 1) / 2; ++j) {
        v -= 2.0 * std::cos(2.0 * j * theta) / (4.0 * j * j - 1.0);
      }
    }
    g.weights[static_cast<std::size_t>(k)] = t * 2.0 * v / n;
  }
  // Exact symmetry and a zero centre node when m is odd.
  for (int k = 0; k < m / 2; ++k) {
    const auto lo = static_cast<std::size_t>(k);
    const auto hi = static_cast<std::size_t>(n - k);
    g.nodes[hi] = -g.nodes[lo];
    const double w = 0.5 * (g.weights[lo] + g.weights[hi]);
    g.weights[lo] = w;
    g.weights[hi] = w;
  }
  if (m % 2 == 1) g.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return g;
}

double sine_kernel(double x, double y) {
  const double u = pi * (x - y);
  if (std::abs(x - y) < 1e-6) {
    const double u2 = u * u;
    return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
  }
  return std::sin(u) / u;
}

double sine_kernel_dx(double x, double y) {
  const double u = pi * (x - y);
  if (std::abs(x - y) < 1e-3) {
    const double u2 = u * u;
    return pi * u * (-1.0 / 3.0 + u2 / 30.0 - u2 * u2 / 840.0);
  }
  return pi * (u * std::cos(u) - std::sin(u)) / (u * u);
}

double fredholm_det(double t, int m) {
  const QuadratureGrid g = clenshaw_curtis(t, m);
  return nystrom_matrix(g).partialPivLu().determinant();
}

IllConditionedError::IllConditionedError(double t, int m, double condition)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "Nystrom system at t = " << t << ", m = " << m << " has condition estimate "
           << condition << "; use a smaller t or a larger m";
        return os.str();
      }()),
      condition_(condition) {}

NystromSolution solve_qp(double t, int m) {
  NystromSolution sol;
  sol.grid_ = clenshaw_curtis(t, m);
  const Eigen::MatrixXd a = nystrom_matrix(sol.grid_);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  sol.det_ = lu.determinant();
  const double rcond = lu.rcond();
  sol.condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (sol.condition_ > NystromSolution::max_condition) {
    throw IllConditionedError(t, m, sol.condition_);
  }
  Eigen::MatrixXd rhs(m, 2);
  for (int k = 0; k < m; ++k) {
    const double x = sol.grid_.nodes[static_cast<std::size_t>(k)];
    rhs(k, 0) = std::sin(pi * x) / pi;
    rhs(k, 1) = std::cos(pi * x);
  }
  const Eigen::MatrixXd qp = lu.solve(rhs);
  sol.q_.resize(static_cast<std::size_t>(m));
  sol.p_.resize(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    sol.q_[static_cast<std::size_t>(k)] = qp(k, 0);
    sol.p_[static_cast<std::size_t>(k)] = qp(k, 1);
  }
  return sol;
}

NystromSolution::Values NystromSolution::evaluate(double x) const {
  Values v{std::sin(pi * x) / pi, std::cos(pi * x), std::cos(pi * x), -pi * std::sin(pi * x)};
  for (std::size_t k = 0; k < grid_.nodes.size(); ++k) {
    const double w = grid_.weights[k];
    const double kv = w * sine_kernel(x, grid_.nodes[k]);
    const double kd = w * sine_kernel_dx(x, grid_.nodes[k]);
    v.q += kv * q_[k];
    v.p += kv * p_[k];
    v.dq += kd * q_[k];
    v.dp += kd * p_[k];
  }
  return v;
}

double NystromSolution::q(double x) const { return evaluate(x).q; }
double NystromSolution::p(double x) const { return evaluate(x).p; }
double NystromSolution::dq(double x) const { return evaluate(x).dq; }
double NystromSolution::dp(double x) const { return evaluate(x).dp; }

double NystromSolution::resolvent(double x, double z) const {
  if (std::abs(x - z) < 1e-7) {
    const Values v = evaluate(0.5 * (x + z));
    return v.dq * v.p - v.dp * v.q;
  }
  const Values a = evaluate(x);
  const Values b = evaluate(z);
  return (a.q * b.p - b.q * a.p) / (x - z);
}

double resolvent(const NystromSolution& sol, double x, double z) { return sol.resolvent(x, z); }

double joint_density(const NystromSolution& sol, double y, ClipCounter* clip) {
  const double t = sol.half_width();
  if (!(y > -t && y < t)) throw std::invalid_argument("joint_density: y must lie in (-t, t)");
  const double pts[3] = {-t, y, t};
  double r[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      r[i][j] = sol.resolvent(pts[i], pts[j]);
      r[j][i] = r[i][j];
    }
  }
  const double value = sol.determinant() * det3(r);
  if (value >= 0.0) return value;
  if (value > -joint_density_clip) {
    if (clip != nullptr) ++clip->clipped;
    return 0.0;
  }
  std::ostringstream os;
  os << "joint density p(-t, y, t) = " << value << " at t = " << t << ", y = " << y
     << " is negative beyond round-off; refine the quadrature";
  throw std::runtime_error(os.str());
}

double joint_density(double t, double y, int m) { return joint_density(solve_qp(t, m), y); }

ExactRatioTable exact_ratio_pdf(std::span<const double> r_grid, const ExactRatioOptions& options) {
  if (!(options.t_max > 0.0) || options.n_t < 2 || options.normalization_points < 2) {
    throw std::invalid_argument("exact_ratio_pdf: invalid quadrature options");
  }
  for (double r : r_grid) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("r grid must be positive");
  }

  const QuadratureRule t_rule = gauss_legendre(options.n_t, 0.0, options.t_max);
  const std::size_t nt = t_rule.nodes.size();
  std::vector<NystromSolution> solutions(nt);
  detail::parallel_for(nt, options.workers, [&](std::size_t k) {
    solutions[k] = solve_qp(t_rule.nodes[k], options.order);
  });

  std::vector<ClipCounter> clips(std::max<std::size_t>(r_grid.size(), 1));
  // int_0^tmax t p(-t, rho t, t) dt, plus the share of its last node.
  auto t_integral = [&](double rho, ClipCounter& clip, double* last_share) {
    double sum = 0.0;
    double last = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
      const double t = t_rule.nodes[k];
      last = t_rule.weights[k] * t * joint_density(solutions[k], rho * t, &clip);
      sum += last;
    }
    if (last_share != nullptr) *last_share = sum > 0.0 ? last / sum : 0.0;
    return sum;
  };

  ExactRatioTable table;
  const QuadratureRule rho_rule = gauss_legendre(options.normalization_points, -1.0, 1.0);
  ClipCounter norm_clip;
  double mass = 0.0;
  for (std::size_t i = 0; i < rho_rule.nodes.size(); ++i) {
    mass += rho_rule.weights[i] * 2.0 * t_integral(rho_rule.nodes[i], norm_clip, nullptr);
  }
  table.raw_normalization = mass;
  if (!(mass > 0.0)) throw std::runtime_error("exact_ratio_pdf: non-positive total mass");

  table.r.assign(r_grid.begin(), r_grid.end());
  table.density.resize(r_grid.size());
  std::vector<double> shares(r_grid.size(), 0.0);
  detail::parallel_for(r_grid.size(), options.workers, [&](std::size_t i) {
    const double r = r_grid[i];
    const double rho = (r - 1.0) / (r + 1.0);
    const double u = 4.0 / ((1.0 + r) * (1.0 + r)) * t_integral(rho, clips[i], &shares[i]);
    table.density[i] = u / mass;
  });
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (shares[i] > 1e-8) {
      std::ostringstream os;
      os << "exact_ratio_pdf: outer integral unconverged at r = " << r_grid[i]
         << " (last node carries " << shares[i] << " of the total); increase t_max";
      throw std::runtime_error(os.str());
    }
    table.clipped += clips[i].clipped;
  }
  table.clipped += norm_clip.clipped;
  return table;
}

}  // namespace ratiostat
