// Test-fixture generator: ordinates of the first n nontrivial zeros of the
// Riemann zeta function, one per line, from sign changes of the Hardy
// function Z(t) in the Riemann-Siegel form (main sum plus the first two
// remainder terms). Accuracy is far below the mean zero spacing, which is
// all the ratio statistics need.
//
//   zeta_zeros COUNT OUTPUT

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

constexpr double pi = std::numbers::pi;

double theta(double t) {
  const double t2 = t * t;
  return 0.5 * t * std::log(t / (2.0 * pi)) - 0.5 * t - pi / 8.0 + 1.0 / (48.0 * t) +
         7.0 / (5760.0 * t * t2) + 31.0 / (80640.0 * t2 * t2 * t);
}

double psi_raw(double p) {
  return std::cos(2.0 * pi * (p * p - p - 1.0 / 16.0)) / std::cos(2.0 * pi * p);
}

// cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p); removable singularities at 1/4, 3/4.
double psi(double p) {
  for (double s : {0.25, 0.75}) {
    if (std::abs(p - s) < 1e-5) {
      const double h = 1e-5;
      const double a = psi_raw(s - h);
      const double b = psi_raw(s + h);
      return a + (b - a) * (p - (s - h)) / (2.0 * h);
    }
  }
  return psi_raw(p);
}

double psi_d3(double p) {
  const double h = 1e-2;
  return (psi(p + 2 * h) - 2 * psi(p + h) + 2 * psi(p - h) - psi(p - 2 * h)) / (2 * h * h * h);
}

class Hardy {
 public:
  explicit Hardy(double t_max) {
    const auto n = static_cast<std::size_t>(std::sqrt(t_max / (2.0 * pi))) + 2;
    log_n_.resize(n + 1);
    inv_sqrt_n_.resize(n + 1);
    for (std::size_t k = 1; k <= n; ++k) {
      log_n_[k] = std::log(static_cast<double>(k));
      inv_sqrt_n_[k] = 1.0 / std::sqrt(static_cast<double>(k));
    }
  }

  double operator()(double t) const {
    const double a = std::sqrt(t / (2.0 * pi));
    const auto n = static_cast<std::size_t>(a);
    const double p = a - static_cast<double>(n);
    const double th = theta(t);
    double sum = 0.0;
    for (std::size_t k = 1; k <= n; ++k) sum += inv_sqrt_n_[k] * std::cos(th - t * log_n_[k]);
    const double c0 = psi(p);
    const double c1 = -psi_d3(p) / (96.0 * pi * pi);
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;
    return 2.0 * sum + sign * std::pow(a, -0.5) * (c0 + c1 / a);
  }

 private:
  std::vector<double> log_n_;
  std::vector<double> inv_sqrt_n_;
};

double mean_spacing(double t) { return 2.0 * pi / std::log(t / (2.0 * pi)); }

double refine(const Hardy& z, double a, double b) {
  boost::math::tools::eps_tolerance<double> tol(48);
  std::uintmax_t iterations = 100;
  const auto [lo, hi] = boost::math::tools::toms748_solve([&](double t) { return z(t); }, a, b, tol, iterations);
  return 0.5 * (lo + hi);
}

// Golden-section search for the extremum of |Z| between a and c with the
// same sign at both ends; returns a point where Z changes sign, if any.
bool split_pair(const Hardy& z, double a, double c, double& mid) {
  const double s = z(a) > 0 ? 1.0 : -1.0;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = c - g * (c - a);
  double x2 = a + g * (c - a);
  double f1 = s * z(x1);
  double f2 = s * z(x2);
  for (int i = 0; i < 60 && c - a > 1e-12; ++i) {
    if (f1 < 0) {
      mid = x1;
      return true;
    }
    if (f2 < 0) {
      mid = x2;
      return true;
    }
    if (f1 < f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - g * (c - a);
      f1 = s * z(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (c - a);
      f2 = s * z(x2);
    }
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: zeta_zeros COUNT OUTPUT\n");
    return 2;
  }
  const long count = std::atol(argv[1]);
  if (count < 1) {
    std::fprintf(stderr, "COUNT must be positive\n");
    return 2;
  }
  // Upper bound on the height from the counting function.
  double t_max = 20.0;
  while (theta(t_max) / pi + 1.0 < static_cast<double>(count) + 10.0) t_max *= 1.1;
  const Hardy z(t_max * 1.1);

  std::vector<double> zeros;
  zeros.reserve(static_cast<std::size_t>(count));
  double t = 10.0;
  double zt = z(t);
  double prev_t = t;
  double prev_z = zt;
  bool have_prev = false;
  while (static_cast<long>(zeros.size()) < count) {
    const double next = t + mean_spacing(t) / 16.0;
    const double zn = z(next);
    if ((zt > 0) != (zn > 0)) {
      zeros.push_back(refine(z, t, next));
    } else if (have_prev && (prev_z > 0) == (zt > 0) && std::abs(zt) < std::abs(prev_z) &&
               std::abs(zt) < std::abs(zn)) {
      // |Z| dipped without a sign change: look for a close pair.
      double mid = 0.0;
      if (split_pair(z, prev_t, next, mid)) {
        zeros.push_back(refine(z, prev_t, mid));
        zeros.push_back(refine(z, mid, next));
      }
    }
    prev_t = t;
    prev_z = zt;
    have_prev = true;
    t = next;
    zt = zn;
  }
  zeros.resize(static_cast<std::size_t>(count));

  std::FILE* out = std::fopen(argv[2], "w");
  if (out == nullptr) {
    std::fprintf(stderr, "cannot write %s\n", argv[2]);
    return 1;
  }
  std::fprintf(out, "# ordinates of the first %ld nontrivial zeros of zeta\n", count);
  for (double x : zeros) std::fprintf(out, "%.10f\n", x);
  if (std::fclose(out) != 0) {
    std::fprintf(stderr, "write failed for %s\n", argv[2]);
    return 1;
  }
  return 0;
}
