#pragma once

#include <functional>
#include <vector>

namespace ratiostat {

/// Nodes and weights of a fixed rule on a finite interval.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b]. Nodes ascending.
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Result of an adaptive integration.
struct Integral {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod on [a, b]; throws std::runtime_error carrying the
/// achieved error estimate when it exceeds `abs_tol`.
Integral integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                            double abs_tol = 1e-10);

}  // namespace ratiostat
