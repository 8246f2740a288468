#pragma once

// Gaussian random-matrix ensembles and Poisson spectra, and parallel
// multi-realization ratio-statistics sweeps.
//
// Entry variances are chosen so that the eigenvalue joint density is
//   prod_{i<j} |e_i - e_j|^beta  prod_i exp(-beta e_i^2 / 2).

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "ratiostat/eigensolver.hpp"
#include "ratiostat/spectra.hpp"
#include "ratiostat/surmise.hpp"

namespace ratiostat {

using Rng = std::mt19937_64;

struct RandomMatrixSample {
  Ensemble kind = Ensemble::goe;
  int dimension = 0;  ///< N; a GSE matrix is stored as 2N x 2N complex
  std::uint64_t seed = 0;
  std::variant<Eigen::MatrixXd, Eigen::MatrixXcd> matrix;
};

/// Dense self-adjoint sample. GOE: real symmetric, diagonal variance 1 and
/// off-diagonal variance 1/2. GUE: Hermitian, diagonal variance 1/2, real and
/// imaginary off-diagonal parts variance 1/4 each. GSE: quaternion self-dual
/// N x N embedded as 2N x 2N complex, every eigenvalue doubly degenerate.
RandomMatrixSample sample_matrix(Ensemble kind, int n, std::uint64_t seed);

/// Tridiagonal beta-ensemble with the same eigenvalue joint density as the
/// dense sampler (N x N, no Kramers doubling for GSE). O(N) to sample and
/// O(N^2) to diagonalize.
Tridiagonal sample_tridiagonal(Ensemble kind, int n, Rng& rng);

Spectrum hermitian_eigenvalues(const RandomMatrixSample& sample);

/// Keeps one member of each degenerate pair. Pairs must agree within
/// rel_tol times the spectral width.
Spectrum kramers_collapse(const Spectrum& spectrum, double rel_tol = 1e-8);

/// Cumulative sums of i.i.d. unit-mean exponential spacings.
Spectrum sample_poisson_spectrum(std::size_t n_levels, Rng& rng);

enum class Sampler {
  dense,        ///< sample_matrix + Householder/QL
  tridiagonal,  ///< sample_tridiagonal + QL
};

struct SweepConfig {
  Ensemble kind = Ensemble::goe;
  int size = 200;
  std::size_t realizations = 2000;
  double bulk_fraction = 0.5;
  std::vector<double> ratio_edges = uniform_edges(0.0, 6.0, 120);
  std::vector<double> folded_edges = uniform_edges(0.0, 1.0, 50);
  std::uint64_t seed = 1;
  unsigned workers = 0;  ///< 0 = hardware concurrency
  Sampler sampler = Sampler::dense;
};

struct SweepResult {
  Histogram ratios;
  Histogram folded;
  std::optional<MeanEstimate> mean_r;
  std::optional<MeanEstimate> mean_rtilde;
  std::optional<AmplitudeFit> fit;  ///< beta ensembles with data only
  std::size_t realizations = 0;
  std::size_t skipped_zero_spacings = 0;
};

/// Realization k uses seed (config.seed + k); results are independent of the
/// number of workers. A failed realization aborts the sweep, and the error
/// names its index and seed.
SweepResult run_realizations(const SweepConfig& config);

struct ScalingPoint {
  int size = 0;
  /// Amplitude of the fit of P_N against the surmise.
  AmplitudeFit fit;
  /// Departure from the large-N law: fit.amplitude - reference amplitude.
  double deviation = 0.0;
};

struct ScalingCurve {
  std::vector<ScalingPoint> points;
  /// Slope of log|deviation| against log N; needs two or more points.
  std::optional<double> log_slope;
};

/// Runs one sweep per size (config.size is overwritten).
ScalingCurve amplitude_scaling_curve(const SweepConfig& base, const std::vector<int>& sizes);

}  // namespace ratiostat
