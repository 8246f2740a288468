#pragma once

// Periodic Ising chain in transverse and longitudinal fields,
//   H = - sum_n (sx_n sx_{n+1} + lambda sz_n + alpha sx_n),  sx_{L+1} = sx_1,
// block-diagonalized by lattice translations T (T^L = 1). Sector j holds the
// eigenstates of T with eigenvalue exp(2 pi i j / L).
//
// Basis states are L-bit integers; bit n set means spin n points down in
// the sz basis.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ratiostat/spectra.hpp"
#include "ratiostat/surmise.hpp"

namespace ratiostat {

struct IsingParams {
  int length = 14;      ///< L
  double lambda = 0.5;  ///< transverse field
  double alpha = 0.5;   ///< longitudinal field
};

struct Orbit {
  std::uint32_t representative = 0;  ///< smallest integer on the orbit
  int period = 0;                    ///< orbit size p, divides L
};

struct SpinSectorBasis {
  int length = 0;
  int momentum = 0;  ///< j
  std::vector<Orbit> orbits;
  /// Momentum state |a, j> = norm_a sum_r exp(-2 pi i j r / L) T^r |a>, with
  /// norm_a = sqrt(p_a) / L.
  std::vector<double> norms;

  std::size_t dimension() const noexcept { return orbits.size(); }
};

/// Cyclic shift by one site: bit n moves to bit n + 1 mod L.
std::uint32_t translate(std::uint32_t state, int length);

/// Every translation orbit of the 2^L basis states, by increasing representative.
std::vector<Orbit> orbit_representatives(int length);

/// Orbits compatible with momentum j (j p = 0 mod L).
SpinSectorBasis sector_basis(int length, int momentum);

/// Sector block of H; Hermitian, assembled from its lower triangle.
Eigen::MatrixXcd build_sector_hamiltonian(const IsingParams& params, const SpinSectorBasis& basis);
Eigen::MatrixXcd build_sector_hamiltonian(const IsingParams& params, int momentum);

/// H on the full 2^L space (real symmetric); for cross-checks at small L.
Eigen::MatrixXd build_full_hamiltonian(const IsingParams& params);

Spectrum sector_spectrum(const IsingParams& params, int momentum);

struct IsingStats {
  std::size_t dimension = 0;
  Histogram ratios;
  Histogram folded;
  MeanEstimate mean_r;
  MeanEstimate mean_rtilde;
  double ks_goe = 0.0;  ///< KS distance of the r sample to the beta = 1 surmise
  std::size_t skipped_zero_spacings = 0;
  std::vector<std::string> warnings;
};

/// Sectors smaller than this trigger a warning; statistics are still reported.
inline constexpr std::size_t min_sector_dimension = 100;

IsingStats ising_ratio_stats(const IsingParams& params, int momentum, double bulk_fraction = 0.9,
                             std::vector<double> ratio_edges = uniform_edges(0.0, 6.0, 120),
                             std::vector<double> folded_edges = uniform_edges(0.0, 1.0, 50));

}  // namespace ratiostat
