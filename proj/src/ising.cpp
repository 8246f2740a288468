#include "ratiostat/ising.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "ratiostat/eigensolver.hpp"

namespace ratiostat {

namespace {

using Complex = std::complex<double>;

void check_length(int length) {
  if (length < 1 || length > 24) {
    throw std::invalid_argument("chain length must lie in [1, 24], got " + std::to_string(length));
  }
}

// The bond sum double-counts the single bond of an L = 2 ring.
void check_params(const IsingParams& params) {
  if (params.length < 3) {
    throw std::invalid_argument("Hamiltonian needs L >= 3, got " + std::to_string(params.length));
  }
  if (!std::isfinite(params.lambda) || !std::isfinite(params.alpha)) {
    throw std::invalid_argument("fields must be finite");
  }
}

std::uint32_t mask(int length) { return length == 32 ? ~0u : (1u << length) - 1u; }

// Representative of the orbit of `state` and the shift r with T^r state = rep.
struct Located {
  std::uint32_t representative;
  int shift;
};

Located locate(std::uint32_t state, int length) {
  Located best{state, 0};
  std::uint32_t s = state;
  for (int r = 1; r < length; ++r) {
    s = translate(s, length);
    if (s < best.representative) best = {s, r};
  }
  return best;
}

}  // namespace

std::uint32_t translate(std::uint32_t state, int length) {
  return ((state << 1) | (state >> (length - 1))) & mask(length);
}

std::vector<Orbit> orbit_representatives(int length) {
  check_length(length);
  std::vector<Orbit> orbits;
  const std::uint32_t states = 1u << length;
  for (std::uint32_t s = 0; s < states; ++s) {
    std::uint32_t t = s;
    int period = 0;
    bool minimal = true;
    for (int r = 1; r <= length; ++r) {
      t = translate(t, length);
      if (t < s) {
        minimal = false;
        break;
      }
      if (t == s) {
        period = r;
        break;
      }
    }
    if (minimal) orbits.push_back({s, period});
  }
  return orbits;
}

SpinSectorBasis sector_basis(int length, int momentum) {
  check_length(length);
  if (momentum < 0 || momentum >= length) {
    throw std::invalid_argument("momentum index must lie in [0, L)");
  }
  SpinSectorBasis basis;
  basis.length = length;
  basis.momentum = momentum;
  for (const Orbit& o : orbit_representatives(length)) {
    if ((static_cast<long>(momentum) * o.period) % length != 0) continue;
    basis.orbits.push_back(o);
    basis.norms.push_back(std::sqrt(static_cast<double>(o.period)) / length);
  }
  return basis;
}

Eigen::MatrixXcd build_sector_hamiltonian(const IsingParams& params,
                                          const SpinSectorBasis& basis) {
  check_params(params);
  const int length = basis.length;
  if (params.length != length) throw std::invalid_argument("basis and parameters disagree on L");
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  std::unordered_map<std::uint32_t, Eigen::Index> index;
  index.reserve(basis.orbits.size());
  for (Eigen::Index i = 0; i < dim; ++i) index.emplace(basis.orbits[static_cast<std::size_t>(i)].representative, i);

  // e^{-ikr} for every shift r; exact +-1 at k = 0 and k = pi so those
  // sectors come out real.
  std::vector<Complex> phase(static_cast<std::size_t>(length));
  for (int r = 0; r < length; ++r) {
    const int m = (basis.momentum * r) % length;
    if (m == 0) {
      phase[static_cast<std::size_t>(r)] = 1.0;
    } else if (2 * m == length) {
      phase[static_cast<std::size_t>(r)] = -1.0;
    } else {
      phase[static_cast<std::size_t>(r)] = std::polar(1.0, -2.0 * std::numbers::pi * m / length);
    }
  }
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);

  // H |a(k)> = sum_s h_s e^{-ikr} sqrt(p_a / p_b) |b(k)>, T^r s = b.
  auto add = [&](Eigen::Index col, int period_a, std::uint32_t s, double amplitude) {
    const Located loc = locate(s, length);
    const auto it = index.find(loc.representative);
    if (it == index.end()) return;  // orbit has no state at this momentum
    const int period_b = basis.orbits[static_cast<std::size_t>(it->second)].period;
    const double scale = std::sqrt(static_cast<double>(period_a) / period_b);
    h(it->second, col) += amplitude * scale * phase[static_cast<std::size_t>(loc.shift)];
  };

  for (Eigen::Index col = 0; col < dim; ++col) {
    const Orbit& a = basis.orbits[static_cast<std::size_t>(col)];
    const std::uint32_t s = a.representative;
    const int down = std::popcount(s);
    h(col, col) += -params.lambda * (length - 2 * down);
    for (int n = 0; n < length; ++n) {
      const int next = (n + 1) % length;
      add(col, a.period, s ^ (1u << n) ^ (1u << next), -1.0);
      if (params.alpha != 0.0) add(col, a.period, s ^ (1u << n), -params.alpha);
    }
  }
  // Keep the lower triangle; the diagonal is real by symmetry of the orbit sums.
  for (Eigen::Index j = 0; j < dim; ++j) {
    h(j, j) = Complex(h(j, j).real(), 0.0);
    for (Eigen::Index i = j + 1; i < dim; ++i) h(j, i) = std::conj(h(i, j));
  }
  return h;
}

Eigen::MatrixXcd build_sector_hamiltonian(const IsingParams& params, int momentum) {
  return build_sector_hamiltonian(params, sector_basis(params.length, momentum));
}

Eigen::MatrixXd build_full_hamiltonian(const IsingParams& params) {
  check_params(params);
  const int length = params.length;
  check_length(length);
  const auto dim = static_cast<Eigen::Index>(1u << length);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto s = static_cast<std::uint32_t>(col);
    h(col, col) = -params.lambda * (length - 2 * std::popcount(s));
    for (int n = 0; n < length; ++n) {
      const int next = (n + 1) % length;
      h(static_cast<Eigen::Index>(s ^ (1u << n) ^ (1u << next)), col) += -1.0;
      h(static_cast<Eigen::Index>(s ^ (1u << n)), col) += -params.alpha;
    }
  }
  return h;
}

Spectrum sector_spectrum(const IsingParams& params, int momentum) {
  const Eigen::MatrixXcd h = build_sector_hamiltonian(params, momentum);
  if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
    return Spectrum(hermitian_eigenvalues(Eigen::MatrixXd(h.real())));
  }
  return Spectrum(hermitian_eigenvalues(h));
}

IsingStats ising_ratio_stats(const IsingParams& params, int momentum, double bulk_fraction,
                             std::vector<double> ratio_edges, std::vector<double> folded_edges) {
  IsingStats stats;
  const Spectrum full = sector_spectrum(params, momentum);
  stats.dimension = full.size();
  if (stats.dimension < min_sector_dimension) {
    stats.warnings.push_back("sector dimension " + std::to_string(stats.dimension) + " < " +
                             std::to_string(min_sector_dimension) +
                             "; ratio statistics are not meaningful");
  }
  const Spectrum bulk = bulk_select(full, bulk_fraction);
  const RatioSeries r = ratio_series(bulk);
  const RatioSeries rt = fold_ratios(r);
  stats.skipped_zero_spacings = r.skipped;
  if (r.skipped > 0) {
    stats.warnings.push_back(std::to_string(r.skipped) + " zero spacings skipped");
  }
  stats.ratios = build_histogram(r.values, std::move(ratio_edges));
  stats.folded = build_histogram(rt.values, std::move(folded_edges));
  stats.mean_r = ratio_means(r);
  stats.mean_rtilde = ratio_means(rt);
  const RatioLaw goe = RatioLaw::surmise(1);
  stats.ks_goe = ks_distance(r.values, [&](double x) { return goe.cdf(x); });
  return stats;
}

}  // namespace ratiostat
