#include "ratiostat/ensembles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "ratiostat/eigensolver.hpp"

namespace ratiostat {

namespace {

using Complex = std::complex<double>;

void check_dimension(int n) {
  if (n < 2) throw std::invalid_argument("matrix dimension must be >= 2, got " + std::to_string(n));
}

Eigen::MatrixXd sample_goe(int n, Rng& rng) {
  std::normal_distribution<double> diag(0.0, 1.0);
  std::normal_distribution<double> off(0.0, std::sqrt(0.5));
  Eigen::MatrixXd h(n, n);
  for (int j = 0; j < n; ++j) {
    h(j, j) = diag(rng);
    for (int i = j + 1; i < n; ++i) {
      h(i, j) = off(rng);
      h(j, i) = h(i, j);
    }
  }
  return h;
}

Eigen::MatrixXcd sample_gue(int n, Rng& rng) {
  std::normal_distribution<double> diag(0.0, std::sqrt(0.5));
  std::normal_distribution<double> off(0.0, 0.5);
  Eigen::MatrixXcd h(n, n);
  for (int j = 0; j < n; ++j) {
    h(j, j) = Complex(diag(rng), 0.0);
    for (int i = j + 1; i < n; ++i) {
      const double re = off(rng);
      const double im = off(rng);
      h(i, j) = Complex(re, im);
      h(j, i) = Complex(re, -im);
    }
  }
  return h;
}

// Quaternion q = a + b j as the 2x2 complex block [[a, b], [-conj(b), conj(a)]].
void put_quaternion(Eigen::MatrixXcd& h, int i, int j, Complex a, Complex b) {
  h(2 * i, 2 * j) = a;
  h(2 * i, 2 * j + 1) = b;
  h(2 * i + 1, 2 * j) = -std::conj(b);
  h(2 * i + 1, 2 * j + 1) = std::conj(a);
}

Eigen::MatrixXcd sample_gse(int n, Rng& rng) {
  std::normal_distribution<double> diag(0.0, 0.5);
  std::normal_distribution<double> off(0.0, std::sqrt(0.125));
  Eigen::MatrixXcd h(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    put_quaternion(h, j, j, Complex(diag(rng), 0.0), Complex(0.0, 0.0));
    for (int i = j + 1; i < n; ++i) {
      const Complex a(off(rng), off(rng));
      const Complex b(off(rng), off(rng));
      put_quaternion(h, i, j, a, b);
      // Block (j, i) is the adjoint of block (i, j): conj(a) - b j.
      put_quaternion(h, j, i, std::conj(a), -b);
    }
  }
  return h;
}

unsigned resolve_workers(unsigned requested, std::size_t tasks) {
  unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(tasks, 1)));
}

Spectrum realization_spectrum(const SweepConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  if (config.kind == Ensemble::poisson) {
    return sample_poisson_spectrum(static_cast<std::size_t>(config.size), rng);
  }
  if (config.sampler == Sampler::tridiagonal) {
    return Spectrum(tridiagonal_eigenvalues(sample_tridiagonal(config.kind, config.size, rng)));
  }
  Spectrum levels = hermitian_eigenvalues(sample_matrix(config.kind, config.size, seed));
  if (config.kind == Ensemble::gse) levels = kramers_collapse(levels);
  return levels;
}

struct RealizationMoments {
  MomentSums r;
  MomentSums rtilde;
};

}  // namespace

RandomMatrixSample sample_matrix(Ensemble kind, int n, std::uint64_t seed) {
  check_dimension(n);
  Rng rng(seed);
  RandomMatrixSample s;
  s.kind = kind;
  s.dimension = n;
  s.seed = seed;
  switch (kind) {
    case Ensemble::goe: s.matrix = sample_goe(n, rng); break;
    case Ensemble::gue: s.matrix = sample_gue(n, rng); break;
    case Ensemble::gse: s.matrix = sample_gse(n, rng); break;
    case Ensemble::poisson:
      throw std::invalid_argument("Poisson spectra have no matrix model; use sample_poisson_spectrum");
  }
  return s;
}

Tridiagonal sample_tridiagonal(Ensemble kind, int n, Rng& rng) {
  check_dimension(n);
  const int beta = dyson_index(kind);
  check_beta(beta);
  // Dumitriu-Edelman: diag N(0, 2), off chi_{beta k}, k = n-1 .. 1, all over
  // sqrt(2), gives weight exp(-e^2 / 2); the 1/sqrt(beta) rescale turns it
  // into exp(-beta e^2 / 2).
  const double scale = 1.0 / std::sqrt(2.0 * beta);
  std::normal_distribution<double> normal(0.0, std::sqrt(2.0));
  Tridiagonal t;
  t.diag.resize(static_cast<std::size_t>(n));
  t.off.resize(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) t.diag[static_cast<std::size_t>(i)] = scale * normal(rng);
  for (int i = 0; i + 1 < n; ++i) {
    std::chi_squared_distribution<double> chi2(static_cast<double>(beta * (n - 1 - i)));
    t.off[static_cast<std::size_t>(i)] = scale * std::sqrt(chi2(rng));
  }
  return t;
}

Spectrum hermitian_eigenvalues(const RandomMatrixSample& sample) {
  return std::visit([](const auto& m) { return Spectrum(hermitian_eigenvalues(m)); },
                    sample.matrix);
}

Spectrum kramers_collapse(const Spectrum& spectrum, double rel_tol) {
  if (spectrum.size() % 2 != 0) {
    throw std::invalid_argument("kramers_collapse: odd number of levels (" +
                                std::to_string(spectrum.size()) + ")");
  }
  if (spectrum.empty()) return spectrum;
  const auto e = spectrum.levels();
  const double width = e.back() - e.front();
  double worst = 0.0;
  std::size_t worst_pair = 0;
  std::vector<double> out;
  out.reserve(e.size() / 2);
  for (std::size_t i = 0; i < e.size(); i += 2) {
    const double gap = e[i + 1] - e[i];
    if (gap > worst) {
      worst = gap;
      worst_pair = i / 2;
    }
    out.push_back(e[i]);
  }
  if (worst > rel_tol * width) {
    std::ostringstream os;
    os << "kramers_collapse: pair " << worst_pair << " split by " << worst << " (tolerance "
       << rel_tol * width << ")";
    throw std::invalid_argument(os.str());
  }
  return Spectrum(std::move(out));
}

Spectrum sample_poisson_spectrum(std::size_t n_levels, Rng& rng) {
  if (n_levels == 0) throw std::invalid_argument("sample_poisson_spectrum: need at least one level");
  std::exponential_distribution<double> spacing(1.0);
  std::vector<double> levels(n_levels);
  double e = 0.0;
  for (auto& level : levels) {
    e += spacing(rng);
    level = e;
  }
  return Spectrum(std::move(levels));
}

SweepResult run_realizations(const SweepConfig& config) {
  if (config.kind != Ensemble::poisson) check_dimension(config.size);
  if (config.size < 1) throw std::invalid_argument("sweep size must be positive");

  SweepResult result;
  result.ratios = make_histogram(config.ratio_edges);
  result.folded = make_histogram(config.folded_edges);
  const std::size_t total = config.realizations;
  result.realizations = total;
  if (total == 0) return result;

  const unsigned workers = resolve_workers(config.workers, total);
  std::vector<RealizationMoments> moments(total);
  std::vector<Histogram> ratio_parts(workers, result.ratios);
  std::vector<Histogram> folded_parts(workers, result.folded);
  std::vector<std::size_t> skipped(workers, 0);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t failed_index = 0;
  std::string failure;

  auto work = [&](unsigned w) {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t k = next.fetch_add(1, std::memory_order_relaxed);
      if (k >= total) return;
      try {
        const Spectrum levels = bulk_select(realization_spectrum(config, config.seed + k),
                                            config.bulk_fraction);
        const RatioSeries r = ratio_series(levels);
        const RatioSeries rt = fold_ratios(r);
        accumulate(ratio_parts[w], r.values);
        accumulate(folded_parts[w], rt.values);
        skipped[w] += r.skipped;
        for (double v : r.values) moments[k].r.add(v);
        for (double v : rt.values) moments[k].rtilde.add(v);
      } catch (const std::exception& ex) {
        std::lock_guard lock(error_mutex);
        if (!failed.exchange(true) || k < failed_index) {
          failed_index = k;
          failure = ex.what();
        }
        return;
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  if (failed) {
    std::ostringstream os;
    os << "realization " << failed_index << " (seed " << config.seed + failed_index
       << ") failed: " << failure;
    throw std::runtime_error(os.str());
  }

  for (unsigned w = 0; w < workers; ++w) {
    result.ratios = merge_histograms(result.ratios, ratio_parts[w]);
    result.folded = merge_histograms(result.folded, folded_parts[w]);
    result.skipped_zero_spacings += skipped[w];
  }
  // Realization order, not completion order, fixes the floating-point sums.
  MomentSums r_sum;
  MomentSums rt_sum;
  for (const auto& m : moments) {
    r_sum.merge(m.r);
    rt_sum.merge(m.rtilde);
  }
  if (r_sum.count > 0) {
    result.mean_r = r_sum.estimate();
    result.mean_r->heavy_tail = true;
    result.mean_rtilde = rt_sum.estimate();
  }
  if (config.kind != Ensemble::poisson && result.ratios.total > 0) {
    result.fit = fit_amplitude(result.ratios, dyson_index(config.kind));
  }
  return result;
}

ScalingCurve amplitude_scaling_curve(const SweepConfig& base, const std::vector<int>& sizes) {
  if (base.kind == Ensemble::poisson) {
    throw std::invalid_argument("amplitude scaling needs a Gaussian ensemble");
  }
  const double reference = surmise_constants(dyson_index(base.kind)).reference_amplitude;
  ScalingCurve curve;
  for (int n : sizes) {
    if (n < 8) throw std::invalid_argument("scaling sizes must be >= 8");
    SweepConfig config = base;
    config.size = n;
    const SweepResult sweep = run_realizations(config);
    if (!sweep.fit) throw std::runtime_error("no ratios collected at N = " + std::to_string(n));
    curve.points.push_back({n, *sweep.fit, sweep.fit->amplitude - reference});
  }
  if (curve.points.size() >= 2) {
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    const double m = static_cast<double>(curve.points.size());
    for (const auto& p : curve.points) {
      const double x = std::log(static_cast<double>(p.size));
      const double y = std::log(std::abs(p.deviation));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    curve.log_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return curve;
}

}  // namespace ratiostat
