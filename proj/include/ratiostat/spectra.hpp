#pragma once

// Level spectra and the statistics built directly on them: spacings,
// consecutive-spacing ratios, folded and overlapping ratios, histograms,
// sample means and Kolmogorov-Smirnov distances.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ratiostat {

/// Raised when a level sequence is not sorted ascending.
class UnsortedSpectrumError : public std::invalid_argument {
 public:
  UnsortedSpectrumError(std::size_t index, double before, double after);
  /// Index i of the first inversion, levels[i] > levels[i + 1].
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Ordered real energy levels.
class Spectrum {
 public:
  Spectrum() = default;
  /// Throws UnsortedSpectrumError if `levels` is decreasing anywhere, and
  /// std::invalid_argument on non-finite entries.
  explicit Spectrum(std::vector<double> levels);

  /// Sorts first; never throws on ordering.
  static Spectrum from_unsorted(std::vector<double> levels);

  std::span<const double> levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }
  bool empty() const noexcept { return levels_.empty(); }
  double operator[](std::size_t i) const { return levels_[i]; }

 private:
  std::vector<double> levels_;
};

enum class RatioKind { spacing, ratio, folded, overlapping };

const char* to_string(RatioKind kind);

/// Derived sequence; `skipped` counts entries dropped for a zero denominator.
struct RatioSeries {
  RatioKind kind = RatioKind::ratio;
  std::vector<double> values;
  std::size_t skipped = 0;
};

/// What to do when a ratio's denominator spacing is exactly zero.
enum class ZeroSpacingPolicy {
  skip,  ///< drop the entry and count it in RatioSeries::skipped
  fail,  ///< throw ZeroSpacingError
};

class ZeroSpacingError : public std::domain_error {
 public:
  explicit ZeroSpacingError(std::size_t position);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// s_n = e_{n+1} - e_n. Requires at least two levels.
RatioSeries spacings(const Spectrum& spectrum);

/// r_n = s_n / s_{n-1} over every n where both spacings exist.
RatioSeries ratio_series(const Spectrum& spectrum,
                         ZeroSpacingPolicy policy = ZeroSpacingPolicy::skip);

/// min(r, 1/r) elementwise; r = 0 maps to 0, r = inf maps to 0.
RatioSeries fold_ratios(const RatioSeries& ratios);

/// (e_{n+2} - e_n) / (e_{n+1} - e_{n-1}).
RatioSeries overlapping_ratios(const Spectrum& spectrum,
                               ZeroSpacingPolicy policy = ZeroSpacingPolicy::skip);

/// Keeps the central ceil(fraction * size) levels. When the number of
/// discarded levels is odd the extra one comes off the top.
Spectrum bulk_select(const Spectrum& spectrum, double fraction);

enum class Normalization { counts, density };

/// Right-open bins [edges[b], edges[b+1]); everything outside
/// [edges.front(), edges.back()) lands in `overflow`.
struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t overflow = 0;
  std::uint64_t total = 0;

  std::size_t bins() const noexcept { return counts.size(); }
  double width(std::size_t b) const { return edges[b + 1] - edges[b]; }
  double midpoint(std::size_t b) const { return 0.5 * (edges[b] + edges[b + 1]); }
  /// counts[b] / (total * width). Zero when the histogram is empty.
  double density(std::size_t b) const;
  std::vector<double> values(Normalization mode) const;
};

/// `bins` equal-width bins on [lo, hi).
std::vector<double> uniform_edges(double lo, double hi, std::size_t bins);

/// Empty histogram with the given edges; throws if they are not strictly increasing.
Histogram make_histogram(std::vector<double> edges);

Histogram build_histogram(std::span<const double> values, std::vector<double> edges);

/// Adds `values` into an existing histogram.
void accumulate(Histogram& hist, std::span<const double> values);

/// Bin-wise sum; throws std::invalid_argument when the edges differ.
Histogram merge_histograms(const Histogram& a, const Histogram& b);

struct MeanEstimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  std::size_t count = 0;
  /// Set for raw ratios: P(r) ~ r^-(2+beta) has no finite variance for beta <= 2,
  /// and no finite mean at all for Poisson levels.
  bool heavy_tail = false;
};

MeanEstimate ratio_means(const RatioSeries& series);

/// Running first and second moments; merged in a fixed order these give
/// reproducible means for parallel sweeps.
struct MomentSums {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  void merge(const MomentSums& other) {
    sum += other.sum;
    sum_sq += other.sum_sq;
    count += other.count;
  }
  MeanEstimate estimate() const;
};

using Cdf = std::function<double(double)>;

/// sup_x |F_n(x) - F(x)| for the empirical CDF of `values`.
double ks_distance(std::span<const double> values, const Cdf& reference_cdf);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace ratiostat
