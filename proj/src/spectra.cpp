#include "ratiostat/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ratiostat {

namespace {

std::string inversion_message(std::size_t index, double before, double after) {
  std::ostringstream os;
  os.precision(17);
  os << "spectrum not sorted: level " << index << " (" << before << ") > level " << index + 1
     << " (" << after << ")";
  return os.str();
}

void require_levels(const Spectrum& spectrum, std::size_t needed, const char* what) {
  if (spectrum.size() < needed) {
    std::ostringstream os;
    os << what << " needs at least " << needed << " levels, got " << spectrum.size();
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

UnsortedSpectrumError::UnsortedSpectrumError(std::size_t index, double before, double after)
    : std::invalid_argument(inversion_message(index, before, after)), index_(index) {}

ZeroSpacingError::ZeroSpacingError(std::size_t position)
    : std::domain_error("zero spacing in ratio denominator at position " +
                        std::to_string(position)),
      position_(position) {}

Spectrum::Spectrum(std::vector<double> levels) : levels_(std::move(levels)) {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (!std::isfinite(levels_[i])) {
      throw std::invalid_argument("non-finite level at index " + std::to_string(i));
    }
    if (i + 1 < levels_.size() && levels_[i] > levels_[i + 1]) {
      throw UnsortedSpectrumError(i, levels_[i], levels_[i + 1]);
    }
  }
}

Spectrum Spectrum::from_unsorted(std::vector<double> levels) {
  std::sort(levels.begin(), levels.end());
  return Spectrum(std::move(levels));
}

const char* to_string(RatioKind kind) {
  switch (kind) {
    case RatioKind::spacing: return "spacing";
    case RatioKind::ratio: return "ratio";
    case RatioKind::folded: return "folded";
    case RatioKind::overlapping: return "overlapping";
  }
  return "?";
}

RatioSeries spacings(const Spectrum& spectrum) {
  require_levels(spectrum, 2, "spacings");
  RatioSeries out{RatioKind::spacing, {}, 0};
  const auto e = spectrum.levels();
  out.values.reserve(e.size() - 1);
  for (std::size_t n = 0; n + 1 < e.size(); ++n) out.values.push_back(e[n + 1] - e[n]);
  return out;
}

RatioSeries ratio_series(const Spectrum& spectrum, ZeroSpacingPolicy policy) {
  require_levels(spectrum, 3, "ratio_series");
  RatioSeries out{RatioKind::ratio, {}, 0};
  const auto e = spectrum.levels();
  out.values.reserve(e.size() - 2);
  for (std::size_t n = 1; n + 1 < e.size(); ++n) {
    const double prev = e[n] - e[n - 1];
    const double next = e[n + 1] - e[n];
    if (prev == 0.0) {
      if (policy == ZeroSpacingPolicy::fail) throw ZeroSpacingError(n);
      ++out.skipped;
      continue;
    }
    out.values.push_back(next / prev);
  }
  return out;
}

RatioSeries fold_ratios(const RatioSeries& ratios) {
  RatioSeries out{RatioKind::folded, {}, ratios.skipped};
  out.values.reserve(ratios.values.size());
  for (std::size_t i = 0; i < ratios.values.size(); ++i) {
    const double r = ratios.values[i];
    if (!(r >= 0.0)) {
      throw std::invalid_argument("negative or NaN ratio at position " + std::to_string(i));
    }
    out.values.push_back(r <= 1.0 ? r : 1.0 / r);
  }
  return out;
}

RatioSeries overlapping_ratios(const Spectrum& spectrum, ZeroSpacingPolicy policy) {
  require_levels(spectrum, 4, "overlapping_ratios");
  RatioSeries out{RatioKind::overlapping, {}, 0};
  const auto e = spectrum.levels();
  for (std::size_t n = 1; n + 2 < e.size(); ++n) {
    const double den = e[n + 1] - e[n - 1];
    if (den == 0.0) {
      if (policy == ZeroSpacingPolicy::fail) throw ZeroSpacingError(n);
      ++out.skipped;
      continue;
    }
    out.values.push_back((e[n + 2] - e[n]) / den);
  }
  return out;
}

Spectrum bulk_select(const Spectrum& spectrum, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("bulk fraction must lie in (0, 1]");
  }
  const std::size_t n = spectrum.size();
  // The small offset keeps products like 0.1 * 30 from rounding up past 3.
  const auto keep = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9)));
  if (keep == 0) throw std::invalid_argument("bulk selection is empty");
  const std::size_t drop = n - keep;
  const std::size_t bottom = drop / 2;
  const auto e = spectrum.levels();
  return Spectrum(std::vector<double>(e.begin() + static_cast<std::ptrdiff_t>(bottom),
                                      e.begin() + static_cast<std::ptrdiff_t>(bottom + keep)));
}

double Histogram::density(std::size_t b) const {
  if (total == 0) return 0.0;
  return static_cast<double>(counts[b]) / (static_cast<double>(total) * width(b));
}

std::vector<double> Histogram::values(Normalization mode) const {
  std::vector<double> out(bins());
  for (std::size_t b = 0; b < bins(); ++b) {
    out[b] = mode == Normalization::counts ? static_cast<double>(counts[b]) : density(b);
  }
  return out;
}

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw std::invalid_argument("uniform_edges: need hi > lo and bins > 0");
  std::vector<double> edges(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  }
  edges.back() = hi;
  return edges;
}

Histogram make_histogram(std::vector<double> edges) {
  if (edges.size() < 2) throw std::invalid_argument("histogram needs at least two edges");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i] < edges[i + 1])) {
      throw std::invalid_argument("histogram edges not strictly increasing at index " +
                                  std::to_string(i));
    }
  }
  Histogram h;
  h.counts.assign(edges.size() - 1, 0);
  h.edges = std::move(edges);
  return h;
}

void accumulate(Histogram& hist, std::span<const double> values) {
  const double lo = hist.edges.front();
  const double hi = hist.edges.back();
  for (double v : values) {
    ++hist.total;
    if (!(v >= lo && v < hi)) {
      ++hist.overflow;
      continue;
    }
    // First edge strictly greater than v closes v's bin.
    const auto it = std::upper_bound(hist.edges.begin(), hist.edges.end(), v);
    ++hist.counts[static_cast<std::size_t>(it - hist.edges.begin()) - 1];
  }
}

Histogram build_histogram(std::span<const double> values, std::vector<double> edges) {
  Histogram h = make_histogram(std::move(edges));
  accumulate(h, values);
  return h;
}

Histogram merge_histograms(const Histogram& a, const Histogram& b) {
  if (a.edges != b.edges) throw std::invalid_argument("cannot merge histograms with different edges");
  Histogram out = a;
  for (std::size_t i = 0; i < out.counts.size(); ++i) out.counts[i] += b.counts[i];
  out.overflow += b.overflow;
  out.total += b.total;
  return out;
}

MeanEstimate MomentSums::estimate() const {
  if (count == 0) throw std::invalid_argument("mean of an empty series");
  MeanEstimate est;
  est.count = count;
  const double n = static_cast<double>(count);
  est.mean = sum / n;
  if (count > 1) {
    const double var = std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0));
    est.stderr_of_mean = std::sqrt(var / n);
  }
  return est;
}

MeanEstimate ratio_means(const RatioSeries& series) {
  if (series.values.empty()) throw std::invalid_argument("ratio_means: empty series");
  // Two-pass for accuracy; MomentSums is only for streaming merges.
  const double n = static_cast<double>(series.values.size());
  double mean = 0.0;
  for (double v : series.values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : series.values) ss += (v - mean) * (v - mean);
  MeanEstimate est;
  est.mean = mean;
  est.count = series.values.size();
  est.stderr_of_mean = est.count > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  est.heavy_tail = series.kind == RatioKind::ratio;
  return est;
}

double ks_distance(std::span<const double> values, const Cdf& reference_cdf) {
  if (values.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = reference_cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

}  // namespace ratiostat
