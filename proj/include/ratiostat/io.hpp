#pragma once

// Level-file ingestion, spectrum reports and plain-text tables.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratiostat/spectra.hpp"
#include "ratiostat/surmise.hpp"

namespace ratiostat {

enum class LevelFormat {
  plain,       ///< one real per line
  zero_table,  ///< one zero ordinate per line; a leading index column is tolerated
};

LevelFormat parse_level_format(const std::string& name);

struct LevelFile {
  std::string path;
  LevelFormat format = LevelFormat::plain;
  std::size_t skip = 0;             ///< leading levels dropped after sorting
  std::optional<std::size_t> take;  ///< at most this many levels kept
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Lines starting with '#' (after blanks) and blank lines are ignored. The
/// result is sorted; if the input was not ascending a warning is appended to
/// `warnings`. Throws ParseError (1-based line) or std::runtime_error when the
/// file cannot be opened or nothing is left after skip/take.
Spectrum read_levels(const LevelFile& file, std::vector<std::string>* warnings = nullptr);
Spectrum parse_levels(std::istream& in, const LevelFile& file,
                      std::vector<std::string>* warnings = nullptr);

enum class TableFormat {
  csv,  ///< header line, comma separated
  txt,  ///< "# " header comment, space separated columns
};

TableFormat parse_table_format(const std::string& name);

struct Table {
  std::vector<std::string> columns;  ///< includes the label column when labels are used
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;   ///< optional text first column, one per row
};

/// %.9g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);

std::string render_table(const Table& table, TableFormat format);

/// Writes render_table(table, format) to `path`; "-" means standard output.
void write_table(const Table& table, TableFormat format, const std::string& path);

/// Columns bin_lo, bin_hi, count, density.
Table histogram_table(const Histogram& histogram);

/// Reads a histogram CSV. The total (including overflow) is recovered from
/// count / (density * width) of the first populated bin.
Histogram read_histogram_csv(const std::string& path);
Histogram parse_histogram_csv(std::istream& in, const std::string& source);

struct LawDistance {
  std::string law;
  double ks = 0.0;
};

struct AnalyzeOptions {
  double bulk_fraction = 1.0;
  std::vector<double> ratio_edges = uniform_edges(0.0, 6.0, 120);
  std::vector<double> folded_edges = uniform_edges(0.0, 1.0, 50);
  /// Law singled out in the report, in addition to the four standard ones.
  std::optional<RatioLaw> reference;
};

struct SpectrumReport {
  std::size_t levels = 0;
  MeanEstimate mean_rtilde;
  MeanEstimate mean_r;  ///< heavy-tailed for Poisson-like spectra
  std::vector<LawDistance> distances;  ///< KS of the r sample: poisson, goe, gue, gse
  std::string best_law;
  std::optional<LawDistance> reference;
  Histogram ratios;
  Histogram folded;
  std::size_t skipped_zero_spacings = 0;
  /// All ratios identical (e.g. an equally spaced spectrum).
  bool degenerate = false;
};

inline constexpr std::size_t min_report_levels = 10;

SpectrumReport analyze_spectrum(const Spectrum& spectrum, const AnalyzeOptions& options = {});

/// Human-readable multi-line summary.
std::string render_report(const SpectrumReport& report);

}  // namespace ratiostat
