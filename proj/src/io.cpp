#include "ratiostat/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace ratiostat {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(s);
  while (std::getline(in, field, sep)) out.push_back(trim(field));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> fields(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string f;
  while (in >> f) out.push_back(f);
  return out;
}

// Whole-token conversion; accepts the inf/nan spellings strtod knows.
std::optional<double> to_double(const std::string& token) {
  if (token.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size() || errno == ERANGE) return std::nullopt;
  return v;
}

std::string quoted(const std::string& s) { return "'" + s + "'"; }

}  // namespace

LevelFormat parse_level_format(const std::string& name) {
  if (name == "plain") return LevelFormat::plain;
  if (name == "zero-table" || name == "zeros") return LevelFormat::zero_table;
  throw std::invalid_argument("unknown level format " + quoted(name) +
                              " (expected plain or zero-table)");
}

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

Spectrum parse_levels(std::istream& in, const LevelFile& file,
                      std::vector<std::string>* warnings) {
  const std::string source = file.path.empty() ? "<input>" : file.path;
  std::vector<double> levels;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const std::vector<std::string> f = fields(text);
    std::optional<double> value;
    if (file.format == LevelFormat::plain) {
      if (f.size() != 1) throw ParseError(source, number, "expected one number, got " + quoted(text));
      value = to_double(f[0]);
    } else {
      if (f.size() > 2) throw ParseError(source, number, "expected a zero ordinate, got " + quoted(text));
      value = to_double(f.back());
    }
    if (!value) throw ParseError(source, number, "cannot parse " + quoted(text) + " as a number");
    if (!std::isfinite(*value)) throw ParseError(source, number, "non-finite level " + quoted(text));
    levels.push_back(*value);
  }
  if (in.bad()) throw std::runtime_error(source + ": read error");

  if (!std::is_sorted(levels.begin(), levels.end())) {
    std::sort(levels.begin(), levels.end());
    if (warnings != nullptr) warnings->push_back(source + ": levels were not ascending; sorted");
  }
  const std::size_t skip = std::min(file.skip, levels.size());
  levels.erase(levels.begin(), levels.begin() + static_cast<std::ptrdiff_t>(skip));
  if (file.take && *file.take < levels.size()) levels.resize(*file.take);
  if (levels.empty()) throw std::runtime_error(source + ": no levels left to analyze");
  return Spectrum(std::move(levels));
}

Spectrum read_levels(const LevelFile& file, std::vector<std::string>* warnings) {
  std::ifstream in(file.path);
  if (!in) throw std::runtime_error("cannot open " + file.path + ": " + std::strerror(errno));
  return parse_levels(in, file, warnings);
}

TableFormat parse_table_format(const std::string& name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "txt") return TableFormat::txt;
  throw std::invalid_argument("unknown table format " + quoted(name) + " (expected csv or txt)");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string render_table(const Table& table, TableFormat format) {
  const char sep = format == TableFormat::csv ? ',' : ' ';
  std::string out;
  if (format == TableFormat::txt) out += "# ";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out += sep;
    out += table.columns[c];
  }
  out += '\n';
  const bool labelled = !table.labels.empty();
  if (labelled && table.labels.size() != table.rows.size()) {
    throw std::invalid_argument("table has " + std::to_string(table.labels.size()) + " labels for " +
                                std::to_string(table.rows.size()) + " rows");
  }
  const std::size_t cells = table.columns.size() - (labelled ? 1 : 0);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row.size() != cells) {
      throw std::invalid_argument("table row has " + std::to_string(row.size()) +
                                  " cells, expected " + std::to_string(cells));
    }
    if (labelled) out += table.labels[i];
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0 || labelled) out += sep;
      out += format_number(row[c]);
    }
    out += '\n';
  }
  return out;
}

void write_table(const Table& table, TableFormat format, const std::string& path) {
  const std::string text = render_table(table, format);
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path + ": " + std::strerror(errno));
  out << text;
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path);
}

Table histogram_table(const Histogram& histogram) {
  Table t;
  t.columns = {"bin_lo", "bin_hi", "count", "density"};
  for (std::size_t b = 0; b < histogram.bins(); ++b) {
    t.rows.push_back({histogram.edges[b], histogram.edges[b + 1],
                      static_cast<double>(histogram.counts[b]), histogram.density(b)});
  }
  return t;
}

Histogram parse_histogram_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t number = 0;
  bool header = false;
  std::vector<double> lo, hi, density;
  std::vector<std::uint64_t> counts;
  while (std::getline(in, line)) {
    ++number;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const std::vector<std::string> cells = split(text, ',');
    if (!header) {
      if (cells != std::vector<std::string>{"bin_lo", "bin_hi", "count", "density"}) {
        throw ParseError(source, number, "expected header bin_lo,bin_hi,count,density");
      }
      header = true;
      continue;
    }
    if (cells.size() != 4) throw ParseError(source, number, "expected 4 columns");
    double v[4];
    for (int c = 0; c < 4; ++c) {
      const auto x = to_double(cells[static_cast<std::size_t>(c)]);
      if (!x || !std::isfinite(*x)) throw ParseError(source, number, "cannot parse " + quoted(cells[static_cast<std::size_t>(c)]));
      v[c] = *x;
    }
    if (v[2] < 0 || v[2] != std::floor(v[2])) {
      throw ParseError(source, number, "count must be a non-negative integer");
    }
    if (!lo.empty() && v[0] != hi.back()) throw ParseError(source, number, "bins are not contiguous");
    lo.push_back(v[0]);
    hi.push_back(v[1]);
    counts.push_back(static_cast<std::uint64_t>(v[2]));
    density.push_back(v[3]);
  }
  if (!header || lo.empty()) throw std::runtime_error(source + ": no histogram rows");

  std::vector<double> edges(lo);
  edges.push_back(hi.back());
  Histogram h = make_histogram(std::move(edges));
  h.counts = counts;
  std::uint64_t in_range = 0;
  for (auto c : counts) in_range += c;
  h.total = in_range;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    if (counts[b] == 0 || density[b] <= 0.0) continue;
    const double total = static_cast<double>(counts[b]) / (density[b] * h.width(b));
    const auto rounded = static_cast<std::uint64_t>(std::llround(total));
    if (rounded < in_range) throw std::runtime_error(source + ": density column inconsistent with counts");
    h.total = rounded;
    break;
  }
  h.overflow = h.total - in_range;
  return h;
}

Histogram read_histogram_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + ": " + std::strerror(errno));
  return parse_histogram_csv(in, path);
}

SpectrumReport analyze_spectrum(const Spectrum& spectrum, const AnalyzeOptions& options) {
  if (spectrum.size() < min_report_levels) {
    throw std::invalid_argument("analysis needs at least " + std::to_string(min_report_levels) +
                                " levels, got " + std::to_string(spectrum.size()));
  }
  SpectrumReport report;
  const Spectrum bulk = bulk_select(spectrum, options.bulk_fraction);
  report.levels = bulk.size();
  const RatioSeries r = ratio_series(bulk);
  const RatioSeries rt = fold_ratios(r);
  if (r.values.empty()) throw std::invalid_argument("spectrum has no usable ratios");
  report.skipped_zero_spacings = r.skipped;
  report.mean_r = ratio_means(r);
  report.mean_rtilde = ratio_means(rt);
  report.ratios = build_histogram(r.values, options.ratio_edges);
  report.folded = build_histogram(rt.values, options.folded_edges);
  const auto [lo, hi] = std::minmax_element(r.values.begin(), r.values.end());
  report.degenerate = *lo == *hi;

  auto ks = [&](const RatioLaw& law) {
    return ks_distance(r.values, [&](double x) { return law.cdf(x); });
  };
  double best = std::numeric_limits<double>::infinity();
  for (Ensemble e : {Ensemble::poisson, Ensemble::goe, Ensemble::gue, Ensemble::gse}) {
    const double d = ks(RatioLaw::of(e));
    report.distances.push_back({to_string(e), d});
    if (d < best) {
      best = d;
      report.best_law = to_string(e);
    }
  }
  if (options.reference) report.reference = LawDistance{options.reference->name(), ks(*options.reference)};
  return report;
}

std::string render_report(const SpectrumReport& report) {
  std::ostringstream os;
  os << "levels " << report.levels << '\n';
  os << "mean_rtilde " << format_number(report.mean_rtilde.mean) << " +- "
     << format_number(report.mean_rtilde.stderr_of_mean) << " (" << report.mean_rtilde.count
     << " ratios)\n";
  os << "mean_r " << format_number(report.mean_r.mean) << " +- "
     << format_number(report.mean_r.stderr_of_mean);
  if (report.mean_r.heavy_tail) os << " (heavy tail: error bar unreliable)";
  os << '\n';
  for (const auto& d : report.distances) os << "ks_" << d.law << ' ' << format_number(d.ks) << '\n';
  if (report.reference) {
    os << "ks_reference " << report.reference->law << ' ' << format_number(report.reference->ks) << '\n';
  }
  os << "best_law " << report.best_law << '\n';
  if (report.skipped_zero_spacings > 0) {
    os << "skipped_zero_spacings " << report.skipped_zero_spacings << '\n';
  }
  if (report.degenerate) os << "degenerate: all ratios equal\n";
  return os.str();
}

}  // namespace ratiostat
