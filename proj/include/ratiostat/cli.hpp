#pragma once

// Command-line front end: ratiostat <subcommand> [flags].
//
// Subcommands: surmise-table, sample, analyze, exact-gue, ising, fit, scaling.
// A JSON object passed with --config supplies flag values by long name
// (e.g. {"size": 400, "ensemble": "gue"}); explicit flags win over the file,
// the file wins over built-in defaults, and unknown keys are rejected.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ratiostat {

struct RunConfig {
  std::string subcommand;
  std::string ensemble = "goe";
  int size = 200;
  std::size_t realizations = 2000;
  std::uint64_t seed = 1;
  /// Unset: 0.5 for sample and scaling, 1.0 for analyze, 0.9 for ising.
  std::optional<double> bulk;
  std::size_t bins = 120;  ///< bins of the r histogram on [0, rmax)
  std::size_t folded_bins = 50;
  std::optional<double> rmax;  ///< unset: 6 for histograms, 5 for exact-gue
  std::string input;
  std::string level_format = "plain";
  std::size_t skip = 0;
  std::optional<std::size_t> take;
  std::optional<std::string> reference;  ///< analyze: law singled out in the report
  int L = 14;
  double lambda = 0.5;
  double alpha = 0.5;
  int sector = 3;
  double tmax = 3.5;
  int order = 60;
  int nt = 80;
  int ngrid = 100;
  std::vector<int> sizes = {10, 20, 40, 80};
  std::string sampler = "dense";
  unsigned workers = 0;
  std::string out;
  std::string folded_out;
  std::optional<std::string> format;  ///< unset: txt for exact-gue, csv otherwise
};

/// Runs one command line. Returns 0 on success, 1 on a runtime failure
/// (one-line diagnostic on `err`) and 2 on a usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ratiostat
