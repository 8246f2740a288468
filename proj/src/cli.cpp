#include "ratiostat/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <type_traits>

#include "ratiostat/ensembles.hpp"
#include "ratiostat/io.hpp"
#include "ratiostat/ising.hpp"
#include "ratiostat/sine_kernel.hpp"
#include "ratiostat/surmise.hpp"

namespace ratiostat {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One settable parameter: its flag on the command line and its key in a
// config file share the same name.
struct Field {
  std::string key;
  std::string help;
  std::function<CLI::Option*(CLI::App&, RunConfig&)> add;
  std::function<void(RunConfig&, const json&)> set;
};

template <class T>
Field plain_field(std::string key, std::string help, T RunConfig::*member) {
  Field f;
  f.key = key;
  f.help = help;
  f.add = [key, help, member](CLI::App& app, RunConfig& c) {
    CLI::Option* opt = app.add_option("--" + key, c.*member, help)->capture_default_str();
    if constexpr (std::is_same_v<T, std::vector<int>>) opt->delimiter(',');
    return opt;
  };
  f.set = [member](RunConfig& c, const json& v) { c.*member = v.get<T>(); };
  return f;
}

template <class T>
Field optional_field(std::string key, std::string help, std::optional<T> RunConfig::*member) {
  Field f;
  f.key = key;
  f.help = help;
  f.add = [key, help, member](CLI::App& app, RunConfig& c) {
    return app.add_option_function<T>("--" + key, [&c, member](const T& v) { c.*member = v; }, help);
  };
  f.set = [member](RunConfig& c, const json& v) { c.*member = v.get<T>(); };
  return f;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> all = [] {
    std::vector<Field> f;
    f.push_back(plain_field("ensemble", "poisson, goe, gue or gse", &RunConfig::ensemble));
    f.push_back(plain_field("size", "matrix size N", &RunConfig::size));
    f.push_back(plain_field("realizations", "number of sampled matrices", &RunConfig::realizations));
    f.push_back(plain_field("seed", "master seed; realization k uses seed + k", &RunConfig::seed));
    f.push_back(optional_field("bulk", "central fraction of levels kept", &RunConfig::bulk));
    f.push_back(plain_field("bins", "bins of the r histogram", &RunConfig::bins));
    f.push_back(plain_field("folded-bins", "bins of the folded-ratio histogram", &RunConfig::folded_bins));
    f.push_back(optional_field("rmax", "upper end of the r range", &RunConfig::rmax));
    f.push_back(plain_field("level-format", "plain or zero-table", &RunConfig::level_format));
    f.push_back(plain_field("skip", "levels dropped from the bottom after sorting", &RunConfig::skip));
    f.push_back(optional_field("take", "maximum number of levels kept", &RunConfig::take));
    f.push_back(optional_field("reference", "extra reference law for the KS report", &RunConfig::reference));
    f.push_back(plain_field("L", "chain length", &RunConfig::L));
    f.push_back(plain_field("lambda", "transverse field", &RunConfig::lambda));
    f.push_back(plain_field("alpha", "longitudinal field", &RunConfig::alpha));
    f.push_back(plain_field("sector", "momentum index j in [0, L)", &RunConfig::sector));
    f.push_back(plain_field("tmax", "upper limit of the half-width integral", &RunConfig::tmax));
    f.push_back(plain_field("order", "Clenshaw-Curtis points per Nystrom solve", &RunConfig::order));
    f.push_back(plain_field("nt", "Gauss-Legendre points in the half-width", &RunConfig::nt));
    f.push_back(plain_field("ngrid", "number of r points in (0, rmax]", &RunConfig::ngrid));
    f.push_back(plain_field("sizes", "matrix sizes for the scaling sweep", &RunConfig::sizes));
    f.push_back(plain_field("sampler", "dense or tridiagonal", &RunConfig::sampler));
    f.push_back(plain_field("workers", "worker threads, 0 = all cores", &RunConfig::workers));
    f.push_back(plain_field("out", "output file; standard output when empty", &RunConfig::out));
    f.push_back(plain_field("folded-out", "output file for the folded-ratio histogram", &RunConfig::folded_out));
    f.push_back(optional_field("format", "csv or txt", &RunConfig::format));
    return f;
  }();
  return all;
}

const Field& field(const std::string& key) {
  for (const Field& f : fields()) {
    if (f.key == key) return f;
  }
  throw std::logic_error("no field " + key);
}

struct Command {
  std::string name;
  std::string help;
  std::vector<std::string> keys;
  bool takes_input = false;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> all = {
      {"surmise-table", "closed-form constants and means of the ratio surmise", {"out", "format"}},
      {"sample",
       "Monte-Carlo ratio histograms of a Gaussian ensemble or Poisson levels",
       {"ensemble", "size", "realizations", "seed", "bulk", "bins", "folded-bins", "rmax", "sampler",
        "workers", "out", "folded-out", "format"}},
      {"analyze",
       "ratio statistics of a level file",
       {"level-format", "skip", "take", "bulk", "bins", "folded-bins", "rmax", "reference", "out",
        "folded-out", "format"},
       true},
      {"exact-gue",
       "large-N GUE ratio density from the sine kernel",
       {"tmax", "order", "nt", "ngrid", "rmax", "workers", "out", "format"}},
      {"ising",
       "ratio statistics of one momentum sector of the Ising chain",
       {"L", "lambda", "alpha", "sector", "bulk", "bins", "folded-bins", "rmax", "out", "folded-out",
        "format"}},
      {"fit", "fit the correction amplitude C to a histogram CSV", {"ensemble"}, true},
      {"scaling",
       "correction amplitude against matrix size",
       {"ensemble", "sizes", "realizations", "seed", "bulk", "bins", "rmax", "sampler", "workers",
        "out", "format"}},
  };
  return all;
}

// Config file values for keys whose flag was not given.
void apply_config(const std::string& path, CLI::App& sub, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw std::runtime_error("config " + path + ": expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    const auto it = std::find_if(fields().begin(), fields().end(),
                                 [&](const Field& f) { return f.key == key; });
    if (it == fields().end()) throw UsageError("config " + path + ": unknown key '" + key + "'");
    const CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr || opt->count() > 0) continue;
    try {
      it->set(c, value);
    } catch (const json::exception& e) {
      throw std::runtime_error("config " + path + ": bad value for '" + key + "': " + e.what());
    }
  }
}

double bulk_or(const RunConfig& c, double fallback) { return c.bulk.value_or(fallback); }

TableFormat table_format(const RunConfig& c, TableFormat fallback) {
  return c.format ? parse_table_format(*c.format) : fallback;
}

std::vector<double> ratio_edges(const RunConfig& c) {
  return uniform_edges(0.0, c.rmax.value_or(6.0), c.bins);
}

std::vector<double> folded_edges(const RunConfig& c) { return uniform_edges(0.0, 1.0, c.folded_bins); }

void emit(const Table& table, TableFormat format, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << render_table(table, format);
  } else {
    write_table(table, format, path);
  }
}

void comment(std::ostream& out, const std::string& key, const std::string& value) {
  out << "# " << key << ' ' << value << '\n';
}

std::string pm(const MeanEstimate& m) {
  std::string s = format_number(m.mean) + " +- " + format_number(m.stderr_of_mean);
  if (m.heavy_tail) s += " (heavy tail)";
  return s;
}

Sampler parse_sampler(const std::string& name) {
  if (name == "dense") return Sampler::dense;
  if (name == "tridiagonal") return Sampler::tridiagonal;
  throw std::invalid_argument("unknown sampler '" + name + "' (expected dense or tridiagonal)");
}

void emit_histograms(const RunConfig& c, const Histogram& ratios, const Histogram& folded,
                     std::ostream& out) {
  const TableFormat format = table_format(c, TableFormat::csv);
  emit(histogram_table(ratios), format, c.out, out);
  if (!c.folded_out.empty()) write_table(histogram_table(folded), format, c.folded_out);
}

int cmd_surmise_table(const RunConfig& c, std::ostream& out) {
  Table t;
  t.columns = {"quantity", "poisson", "goe", "gue", "gse"};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SurmiseConstants> k;
  for (int beta : {1, 2, 4}) k.push_back(surmise_constants(beta));
  const TheoreticalMeans poisson = theoretical_means(Ensemble::poisson);
  auto row = [&](const std::string& label, double p, auto get) {
    t.labels.push_back(label);
    t.rows.push_back({p, get(k[0]), get(k[1]), get(k[2])});
  };
  row("Z", nan, [](const SurmiseConstants& s) { return s.normalization; });
  row("c", nan, [](const SurmiseConstants& s) { return s.balance; });
  row("C", nan, [](const SurmiseConstants& s) { return s.reference_amplitude; });
  row("mean_r_W", poisson.mean_r, [](const SurmiseConstants& s) { return s.mean_r; });
  row("mean_r_fit", nan, [](const SurmiseConstants& s) { return s.mean_r_fit; });
  row("mean_rtilde_W", poisson.mean_rtilde, [](const SurmiseConstants& s) { return s.mean_rtilde; });
  row("mean_rtilde_fit", nan, [](const SurmiseConstants& s) { return s.mean_rtilde_fit; });
  emit(t, table_format(c, TableFormat::txt), c.out, out);
  return 0;
}

int cmd_sample(const RunConfig& c, std::ostream& out) {
  SweepConfig s;
  s.kind = parse_ensemble(c.ensemble);
  s.size = c.size;
  s.realizations = c.realizations;
  s.bulk_fraction = bulk_or(c, 0.5);
  s.ratio_edges = ratio_edges(c);
  s.folded_edges = folded_edges(c);
  s.seed = c.seed;
  s.workers = c.workers;
  s.sampler = parse_sampler(c.sampler);
  const SweepResult r = run_realizations(s);
  comment(out, "ensemble", c.ensemble);
  comment(out, "realizations", std::to_string(r.realizations));
  if (r.mean_rtilde) comment(out, "mean_rtilde", pm(*r.mean_rtilde));
  if (r.mean_r) comment(out, "mean_r", pm(*r.mean_r));
  if (r.fit) {
    comment(out, "C", format_number(r.fit->amplitude) + " +- " +
                          format_number(r.fit->stderr_of_amplitude));
  }
  if (r.skipped_zero_spacings > 0) {
    comment(out, "skipped_zero_spacings", std::to_string(r.skipped_zero_spacings));
  }
  emit_histograms(c, r.ratios, r.folded, out);
  return 0;
}

int cmd_analyze(const RunConfig& c, std::ostream& out, std::ostream& err) {
  LevelFile file;
  file.path = c.input;
  file.format = parse_level_format(c.level_format);
  file.skip = c.skip;
  file.take = c.take;
  std::vector<std::string> warnings;
  const Spectrum spectrum = read_levels(file, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  AnalyzeOptions options;
  options.bulk_fraction = bulk_or(c, 1.0);
  options.ratio_edges = ratio_edges(c);
  options.folded_edges = folded_edges(c);
  if (c.reference) options.reference = RatioLaw::of(parse_ensemble(*c.reference));
  const SpectrumReport report = analyze_spectrum(spectrum, options);
  std::istringstream lines(render_report(report));
  for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
  emit_histograms(c, report.ratios, report.folded, out);
  return 0;
}

int cmd_exact_gue(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.ngrid < 1) throw std::invalid_argument("--ngrid must be positive");
  const double rmax = c.rmax.value_or(5.0);
  if (!(rmax > 0.0)) throw std::invalid_argument("--rmax must be positive");
  std::vector<double> grid(static_cast<std::size_t>(c.ngrid));
  for (int k = 0; k < c.ngrid; ++k) grid[static_cast<std::size_t>(k)] = rmax * (k + 1) / c.ngrid;
  ExactRatioOptions options;
  options.t_max = c.tmax;
  options.order = c.order;
  options.n_t = c.nt;
  options.workers = c.workers;
  const ExactRatioTable table = exact_ratio_pdf(grid, options);
  err << "info: raw normalization " << format_number(table.raw_normalization) << ", "
      << table.clipped << " round-off values clipped\n";
  Table t;
  t.columns = {"r", "P(r)"};
  for (std::size_t i = 0; i < table.r.size(); ++i) t.rows.push_back({table.r[i], table.density[i]});
  emit(t, table_format(c, TableFormat::txt), c.out, out);
  return 0;
}

int cmd_ising(const RunConfig& c, std::ostream& out, std::ostream& err) {
  IsingParams params;
  params.length = c.L;
  params.lambda = c.lambda;
  params.alpha = c.alpha;
  const IsingStats s =
      ising_ratio_stats(params, c.sector, bulk_or(c, 0.9), ratio_edges(c), folded_edges(c));
  for (const auto& w : s.warnings) err << "warning: " << w << '\n';
  comment(out, "dimension", std::to_string(s.dimension));
  comment(out, "mean_rtilde", pm(s.mean_rtilde));
  comment(out, "mean_r", pm(s.mean_r));
  comment(out, "ks_goe", format_number(s.ks_goe));
  emit_histograms(c, s.ratios, s.folded, out);
  return 0;
}

int cmd_fit(const RunConfig& c, std::ostream& out) {
  const Histogram h = read_histogram_csv(c.input);
  const int beta = dyson_index(parse_ensemble(c.ensemble));
  const AmplitudeFit fit = fit_amplitude(h, beta);
  out << "C " << format_number(fit.amplitude) << " +- " << format_number(fit.stderr_of_amplitude)
      << '\n';
  out << "reference " << format_number(surmise_constants(beta).reference_amplitude) << '\n';
  out << "residual_norm " << format_number(fit.residual_norm) << '\n';
  out << "bins_used " << fit.bins_used << '\n';
  return 0;
}

int cmd_scaling(const RunConfig& c, std::ostream& out) {
  SweepConfig s;
  s.kind = parse_ensemble(c.ensemble);
  s.realizations = c.realizations;
  s.bulk_fraction = bulk_or(c, 0.5);
  s.ratio_edges = ratio_edges(c);
  s.seed = c.seed;
  s.workers = c.workers;
  s.sampler = parse_sampler(c.sampler);
  const ScalingCurve curve = amplitude_scaling_curve(s, c.sizes);
  if (curve.log_slope) comment(out, "log_slope", format_number(*curve.log_slope));
  Table t;
  t.columns = {"N", "C", "stderr", "C_N", "N_C_N"};
  for (const auto& p : curve.points) {
    t.rows.push_back({static_cast<double>(p.size), p.fit.amplitude, p.fit.stderr_of_amplitude,
                      p.deviation, p.size * p.deviation});
  }
  emit(t, table_format(c, TableFormat::csv), c.out, out);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spacing-ratio statistics of random matrices and physical spectra", "ratiostat"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  RunConfig config;
  std::string config_path;
  std::map<std::string, CLI::App*> subs;
  for (const Command& cmd : commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    if (cmd.takes_input) sub->add_option("input", config.input, "input file")->required();
    for (const std::string& key : cmd.keys) field(key).add(*sub, config);
    sub->add_option("--config", config_path, "JSON file of flag values");
    subs[cmd.name] = sub;
  }

  if (argc <= 1) {
    err << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto chosen = app.get_subcommands();
    err << (chosen.empty() ? app.help() : chosen.front()->help());
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  config.subcommand = sub->get_name();
  try {
    if (!config_path.empty()) apply_config(config_path, *sub, config);
    const std::string& name = config.subcommand;
    if (name == "surmise-table") return cmd_surmise_table(config, out);
    if (name == "sample") return cmd_sample(config, out);
    if (name == "analyze") return cmd_analyze(config, out, err);
    if (name == "exact-gue") return cmd_exact_gue(config, out, err);
    if (name == "ising") return cmd_ising(config, out, err);
    if (name == "fit") return cmd_fit(config, out);
    if (name == "scaling") return cmd_scaling(config, out);
    throw std::logic_error("unhandled subcommand " + name);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n' << sub->help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ratiostat
