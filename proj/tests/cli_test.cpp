#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ratiostat/cli.hpp"
#include "ratiostat/ensembles.hpp"
#include "ratiostat/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ratiostat");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = ratiostat::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ratiostat_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("usage errors exit with status 2") {
  const Run none = run({});
  CHECK(none.code == 2);
  CHECK(none.err.find("surmise-table") != std::string::npos);
  CHECK(run({"sample", "--no-such-flag"}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"analyze"}).code == 2);
  CHECK(run({"sample", "--size", "ten"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("failures exit with status 1 and a one-line diagnostic") {
  const Run r = run({"analyze", "/nonexistent/levels.txt"});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error: ", 0) == 0);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  CHECK(run({"sample", "--ensemble", "goe", "--size", "1", "--realizations", "2"}).code == 1);
}

TEST_CASE("surmise table") {
  const Run r = run({"surmise-table"});
  CHECK(r.code == 0);
  for (const char* v : {"1.75", "1.36073502", "1.17466", "0.53589838", "0.60265779", "0.67616831", "0.386294361"}) {
    CHECK_MESSAGE(r.out.find(v) != std::string::npos, v);
  }
  CHECK(run({"surmise-table", "--format", "csv"}).out.rfind("quantity,poisson,goe,gue,gse\n", 0) == 0);
}

TEST_CASE("sample output is deterministic and honours the config file") {
  const std::vector<std::string> direct = {"sample", "--ensemble", "gue", "--size", "20",
                                           "--realizations", "30", "--seed", "6"};
  const Run a = run(direct);
  const Run b = run(direct);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("bin_lo,bin_hi,count,density") != std::string::npos);

  const fs::path cfg = scratch("config.json");
  write_file(cfg, R"({"ensemble": "gue", "size": 20, "realizations": 30, "seed": 5})");
  const Run from_file = run({"sample", "--config", cfg.string(), "--seed", "6"});
  CHECK(from_file.code == 0);
  CHECK(from_file.out == a.out);
  const Run file_seed = run({"sample", "--config", cfg.string()});
  CHECK(file_seed.out != a.out);

  write_file(cfg, R"({"sizee": 20})");
  CHECK(run({"sample", "--config", cfg.string()}).code == 2);
  write_file(cfg, R"({"size": "twenty"})");
  CHECK(run({"sample", "--config", cfg.string()}).code != 0);
}

TEST_CASE("sample then fit") {
  const fs::path hist = scratch("gue_hist.csv");
  const Run s = run({"sample", "--ensemble", "gue", "--size", "60", "--realizations", "200",
                     "--out", hist.string()});
  REQUIRE(s.code == 0);
  const Run f = run({"fit", hist.string(), "--ensemble", "gue"});
  CHECK(f.code == 0);
  CHECK(f.out.rfind("C ", 0) == 0);
  CHECK(f.out.find("reference 0.578846") != std::string::npos);
}

TEST_CASE("analyze picks Poisson for exponential spacings") {
  ratiostat::Rng rng(21);
  const ratiostat::Spectrum s = ratiostat::sample_poisson_spectrum(20000, rng);
  const fs::path levels = scratch("poisson.txt");
  {
    std::ofstream out(levels);
    out << "# exponential spacings\n";
    for (double v : s.levels()) out << ratiostat::format_number(v) << '\n';
  }
  const Run r = run({"analyze", levels.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("# best_law poisson") != std::string::npos);
}

TEST_CASE("exact GUE table has two columns") {
  const Run r = run({"exact-gue", "--ngrid", "4", "--rmax", "2"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "# r P(r)");
  int rows = 0;
  while (std::getline(lines, line)) {
    std::istringstream f(line);
    double x, y;
    CHECK(static_cast<bool>(f >> x >> y));
    ++rows;
  }
  CHECK(rows == 4);
}

TEST_CASE("ising subcommand") {
  const Run r = run({"ising", "--L", "6", "--sector", "1"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(r.out.find("# dimension") != std::string::npos);
}
