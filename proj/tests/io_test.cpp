#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ratiostat/ensembles.hpp"
#include "ratiostat/io.hpp"

using namespace ratiostat;
namespace fs = std::filesystem;

namespace {

Spectrum parse(const std::string& text, LevelFile file = {}, std::vector<std::string>* warnings = nullptr) {
  std::istringstream in(text);
  return parse_levels(in, file, warnings);
}

std::vector<double> as_vector(const Spectrum& s) { return {s.levels().begin(), s.levels().end()}; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ratiostat_io_test";
  fs::create_directories(dir);
  return dir / name;
}

Spectrum poisson_levels(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_poisson_spectrum(n, rng);
}

}  // namespace

TEST_CASE("level files") {
  CHECK(as_vector(parse("1.0\n2.5\n4.0")) == std::vector<double>{1.0, 2.5, 4.0});
  CHECK(as_vector(parse("# comment\n1.0\n\n  # indented\n2.0\n")) == std::vector<double>{1.0, 2.0});
  try {
    parse("abc");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(std::string(e.what()).find(":1:") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("1\n2 3\n"), ParseError);
  CHECK_THROWS_AS(parse("1\ninf\n"), ParseError);
  CHECK_THROWS(parse("# nothing\n\n"));

  std::vector<std::string> warnings;
  CHECK(as_vector(parse("3\n1\n2\n", {}, &warnings)) == std::vector<double>{1, 2, 3});
  CHECK(warnings.size() == 1);

  LevelFile zeros{"", LevelFormat::zero_table, 1, 2};
  CHECK(as_vector(parse("1 14.134725\n2 21.022040\n3 25.010858\n4 30.424876\n", zeros)) ==
        std::vector<double>{21.022040, 25.010858});
  CHECK(as_vector(parse("14.1\n21.0\n", {"", LevelFormat::zero_table})) == std::vector<double>{14.1, 21.0});
  CHECK_THROWS(parse("1\n2\n", {"", LevelFormat::plain, 5}));

  CHECK(parse_level_format("zero-table") == LevelFormat::zero_table);
  CHECK_THROWS(parse_level_format("binary"));
  CHECK_THROWS(read_levels({"/nonexistent/levels.txt"}));
}

TEST_CASE("tables") {
  CHECK(format_number(1.75) == "1.75");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");

  Table t{{"r", "P(r)"}, {{0.5, 0.25}, {1.0, 0.125}}, {}};
  CHECK(render_table(t, TableFormat::txt) == "# r P(r)\n0.5 0.25\n1 0.125\n");
  CHECK(render_table(t, TableFormat::csv) == "r,P(r)\n0.5,0.25\n1,0.125\n");
  CHECK_THROWS(write_table(t, TableFormat::csv, "/nonexistent/dir/out.csv"));
  CHECK_THROWS(parse_table_format("xml"));

  SUBCASE("histogram round trip") {
    const auto r = ratio_series(poisson_levels(5000, 1)).values;
    const Histogram h = build_histogram(r, uniform_edges(0, 6, 120));
    const Table table = histogram_table(h);
    CHECK(table.columns == std::vector<std::string>{"bin_lo", "bin_hi", "count", "density"});
    CHECK(table.rows.size() == h.bins());
    const fs::path path = scratch("hist.csv");
    write_table(table, TableFormat::csv, path.string());
    const Histogram back = read_histogram_csv(path.string());
    CHECK(back.counts == h.counts);
    CHECK(back.total == h.total);
    CHECK(back.overflow == h.overflow);
    for (std::size_t i = 0; i < h.edges.size(); ++i) CHECK(back.edges[i] == doctest::Approx(h.edges[i]).epsilon(1e-9));
    for (std::size_t b = 0; b < h.bins(); ++b) CHECK(back.density(b) == doctest::Approx(h.density(b)).epsilon(1e-8));
  }

  SUBCASE("level round trip at printed precision") {
    const Spectrum s = poisson_levels(200, 2);
    Table t2{{"level"}, {}, {}};
    for (double v : s.levels()) t2.rows.push_back({v});
    const fs::path path = scratch("levels.txt");
    write_table(t2, TableFormat::txt, path.string());
    const Spectrum back = read_levels({path.string()});
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(back[i] - s[i]) <= 5e-9 * std::abs(s[i]));
  }

  SUBCASE("malformed histogram files") {
    std::istringstream wrong_header("r_mid,density\n0.5,1\n");
    CHECK_THROWS_AS(parse_histogram_csv(wrong_header, "h"), ParseError);
    std::istringstream gap("bin_lo,bin_hi,count,density\n0,1,1,0.5\n2,3,1,0.5\n");
    CHECK_THROWS_AS(parse_histogram_csv(gap, "h"), ParseError);
    std::istringstream fractional("bin_lo,bin_hi,count,density\n0,1,1.5,0.5\n");
    CHECK_THROWS_AS(parse_histogram_csv(fractional, "h"), ParseError);
  }
}

TEST_CASE("spectrum reports") {
  SUBCASE("exponential spacings look Poisson") {
    const SpectrumReport rep = analyze_spectrum(poisson_levels(20000, 3));
    CHECK(rep.best_law == "poisson");
    CHECK(rep.distances.size() == 4);
    CHECK_FALSE(rep.degenerate);
  }

  SUBCASE("GUE levels look GUE") {
    Rng rng(8);
    std::vector<double> all;
    for (int k = 0; k < 50; ++k) {
      const Spectrum s = bulk_select(Spectrum(tridiagonal_eigenvalues(sample_tridiagonal(Ensemble::gue, 400, rng))), 0.5);
      // Disjoint blocks; the gaps between them are large and rare.
      for (double v : s.levels()) all.push_back(v + 100.0 * k);
    }
    CHECK(analyze_spectrum(Spectrum(all)).best_law == "gue");
  }

  SUBCASE("equally spaced levels are degenerate") {
    std::vector<double> grid;
    for (int i = 0; i < 50; ++i) grid.push_back(i);
    const SpectrumReport rep = analyze_spectrum(Spectrum(grid));
    CHECK(rep.degenerate);
    CHECK(rep.mean_rtilde.mean == 1.0);
    CHECK(render_report(rep).find("degenerate") != std::string::npos);
  }

  SUBCASE("affine maps leave the report unchanged") {
    const Spectrum s = poisson_levels(3000, 4);
    std::vector<double> mapped;
    for (double v : s.levels()) mapped.push_back(0.125 * v - 6.0);
    const SpectrumReport a = analyze_spectrum(s);
    const SpectrumReport b = analyze_spectrum(Spectrum(mapped));
    CHECK(a.folded.counts == b.folded.counts);
    CHECK(a.mean_rtilde.mean == doctest::Approx(b.mean_rtilde.mean).epsilon(1e-12));
    CHECK(a.best_law == b.best_law);
  }

  CHECK_THROWS(analyze_spectrum(Spectrum({1, 2, 3})));
}
