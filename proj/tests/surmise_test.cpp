#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "ratiostat/surmise.hpp"

using namespace ratiostat;
using std::numbers::pi;

namespace {

const double sqrt3 = std::sqrt(3.0);

// Independent integrator: double-exponential on [0, inf).
double integrate_half_line(const std::function<double(double)>& f) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate(f, 1e-14);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 10, 1e-12);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = lo * std::pow(hi / lo, i / (n - 1.0));
  return r;
}

// Expected counts of a law over the bins, from an integrator the fit does not use.
Histogram synthesize(const std::function<double(double)>& pdf, const std::vector<double>& edges,
                     double total) {
  Histogram h = make_histogram(edges);
  std::uint64_t inside = 0;
  for (std::size_t b = 0; b < h.bins(); ++b) {
    h.counts[b] = static_cast<std::uint64_t>(std::llround(total * integrate(pdf, edges[b], edges[b + 1])));
    inside += h.counts[b];
  }
  h.total = static_cast<std::uint64_t>(total);
  h.overflow = h.total - inside;
  return h;
}

}  // namespace

TEST_CASE("constants match their closed forms") {
  const auto c1 = surmise_constants(1);
  const auto c2 = surmise_constants(2);
  const auto c4 = surmise_constants(4);
  CHECK(c1.normalization == doctest::Approx(8.0 / 27).epsilon(1e-15));
  CHECK(c2.normalization == doctest::Approx(4.0 / 81 * pi / sqrt3).epsilon(1e-15));
  CHECK(c4.normalization == doctest::Approx(4.0 / 729 * pi / sqrt3).epsilon(1e-15));
  CHECK(c1.balance == doctest::Approx(2 * (pi - 2) / (4 - pi)).epsilon(1e-15));
  CHECK(c2.balance == doctest::Approx(4 * (4 - pi) / (3 * pi - 8)).epsilon(1e-15));
  CHECK(c4.balance == doctest::Approx(8 * (32 - 9 * pi) / (45 * pi - 128)).epsilon(1e-15));
  CHECK(c1.mean_r == 1.75);
  CHECK(c2.mean_r == doctest::Approx(27.0 / 8 * sqrt3 / pi - 0.5).epsilon(1e-15));
  CHECK(c4.mean_r == doctest::Approx(243.0 / 80 * sqrt3 / pi - 0.5).epsilon(1e-15));
  CHECK(c1.mean_rtilde == doctest::Approx(4 - 2 * sqrt3).epsilon(1e-15));
  CHECK(c2.mean_rtilde == doctest::Approx(2 * sqrt3 / pi - 0.5).epsilon(1e-15));
  CHECK(c4.mean_rtilde == doctest::Approx(32.0 / 15 * sqrt3 / pi - 0.5).epsilon(1e-15));
  CHECK(c1.reference_amplitude == 0.233378);
  CHECK(c2.reference_amplitude == 0.578846);
  CHECK(c4.reference_amplitude == 3.60123);
  CHECK_THROWS(surmise_constants(3));
  CHECK_THROWS(surmise_constants(0));

  const auto poisson = theoretical_means(Ensemble::poisson);
  CHECK(std::isinf(poisson.mean_r));
  CHECK(poisson.mean_rtilde == doctest::Approx(2 * std::log(2.0) - 1).epsilon(1e-15));
  CHECK_FALSE(poisson.mean_rtilde_fit.has_value());
  CHECK(theoretical_means(Ensemble::gue).mean_rtilde_fit.value() == 0.5996);
}

TEST_CASE("point values") {
  CHECK(surmise_pdf(1, 1.0) == doctest::Approx(2.0 * 27 / (8 * std::pow(3.0, 2.5))).epsilon(1e-14));
  CHECK(surmise_pdf(1, 1.0) == doctest::Approx(0.433013).epsilon(1e-6));
  for (int beta : {1, 2, 4}) CHECK(surmise_pdf(beta, 0.0) == 0.0);
  CHECK(poisson_pdf(0) == 1.0);
  CHECK(poisson_pdf(1) == 0.25);
  CHECK(poisson_pdf(3) == 0.0625);
  CHECK_THROWS(poisson_pdf(-1));
  CHECK_THROWS(surmise_pdf(1, -0.5));
  CHECK_THROWS(surmise_pdf(3, 1.0));

  const double c1 = 2 * (pi - 2) / (4 - pi);
  const double expected = 0.233378 / 4 * (0.5 - c1 * 0.25);
  CHECK(correction_pdf(1, 0.233378, 1.0) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(correction_pdf(1, 0.233378, 1.0) == doctest::Approx(-0.009624).epsilon(1e-4));
  for (int beta : {1, 2, 4}) {
    CHECK(correction_shape(beta, 0.0) == 0.0);
    for (double r : {0.0, 0.3, 1.0, 7.0}) {
      CHECK(correction_pdf(beta, 0.0, r) == 0.0);
      CHECK(fitted_pdf(beta, 0.0, r) == surmise_pdf(beta, r));
    }
  }

  const RatioLaw p = RatioLaw::poisson();
  CHECK(p.folded_pdf(0.0) == 2.0);
  CHECK(p.folded_pdf(1.0) == 0.5);
  CHECK_THROWS(p.folded_pdf(1.5));
  CHECK_THROWS(folded_pdf(p, -0.1));
}

TEST_CASE("densities satisfy P(r) = P(1/r) / r^2") {
  for (int beta : {1, 2, 4}) {
    const double c = surmise_constants(beta).reference_amplitude;
    for (double r : log_grid(1e-3, 1e3, 100)) {
      const double inv = 1.0 / r / r;
      CHECK(surmise_pdf(beta, r) == doctest::Approx(surmise_pdf(beta, 1 / r) * inv).epsilon(1e-12));
      CHECK(correction_pdf(beta, c, r) == doctest::Approx(correction_pdf(beta, c, 1 / r) * inv).epsilon(1e-12));
      CHECK(fitted_pdf(beta, c, r) == doctest::Approx(fitted_pdf(beta, c, 1 / r) * inv).epsilon(1e-12));
    }
  }
}

TEST_CASE("asymptotic exponents") {
  for (int beta : {1, 2, 4}) {
    const double small = std::log(surmise_pdf(beta, 1e-4) / surmise_pdf(beta, 1e-6)) / std::log(100.0);
    const double large = std::log(surmise_pdf(beta, 1e6) / surmise_pdf(beta, 1e4)) / std::log(100.0);
    CHECK(std::abs(small - beta) < 1e-3);
    CHECK(std::abs(large + 2 + beta) < 1e-3);
  }
}

TEST_CASE("normalization and means by independent quadrature") {
  for (int beta : {1, 2, 4}) {
    const auto c = surmise_constants(beta);
    const auto pdf = [beta](double r) { return surmise_pdf(beta, r); };
    CHECK(std::abs(integrate_half_line(pdf) - 1.0) < 1e-10);
    CHECK(std::abs(integrate_half_line([&](double r) { return r * pdf(r); }) - c.mean_r) < 1e-8);
    // Folded mean: 2 * int_0^1 r P(r) dr.
    CHECK(std::abs(2 * integrate([&](double r) { return r * pdf(r); }, 0, 1) - c.mean_rtilde) < 1e-8);
    // The correction integrates to zero, so it cannot move the normalization.
    CHECK(std::abs(integrate_half_line([beta](double r) { return correction_shape(beta, r); })) < 1e-10);

    const auto m = integrated_means(beta, c.reference_amplitude);
    const auto fitted = [&](double r) { return fitted_pdf(beta, c.reference_amplitude, r); };
    CHECK(m.mean_r == doctest::Approx(integrate_half_line([&](double r) { return r * fitted(r); })).epsilon(1e-8));
    CHECK(m.mean_rtilde == doctest::Approx(2 * integrate([&](double r) { return r * fitted(r); }, 0, 1)).epsilon(1e-8));
  }
  // Fitted means reproduce the large-N numbers they were fitted to.
  CHECK(integrated_means(1, 0.233378).mean_rtilde == doctest::Approx(0.5307).epsilon(3e-4));
  CHECK(integrated_means(2, 0.578846).mean_rtilde == doctest::Approx(0.5996).epsilon(3e-4));
  CHECK(integrated_means(4, 3.60123).mean_rtilde == doctest::Approx(0.6744).epsilon(3e-4));
}

TEST_CASE("cumulative distributions") {
  CHECK(RatioLaw::poisson().cdf(1.0) == 0.5);
  for (const RatioLaw& law : {RatioLaw::poisson(), RatioLaw::surmise(1), RatioLaw::surmise(2),
                              RatioLaw::surmise(4), RatioLaw::fitted(2, 0.578846)}) {
    CHECK(law.cdf(0.0) == 0.0);
    // F(1) = 1/2 for any law with the inversion symmetry.
    CHECK(law.cdf(1.0) == doctest::Approx(0.5).epsilon(1e-10));
    double prev = 0.0;
    for (double r : log_grid(1e-3, 1e4, 60)) {
      const double f = law.cdf(r);
      CHECK(f >= prev);
      prev = f;
    }
    CHECK(law.folded_cdf(1.0) == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(std::abs(RatioLaw::surmise(1).cdf(1e12) - 1.0) < 1e-8);
  const RatioLaw goe = RatioLaw::surmise(1);
  for (double r : {0.2, 0.7, 2.5, 40.0}) {
    const double ref = integrate([](double x) { return surmise_pdf(1, x); }, 0, r);
    CHECK(std::abs(goe.cdf(r) - ref) < 1e-10);
    CHECK(reference_cdf(goe, r) == goe.cdf(r));
  }
  CHECK_THROWS(goe.folded_cdf(1.2));
}

TEST_CASE("spacing surmise has unit mass and unit mean") {
  for (int beta : {1, 2, 4}) {
    const auto pdf = [beta](double s) { return spacing_surmise_pdf(beta, s); };
    CHECK(pdf(0.0) == 0.0);
    CHECK(std::abs(integrate_half_line(pdf) - 1) < 1e-12);
    CHECK(std::abs(integrate_half_line([&](double s) { return s * pdf(s); }) - 1) < 1e-12);
  }
  CHECK(spacing_surmise_constants(1).b == doctest::Approx(pi / 4).epsilon(1e-14));
  CHECK(spacing_surmise_constants(2).a == doctest::Approx(32 / (pi * pi)).epsilon(1e-14));
  CHECK_THROWS(spacing_surmise_constants(3));
}

TEST_CASE("amplitude fit") {
  const auto edges = uniform_edges(0.0, 6.0, 120);
  const double total = 1e13;

  SUBCASE("round trip of a planted amplitude") {
    for (double planted : {0.3, -0.2, 1.7}) {
      const Histogram h = synthesize([&](double r) { return fitted_pdf(2, planted, r); }, edges, total);
      const AmplitudeFit fit = fit_amplitude(h, 2);
      CHECK(std::abs(fit.amplitude - planted) < 1e-3);
      CHECK(fit.bins_used == 120);
      CHECK(fit.residual_norm < 1e-6);
    }
  }

  SUBCASE("surmise data gives zero amplitude") {
    for (int beta : {1, 2, 4}) {
      const Histogram h = synthesize([&](double r) { return surmise_pdf(beta, r); }, edges, total);
      const AmplitudeFit fit = fit_amplitude(h, beta);
      CHECK(std::abs(fit.amplitude) < 1e-6);
    }
  }

  SUBCASE("the fit is linear in the planted deviation") {
    // Integer counts round at 1e-15 relative here, well under the tolerance.
    const double big = 100.0 * total;
    const double c = 0.8;
    const AmplitudeFit base = fit_amplitude(synthesize([&](double r) { return fitted_pdf(4, c, r); }, edges, big), 4);
    for (double lambda : {0.5, 2.0, 0.25}) {
      const Histogram h = synthesize([&](double r) { return fitted_pdf(4, lambda * c, r); }, edges, big);
      CHECK(std::abs(fit_amplitude(h, 4).amplitude - lambda * base.amplitude) < 1e-10);
    }
  }

  CHECK_THROWS(fit_amplitude(make_histogram(edges), 2));
  CHECK_THROWS(fit_amplitude(build_histogram(std::vector<double>{1.0}, edges), 3));
  // All mass at r = 0 exactly where the correction vanishes: no information on C.
  Histogram at_zero = make_histogram({0.0, 1e-300});
  at_zero.counts[0] = 5;
  at_zero.total = 5;
  CHECK_THROWS(fit_amplitude(at_zero, 2));
}
