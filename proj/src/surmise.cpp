#include "ratiostat/surmise.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ratiostat/quadrature.hpp"

namespace ratiostat {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double sqrt3 = std::numbers::sqrt3;

void check_nonnegative(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("ratio argument must be >= 0");
}

}  // namespace

int dyson_index(Ensemble e) noexcept {
  switch (e) {
    case Ensemble::poisson: return 0;
    case Ensemble::goe: return 1;
    case Ensemble::gue: return 2;
    case Ensemble::gse: return 4;
  }
  return 0;
}

Ensemble ensemble_from_beta(int beta) {
  switch (beta) {
    case 0: return Ensemble::poisson;
    case 1: return Ensemble::goe;
    case 2: return Ensemble::gue;
    case 4: return Ensemble::gse;
    default: throw std::invalid_argument("unsupported Dyson index " + std::to_string(beta));
  }
}

const char* to_string(Ensemble e) {
  switch (e) {
    case Ensemble::poisson: return "poisson";
    case Ensemble::goe: return "goe";
    case Ensemble::gue: return "gue";
    case Ensemble::gse: return "gse";
  }
  return "?";
}

Ensemble parse_ensemble(const std::string& name) {
  if (name == "poisson") return Ensemble::poisson;
  if (name == "goe") return Ensemble::goe;
  if (name == "gue") return Ensemble::gue;
  if (name == "gse") return Ensemble::gse;
  throw std::invalid_argument("unknown ensemble '" + name + "'");
}

void check_beta(int beta) {
  if (beta != 1 && beta != 2 && beta != 4) {
    throw std::invalid_argument("unsupported Dyson index " + std::to_string(beta) +
                                " (expected 1, 2 or 4)");
  }
}

SurmiseConstants surmise_constants(int beta) {
  check_beta(beta);
  SurmiseConstants c;
  c.beta = beta;
  switch (beta) {
    case 1:
      c.normalization = 8.0 / 27.0;
      c.balance = 2.0 * (pi - 2.0) / (4.0 - pi);
      c.reference_amplitude = 0.233378;
      c.mean_r = 7.0 / 4.0;
      c.mean_rtilde = 4.0 - 2.0 * sqrt3;
      c.mean_r_fit = 1.7781;
      c.mean_rtilde_fit = 0.5307;
      break;
    case 2:
      c.normalization = 4.0 / 81.0 * pi / sqrt3;
      c.balance = 4.0 * (4.0 - pi) / (3.0 * pi - 8.0);
      c.reference_amplitude = 0.578846;
      c.mean_r = 27.0 / 8.0 * sqrt3 / pi - 0.5;
      c.mean_rtilde = 2.0 * sqrt3 / pi - 0.5;
      c.mean_r_fit = 1.3684;
      c.mean_rtilde_fit = 0.5996;
      break;
    default:
      c.normalization = 4.0 / 729.0 * pi / sqrt3;
      c.balance = 8.0 * (32.0 - 9.0 * pi) / (45.0 * pi - 128.0);
      c.reference_amplitude = 3.60123;
      c.mean_r = 243.0 / 80.0 * sqrt3 / pi - 0.5;
      c.mean_rtilde = 32.0 / 15.0 * sqrt3 / pi - 0.5;
      c.mean_r_fit = 1.1769;
      c.mean_rtilde_fit = 0.6744;
      break;
  }
  return c;
}

double surmise_pdf(int beta, double r) {
  check_beta(beta);
  check_nonnegative(r);
  if (r == 0.0) return 0.0;
  const double z = surmise_constants(beta).normalization;
  if (r > 1e15) {
    // Evaluate through the mirror point to keep powers of r finite.
    const double q = 1.0 / r;
    return q * q * surmise_pdf(beta, q);
  }
  const double num = std::pow(r + r * r, beta);
  const double den = std::pow(1.0 + r + r * r, 1.0 + 1.5 * beta);
  return num / (den * z);
}

double poisson_pdf(double r) {
  check_nonnegative(r);
  return 1.0 / ((1.0 + r) * (1.0 + r));
}

double correction_shape(int beta, double r) {
  check_beta(beta);
  check_nonnegative(r);
  // (r + 1/r)^-1 = r / (1 + r^2), finite at r = 0 and r = inf.
  const double u = std::isinf(r) ? 0.0 : r / (1.0 + r * r);
  const double c = surmise_constants(beta).balance;
  const double ub = std::pow(u, beta);
  return (ub - c * ub * u) / ((1.0 + r) * (1.0 + r));
}

double correction_pdf(int beta, double amplitude, double r) {
  return amplitude * correction_shape(beta, r);
}

double fitted_pdf(int beta, double amplitude, double r) {
  return surmise_pdf(beta, r) + correction_pdf(beta, amplitude, r);
}

RatioLaw RatioLaw::poisson() { return RatioLaw(0, 0.0); }

RatioLaw RatioLaw::surmise(int beta) {
  check_beta(beta);
  return RatioLaw(beta, 0.0);
}

RatioLaw RatioLaw::fitted(int beta, double amplitude) {
  check_beta(beta);
  return RatioLaw(beta, amplitude);
}

RatioLaw RatioLaw::of(Ensemble e) {
  return e == Ensemble::poisson ? poisson() : surmise(dyson_index(e));
}

std::string RatioLaw::name() const {
  if (beta_ == 0) return "poisson";
  std::string n = to_string(ensemble_from_beta(beta_));
  if (amplitude_ != 0.0) n += "+fit";
  return n;
}

double RatioLaw::pdf(double r) const {
  if (beta_ == 0) return poisson_pdf(r);
  return fitted_pdf(beta_, amplitude_, r);
}

double RatioLaw::folded_pdf(double rtilde) const {
  if (!(rtilde >= 0.0 && rtilde <= 1.0)) {
    throw std::invalid_argument("folded ratio must lie in [0, 1]");
  }
  return 2.0 * pdf(rtilde);
}

double RatioLaw::cdf(double r) const {
  check_nonnegative(r);
  if (beta_ == 0) return std::isinf(r) ? 1.0 : r / (1.0 + r);
  if (r == 0.0) return 0.0;
  if (r == 1.0) return 0.5;
  if (std::isinf(r)) return 1.0;
  // P(r) = P(1/r) / r^2 gives P(R > r) = P(R < 1/r), so every evaluation
  // reduces to an integral over a subinterval of [0, 1].
  const double x = r < 1.0 ? r : 1.0 / r;
  const double head = integrate_adaptive([this](double s) { return pdf(s); }, 0.0, x).value;
  return r < 1.0 ? head : 1.0 - head;
}

double RatioLaw::folded_cdf(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("folded ratio must lie in [0, 1]");
  return 2.0 * cdf(x);
}

double folded_pdf(const RatioLaw& base, double rtilde) { return base.folded_pdf(rtilde); }

double reference_cdf(const RatioLaw& law, double r) { return law.cdf(r); }

TheoreticalMeans theoretical_means(Ensemble e) {
  TheoreticalMeans m;
  if (e == Ensemble::poisson) {
    m.mean_r = std::numeric_limits<double>::infinity();
    m.mean_rtilde = 2.0 * std::numbers::ln2 - 1.0;
    return m;
  }
  const auto c = surmise_constants(dyson_index(e));
  m.mean_r = c.mean_r;
  m.mean_rtilde = c.mean_rtilde;
  m.mean_r_fit = c.mean_r_fit;
  m.mean_rtilde_fit = c.mean_rtilde_fit;
  return m;
}

IntegratedMeans integrated_means(int beta, double amplitude) {
  check_beta(beta);
  // On r > 1 substitute r -> 1/r with P(1/q)/q^2 = P(q):
  //   int_1^inf r P(r) dr = int_0^1 P(q) / q dq.
  const auto p = [&](double q) { return fitted_pdf(beta, amplitude, q); };
  const double low_r = integrate_adaptive([&](double q) { return q * p(q); }, 0.0, 1.0).value;
  const double high_r = integrate_adaptive([&](double q) { return q > 0.0 ? p(q) / q : 0.0; },
                                           0.0, 1.0).value;
  return {low_r + high_r, 2.0 * low_r};
}

SpacingSurmiseConstants spacing_surmise_constants(int beta) {
  check_beta(beta);
  // int a s^beta e^{-b s^2} ds = a G((beta+1)/2) / (2 b^{(beta+1)/2}) = 1
  // int a s^{beta+1} e^{-b s^2} ds = a G((beta+2)/2) / (2 b^{(beta+2)/2}) = 1
  const double g1 = std::tgamma((beta + 1) / 2.0);
  const double g2 = std::tgamma((beta + 2) / 2.0);
  SpacingSurmiseConstants c;
  c.b = (g2 / g1) * (g2 / g1);
  c.a = 2.0 * std::pow(c.b, (beta + 1) / 2.0) / g1;
  return c;
}

double spacing_surmise_pdf(int beta, double s) {
  check_nonnegative(s);
  const auto c = spacing_surmise_constants(beta);
  if (s == 0.0) return 0.0;
  // Log form: pow(s, beta) overflows before the Gaussian underflows.
  return c.a * std::exp(beta * std::log(s) - c.b * s * s);
}

AmplitudeFit fit_amplitude(const Histogram& histogram, int beta) {
  check_beta(beta);
  if (histogram.total == 0) throw std::invalid_argument("fit_amplitude: empty histogram");
  static const QuadratureRule unit = gauss_legendre(4, 0.0, 1.0);

  double sw = 0.0;
  double swgg = 0.0;
  double swgd = 0.0;
  double var_num = 0.0;
  std::size_t used = 0;
  std::vector<double> shape(histogram.bins());
  std::vector<double> base(histogram.bins());
  const double total = static_cast<double>(histogram.total);
  for (std::size_t b = 0; b < histogram.bins(); ++b) {
    const double w = static_cast<double>(histogram.counts[b]);
    const double lo = histogram.edges[b];
    const double width = histogram.width(b);
    double g = 0.0;
    double p = 0.0;
    for (std::size_t k = 0; k < unit.nodes.size(); ++k) {
      const double r = lo + width * unit.nodes[k];
      g += unit.weights[k] * correction_shape(beta, r);
      p += unit.weights[k] * surmise_pdf(beta, r);
    }
    shape[b] = g;
    base[b] = p;
    if (w == 0.0) continue;
    ++used;
    const double d = histogram.density(b) - p;
    sw += w;
    swgg += w * g * g;
    swgd += w * g * d;
    // Var(density_b) ~ count_b / (total width_b)^2 under multinomial sampling.
    const double var_d = w / ((total * width) * (total * width));
    var_num += w * w * g * g * var_d;
  }
  if (!(swgg > 0.0)) throw std::invalid_argument("fit_amplitude: zero-variance design");

  AmplitudeFit fit;
  fit.amplitude = swgd / swgg;
  fit.stderr_of_amplitude = std::sqrt(var_num) / swgg;
  fit.bins_used = used;
  double res = 0.0;
  for (std::size_t b = 0; b < histogram.bins(); ++b) {
    const double w = static_cast<double>(histogram.counts[b]);
    const double e = histogram.density(b) - base[b] - fit.amplitude * shape[b];
    res += w * e * e;
  }
  fit.residual_norm = std::sqrt(res / sw);
  return fit;
}

}  // namespace ratiostat
