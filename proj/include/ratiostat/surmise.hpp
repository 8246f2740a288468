#pragma once

// Closed-form reference laws for the ratio r of consecutive level spacings:
// the Poisson law, the three-level Wigner-like surmise, its one-parameter
// polynomial correction, their constants and means, and the least-squares
// fit of the correction amplitude to histogram data.

#include <optional>
#include <string>

#include "ratiostat/spectra.hpp"

namespace ratiostat {

enum class Ensemble { poisson, goe, gue, gse };

/// Dyson index: 0 for Poisson, else 1, 2, 4.
int dyson_index(Ensemble e) noexcept;
Ensemble ensemble_from_beta(int beta);
const char* to_string(Ensemble e);
/// Parses "poisson", "goe", "gue", "gse" (case-sensitive).
Ensemble parse_ensemble(const std::string& name);

/// Throws std::invalid_argument unless beta is 1, 2 or 4.
void check_beta(int beta);

struct SurmiseConstants {
  int beta = 0;
  double normalization = 0.0;     ///< Z_beta
  double balance = 0.0;           ///< c_beta, zero-integral condition of the correction
  double reference_amplitude = 0.0;  ///< large-N fitted C
  double mean_r = 0.0;            ///< <r> under the surmise
  double mean_rtilde = 0.0;       ///< <min(r,1/r)> under the surmise
  double mean_r_fit = 0.0;        ///< large-N <r> from numerics
  double mean_rtilde_fit = 0.0;   ///< large-N <min(r,1/r)> from numerics
};

SurmiseConstants surmise_constants(int beta);

/// P_W(r) = (r + r^2)^beta / (Z (1 + r + r^2)^(1 + 3 beta / 2)).
double surmise_pdf(int beta, double r);

/// 1 / (1 + r)^2.
double poisson_pdf(double r);

/// Correction shape with unit amplitude:
/// (1+r)^-2 [(r + 1/r)^-beta - c_beta (r + 1/r)^-(beta+1)]. Zero at r = 0.
double correction_shape(int beta, double r);

/// amplitude * correction_shape(beta, r).
double correction_pdf(int beta, double amplitude, double r);

/// surmise_pdf + correction_pdf.
double fitted_pdf(int beta, double amplitude, double r);

/// A ratio law: Poisson, surmise, or surmise plus fitted correction.
class RatioLaw {
 public:
  static RatioLaw poisson();
  static RatioLaw surmise(int beta);
  static RatioLaw fitted(int beta, double amplitude);
  /// Surmise for beta ensembles, Poisson law for Ensemble::poisson.
  static RatioLaw of(Ensemble e);

  int beta() const noexcept { return beta_; }
  double amplitude() const noexcept { return amplitude_; }
  std::string name() const;

  double pdf(double r) const;
  /// Density of min(r, 1/r) on [0, 1]: 2 pdf(rtilde).
  double folded_pdf(double rtilde) const;
  /// P(R <= r). Closed form for Poisson; otherwise adaptive quadrature of
  /// the density on [0, min(r, 1/r)] combined with F(r) = 1 - F(1/r).
  double cdf(double r) const;
  /// P(min(R, 1/R) <= x) for x in [0, 1], equal to 2 cdf(x).
  double folded_cdf(double x) const;

 private:
  RatioLaw(int beta, double amplitude) : beta_(beta), amplitude_(amplitude) {}
  int beta_;  // 0 = Poisson
  double amplitude_;
};

/// 2 * base.pdf(rtilde); rejects rtilde outside [0, 1].
double folded_pdf(const RatioLaw& base, double rtilde);

/// Cumulative distribution of `law` at r >= 0.
double reference_cdf(const RatioLaw& law, double r);

struct TheoreticalMeans {
  /// Infinite for Poisson.
  double mean_r = 0.0;
  double mean_rtilde = 0.0;
  /// Large-N numerical values; absent for Poisson.
  std::optional<double> mean_r_fit;
  std::optional<double> mean_rtilde_fit;
};

TheoreticalMeans theoretical_means(Ensemble e);

/// <r> and <rtilde> obtained by integrating fitted_pdf(beta, amplitude, .).
struct IntegratedMeans {
  double mean_r = 0.0;
  double mean_rtilde = 0.0;
};
IntegratedMeans integrated_means(int beta, double amplitude);

/// Wigner spacing surmise P(s) = a s^beta exp(-b s^2), with a and b fixed
/// by unit normalization and unit mean.
struct SpacingSurmiseConstants {
  double a = 0.0;
  double b = 0.0;
};
SpacingSurmiseConstants spacing_surmise_constants(int beta);
double spacing_surmise_pdf(int beta, double s);

struct AmplitudeFit {
  double amplitude = 0.0;
  double stderr_of_amplitude = 0.0;
  /// sqrt(sum_b w_b (density_b - model_b)^2 / sum_b w_b)
  double residual_norm = 0.0;
  std::size_t bins_used = 0;
};

/// Weighted least squares for C in density_b ~ <P_W + C dP>_b, weights
/// w_b = count_b. Model values are bin averages (4-point Gauss-Legendre per
/// bin). Linear in C, solved in closed form.
AmplitudeFit fit_amplitude(const Histogram& histogram, int beta);

}  // namespace ratiostat
