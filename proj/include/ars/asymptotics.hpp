#pragma once

#include <Eigen/Core>
#include <string>

#include "ars/scores.hpp"

namespace ars {

/// Upper-tail probability of the central chi-square with k degrees of
/// freedom, via the regularized incomplete gamma (series for small x,
/// continued fraction for large). Relative accuracy about 1e-10.
double chi2_sf(double x, Eigen::Index k);

/// Inverse of 1 - chi2_sf in prob: Newton iteration with a Wilson-Hilferty
/// start, bisection safeguarded, accurate to 1e-10.
double chi2_quantile(double prob, Eigen::Index k);

/// Families of mean-zero innovation distributions with finite variance.
/// Density, distribution function, quantile, and density derivative are all
/// evaluable pointwise. The tail conditions required by the asymptotics
/// (exponential tails, finite Fisher information) hold for every member of
/// the menu by construction; they are not checked at runtime.
class InnovationDistribution {
  public:
    static InnovationDistribution normal(double sigma);
    static InnovationDistribution logistic(double scale);
    static InnovationDistribution student_t(double nu, double scale);
    static InnovationDistribution contaminated_normal(double eps, double sigma1,
                                                      double sigma2);
    /// Parse "normal(1.0)", "student_t(5,1.0)", ... as used by config files.
    static InnovationDistribution parse(const std::string& text);

    double pdf(double x) const;
    double cdf(double x) const;
    double quantile(double u) const;   ///< u in (0,1)
    double pdf_derivative(double x) const;
    double variance() const;
    std::string describe() const;

  private:
    enum class Kind { Normal, Logistic, StudentT, ContaminatedNormal };
    InnovationDistribution(Kind kind, double a, double b, double c);
    Kind kind_;
    double a_ = 1.0, b_ = 0.0, c_ = 0.0;
};

/// gamma(J,F) = int_0^1 J(v) (-f'/f)(F^{-1}(v)) dv, evaluated in the x domain
/// as -int J(F(x)) f'(x) dx by adaptive quadrature split at the median, with
/// the integration window chosen from the quantile tails. Absolute accuracy
/// 1e-7.
double gamma_jf(ScoreKind kind, const InnovationDistribution& dist);

/// Noncentrality of the limiting chi-square under the local alternative:
/// eta^2 = beta_x' Q beta_x * gamma^2(J,F) / A^2(J).
double noncentrality(const Eigen::VectorXd& beta_x, const Eigen::MatrixXd& q,
                     ScoreKind kind, const InnovationDistribution& dist);

/// P(chi^2_s(eta2) > chi^2_s(1-tau)) by the Poisson mixture of central
/// chi-squares, truncated at relative tail mass 1e-10. Exactly tau when
/// eta2 = 0.
double predicted_power(double eta2, Eigen::Index s, double tau);

/// Asymptotic power summary under a local alternative.
struct PowerPrediction {
    double eta2 = 0.0;
    Eigen::Index dof = 0;
    double level = 0.0;
    double power = 0.0;
};

PowerPrediction predict_power(const Eigen::VectorXd& beta_x, const Eigen::MatrixXd& q,
                              ScoreKind kind, const InnovationDistribution& dist,
                              Eigen::Index s, double tau);

}  // namespace ars
