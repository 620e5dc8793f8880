#pragma once

#include <functional>

namespace ars {

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal distribution function, computed via erfc.
double norm_cdf(double x);

/// Inverse of the standard normal distribution function on (0,1).
/// Rational approximation polished with one Halley step; absolute
/// accuracy better than 1e-9 over the whole open interval.
double inv_norm_cdf(double u);

/// Regularized lower incomplete gamma P(a,x). Series expansion for
/// x < a+1, continued fraction otherwise.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x). The continued
/// fraction branch evaluates Q directly, so relative accuracy is preserved
/// deep in the upper tail.
double gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a,b) via the Lentz continued fraction.
double incomplete_beta(double a, double b, double x);

/// Adaptive Gauss-Kronrod 15(7) quadrature of f over [a,b].
/// Subdivides until the local error estimate is below abs_tol spread over
/// the subintervals. Throws SolverError when the depth budget is exhausted
/// before reaching the target.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol);

}  // namespace ars
