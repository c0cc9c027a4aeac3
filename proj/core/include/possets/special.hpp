#pragma once

namespace possets {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
/// Series expansion for x < a + 1, continued fraction otherwise.
double gamma_p(double a, double x);

/// Chi-squared CDF with dof degrees of freedom: P(dof/2, x/2).
double chi2_cdf(int dof, double x);

double chi2_pdf(int dof, double x);

/// Quantile of the chi-squared distribution: the x with chi2_cdf(dof, x) = p,
/// found by bracketed bisection with Newton polish, absolute tolerance 1e-10.
/// Requires 1 <= dof <= 10000 and 0 < p < 1.
double chi2_inv(int dof, double p);

}  // namespace possets
