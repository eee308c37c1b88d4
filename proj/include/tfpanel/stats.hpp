#pragma once

// Shared distribution functions used by the test statistics.

namespace tfpanel::stats {

// Standard normal CDF.
double norm_cdf(double x);

// Lower-tail p-value P(Z < z).
double norm_lower_p(double z);

// Two-sided p-value 2*P(Z > |z|).
double norm_two_sided_p(double z);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper-tail chi-square p-value with df degrees of freedom.
// df == 0 is the exactly identified edge: p = 1 when x <= 0 else 0.
double chi2_upper_p(double x, int df);

} // namespace tfpanel::stats
