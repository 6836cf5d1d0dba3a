#ifndef MITEST_SPECFUN_HPP
#define MITEST_SPECFUN_HPP

namespace mitest {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
/// Series expansion for x < a + 1, continued fraction otherwise.
double gamma_p(double a, double x);

/// Upper tail Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// Chi-square CDF with k degrees of freedom.
double chi2_cdf(double k, double x);

/// Chi-square upper tail.
double chi2_sf(double k, double x);

} // namespace mitest

#endif
