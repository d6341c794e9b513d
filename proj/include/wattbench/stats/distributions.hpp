#pragma once

namespace wattbench::stats {

// Tail probabilities used by the hypothesis tests. Incomplete gamma and beta
// are evaluated by series / modified-Lentz continued fractions to ~1e-15
// relative; nothing here depends on a platform statistics library.

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b), a, b > 0, 0 <= x <= 1.
double regularized_beta(double a, double b, double x);

double normal_cdf(double z);
double normal_sf(double z);

/// Inverse standard normal CDF (Wichura's AS 241, ~1e-16 relative).
double normal_quantile(double p);

/// Upper tail of the chi-squared distribution with `df` degrees of freedom.
double chi_squared_sf(double x, double df);

/// Two-sided tail P(|T| >= |t|) of Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

} // namespace wattbench::stats
