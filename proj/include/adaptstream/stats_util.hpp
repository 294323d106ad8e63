#pragma once

// Small numeric helpers shared by the pruning test and the stream generators.

namespace adapt {

/// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value of Student's t statistic with df degrees of freedom.
double student_t_p_value(double t, double df);

/// Two-sample t-test p-value between samples with given size/mean/variance
/// (sample variance, ddof = 1). Pooled variance by default, Welch optional.
double two_sample_t_p_value(double n1, double mean1, double var1, double n2, double mean2,
                            double var2, bool welch = false);

/// Standard normal CDF and its inverse (Acklam's rational approximation,
/// polished with one Halley step).
double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace adapt
