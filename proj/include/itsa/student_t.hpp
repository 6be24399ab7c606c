#pragma once

namespace itsa {

// CDF of Student's t distribution with df >= 1 degrees of freedom,
// evaluated through the regularized incomplete beta function.
// Absolute accuracy is ~1e-14 over double range.
double t_cdf(double x, int df);

// Inverse CDF for p in (0, 1). t_quantile(0.5, df) == 0 exactly.
double t_quantile(double p, int df);

}  // namespace itsa
