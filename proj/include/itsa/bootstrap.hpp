#pragma once

#include <cstdint>

#include "itsa/rng.hpp"
#include "itsa/theil_sen.hpp"

namespace itsa {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct NullTestResult {
  double asl = 1.0;          // #{beta3*_b >= beta3_observed} / B, ties included
  double p_two_sided = 1.0;  // min(1, 2 * min(p_ge, p_le))
};

// Pooled bootstrap test of "no slope change": both slope samples are
// treated as draws from one distribution, each replicate redraws
// N1 + N2 values with replacement from the pool, labels the first N1 as
// pre and the rest as post, and recomputes the median difference.
// Replicate b always consumes stream rng.child(b), so the result is
// independent of evaluation order.
NullTestResult bootstrap_null_test(const SlopeSample& pre, const SlopeSample& post, int B,
                                   RngSpec rng);

// Percentile bootstrap confidence interval for the slope change. Unlike
// the null test, each replicate resamples the pre and post slope samples
// independently (the interval should be centered at the estimate, not at
// zero). Endpoints are the alpha/2 and 1 - alpha/2 quantiles of the B
// replicate statistics.
Interval bootstrap_percentile_ci(const SlopeSample& pre, const SlopeSample& post, int B,
                                 double alpha, RngSpec rng);

// Trend bootstrap: the data-driven inference route for the slope-change
// statistic. Pairwise slopes within a segment share observations, so
// resampling the slopes themselves understates the sampling variance of
// their median (the pooled slope test above runs anticonservative on
// short segments). The trend bootstrap therefore resamples at the
// observation level: each segment is fit by its own slope median,
// residuals are median-centered, jackknife-rescaled and pooled, and
// every replicate permutes the pooled residuals over the fixed time
// grids and recomputes the slope-median difference. Fitted slopes and
// intercepts cancel in that difference, so the replicate statistics
// sample the null distribution of the estimator with the dependence
// structure intact.
NullTestResult trend_bootstrap_test(const TimeSeries& pre, const TimeSeries& post, int B,
                                    RngSpec rng);

// Percentile interval from the same resampling scheme, centered at the
// observed effect (replicate statistics are effect + residual noise).
Interval trend_bootstrap_ci(const TimeSeries& pre, const TimeSeries& post, int B, double alpha,
                            RngSpec rng);

// One-stop summary: observed effect, ASL, two-sided p and percentile CI,
// with the test and the interval drawing from disjoint child streams.
struct BootstrapResult {
  int B = 0;
  double beta3_observed = 0.0;
  double asl = 1.0;
  double p_two_sided = 1.0;
  Interval ci;
  double alpha = 0.05;
  std::uint64_t seed = 0;
};

BootstrapResult robust_inference(const TimeSeries& pre, const TimeSeries& post, int B,
                                 double alpha, RngSpec rng);

}  // namespace itsa
