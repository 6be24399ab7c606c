#include "itsa/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "itsa/errors.hpp"
#include "itsa/stats.hpp"

namespace itsa {
namespace {

void check_inputs(const SlopeSample& pre, const SlopeSample& post, int B) {
  if (pre.slopes.size() == 0 || post.slopes.size() == 0)
    raise(Errc::EmptySlopeSample, "both slope samples must be nonempty");
  if (B < 100) raise(Errc::InsufficientReplicates, "need B >= 100, got " + std::to_string(B));
}

}  // namespace

NullTestResult bootstrap_null_test(const SlopeSample& pre, const SlopeSample& post, int B,
                                   RngSpec rng) {
  check_inputs(pre, post, B);
  const Eigen::Index n1 = pre.slopes.size();
  const Eigen::Index n2 = post.slopes.size();

  Eigen::VectorXd pooled(n1 + n2);
  pooled << pre.slopes, post.slopes;

  const double observed = median(post.slopes) - median(pre.slopes);

  Eigen::VectorXd pre_star(n1), post_star(n2);
  const auto pool_size = static_cast<std::uint64_t>(n1 + n2);
  long count_ge = 0, count_le = 0;
  for (int b = 0; b < B; ++b) {
    RandomStream gen(rng.child(static_cast<std::uint64_t>(b)));
    for (Eigen::Index i = 0; i < n1; ++i)
      pre_star[i] = pooled[static_cast<Eigen::Index>(gen.uniform_below(pool_size))];
    for (Eigen::Index i = 0; i < n2; ++i)
      post_star[i] = pooled[static_cast<Eigen::Index>(gen.uniform_below(pool_size))];
    const double stat = median_inplace(post_star.data(), post_star.data() + n2) -
                        median_inplace(pre_star.data(), pre_star.data() + n1);
    if (stat >= observed) ++count_ge;
    if (stat <= observed) ++count_le;
  }

  NullTestResult out;
  out.asl = static_cast<double>(count_ge) / B;
  const double p_le = static_cast<double>(count_le) / B;
  out.p_two_sided = std::min(1.0, 2.0 * std::min(out.asl, p_le));
  return out;
}

Interval bootstrap_percentile_ci(const SlopeSample& pre, const SlopeSample& post, int B,
                                 double alpha, RngSpec rng) {
  check_inputs(pre, post, B);
  if (!(alpha > 0.0 && alpha < 1.0)) raise(Errc::InvalidAlpha, "alpha must lie in (0, 1)");
  const Eigen::Index n1 = pre.slopes.size();
  const Eigen::Index n2 = post.slopes.size();

  Eigen::VectorXd pre_star(n1), post_star(n2);
  Eigen::VectorXd stats(B);
  for (int b = 0; b < B; ++b) {
    RandomStream gen(rng.child(static_cast<std::uint64_t>(b)));
    for (Eigen::Index i = 0; i < n1; ++i)
      pre_star[i] = pre.slopes[static_cast<Eigen::Index>(gen.uniform_below(n1))];
    for (Eigen::Index i = 0; i < n2; ++i)
      post_star[i] = post.slopes[static_cast<Eigen::Index>(gen.uniform_below(n2))];
    stats[b] = median_inplace(post_star.data(), post_star.data() + n2) -
               median_inplace(pre_star.data(), pre_star.data() + n1);
  }
  std::sort(stats.data(), stats.data() + B);
  return {quantile_sorted(stats.data(), B, alpha / 2.0),
          quantile_sorted(stats.data(), B, 1.0 - alpha / 2.0)};
}

namespace {

// Per-segment slope median plus median-centered residuals. Residuals are
// pooled across segments, so the per-segment location must be removed.
// Fitting shrinks residuals most where the slope carries the most
// information (segment ends), so each residual is rescaled by the
// jackknife factor 1/(1 - h_i) with h_i from the segment's (1, t) hat
// diagonal.
struct TrendFit {
  double slope = 0.0;
  Eigen::VectorXd residuals;
};

TrendFit trend_fit(const TimeSeries& segment, Segment which) {
  TrendFit fit;
  fit.slope = median(pairwise_slopes(segment, which).slopes);
  Eigen::VectorXd detrended = segment.values - fit.slope * segment.times;
  const double center = median(detrended);
  fit.residuals = detrended.array() - center;
  const Eigen::Index n = segment.size();
  if (n > 2) {
    const double t_bar = segment.times.mean();
    const double s_tt = (segment.times.array() - t_bar).square().sum();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double h = 1.0 / static_cast<double>(n) +
                       (segment.times[i] - t_bar) * (segment.times[i] - t_bar) / s_tt;
      fit.residuals[i] /= (1.0 - h);
    }
  }
  return fit;
}

// Slope-median difference of two segments rebuilt from a random
// permutation of the pooled residuals over the fixed time grids.
// Sampling without replacement avoids duplicate values, which would
// put an atom at zero in the pairwise slope differences and shrink the
// replicate medians. Work buffers are caller-owned.
double resampled_stat(const Eigen::VectorXd& pooled, const TimeSeries& pre,
                      const TimeSeries& post, RandomStream& gen, std::vector<int>& perm,
                      Eigen::VectorXd& pre_vals, Eigen::VectorXd& post_vals,
                      Eigen::VectorXd& slope_buf) {
  const auto n = static_cast<int>(pooled.size());
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[static_cast<int>(gen.uniform_below(i + 1))]);
  const Eigen::Index n1 = pre_vals.size();
  for (Eigen::Index i = 0; i < n1; ++i) pre_vals[i] = pooled[perm[i]];
  for (Eigen::Index i = 0; i < post_vals.size(); ++i) post_vals[i] = pooled[perm[n1 + i]];

  auto slope_median = [&slope_buf](const Eigen::VectorXd& times, const Eigen::VectorXd& values) {
    const Eigen::Index n_seg = times.size();
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i + 1 < n_seg; ++i)
      for (Eigen::Index j = i + 1; j < n_seg; ++j)
        slope_buf[k++] = (values[j] - values[i]) / (times[j] - times[i]);
    return median_inplace(slope_buf.data(), slope_buf.data() + k);
  };
  return slope_median(post.times, post_vals) - slope_median(pre.times, pre_vals);
}

void check_trend_inputs(const TimeSeries& pre, const TimeSeries& post, int B) {
  pre.validate(2);
  post.validate(2);
  if (B < 100) raise(Errc::InsufficientReplicates, "need B >= 100, got " + std::to_string(B));
}

Eigen::Index max_slope_count(const TimeSeries& pre, const TimeSeries& post) {
  const Eigen::Index n = std::max(pre.size(), post.size());
  return n * (n - 1) / 2;
}

}  // namespace

NullTestResult trend_bootstrap_test(const TimeSeries& pre, const TimeSeries& post, int B,
                                    RngSpec rng) {
  check_trend_inputs(pre, post, B);
  const TrendFit pre_fit = trend_fit(pre, Segment::Pre);
  const TrendFit post_fit = trend_fit(post, Segment::Post);
  const double observed = post_fit.slope - pre_fit.slope;

  Eigen::VectorXd pooled(pre.size() + post.size());
  pooled << pre_fit.residuals, post_fit.residuals;

  Eigen::VectorXd pre_vals(pre.size()), post_vals(post.size());
  Eigen::VectorXd slope_buf(max_slope_count(pre, post));
  std::vector<int> perm(static_cast<std::size_t>(pooled.size()));
  long count_ge = 0, count_le = 0;
  for (int b = 0; b < B; ++b) {
    RandomStream gen(rng.child(static_cast<std::uint64_t>(b)));
    const double stat =
        resampled_stat(pooled, pre, post, gen, perm, pre_vals, post_vals, slope_buf);
    if (stat >= observed) ++count_ge;
    if (stat <= observed) ++count_le;
  }

  NullTestResult out;
  out.asl = static_cast<double>(count_ge) / B;
  const double p_le = static_cast<double>(count_le) / B;
  out.p_two_sided = std::min(1.0, 2.0 * std::min(out.asl, p_le));
  return out;
}

Interval trend_bootstrap_ci(const TimeSeries& pre, const TimeSeries& post, int B, double alpha,
                            RngSpec rng) {
  check_trend_inputs(pre, post, B);
  if (!(alpha > 0.0 && alpha < 1.0)) raise(Errc::InvalidAlpha, "alpha must lie in (0, 1)");
  const TrendFit pre_fit = trend_fit(pre, Segment::Pre);
  const TrendFit post_fit = trend_fit(post, Segment::Post);
  const double observed = post_fit.slope - pre_fit.slope;

  Eigen::VectorXd pooled(pre.size() + post.size());
  pooled << pre_fit.residuals, post_fit.residuals;

  Eigen::VectorXd pre_vals(pre.size()), post_vals(post.size());
  Eigen::VectorXd slope_buf(max_slope_count(pre, post));
  std::vector<int> perm(static_cast<std::size_t>(pooled.size()));
  Eigen::VectorXd stats(B);
  for (int b = 0; b < B; ++b) {
    RandomStream gen(rng.child(static_cast<std::uint64_t>(b)));
    stats[b] = observed +
               resampled_stat(pooled, pre, post, gen, perm, pre_vals, post_vals, slope_buf);
  }
  std::sort(stats.data(), stats.data() + B);
  return {quantile_sorted(stats.data(), B, alpha / 2.0),
          quantile_sorted(stats.data(), B, 1.0 - alpha / 2.0)};
}

BootstrapResult robust_inference(const TimeSeries& pre, const TimeSeries& post, int B,
                                 double alpha, RngSpec rng) {
  BootstrapResult result;
  result.B = B;
  result.alpha = alpha;
  result.seed = rng.seed;
  result.beta3_observed = robust_effect(pre, post).beta3_hat;
  const NullTestResult test = trend_bootstrap_test(pre, post, B, rng.child(0));
  result.asl = test.asl;
  result.p_two_sided = test.p_two_sided;
  result.ci = trend_bootstrap_ci(pre, post, B, alpha, rng.child(1));
  return result;
}

}  // namespace itsa
