#include "itsa/theil_sen.hpp"

#include <string>

#include "itsa/errors.hpp"
#include "itsa/stats.hpp"

namespace itsa {

SlopeSample pairwise_slopes(const TimeSeries& series, Segment segment) {
  series.validate(2);
  const Eigen::Index n = series.size();
  SlopeSample sample;
  sample.segment = segment;
  sample.slopes.resize(n * (n - 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      sample.slopes[k++] =
          (series.values[j] - series.values[i]) / (series.times[j] - series.times[i]);
    }
  }
  return sample;
}

RobustEffect robust_effect(const TimeSeries& pre, const TimeSeries& post) {
  RobustEffect effect;
  effect.beta13 = median(pairwise_slopes(pre, Segment::Pre).slopes);
  effect.beta23 = median(pairwise_slopes(post, Segment::Post).slopes);
  effect.beta3_hat = effect.beta23 - effect.beta13;
  return effect;
}

}  // namespace itsa
