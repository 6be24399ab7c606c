#pragma once

#include <Eigen/Dense>

#include "itsa/time_series.hpp"

namespace itsa {

enum class Segment { Pre, Post };

// All n(n-1)/2 pairwise slopes (y_j - y_i)/(t_j - t_i), j > i, of one
// segment, stored in lexicographic (i, j) order so downstream resampling
// is reproducible.
struct SlopeSample {
  Eigen::VectorXd slopes;
  Segment segment = Segment::Pre;
};

SlopeSample pairwise_slopes(const TimeSeries& segment_series, Segment segment = Segment::Pre);

// Slope medians per segment and their difference, the robust estimate of
// the change in trend at the intervention.
struct RobustEffect {
  double beta13 = 0.0;  // pre-segment slope median
  double beta23 = 0.0;  // post-segment slope median
  double beta3_hat = 0.0;
};

RobustEffect robust_effect(const TimeSeries& pre, const TimeSeries& post);

}  // namespace itsa
