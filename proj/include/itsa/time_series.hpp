#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "itsa/errors.hpp"

namespace itsa {

// Ordered (time, value) observations for a single analysis unit.
// Times must be strictly increasing; equal spacing is not required.
struct TimeSeries {
  Eigen::VectorXd times;
  Eigen::VectorXd values;

  Eigen::Index size() const { return times.size(); }

  // Throws InvalidConfig / TooFewPoints when the invariants do not hold.
  void validate(Eigen::Index min_len = 2) const;
};

TimeSeries make_series(const std::vector<double>& times, const std::vector<double>& values);

// Interaction coding for the intervention term of the segmented model.
// Raw uses X*t; Centered uses X*(t - t_last_pre), which keeps the
// intercept-block columns orthogonal to the interaction over the pre
// period. Slope-change inference is identical under either coding.
enum class Coding { RawInteraction, CenteredInteraction };

struct InterventionSpec {
  double intervention_time = 0.0;
  Coding coding = Coding::CenteredInteraction;
};

// Partitions a series at the intervention: pre = {t < intervention_time},
// post = {t >= intervention_time}. Order is preserved and every point
// lands in exactly one side. Throws EmptySegment when a side is empty.
std::pair<TimeSeries, TimeSeries> split(const TimeSeries& series, const InterventionSpec& spec);

// n x 4 segmented-regression design: intercept, time, intervention
// indicator, interaction. Rank 4 whenever each segment holds >= 2
// distinct times.
using DesignMatrix = Eigen::Matrix<double, Eigen::Dynamic, 4>;

DesignMatrix build_design(const TimeSeries& series, const InterventionSpec& spec);

}  // namespace itsa
