#include "itsa/time_series.hpp"

#include <cmath>
#include <string>

namespace itsa {

void TimeSeries::validate(Eigen::Index min_len) const {
  if (times.size() != values.size())
    raise(Errc::InvalidConfig, "times and values differ in length");
  if (times.size() < min_len)
    raise(Errc::TooFewPoints,
          "series has " + std::to_string(times.size()) + " points, need " +
              std::to_string(min_len));
  for (Eigen::Index i = 0; i + 1 < times.size(); ++i) {
    if (!(times[i] < times[i + 1]))
      raise(Errc::InvalidConfig,
            "times not strictly increasing at index " + std::to_string(i + 1));
  }
  if (!times.allFinite() || !values.allFinite())
    raise(Errc::InvalidConfig, "non-finite observation");
}

TimeSeries make_series(const std::vector<double>& times, const std::vector<double>& values) {
  TimeSeries s;
  s.times = Eigen::Map<const Eigen::VectorXd>(times.data(), static_cast<Eigen::Index>(times.size()));
  s.values = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return s;
}

std::pair<TimeSeries, TimeSeries> split(const TimeSeries& series, const InterventionSpec& spec) {
  series.validate();
  const Eigen::Index n = series.size();
  Eigen::Index n_pre = 0;
  while (n_pre < n && series.times[n_pre] < spec.intervention_time) ++n_pre;
  if (n_pre == 0) raise(Errc::EmptySegment, "no points before the intervention");
  if (n_pre == n) raise(Errc::EmptySegment, "no points at or after the intervention");

  TimeSeries pre{series.times.head(n_pre), series.values.head(n_pre)};
  TimeSeries post{series.times.tail(n - n_pre), series.values.tail(n - n_pre)};
  return {std::move(pre), std::move(post)};
}

DesignMatrix build_design(const TimeSeries& series, const InterventionSpec& spec) {
  series.validate();
  const Eigen::Index n = series.size();
  Eigen::Index n_pre = 0;
  while (n_pre < n && series.times[n_pre] < spec.intervention_time) ++n_pre;
  if (n_pre == 0) raise(Errc::EmptySegment, "no points before the intervention");
  if (n_pre == n) raise(Errc::EmptySegment, "no points at or after the intervention");

  const double t_last_pre = series.times[n_pre - 1];

  DesignMatrix design(n, 4);
  design.col(0).setOnes();
  design.col(1) = series.times;
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool post = i >= n_pre;
    design(i, 2) = post ? 1.0 : 0.0;
    if (spec.coding == Coding::RawInteraction) {
      design(i, 3) = post ? series.times[i] : 0.0;
    } else {
      design(i, 3) = post ? series.times[i] - t_last_pre : 0.0;
    }
  }
  return design;
}

}  // namespace itsa
