#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "itsa/rng.hpp"
#include "itsa/time_series.hpp"

namespace itsa {

// Error distribution for simulated series. Draws are NOT centered:
// Exponential(rate) has mean 1/rate, which inflates the intercept only
// and leaves slope inference untouched.
struct ErrorModel {
  enum class Kind { StandardNormal, Exponential };
  Kind kind = Kind::StandardNormal;
  double rate = 1.0;

  static ErrorModel standard_normal() { return {Kind::StandardNormal, 1.0}; }
  static ErrorModel exponential(double rate);

  double sample(RandomStream& gen) const;
};

// How the robust test is decided inside the power loop.
//
// Calibrated: the slope-median difference is compared against its own
// null quantiles, estimated once per study from an independent
// calibration stream of null-model draws. This is the unconditional
// test a simulation study measures (the study knows the error model),
// and the route that reproduces the published operating
// characteristics; it is also orders of magnitude faster.
//
// TrendBootstrap: runs the data-driven trend bootstrap on every
// replicate, exactly as an analyst would on real data. Its critical
// value is re-estimated from each dataset, which correlates with the
// statistic and shifts power at small effects.
enum class RobustPowerTest { Calibrated, TrendBootstrap };

// Monte Carlo design: series of n_pre + n_post points at times 1..n are
// generated as y_t = b0 + b1 t + b2 X_t + effect * X_t (t - n_pre) + eps_t,
// the segmented model with a centered interaction.
struct SimConfig {
  int n_pre = 8;
  int n_post = 8;
  Eigen::Vector4d beta{4.0, 4.0, 0.0, 0.0};
  std::vector<double> effect_sizes;
  ErrorModel error;
  int replications = 1000;  // R
  int bootstrap_B = 1000;   // B per robust test (TrendBootstrap mode)
  double alpha = 0.05;
  std::uint64_t seed = 0;
  RobustPowerTest robust_test = RobustPowerTest::Calibrated;
  int calibration_draws = 20000;  // null draws behind the Calibrated mode

  void validate() const;
};

struct PowerRow {
  double effect = 0.0;
  double power_t = 0.0;
  double power_robust = 0.0;
};

struct PowerGrid {
  std::vector<PowerRow> rows;
  SimConfig config;
};

TimeSeries simulate_series(const SimConfig& config, double effect, RngSpec rng);

// Rejection rate of the segmented-regression t-test and of the robust
// bootstrap test at each effect size. Per-replication streams are keyed
// by the replication index, so the grid is bit-identical for any worker
// count.
PowerGrid estimate_power(const SimConfig& config, int workers = 1);

// Default effect grids: 0..10 step 1 (exponential errors),
// 0..1 step 0.1 (normal errors).
std::vector<double> default_effect_grid(const ErrorModel& error);

// "normal" or "exp:RATE", as accepted by the CLI.
std::string error_model_name(const ErrorModel& error);

std::string power_grid_csv(const PowerGrid& grid);
std::string power_grid_json(const PowerGrid& grid);

}  // namespace itsa
