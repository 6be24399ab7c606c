#pragma once

#include <Eigen/Dense>

#include "itsa/time_series.hpp"

namespace itsa {

// Ordinary least squares fit of the four-parameter segmented model.
//
// beta solves the normal equations W'W beta = W'y via a pivoted
// factorization of the 4x4 system; cov exposes sigma2_hat * (W'W)^{-1}.
// Inference columns (se, t, p, ci) use Student's t with df = n - 4.
struct OlsFit {
  Eigen::Vector4d beta;
  double sigma2_hat = 0.0;
  Eigen::Matrix4d cov;
  int df = 0;
  double alpha = 0.05;
  Eigen::Vector4d se;
  Eigen::Vector4d t_stats;   // NaN where se == 0
  Eigen::Vector4d p_values;  // NaN where se == 0
  Eigen::Matrix<double, 4, 2> ci;  // column 0 = lower, column 1 = upper
  Eigen::VectorXd fitted;
  Eigen::VectorXd residuals;
};

OlsFit ols_fit(const DesignMatrix& design, const Eigen::Ref<const Eigen::VectorXd>& y,
               double alpha = 0.05);

struct SlopeChangeTest {
  double t = 0.0;
  double p_two_sided = 1.0;
  bool reject_at_alpha = false;
};

// Two-sided t-test of the slope-change coefficient (index 3).
// Throws DegenerateVariance when its standard error is zero.
SlopeChangeTest t_test_beta3(const OlsFit& fit);

}  // namespace itsa
