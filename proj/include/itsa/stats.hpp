#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "itsa/errors.hpp"

namespace itsa {

// Order-statistic primitives shared by the estimators and the bootstrap.
//
// Median convention: odd n takes the middle order statistic, even n the
// arithmetic mean of the two middle ones. The even-n midpoint is computed
// as a + 0.5*(b - a), the same expression the quantile interpolation
// produces at p = 0.5, so quantile(v, 0.5) == median(v) bit for bit.

// Median over a mutable range [first, last); partially reorders it.
inline double median_inplace(double* first, double* last) {
  const auto n = last - first;
  if (n <= 0) raise(Errc::EmptyInput, "median of empty range");
  double* mid = first + n / 2;
  std::nth_element(first, mid, last);
  if (n % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(first, mid);
  return lo + 0.5 * (hi - lo);
}

// Median of any dense Eigen vector expression (evaluates into a buffer).
template <class Derived>
typename Derived::Scalar median(const Eigen::DenseBase<Derived>& values) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> buf = values.derived();
  if (buf.size() == 0) raise(Errc::EmptyInput, "median of empty vector");
  return median_inplace(buf.data(), buf.data() + buf.size());
}

// Quantile of an ascending-sorted range under the rule h = (n-1)p + 1
// (1-based), linearly interpolating between order statistics floor(h)
// and ceil(h).
inline double quantile_sorted(const double* sorted, Eigen::Index n, double p) {
  if (n <= 0) raise(Errc::EmptyInput, "quantile of empty vector");
  if (!(p >= 0.0 && p <= 1.0)) raise(Errc::InvalidProbability, "p must lie in [0, 1]");
  const double pos = p * static_cast<double>(n - 1);  // h - 1, 0-based
  const auto lo = static_cast<Eigen::Index>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= n || frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

template <class Derived>
double quantile(const Eigen::DenseBase<Derived>& values, double p) {
  Eigen::VectorXd buf = values.derived().template cast<double>();
  if (buf.size() == 0) raise(Errc::EmptyInput, "quantile of empty vector");
  std::sort(buf.data(), buf.data() + buf.size());
  return quantile_sorted(buf.data(), buf.size(), p);
}

}  // namespace itsa
