#pragma once

#include <Eigen/Dense>

#include <optional>

#include "itsa/ols.hpp"
#include "itsa/time_series.hpp"

namespace itsa {

// Durbin-Watson statistic of a residual vector; in [0, 4], near 2 under
// no first-order autocorrelation. Throws DegenerateResiduals when the
// residuals are all zero.
double durbin_watson(const Eigen::Ref<const Eigen::VectorXd>& residuals);

// Default truncation lag L = floor(4 * (n/100)^(2/9)).
int newey_west_auto_lag(Eigen::Index n);

// Bartlett-kernel HAC standard errors: square roots of the diagonal of
// (W'W)^{-1} M (W'W)^{-1} with
//   M = sum_t e_t^2 w_t w_t'
//     + sum_{l=1..L} (1 - l/(L+1)) sum_{t>l} e_t e_{t-l} (w_t w_{t-l}' + w_{t-l} w_t').
// lag = nullopt selects the default rule.
Eigen::Vector4d newey_west_se(const DesignMatrix& design,
                              const Eigen::Ref<const Eigen::VectorXd>& residuals,
                              std::optional<int> lag = std::nullopt);

// Iterated Prais-Winsten AR(1) feasible GLS.
struct PraisWinstenFit {
  double rho = 0.0;
  Eigen::Vector4d beta;
  int iterations = 0;
  bool converged = false;
  bool rho_clamped = false;  // true when an iterate left (-0.999, 0.999)
  OlsFit transformed_fit;    // fit on the quasi-differenced data; se/ci live here
};

// Single Prais-Winsten pass at a fixed rho: scale the first row by
// sqrt(1 - rho^2), quasi-difference the rest, refit. rho = 0 reproduces
// the plain OLS fit.
OlsFit prais_winsten_step(const DesignMatrix& design,
                          const Eigen::Ref<const Eigen::VectorXd>& y, double rho,
                          double alpha = 0.05);

PraisWinstenFit prais_winsten(const DesignMatrix& design,
                              const Eigen::Ref<const Eigen::VectorXd>& y,
                              double tol = 1e-6, int max_iter = 50, double alpha = 0.05);

// Convenience bundle of all three diagnostics for one fitted model.
struct AutocorrReport {
  double dw = 2.0;
  Eigen::Vector4d nw_se;
  PraisWinstenFit pw;
};

AutocorrReport autocorr_report(const DesignMatrix& design,
                               const Eigen::Ref<const Eigen::VectorXd>& y,
                               std::optional<int> lag = std::nullopt);

}  // namespace itsa
