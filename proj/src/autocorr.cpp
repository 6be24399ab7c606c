#include "itsa/autocorr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "itsa/errors.hpp"

namespace itsa {

double durbin_watson(const Eigen::Ref<const Eigen::VectorXd>& residuals) {
  const Eigen::Index n = residuals.size();
  if (n < 2) raise(Errc::TooFewObservations, "Durbin-Watson needs n >= 2");
  const double denom = residuals.squaredNorm();
  if (denom == 0.0) raise(Errc::DegenerateResiduals, "all residuals are zero");
  const double num = (residuals.tail(n - 1) - residuals.head(n - 1)).squaredNorm();
  return std::clamp(num / denom, 0.0, 4.0);
}

int newey_west_auto_lag(Eigen::Index n) {
  return static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0)));
}

Eigen::Vector4d newey_west_se(const DesignMatrix& design,
                              const Eigen::Ref<const Eigen::VectorXd>& residuals,
                              std::optional<int> lag) {
  const Eigen::Index n = design.rows();
  if (residuals.size() != n) raise(Errc::InvalidConfig, "residual length does not match design");
  const int L = lag.value_or(newey_west_auto_lag(n));
  if (L < 0 || L >= n) raise(Errc::InvalidLag, "lag must satisfy 0 <= lag < n");

  Eigen::FullPivLU<Eigen::Matrix4d> lu(design.transpose() * design);
  if (lu.rank() < 4) raise(Errc::SingularDesign, "design matrix is rank deficient");
  const Eigen::Matrix4d gram_inv = lu.inverse();

  Eigen::Matrix4d meat = Eigen::Matrix4d::Zero();
  for (Eigen::Index t = 0; t < n; ++t)
    meat += residuals[t] * residuals[t] * design.row(t).transpose() * design.row(t);
  for (int l = 1; l <= L; ++l) {
    const double w = 1.0 - static_cast<double>(l) / (L + 1.0);
    Eigen::Matrix4d gamma = Eigen::Matrix4d::Zero();
    for (Eigen::Index t = l; t < n; ++t)
      gamma += residuals[t] * residuals[t - l] * design.row(t).transpose() * design.row(t - l);
    meat += w * (gamma + gamma.transpose());
  }

  const Eigen::Matrix4d sandwich = gram_inv * meat * gram_inv;
  return sandwich.diagonal().cwiseMax(0.0).cwiseSqrt();
}

OlsFit prais_winsten_step(const DesignMatrix& design,
                          const Eigen::Ref<const Eigen::VectorXd>& y, double rho,
                          double alpha) {
  const Eigen::Index n = design.rows();
  DesignMatrix wt(n, 4);
  Eigen::VectorXd yt(n);
  const double head = std::sqrt(1.0 - rho * rho);
  wt.row(0) = head * design.row(0);
  yt[0] = head * y[0];
  for (Eigen::Index t = 1; t < n; ++t) {
    wt.row(t) = design.row(t) - rho * design.row(t - 1);
    yt[t] = y[t] - rho * y[t - 1];
  }
  return ols_fit(wt, yt, alpha);
}

PraisWinstenFit prais_winsten(const DesignMatrix& design,
                              const Eigen::Ref<const Eigen::VectorXd>& y,
                              double tol, int max_iter, double alpha) {
  if (design.rows() < 6) raise(Errc::TooFewObservations, "Prais-Winsten needs n >= 6");
  if (max_iter < 1) raise(Errc::InvalidConfig, "max_iter must be >= 1");

  PraisWinstenFit out;
  Eigen::Vector4d beta = ols_fit(design, y, alpha).beta;
  double rho = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    // Re-estimate rho from a lag-1 regression of the current residuals.
    const Eigen::VectorXd resid = y - design * beta;
    const Eigen::Index n = resid.size();
    const double denom = resid.head(n - 1).squaredNorm();
    double rho_next = denom > 0.0 ? resid.tail(n - 1).dot(resid.head(n - 1)) / denom : 0.0;
    if (std::fabs(rho_next) >= 0.999) {
      rho_next = std::clamp(rho_next, -0.999, 0.999);
      out.rho_clamped = true;
    }
    out.iterations = it;
    const bool done = std::fabs(rho_next - rho) <= tol;
    rho = rho_next;
    out.transformed_fit = prais_winsten_step(design, y, rho, alpha);
    beta = out.transformed_fit.beta;
    if (done) {
      out.converged = true;
      break;
    }
  }
  out.rho = rho;
  out.beta = beta;
  return out;
}

AutocorrReport autocorr_report(const DesignMatrix& design,
                               const Eigen::Ref<const Eigen::VectorXd>& y,
                               std::optional<int> lag) {
  const OlsFit base = ols_fit(design, y);
  AutocorrReport report;
  report.dw = durbin_watson(base.residuals);
  report.nw_se = newey_west_se(design, base.residuals, lag);
  report.pw = prais_winsten(design, y);
  return report;
}

}  // namespace itsa
