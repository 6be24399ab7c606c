#include "itsa/ols.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "itsa/errors.hpp"
#include "itsa/student_t.hpp"

namespace itsa {

OlsFit ols_fit(const DesignMatrix& design, const Eigen::Ref<const Eigen::VectorXd>& y,
               double alpha) {
  const Eigen::Index n = design.rows();
  if (y.size() != n) raise(Errc::InvalidConfig, "response length does not match design");
  if (n < 5) raise(Errc::TooFewObservations, "need n >= 5, got " + std::to_string(n));
  if (!(alpha > 0.0 && alpha < 1.0)) raise(Errc::InvalidAlpha, "alpha must lie in (0, 1)");

  const Eigen::Matrix4d gram = design.transpose() * design;
  const Eigen::Vector4d moment = design.transpose() * y;

  Eigen::FullPivLU<Eigen::Matrix4d> lu(gram);
  if (lu.rank() < 4)
    raise(Errc::SingularDesign, "design matrix is rank deficient (rank " +
                                    std::to_string(lu.rank()) + ")");

  OlsFit fit;
  fit.alpha = alpha;
  fit.df = static_cast<int>(n) - 4;
  fit.beta = lu.solve(moment);
  fit.fitted = design * fit.beta;
  fit.residuals = y - fit.fitted;

  // sigma2 = (Y'Y - beta'W'Y) / (n - 4); clamp the exact-fit cancellation.
  fit.sigma2_hat = (y.squaredNorm() - fit.beta.dot(moment)) / static_cast<double>(fit.df);
  if (fit.sigma2_hat < 0.0) fit.sigma2_hat = 0.0;

  Eigen::Matrix4d gram_inv = lu.inverse();
  gram_inv = 0.5 * (gram_inv + gram_inv.transpose()).eval();  // symmetrize
  fit.cov = fit.sigma2_hat * gram_inv;
  fit.se = fit.cov.diagonal().cwiseMax(0.0).cwiseSqrt();

  const double t_crit = t_quantile(1.0 - alpha / 2.0, fit.df);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < 4; ++k) {
    if (fit.se[k] > 0.0) {
      fit.t_stats[k] = fit.beta[k] / fit.se[k];
      fit.p_values[k] = 2.0 * (1.0 - t_cdf(std::fabs(fit.t_stats[k]), fit.df));
    } else {
      fit.t_stats[k] = nan;
      fit.p_values[k] = nan;
    }
    fit.ci(k, 0) = fit.beta[k] - t_crit * fit.se[k];
    fit.ci(k, 1) = fit.beta[k] + t_crit * fit.se[k];
  }
  return fit;
}

SlopeChangeTest t_test_beta3(const OlsFit& fit) {
  if (!(fit.se[3] > 0.0))
    raise(Errc::DegenerateVariance, "zero standard error for the slope change (perfect fit)");
  SlopeChangeTest out;
  out.t = fit.beta[3] / fit.se[3];
  out.p_two_sided = 2.0 * (1.0 - t_cdf(std::fabs(out.t), fit.df));
  out.reject_at_alpha = out.p_two_sided < fit.alpha;
  return out;
}

}  // namespace itsa
