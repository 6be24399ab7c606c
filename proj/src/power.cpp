#include "itsa/power.hpp"

#include <thread>
#include <vector>

#include "itsa/bootstrap.hpp"
#include "itsa/errors.hpp"
#include "itsa/format.hpp"
#include "itsa/ols.hpp"
#include "itsa/stats.hpp"
#include "itsa/theil_sen.hpp"

#include <json.hpp>

namespace itsa {

ErrorModel ErrorModel::exponential(double rate) {
  if (!(rate > 0.0)) raise(Errc::InvalidConfig, "exponential rate must be positive");
  return {Kind::Exponential, rate};
}

double ErrorModel::sample(RandomStream& gen) const {
  return kind == Kind::StandardNormal ? gen.normal() : gen.exponential(rate);
}

std::string error_model_name(const ErrorModel& error) {
  if (error.kind == ErrorModel::Kind::Exponential) return "exp:" + format_double(error.rate);
  return "normal";
}

void SimConfig::validate() const {
  if (n_pre < 2 || n_post < 2) raise(Errc::InvalidConfig, "each segment needs >= 2 points");
  if (replications < 100) raise(Errc::InvalidConfig, "need R >= 100 replications");
  if (bootstrap_B < 100) raise(Errc::InsufficientReplicates, "need B >= 100");
  if (calibration_draws < 100) raise(Errc::InvalidConfig, "need >= 100 calibration draws");
  if (!(alpha > 0.0 && alpha < 1.0)) raise(Errc::InvalidAlpha, "alpha must lie in (0, 1)");
  if (error.kind == ErrorModel::Kind::Exponential && !(error.rate > 0.0))
    raise(Errc::InvalidConfig, "exponential rate must be positive");
}

TimeSeries simulate_series(const SimConfig& config, double effect, RngSpec rng) {
  const int n = config.n_pre + config.n_post;
  RandomStream gen(rng);
  TimeSeries series;
  series.times.resize(n);
  series.values.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i + 1);
    const bool post = t >= config.n_pre + 1;
    double y = config.beta[0] + config.beta[1] * t;
    if (post) y += config.beta[2] + effect * (t - config.n_pre);
    series.times[i] = t;
    series.values[i] = y + config.error.sample(gen);
  }
  return series;
}

namespace {

// Runs fn(r) for r in [0, count) over `workers` threads in fixed chunks.
template <class Fn>
void parallel_for(int count, int workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (int r = 0; r < count; ++r) fn(r);
    return;
  }
  const int n_threads = std::min(workers, count);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  const int chunk = (count + n_threads - 1) / n_threads;
  for (int w = 0; w < n_threads; ++w) {
    const int lo = w * chunk;
    const int hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int r = lo; r < hi; ++r) fn(r);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

namespace {

double slope_median_difference(const TimeSeries& series, const InterventionSpec& spec) {
  const auto [pre, post] = split(series, spec);
  return robust_effect(pre, post).beta3_hat;
}

// Equal-tailed null quantiles of the slope-median difference, from an
// independent stream of null-model draws.
std::pair<double, double> calibrate_null_quantiles(const SimConfig& config,
                                                   const InterventionSpec& spec) {
  const RngSpec cal_root{config.seed, 1};  // disjoint from the replication tree
  Eigen::VectorXd stats(config.calibration_draws);
  for (int j = 0; j < config.calibration_draws; ++j)
    stats[j] = slope_median_difference(
        simulate_series(config, 0.0, cal_root.child(static_cast<std::uint64_t>(j))), spec);
  std::sort(stats.data(), stats.data() + stats.size());
  return {quantile_sorted(stats.data(), stats.size(), config.alpha / 2.0),
          quantile_sorted(stats.data(), stats.size(), 1.0 - config.alpha / 2.0)};
}

}  // namespace

PowerGrid estimate_power(const SimConfig& config, int workers) {
  config.validate();
  if (config.effect_sizes.empty()) raise(Errc::InvalidConfig, "effect_sizes must be nonempty");

  const InterventionSpec spec{static_cast<double>(config.n_pre) + 1.0,
                              Coding::CenteredInteraction};
  const RngSpec root{config.seed, 0};

  double null_lo = 0.0, null_hi = 0.0;
  if (config.robust_test == RobustPowerTest::Calibrated)
    std::tie(null_lo, null_hi) = calibrate_null_quantiles(config, spec);

  PowerGrid grid;
  grid.config = config;
  grid.rows.reserve(config.effect_sizes.size());

  for (std::size_t e = 0; e < config.effect_sizes.size(); ++e) {
    const double effect = config.effect_sizes[e];
    const RngSpec effect_rng = root.child(e);

    std::vector<std::uint8_t> reject_t(config.replications, 0);
    std::vector<std::uint8_t> reject_robust(config.replications, 0);

    parallel_for(config.replications, workers, [&](int r) {
      const RngSpec rep = effect_rng.child(static_cast<std::uint64_t>(r));
      const TimeSeries series = simulate_series(config, effect, rep.child(0));

      const OlsFit fit = ols_fit(build_design(series, spec), series.values, config.alpha);
      reject_t[r] = t_test_beta3(fit).reject_at_alpha ? 1 : 0;

      if (config.robust_test == RobustPowerTest::Calibrated) {
        const double stat = slope_median_difference(series, spec);
        reject_robust[r] = (stat < null_lo || stat > null_hi) ? 1 : 0;
      } else {
        const auto [pre, post] = split(series, spec);
        const NullTestResult robust =
            trend_bootstrap_test(pre, post, config.bootstrap_B, rep.child(1));
        reject_robust[r] = robust.p_two_sided < config.alpha ? 1 : 0;
      }
    });

    long n_t = 0, n_robust = 0;
    for (int r = 0; r < config.replications; ++r) {
      n_t += reject_t[r];
      n_robust += reject_robust[r];
    }
    grid.rows.push_back({effect, static_cast<double>(n_t) / config.replications,
                         static_cast<double>(n_robust) / config.replications});
  }
  return grid;
}

std::vector<double> default_effect_grid(const ErrorModel& error) {
  std::vector<double> grid;
  if (error.kind == ErrorModel::Kind::Exponential) {
    for (int i = 0; i <= 10; ++i) grid.push_back(static_cast<double>(i));
  } else {
    for (int i = 0; i <= 10; ++i) grid.push_back(static_cast<double>(i) / 10.0);
  }
  return grid;
}

std::string power_grid_csv(const PowerGrid& grid) {
  std::string out = "effect,power_t,power_robust\n";
  for (const auto& row : grid.rows) {
    out += format_double(row.effect) + "," + format_double(row.power_t) + "," +
           format_double(row.power_robust) + "\n";
  }
  return out;
}

std::string power_grid_json(const PowerGrid& grid) {
  nlohmann::ordered_json doc;
  doc["config"] = {
      {"n_pre", grid.config.n_pre},
      {"n_post", grid.config.n_post},
      {"error", error_model_name(grid.config.error)},
      {"replications", grid.config.replications},
      {"B", grid.config.bootstrap_B},
      {"alpha", grid.config.alpha},
      {"seed", grid.config.seed},
      {"robust_test", grid.config.robust_test == RobustPowerTest::Calibrated
                          ? "calibrated"
                          : "bootstrap"},
  };
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : grid.rows) {
    doc["rows"].push_back({{"effect", row.effect},
                           {"power_t", row.power_t},
                           {"power_robust", row.power_robust}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace itsa
