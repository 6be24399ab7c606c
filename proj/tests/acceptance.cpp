// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Monte Carlo tolerances follow the configured replication
// counts; seeds are fixed so the run is reproducible.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "itsa/analyze.hpp"
#include "itsa/bootstrap.hpp"
#include "itsa/errors.hpp"
#include "itsa/ols.hpp"
#include "itsa/stats.hpp"
#include "itsa/panel.hpp"
#include "itsa/power.hpp"
#include "itsa/student_t.hpp"
#include "itsa/theil_sen.hpp"

#include "support/oracles.hpp"

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
  std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
  if (!pass) ++g_failures;
}

int pick_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 4u));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) itsa::raise(itsa::Errc::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double row_power_t(const itsa::PowerGrid& grid, double effect) {
  for (const auto& row : grid.rows)
    if (row.effect == effect) return row.power_t;
  itsa::raise(itsa::Errc::InvalidConfig, "effect not in grid");
}

double row_power_robust(const itsa::PowerGrid& grid, double effect) {
  for (const auto& row : grid.rows)
    if (row.effect == effect) return row.power_robust;
  itsa::raise(itsa::Errc::InvalidConfig, "effect not in grid");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Shared full-grid runs (used by criteria 1-4).
itsa::PowerGrid run_grid(const itsa::ErrorModel& error, std::uint64_t seed, int workers) {
  itsa::SimConfig config;
  config.error = error;
  config.effect_sizes = itsa::default_effect_grid(error);
  config.replications = 1000;
  config.bootstrap_B = 1000;
  config.alpha = 0.05;
  config.seed = seed;
  return itsa::estimate_power(config, workers);
}

void criterion_1_size(const itsa::PowerGrid& exp_grid, const itsa::PowerGrid& normal_grid) {
  const double lo = 0.03, hi = 0.07;
  const double values[4] = {row_power_t(exp_grid, 0.0), row_power_robust(exp_grid, 0.0),
                            row_power_t(normal_grid, 0.0), row_power_robust(normal_grid, 0.0)};
  bool pass = true;
  for (double v : values) pass = pass && v >= lo && v <= hi;
  report(1, pass,
         "null rejection rates in [0.03, 0.07]: exp t=" + fmt(values[0]) + " robust=" +
             fmt(values[1]) + ", normal t=" + fmt(values[2]) + " robust=" + fmt(values[3]));
}

void criterion_2_table2(const itsa::PowerGrid& exp_grid) {
  const double effects[3] = {3, 5, 8};
  const double expect_t[3] = {0.31, 0.60, 0.90};
  const double expect_robust[3] = {0.36, 0.82, 0.99};
  bool pass = true;
  std::string detail;
  for (int i = 0; i < 3; ++i) {
    const double pt = row_power_t(exp_grid, effects[i]);
    const double pr = row_power_robust(exp_grid, effects[i]);
    pass = pass && std::fabs(pt - expect_t[i]) <= 0.05 && std::fabs(pr - expect_robust[i]) <= 0.05;
    detail += " b3=" + fmt(effects[i]) + " t=" + fmt(pt) + "/" + fmt(expect_t[i]) +
              " robust=" + fmt(pr) + "/" + fmt(expect_robust[i]);
  }
  report(2, pass, "exponential power within +/-0.05 of the reference:" + detail);
}

void criterion_3_table3(const itsa::PowerGrid& normal_grid) {
  const double effects[2] = {0.5, 1.0};
  const double expect_t[2] = {0.56, 0.99};
  const double expect_robust[2] = {0.54, 0.98};
  bool pass = true;
  std::string detail;
  for (int i = 0; i < 2; ++i) {
    const double pt = row_power_t(normal_grid, effects[i]);
    const double pr = row_power_robust(normal_grid, effects[i]);
    pass = pass && std::fabs(pt - expect_t[i]) <= 0.05 && std::fabs(pr - expect_robust[i]) <= 0.05;
    detail += " b3=" + fmt(effects[i]) + " t=" + fmt(pt) + "/" + fmt(expect_t[i]) +
              " robust=" + fmt(pr) + "/" + fmt(expect_robust[i]);
  }
  report(3, pass, "normal power within +/-0.05 of the reference:" + detail);
}

void criterion_4_ordering(const itsa::PowerGrid& exp_grid, const itsa::PowerGrid& normal_grid) {
  bool pass = true;
  std::string detail;
  for (const auto& row : exp_grid.rows) {
    if (row.effect >= 3.0 && row.power_robust < row.power_t) {
      pass = false;
      detail += " exp b3=" + fmt(row.effect) + " robust<" + fmt(row.power_t);
    }
  }
  double max_gap = 0.0;
  for (const auto& row : normal_grid.rows)
    max_gap = std::max(max_gap, std::fabs(row.power_t - row.power_robust));
  if (max_gap > 0.05) {
    pass = false;
    detail += " normal max gap " + fmt(max_gap);
  }
  report(4, pass,
         "robust >= t on the exponential grid from 3 up; |gap| <= 0.05 on the normal grid"
         " (max " + fmt(max_gap) + ")" + detail);
}

void criterion_5_panel() {
  bool pass = true;
  std::string detail;
  try {
    const itsa::PanelDataset panel =
        itsa::load_panel_csv(std::string(ITSA_FIXTURE_DIR) + "/panel.csv");
    pass = pass && panel.groups.size() == 11;

    itsa::AnalyzeOptions opt;
    opt.log = true;
    opt.bootstrap_B = 1000;
    opt.seed = 777;
    const itsa::AnalysisReport report_data =
        itsa::analyze(panel, itsa::InterventionSpec{2008.0}, opt);
    pass = pass && report_data.groups.size() == 11;
    for (const auto& [id, rep] : report_data.groups) {
      pass = pass && rep.ok;
      pass = pass && (rep.significant_std == (rep.ci_std.lo > 0.0 || rep.ci_std.hi < 0.0));
      pass = pass && (rep.significant_robust == (rep.p_robust < opt.alpha));
      pass = pass && rep.ci_std.lo <= rep.beta3_std && rep.beta3_std <= rep.ci_std.hi;
    }

    const std::string produced = itsa::report_json(report_data);
    const std::string golden = slurp(std::string(ITSA_GOLDEN_DIR) + "/analyze_panel.json");
    if (produced != golden) {
      pass = false;
      detail = " (golden mismatch)";
    }
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string(" (") + e.what() + ")";
  }
  report(5, pass,
         "bundled 11-group panel analyzes end-to-end with both report shapes; "
         "JSON pinned by golden file" + detail);
}

void criterion_6_oracles() {
  bool slopes_ok = true;
  {
    std::mt19937_64 gen(61);
    std::uniform_real_distribution<double> unif(-25.0, 25.0);
    for (int n = 2; n <= 7 && slopes_ok; ++n) {
      for (int trial = 0; trial < 200 && slopes_ok; ++trial) {
        std::vector<double> t(n), y(n);
        double cur = unif(gen);
        for (int i = 0; i < n; ++i) {
          cur += 0.2 + std::abs(unif(gen)) / 8.0;
          t[i] = cur;
          y[i] = unif(gen);
        }
        const auto sample = itsa::pairwise_slopes(itsa::make_series(t, y));
        const auto naive = oracle::pairwise_slopes_naive(t, y);
        slopes_ok = sample.slopes.size() == static_cast<Eigen::Index>(naive.size());
        for (std::size_t i = 0; i < naive.size() && slopes_ok; ++i)
          slopes_ok = sample.slopes[static_cast<Eigen::Index>(i)] == naive[i];
        slopes_ok =
            slopes_ok && itsa::median(sample.slopes) == oracle::median_by_sort(naive);
      }
    }
  }

  bool ols_ok = true;
  {
    std::mt19937_64 gen(62);
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    for (int trial = 0; trial < 100 && ols_ok; ++trial) {
      const int n = 8 + static_cast<int>(gen() % 12);
      std::vector<double> t(n), y(n);
      double cur = unif(gen);
      for (int i = 0; i < n; ++i) {
        cur += 0.3 + std::abs(unif(gen));
        t[i] = cur;
        y[i] = unif(gen) * 4.0;
      }
      const int cut = 2 + static_cast<int>(gen() % (n - 4));
      const auto series = itsa::make_series(t, y);
      const itsa::InterventionSpec spec{t[cut]};
      const auto design = itsa::build_design(series, spec);
      const auto fit = itsa::ols_fit(design, series.values, 0.05);

      std::array<std::array<double, 4>, 4> a{};
      std::array<double, 4> b{};
      for (Eigen::Index r = 0; r < design.rows(); ++r)
        for (int i = 0; i < 4; ++i) {
          for (int j = 0; j < 4; ++j) a[i][j] += design(r, i) * design(r, j);
          b[i] += design(r, i) * series.values[r];
        }
      const auto expected = oracle::gauss_solve4(a, b);
      const double scale = std::max(1.0, fit.beta.lpNorm<Eigen::Infinity>());
      for (int k = 0; k < 4; ++k)
        ols_ok = ols_ok && std::fabs(fit.beta[k] - expected[k]) <= 1e-10 * scale;
    }
  }

  bool cdf_ok = true;
  for (int df : {1, 2, 3, 5, 8, 12, 30, 120}) {
    for (double x : {0.0, 0.25, 0.5, 1.0, 1.782, 2.179, 3.0, 4.5, 6.0}) {
      cdf_ok = cdf_ok &&
               std::fabs(itsa::t_cdf(x, df) - oracle::t_cdf_by_integration(x, df)) <= 1e-8;
      cdf_ok = cdf_ok &&
               std::fabs(itsa::t_cdf(-x, df) - oracle::t_cdf_by_integration(-x, df)) <= 1e-8;
    }
  }

  report(6, slopes_ok && ols_ok && cdf_ok,
         std::string("oracle equivalence: slope medians ") + (slopes_ok ? "exact" : "MISMATCH") +
             ", OLS vs elimination " + (ols_ok ? "<=1e-10" : "MISMATCH") + ", t_cdf vs quadrature " +
             (cdf_ok ? "<=1e-8" : "MISMATCH"));
}

void criterion_7_coverage(int workers) {
  const double true_effect = 0.5;
  const int replications = 500;
  itsa::SimConfig config;
  config.error = itsa::ErrorModel::standard_normal();
  config.seed = 707;
  const itsa::InterventionSpec spec{9.0};

  std::vector<std::uint8_t> covered(replications, 0);
  const itsa::RngSpec root{config.seed, 0};
  const auto run = [&](int r) {
    const itsa::RngSpec rep = root.child(static_cast<std::uint64_t>(r));
    const auto series = itsa::simulate_series(config, true_effect, rep.child(0));
    const auto [pre, post] = itsa::split(series, spec);
    const auto ci = itsa::trend_bootstrap_ci(pre, post, 1000, 0.05, rep.child(1));
    covered[r] = (ci.lo <= true_effect && true_effect <= ci.hi) ? 1 : 0;
  };
  std::vector<std::thread> pool;
  const int chunk = (replications + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = w * chunk, hi = std::min(replications, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (int r = lo; r < hi; ++r) run(r);
    });
  }
  for (auto& th : pool) th.join();

  long hits = 0;
  for (auto c : covered) hits += c;
  const double coverage = static_cast<double>(hits) / replications;
  report(7, coverage >= 0.90 && coverage <= 0.98,
         "95% percentile-CI coverage of beta3 = 0.5 over 500 runs: " + fmt(coverage) +
             " in [0.90, 0.98]");
}

void criterion_8_coding_invariance() {
  std::mt19937_64 gen(88);
  std::uniform_real_distribution<double> unif(-4.0, 4.0);
  bool pass = true;
  for (int trial = 0; trial < 100 && pass; ++trial) {
    const int n = 9 + static_cast<int>(gen() % 10);
    std::vector<double> t(n), y(n);
    double cur = unif(gen);
    for (int i = 0; i < n; ++i) {
      cur += 0.4 + std::abs(unif(gen)) / 2.0;
      t[i] = cur;
      y[i] = unif(gen) * 3.0;
    }
    const int cut = 2 + static_cast<int>(gen() % (n - 4));
    const auto series = itsa::make_series(t, y);
    const itsa::InterventionSpec centered{t[cut], itsa::Coding::CenteredInteraction};
    const itsa::InterventionSpec raw{t[cut], itsa::Coding::RawInteraction};
    const auto fc = itsa::ols_fit(itsa::build_design(series, centered), series.values, 0.05);
    const auto fr = itsa::ols_fit(itsa::build_design(series, raw), series.values, 0.05);
    pass = pass && std::fabs(fc.beta[3] - fr.beta[3]) <=
                       1e-10 * std::max(1.0, std::fabs(fc.beta[3]));
    pass = pass && std::fabs(fc.se[3] - fr.se[3]) <= 1e-10 * std::max(1.0, fc.se[3]);
    if (fc.se[3] > 0.0) {
      const auto tc = itsa::t_test_beta3(fc);
      const auto tr = itsa::t_test_beta3(fr);
      pass = pass && std::fabs(tc.p_two_sided - tr.p_two_sided) <= 1e-10;
    }
  }
  report(8, pass, "beta3, se(beta3) and the t-test p agree to 1e-10 between codings "
                  "on 100 random datasets");
}

void criterion_9_robustness() {
  std::vector<double> t_pre(8), y_pre(8), t_post(8), y_post(8);
  for (int i = 0; i < 8; ++i) {
    t_pre[i] = i + 1;
    y_pre[i] = 4.0 + 4.0 * t_pre[i];
    t_post[i] = i + 9;
    y_post[i] = 4.0 + 4.0 * t_post[i];
  }
  const auto clean = oracle::pairwise_slopes_naive(t_pre, y_pre);
  double band = 0.0;
  for (double a : clean)
    for (double b : clean) band = std::max(band, std::fabs(a - b));
  band = std::max(band, 1e-9);

  bool pass = true;
  std::string detail;
  double previous = 0.0;
  for (double magnitude : {1e2, 1e4, 1e6}) {
    auto corrupted = y_pre;
    corrupted[3] += magnitude;
    const auto robust = itsa::robust_effect(itsa::make_series(t_pre, corrupted),
                                            itsa::make_series(t_post, y_post));
    pass = pass && std::fabs(robust.beta3_hat) <= band;

    std::vector<double> t_all = t_pre, y_all = corrupted;
    t_all.insert(t_all.end(), t_post.begin(), t_post.end());
    y_all.insert(y_all.end(), y_post.begin(), y_post.end());
    const auto series = itsa::make_series(t_all, y_all);
    const auto fit =
        itsa::ols_fit(itsa::build_design(series, itsa::InterventionSpec{9.0}), series.values, 0.05);
    const double ols_effect = std::fabs(fit.beta[3]);
    pass = pass && ols_effect > 10.0 * std::max(previous, band);
    previous = ols_effect;
    detail += " m=1e" + std::to_string(static_cast<int>(std::log10(magnitude))) + " robust=" +
              fmt(robust.beta3_hat) + " ols=" + fmt(fit.beta[3]);
  }
  report(9, pass, "one corrupted pre point: robust effect stays in a fixed band while "
                  "OLS diverges;" + detail);
}

void criterion_10_determinism(int workers) {
  itsa::SimConfig config;
  config.error = itsa::ErrorModel::exponential(0.1);
  config.effect_sizes = {0.0, 2.0, 4.0};
  config.replications = 200;
  config.bootstrap_B = 200;
  config.seed = 1010;

  const std::string serial_a = itsa::power_grid_csv(itsa::estimate_power(config, 1));
  const std::string serial_b = itsa::power_grid_csv(itsa::estimate_power(config, 1));
  const std::string threaded = itsa::power_grid_csv(itsa::estimate_power(config, workers > 1 ? workers : 3));
  const bool power_ok = serial_a == serial_b && serial_a == threaded;

  const itsa::PanelDataset panel =
      itsa::load_panel_csv(std::string(ITSA_FIXTURE_DIR) + "/panel.csv");
  itsa::AnalyzeOptions opt;
  opt.log = true;
  opt.bootstrap_B = 300;
  opt.seed = 12;
  opt.workers = 1;
  const std::string a = itsa::report_json(itsa::analyze(panel, itsa::InterventionSpec{2008.0}, opt));
  const std::string b = itsa::report_json(itsa::analyze(panel, itsa::InterventionSpec{2008.0}, opt));
  opt.workers = workers > 1 ? workers : 3;
  const std::string c = itsa::report_json(itsa::analyze(panel, itsa::InterventionSpec{2008.0}, opt));
  const bool analyze_ok = a == b && a == c;

  report(10, power_ok && analyze_ok,
         std::string("byte-identical outputs across reruns and worker counts: power ") +
             (power_ok ? "ok" : "MISMATCH") + ", analyze " + (analyze_ok ? "ok" : "MISMATCH"));
}

}  // namespace

int main() {
  const int workers = pick_workers();
  std::printf("running acceptance suite (%d workers)\n", workers);

  const itsa::PowerGrid exp_grid = run_grid(itsa::ErrorModel::exponential(0.1), 20250808, workers);
  const itsa::PowerGrid normal_grid =
      run_grid(itsa::ErrorModel::standard_normal(), 20250809, workers);

  criterion_1_size(exp_grid, normal_grid);
  criterion_2_table2(exp_grid);
  criterion_3_table3(normal_grid);
  criterion_4_ordering(exp_grid, normal_grid);
  criterion_5_panel();
  criterion_6_oracles();
  criterion_7_coverage(workers);
  criterion_8_coding_invariance();
  criterion_9_robustness();
  criterion_10_determinism(workers);

  if (g_failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
