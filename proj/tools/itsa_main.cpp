// itsa - trend-change estimation for short interrupted time series.
//
// Subcommands:
//   fit      segmented-regression t-test per group
//   robust   pairwise-slope median estimate with bootstrap inference
//   analyze  both methods side by side, report tables and plots
//   power    Monte Carlo rejection-rate study of the two tests

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <json.hpp>

#include "itsa/analyze.hpp"
#include "itsa/autocorr.hpp"
#include "itsa/errors.hpp"
#include "itsa/format.hpp"
#include "itsa/ols.hpp"
#include "itsa/panel.hpp"
#include "itsa/power.hpp"
#include "itsa/student_t.hpp"
#include "itsa/svg.hpp"
#include "itsa/theil_sen.hpp"
#include "itsa/version.hpp"

namespace {

struct CommonOpts {
  std::string input;
  double intervention = 0.0;
  bool log = false;
  double alpha = 0.05;
  std::string output = "text";
  std::string group_column = "group";
};

itsa::Coding parse_coding(const std::string& name) {
  if (name == "raw") return itsa::Coding::RawInteraction;
  if (name == "centered") return itsa::Coding::CenteredInteraction;
  throw CLI::ValidationError("--coding", "expected 'centered' or 'raw'");
}

// "newey-west", "newey-west:LAG" or "prais".
void parse_hac(const std::string& text, itsa::AnalyzeOptions& opt) {
  if (text.empty()) return;
  if (text == "prais") {
    opt.hac = itsa::HacMode::PraisWinsten;
    return;
  }
  const std::string prefix = "newey-west";
  if (text.rfind(prefix, 0) == 0) {
    opt.hac = itsa::HacMode::NeweyWest;
    if (text.size() > prefix.size()) {
      if (text[prefix.size()] != ':')
        throw CLI::ValidationError("--hac", "expected newey-west[:LAG] or prais");
      opt.hac_lag = std::stoi(text.substr(prefix.size() + 1));
    }
    return;
  }
  throw CLI::ValidationError("--hac", "expected newey-west[:LAG] or prais");
}

itsa::ErrorModel parse_error_model(const std::string& text) {
  if (text == "normal") return itsa::ErrorModel::standard_normal();
  const std::string prefix = "exp:";
  if (text.rfind(prefix, 0) == 0)
    return itsa::ErrorModel::exponential(std::stod(text.substr(prefix.size())));
  if (text == "exp") return itsa::ErrorModel::exponential(1.0);
  throw CLI::ValidationError("--error", "expected 'normal' or 'exp:RATE'");
}

std::vector<double> parse_effect_grid(const std::string& text) {
  // LO:HI:STEP inclusive grid.
  const auto first = text.find(':');
  const auto second = text.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw CLI::ValidationError("--effects", "expected LO:HI:STEP");
  const double lo = std::stod(text.substr(0, first));
  const double hi = std::stod(text.substr(first + 1, second - first - 1));
  const double step = std::stod(text.substr(second + 1));
  if (!(step > 0.0) || hi < lo) throw CLI::ValidationError("--effects", "bad grid");
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double v = lo + i * step;
    if (v > hi + 1e-12 * std::max(1.0, std::fabs(hi))) break;
    grid.push_back(v);
  }
  return grid;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) itsa::raise(itsa::Errc::IoError, "cannot create '" + path + "'");
  out << text;
}

std::string group_title(const std::string& id) { return id.empty() ? "(series)" : id; }

int run_fit(const CommonOpts& common, const std::string& coding, const std::string& hac) {
  itsa::AnalyzeOptions opt;
  opt.log = common.log;
  opt.alpha = common.alpha;
  opt.coding = parse_coding(coding);
  parse_hac(hac, opt);

  const itsa::PanelDataset panel = itsa::load_panel_csv(common.input, common.group_column);
  const itsa::InterventionSpec spec{common.intervention, opt.coding};

  nlohmann::ordered_json doc;
  doc["meta"] = {{"version", itsa::kVersion},
                 {"alpha", opt.alpha},
                 {"coding", coding},
                 {"intervention", common.intervention},
                 {"log", opt.log},
                 {"hac", hac.empty() ? "off" : hac}};
  auto& groups = doc["groups"] = nlohmann::ordered_json::object();

  std::string text;
  std::string csv = "group,beta0,beta1,beta2,beta3,se_beta3,t_beta3,p_beta3,ci_lo,ci_hi,dw\n";
  int failures = 0;
  for (const auto& [id, raw] : panel.groups) {
    try {
      const itsa::TimeSeries series = opt.log ? itsa::log_transform(raw) : raw;
      const itsa::DesignMatrix design = itsa::build_design(series, spec);
      const itsa::OlsFit fit = itsa::ols_fit(design, series.values, opt.alpha);
      const itsa::SlopeChangeTest test = itsa::t_test_beta3(fit);
      const double dw = itsa::durbin_watson(fit.residuals);

      double se3 = fit.se[3], lo = fit.ci(3, 0), hi = fit.ci(3, 1);
      if (opt.hac == itsa::HacMode::NeweyWest) {
        se3 = itsa::newey_west_se(design, fit.residuals, opt.hac_lag)[3];
        const double crit = itsa::t_quantile(1.0 - opt.alpha / 2.0, fit.df);
        lo = fit.beta[3] - crit * se3;
        hi = fit.beta[3] + crit * se3;
      }

      nlohmann::ordered_json g;
      g["beta"] = {fit.beta[0], fit.beta[1], fit.beta[2], fit.beta[3]};
      g["sigma2_hat"] = fit.sigma2_hat;
      g["df"] = fit.df;
      g["se_beta3"] = se3;
      g["t_beta3"] = test.t;
      g["p_beta3"] = test.p_two_sided;
      g["ci_beta3"] = {lo, hi};
      g["dw"] = dw;
      if (opt.hac == itsa::HacMode::PraisWinsten) {
        const itsa::PraisWinstenFit pw =
            itsa::prais_winsten(design, series.values, 1e-6, 50, opt.alpha);
        g["prais"] = {{"rho", pw.rho},
                      {"beta3", pw.beta[3]},
                      {"se_beta3", pw.transformed_fit.se[3]},
                      {"iterations", pw.iterations},
                      {"converged", pw.converged}};
      }
      groups[id] = g;

      // Conventional heuristic bands only; corrections stay opt-in flags.
      std::string dw_note;
      if (dw < 1.5)
        dw_note = " (suggests positive autocorrelation; consider --hac)";
      else if (dw > 2.5)
        dw_note = " (suggests negative autocorrelation; consider --hac)";
      text += group_title(id) + ": beta3 = " + itsa::format_fixed(fit.beta[3], 3) +
              " (se " + itsa::format_fixed(se3, 4) + "), t = " + itsa::format_fixed(test.t, 3) +
              ", p = " + itsa::format_fixed(test.p_two_sided, 4) + ", CI (" +
              itsa::format_fixed(lo, 3) + ", " + itsa::format_fixed(hi, 3) + "), dw = " +
              itsa::format_fixed(dw, 3) + dw_note + "\n";
      csv += id + "," + itsa::format_double(fit.beta[0]) + "," + itsa::format_double(fit.beta[1]) +
             "," + itsa::format_double(fit.beta[2]) + "," + itsa::format_double(fit.beta[3]) +
             "," + itsa::format_double(se3) + "," + itsa::format_double(test.t) + "," +
             itsa::format_double(test.p_two_sided) + "," + itsa::format_double(lo) + "," +
             itsa::format_double(hi) + "," + itsa::format_double(dw) + "\n";
    } catch (const itsa::Error& e) {
      ++failures;
      groups[id] = {{"error", e.what()}};
      text += group_title(id) + ": error: " + std::string(e.what()) + "\n";
    }
  }

  if (common.output == "json")
    std::cout << doc.dump(2) << "\n";
  else if (common.output == "csv")
    std::cout << csv;
  else
    std::cout << text;
  return failures == static_cast<int>(panel.groups.size()) ? 1 : 0;
}

int run_robust(const CommonOpts& common, int boot, std::uint64_t seed) {
  const itsa::PanelDataset panel = itsa::load_panel_csv(common.input, common.group_column);
  const itsa::InterventionSpec spec{common.intervention, itsa::Coding::CenteredInteraction};
  const itsa::RngSpec root{seed, 0};

  nlohmann::ordered_json doc;
  doc["meta"] = {{"version", itsa::kVersion},
                 {"seed", seed},
                 {"B", boot},
                 {"alpha", common.alpha},
                 {"intervention", common.intervention},
                 {"log", common.log}};
  auto& groups = doc["groups"] = nlohmann::ordered_json::object();

  std::string text;
  std::string csv = "group,beta13,beta23,beta3,asl,p,ci_lo,ci_hi\n";
  int failures = 0;
  std::size_t index = 0;
  for (const auto& [id, raw] : panel.groups) {
    const itsa::RngSpec rng = root.child(index++);
    try {
      const itsa::TimeSeries series = common.log ? itsa::log_transform(raw) : raw;
      const auto [pre, post] = itsa::split(series, spec);
      const itsa::RobustEffect effect = itsa::robust_effect(pre, post);
      const itsa::BootstrapResult boot_result =
          itsa::robust_inference(pre, post, boot, common.alpha, rng);

      groups[id] = {{"beta13", effect.beta13},
                    {"beta23", effect.beta23},
                    {"beta3", effect.beta3_hat},
                    {"asl", boot_result.asl},
                    {"p", boot_result.p_two_sided},
                    {"ci", {boot_result.ci.lo, boot_result.ci.hi}}};
      text += group_title(id) + ": beta3 = " + itsa::format_fixed(effect.beta3_hat, 3) +
              ", asl = " + itsa::format_fixed(boot_result.asl, 4) + ", p = " +
              itsa::format_fixed(boot_result.p_two_sided, 4) + ", CI (" +
              itsa::format_fixed(boot_result.ci.lo, 3) + ", " +
              itsa::format_fixed(boot_result.ci.hi, 3) + ")\n";
      csv += id + "," + itsa::format_double(effect.beta13) + "," +
             itsa::format_double(effect.beta23) + "," + itsa::format_double(effect.beta3_hat) +
             "," + itsa::format_double(boot_result.asl) + "," +
             itsa::format_double(boot_result.p_two_sided) + "," +
             itsa::format_double(boot_result.ci.lo) + "," +
             itsa::format_double(boot_result.ci.hi) + "\n";
    } catch (const itsa::Error& e) {
      ++failures;
      groups[id] = {{"error", e.what()}};
      text += group_title(id) + ": error: " + std::string(e.what()) + "\n";
    }
  }

  if (common.output == "json")
    std::cout << doc.dump(2) << "\n";
  else if (common.output == "csv")
    std::cout << csv;
  else
    std::cout << text;
  return failures == static_cast<int>(panel.groups.size()) ? 1 : 0;
}

int run_analyze(const CommonOpts& common, const itsa::AnalyzeOptions& opt,
                const std::string& plots_dir) {
  const itsa::PanelDataset panel = itsa::load_panel_csv(common.input, common.group_column);
  const itsa::InterventionSpec spec{common.intervention, opt.coding};
  const itsa::AnalysisReport report = itsa::analyze(panel, spec, opt);

  if (!plots_dir.empty()) {
    itsa::PanelDataset plotted = panel;
    if (opt.log)
      for (auto& [id, series] : plotted.groups) series = itsa::log_transform(series);
    itsa::emit_panel_plots(plotted, common.intervention, plots_dir);
  }

  if (common.output == "json")
    std::cout << itsa::report_json(report);
  else if (common.output == "csv")
    std::cout << itsa::report_csv(report);
  else
    std::cout << itsa::report_text(report);
  return itsa::all_failed(report) ? 1 : 0;
}

int run_power(const itsa::SimConfig& config, int workers, const std::string& output,
              const std::string& plots_dir) {
  const itsa::PowerGrid grid = itsa::estimate_power(config, workers);
  if (!plots_dir.empty()) itsa::emit_power_plot(grid, plots_dir);
  std::cout << (output == "json" ? itsa::power_grid_json(grid) : itsa::power_grid_csv(grid));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intervention trend analysis for short time series"};
  app.set_version_flag("--version", std::string(itsa::kVersion));
  app.require_subcommand(1);

  CommonOpts common;
  std::string coding = "centered", hac, plots_dir, output_format = "text";
  int boot = 1000, workers = 1;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_intervention = true) {
    cmd->add_option("--input", common.input, "input CSV file")->required();
    if (needs_intervention)
      cmd->add_option("--intervention", common.intervention, "first post-intervention time")
          ->required();
    cmd->add_flag("--log", common.log, "analyze natural logs of the values");
    cmd->add_option("--alpha", common.alpha, "significance level")->default_val(0.05);
    cmd->add_option("--output", common.output, "text|json|csv")->default_val("text");
  };

  auto* fit = app.add_subcommand("fit", "segmented-regression t-test");
  add_common(fit);
  fit->add_option("--coding", coding, "interaction coding: centered|raw")->default_val("centered");
  fit->add_option("--hac", hac, "autocorrelation correction: newey-west[:LAG]|prais");

  auto* robust = app.add_subcommand("robust", "pairwise-slope median + bootstrap");
  add_common(robust);
  robust->add_option("--boot", boot, "bootstrap replicates")->default_val(1000);
  robust->add_option("--seed", seed, "RNG seed")->default_val(0);

  auto* analyze_cmd = app.add_subcommand("analyze", "standard and robust methods side by side");
  add_common(analyze_cmd);
  analyze_cmd->add_option("--group-col", common.group_column, "group column name")
      ->default_val("group");
  analyze_cmd->add_option("--boot", boot, "bootstrap replicates")->default_val(1000);
  analyze_cmd->add_option("--seed", seed, "RNG seed")->default_val(0);
  analyze_cmd->add_option("--coding", coding, "interaction coding: centered|raw")
      ->default_val("centered");
  analyze_cmd->add_option("--hac", hac, "autocorrelation correction: newey-west[:LAG]|prais");
  analyze_cmd->add_option("--plots", plots_dir, "write per-group SVG plots into this directory");
  analyze_cmd->add_option("--workers", workers, "worker threads")->default_val(1);

  auto* power = app.add_subcommand("power", "Monte Carlo power study");
  std::string error_model = "normal", effects, robust_test = "calibrated";
  itsa::SimConfig config;
  bool fast = false;
  power->add_option("--error", error_model, "error distribution: normal|exp:RATE")
      ->default_val("normal");
  power->add_option("--robust-test", robust_test,
                    "robust rejection rule: calibrated|bootstrap")
      ->default_val("calibrated");
  power->add_option("--effects", effects, "effect grid LO:HI:STEP");
  power->add_option("--n-pre", config.n_pre, "pre-intervention points")->default_val(8);
  power->add_option("--n-post", config.n_post, "post-intervention points")->default_val(8);
  power->add_option("--reps", config.replications, "Monte Carlo replications")->default_val(1000);
  power->add_option("--boot", config.bootstrap_B, "bootstrap replicates per test")
      ->default_val(1000);
  power->add_option("--alpha", config.alpha, "significance level")->default_val(0.05);
  power->add_option("--seed", config.seed, "RNG seed")->default_val(0);
  power->add_option("--plots", plots_dir, "write power.svg into this directory");
  power->add_option("--output", output_format, "csv|json")->default_val("csv");
  power->add_option("--workers", workers, "worker threads")->default_val(1);
  power->add_flag("--fast", fast, "B = 200 shortcut for smoke runs (wider tolerance)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) return run_fit(common, coding, hac);
    if (robust->parsed()) return run_robust(common, boot, seed);
    if (analyze_cmd->parsed()) {
      itsa::AnalyzeOptions opt;
      opt.log = common.log;
      opt.bootstrap_B = boot;
      opt.alpha = common.alpha;
      opt.seed = seed;
      opt.coding = parse_coding(coding);
      opt.workers = workers;
      parse_hac(hac, opt);
      return run_analyze(common, opt, plots_dir);
    }
    if (power->parsed()) {
      config.error = parse_error_model(error_model);
      config.effect_sizes =
          effects.empty() ? itsa::default_effect_grid(config.error) : parse_effect_grid(effects);
      if (fast) config.bootstrap_B = 200;
      if (robust_test == "bootstrap")
        config.robust_test = itsa::RobustPowerTest::TrendBootstrap;
      else if (robust_test != "calibrated")
        throw CLI::ValidationError("--robust-test", "expected 'calibrated' or 'bootstrap'");
      return run_power(config, workers, output_format, plots_dir);
    }
  } catch (const itsa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
