#include "itsa/analyze.hpp"

#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "itsa/autocorr.hpp"
#include "itsa/errors.hpp"
#include "itsa/format.hpp"
#include "itsa/ols.hpp"
#include "itsa/student_t.hpp"
#include "itsa/version.hpp"

namespace itsa {

TimeSeries log_transform(const TimeSeries& series) {
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    if (!(series.values[i] > 0.0))
      raise(Errc::NonPositiveValue,
            "value " + format_double(series.values[i]) + " at time " +
                format_double(series.times[i]));
  }
  TimeSeries out = series;
  out.values = series.values.array().log();
  return out;
}

PercentChange percent_change(double beta1, double beta3) {
  return {(std::exp(beta1) - 1.0) * 100.0, (std::exp(beta1 + beta3) - 1.0) * 100.0};
}

namespace {

GroupReport analyze_group(const TimeSeries& raw, const InterventionSpec& spec,
                          const AnalyzeOptions& opt, RngSpec rng) {
  GroupReport rep;
  const TimeSeries series = opt.log ? log_transform(raw) : raw;
  const auto [pre, post] = split(series, spec);
  const DesignMatrix design = build_design(series, spec);

  // Standard method. HAC corrections replace the se (Newey-West) or the
  // whole fit (Prais-Winsten); the t reference keeps df = n - 4.
  const OlsFit ols = ols_fit(design, series.values, opt.alpha);
  rep.dw = durbin_watson(ols.residuals);

  double beta1 = ols.beta[1];
  double beta3 = ols.beta[3];
  double se3 = ols.se[3];
  if (opt.hac == HacMode::NeweyWest) {
    se3 = newey_west_se(design, ols.residuals, opt.hac_lag)[3];
  } else if (opt.hac == HacMode::PraisWinsten) {
    const PraisWinstenFit pw = prais_winsten(design, series.values, 1e-6, 50, opt.alpha);
    beta1 = pw.beta[1];
    beta3 = pw.beta[3];
    se3 = pw.transformed_fit.se[3];
  }
  if (!(se3 > 0.0))
    raise(Errc::DegenerateVariance, "zero standard error for the slope change");

  const double t_crit = t_quantile(1.0 - opt.alpha / 2.0, ols.df);
  rep.beta3_std = beta3;
  rep.se_std = se3;
  rep.ci_std = {beta3 - t_crit * se3, beta3 + t_crit * se3};
  rep.significant_std = rep.ci_std.lo > 0.0 || rep.ci_std.hi < 0.0;

  // Robust method.
  const BootstrapResult boot = robust_inference(pre, post, opt.bootstrap_B, opt.alpha, rng);
  rep.beta3_robust = boot.beta3_observed;
  rep.p_robust = boot.p_two_sided;
  rep.ci_robust = boot.ci;
  rep.significant_robust = boot.p_two_sided < opt.alpha;

  const PercentChange pct = percent_change(beta1, beta3);
  rep.percent_change_pre = pct.pre_pct;
  rep.percent_change_post = pct.post_pct;
  rep.ok = true;
  return rep;
}

}  // namespace

AnalysisReport analyze(const PanelDataset& panel, const InterventionSpec& spec,
                       const AnalyzeOptions& options) {
  if (panel.groups.empty()) raise(Errc::EmptyInput, "panel has no groups");

  std::vector<const std::string*> ids;
  std::vector<const TimeSeries*> series;
  ids.reserve(panel.groups.size());
  for (const auto& [id, ts] : panel.groups) {
    ids.push_back(&id);
    series.push_back(&ts);
  }

  const RngSpec root{options.seed, 0};
  std::vector<GroupReport> reports(ids.size());
  const auto run = [&](std::size_t g) {
    try {
      reports[g] = analyze_group(*series[g], spec, options, root.child(g));
    } catch (const Error& e) {
      reports[g].ok = false;
      reports[g].error = e.what();
    }
  };

  const int workers = std::max(1, options.workers);
  if (workers == 1 || ids.size() <= 1) {
    for (std::size_t g = 0; g < ids.size(); ++g) run(g);
  } else {
    std::vector<std::thread> pool;
    const std::size_t n_threads = std::min<std::size_t>(workers, ids.size());
    const std::size_t chunk = (ids.size() + n_threads - 1) / n_threads;
    for (std::size_t w = 0; w < n_threads; ++w) {
      const std::size_t lo = w * chunk, hi = std::min(ids.size(), lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] {
        for (std::size_t g = lo; g < hi; ++g) run(g);
      });
    }
    for (auto& th : pool) th.join();
  }

  AnalysisReport out;
  out.intervention_time = spec.intervention_time;
  out.options = options;
  for (std::size_t g = 0; g < ids.size(); ++g) out.groups.emplace(*ids[g], std::move(reports[g]));
  return out;
}

bool all_failed(const AnalysisReport& report) {
  for (const auto& [id, rep] : report.groups)
    if (rep.ok) return false;
  return true;
}

const char* hac_mode_name(HacMode mode) {
  switch (mode) {
    case HacMode::NeweyWest: return "newey-west";
    case HacMode::PraisWinsten: return "prais";
    case HacMode::Off: break;
  }
  return "off";
}

const char* coding_name(Coding coding) {
  return coding == Coding::RawInteraction ? "raw" : "centered";
}

std::string report_json(const AnalysisReport& report) {
  nlohmann::ordered_json doc;
  std::string hac = hac_mode_name(report.options.hac);
  if (report.options.hac == HacMode::NeweyWest && report.options.hac_lag)
    hac += ":" + std::to_string(*report.options.hac_lag);
  doc["meta"] = {
      {"version", kVersion},
      {"seed", report.options.seed},
      {"B", report.options.bootstrap_B},
      {"alpha", report.options.alpha},
      {"coding", coding_name(report.options.coding)},
      {"intervention", report.intervention_time},
      {"log", report.options.log},
      {"hac", hac},
  };
  auto& groups = doc["groups"] = nlohmann::ordered_json::object();
  for (const auto& [id, rep] : report.groups) {
    if (!rep.ok) {
      groups[id] = {{"error", rep.error}};
      continue;
    }
    groups[id] = {
        {"beta3_std", rep.beta3_std},
        {"se_std", rep.se_std},
        {"ci_std", {rep.ci_std.lo, rep.ci_std.hi}},
        {"significant_std", rep.significant_std},
        {"beta3_robust", rep.beta3_robust},
        {"p_robust", rep.p_robust},
        {"ci_robust", {rep.ci_robust.lo, rep.ci_robust.hi}},
        {"significant_robust", rep.significant_robust},
        {"dw", rep.dw},
        {"percent_change_pre", rep.percent_change_pre},
        {"percent_change_post", rep.percent_change_post},
    };
  }
  return doc.dump(2) + "\n";
}

namespace {

std::string fmt3(double v) { return format_fixed(v, 3); }

}  // namespace

std::string report_text(const AnalysisReport& report) {
  std::ostringstream out;
  const int level = static_cast<int>(std::lround((1.0 - report.options.alpha) * 100.0));
  out << "Standard method (segmented regression, t-based inference)\n";
  out << "group\tbeta3\tse\t" << level << "% CI\tsig\tdw\n";
  for (const auto& [id, rep] : report.groups) {
    const std::string name = id.empty() ? "(series)" : id;
    if (!rep.ok) {
      out << name << "\terror: " << rep.error << "\n";
      continue;
    }
    out << name << "\t" << fmt3(rep.beta3_std) << "\t" << fmt3(rep.se_std) << "\t("
        << fmt3(rep.ci_std.lo) << ", " << fmt3(rep.ci_std.hi) << ")\t"
        << (rep.significant_std ? "**" : "") << "\t" << fmt3(rep.dw) << "\n";
  }
  out << "\nRobust method (pairwise-slope medians, bootstrap inference)\n";
  out << "group\tbeta3\tp\t" << level << "% CI\tsig\n";
  for (const auto& [id, rep] : report.groups) {
    const std::string name = id.empty() ? "(series)" : id;
    if (!rep.ok) {
      out << name << "\terror: " << rep.error << "\n";
      continue;
    }
    out << name << "\t" << fmt3(rep.beta3_robust) << "\t" << fmt3(rep.p_robust) << "\t("
        << fmt3(rep.ci_robust.lo) << ", " << fmt3(rep.ci_robust.hi) << ")\t"
        << (rep.significant_robust ? "**" : "") << "\n";
  }
  out << "\nAnnual percent change implied by the fitted trend\n";
  out << "group\tpre %\tpost %\n";
  for (const auto& [id, rep] : report.groups) {
    if (!rep.ok) continue;
    const std::string name = id.empty() ? "(series)" : id;
    out << name << "\t" << fmt3(rep.percent_change_pre) << "\t" << fmt3(rep.percent_change_post)
        << "\n";
  }
  return out.str();
}

std::string report_csv(const AnalysisReport& report) {
  std::string out =
      "group,beta3_std,se_std,ci_std_lo,ci_std_hi,significant_std,"
      "beta3_robust,p_robust,ci_robust_lo,ci_robust_hi,significant_robust,"
      "dw,percent_change_pre,percent_change_post,error\n";
  for (const auto& [id, rep] : report.groups) {
    out += id + ",";
    if (!rep.ok) {
      std::string msg = rep.error;
      for (auto& c : msg)
        if (c == ',' || c == '\n') c = ';';
      out += ",,,,,,,,,,,,," + msg + "\n";
      continue;
    }
    out += format_double(rep.beta3_std) + "," + format_double(rep.se_std) + "," +
           format_double(rep.ci_std.lo) + "," + format_double(rep.ci_std.hi) + "," +
           (rep.significant_std ? "true" : "false") + "," + format_double(rep.beta3_robust) +
           "," + format_double(rep.p_robust) + "," + format_double(rep.ci_robust.lo) + "," +
           format_double(rep.ci_robust.hi) + "," + (rep.significant_robust ? "true" : "false") +
           "," + format_double(rep.dw) + "," + format_double(rep.percent_change_pre) + "," +
           format_double(rep.percent_change_post) + ",\n";
  }
  return out;
}

}  // namespace itsa
