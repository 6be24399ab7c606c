#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "itsa/bootstrap.hpp"
#include "itsa/panel.hpp"
#include "itsa/time_series.hpp"

namespace itsa {

// Natural log of the values; times unchanged. Throws NonPositiveValue
// naming the offending time.
TimeSeries log_transform(const TimeSeries& series);

// Year-over-year percent change implied by a log-linear trend: exact
// (e^b - 1) * 100 for the pre slope and for the post slope b1 + b3.
struct PercentChange {
  double pre_pct = 0.0;
  double post_pct = 0.0;
};

PercentChange percent_change(double beta1, double beta3);

enum class HacMode { Off, NeweyWest, PraisWinsten };

struct AnalyzeOptions {
  bool log = false;
  int bootstrap_B = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  HacMode hac = HacMode::Off;
  std::optional<int> hac_lag;  // Newey-West only; nullopt = default rule
  Coding coding = Coding::CenteredInteraction;
  int workers = 1;
};

// Per-group results in the shape of the two report tables: the standard
// method carries (estimate, se, CI), the robust one (estimate, p, CI).
struct GroupReport {
  bool ok = false;
  std::string error;

  double beta3_std = 0.0;
  double se_std = 0.0;
  Interval ci_std;
  bool significant_std = false;

  double beta3_robust = 0.0;
  double p_robust = 1.0;
  Interval ci_robust;
  bool significant_robust = false;

  double dw = 2.0;
  double percent_change_pre = 0.0;
  double percent_change_post = 0.0;
};

struct AnalysisReport {
  std::map<std::string, GroupReport> groups;
  double intervention_time = 0.0;
  AnalyzeOptions options;
};

// Full two-method pipeline over every group. Group failures are recorded
// in that group's report and do not abort the batch; all_failed() tells
// the caller whether anything succeeded.
AnalysisReport analyze(const PanelDataset& panel, const InterventionSpec& spec,
                       const AnalyzeOptions& options);

bool all_failed(const AnalysisReport& report);

std::string report_json(const AnalysisReport& report);
std::string report_text(const AnalysisReport& report);
std::string report_csv(const AnalysisReport& report);

const char* hac_mode_name(HacMode mode);
const char* coding_name(Coding coding);

}  // namespace itsa
