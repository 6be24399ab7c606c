#pragma once

#include <map>
#include <string>
#include <string_view>

#include "itsa/time_series.hpp"

namespace itsa {

// A panel of series keyed by group id. A two-column file yields one
// group with the empty id.
struct PanelDataset {
  std::map<std::string, TimeSeries> groups;
};

// Parses "time,value" or "<group_column>,time,value" CSV text. Rows may
// arrive in any order; they are sorted by time within each group.
// Errors: MalformedHeader, NonNumericCell (with row number),
// DuplicateTime (group, time).
PanelDataset parse_panel_csv(std::string_view text, const std::string& group_column = "group");

// File variant; IoError when the file cannot be read.
PanelDataset load_panel_csv(const std::string& path, const std::string& group_column = "group");

// Inverse of parse_panel_csv: values print in shortest round-trip form,
// so parse(serialize(p)) == p exactly.
std::string panel_to_csv(const PanelDataset& panel, const std::string& group_column = "group");

}  // namespace itsa
