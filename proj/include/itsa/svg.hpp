#pragma once

#include <string>
#include <vector>

#include "itsa/panel.hpp"
#include "itsa/power.hpp"

namespace itsa {

// Plot output is plain SVG text, byte-identical for identical inputs.

// Two power curves (t-test, robust) against effect size.
std::string power_plot_svg(const PowerGrid& grid);

// One series with a vertical marker at the intervention time.
std::string series_plot_svg(const std::string& title, const TimeSeries& series,
                            double intervention_time);

// Small-multiples grid of every group in the panel.
std::string panel_grid_svg(const PanelDataset& panel, double intervention_time);

// File writers; return the paths written. An empty panel writes nothing
// and warns on stderr. Throws IoError when a file cannot be created.
std::vector<std::string> emit_power_plot(const PowerGrid& grid, const std::string& out_dir);
std::vector<std::string> emit_panel_plots(const PanelDataset& panel, double intervention_time,
                                          const std::string& out_dir);

}  // namespace itsa
