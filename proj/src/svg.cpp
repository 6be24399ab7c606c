#include "itsa/svg.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "itsa/errors.hpp"
#include "itsa/format.hpp"

namespace itsa {
namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 64, kRight = 24, kTop = 32, kBottom = 48;

struct Scale {
  double lo = 0.0, hi = 1.0, out_lo = 0.0, out_hi = 1.0;
  double operator()(double v) const {
    const double span = hi - lo;
    const double f = span == 0.0 ? 0.5 : (v - lo) / span;
    return out_lo + f * (out_hi - out_lo);
  }
};

std::string coord(double v) { return format_fixed(v, 2); }

std::string polyline(const std::vector<std::pair<double, double>>& pts, const Scale& sx,
                     const Scale& sy, const std::string& stroke) {
  std::string d;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    d += (i == 0 ? "M" : " L");
    d += coord(sx(pts[i].first)) + " " + coord(sy(pts[i].second));
  }
  return "  <path d=\"" + d + "\" fill=\"none\" stroke=\"" + stroke +
         "\" stroke-width=\"1.8\"/>\n";
}

std::string axes(const Scale& sx, const Scale& sy, const std::string& x_label,
                 const std::string& y_label, int n_ticks = 5) {
  std::string out;
  out += "  <line x1=\"" + coord(sx.out_lo) + "\" y1=\"" + coord(sy.out_lo) + "\" x2=\"" +
         coord(sx.out_hi) + "\" y2=\"" + coord(sy.out_lo) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out += "  <line x1=\"" + coord(sx.out_lo) + "\" y1=\"" + coord(sy.out_lo) + "\" x2=\"" +
         coord(sx.out_lo) + "\" y2=\"" + coord(sy.out_hi) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= n_ticks; ++i) {
    const double fx = sx.lo + (sx.hi - sx.lo) * i / n_ticks;
    const double fy = sy.lo + (sy.hi - sy.lo) * i / n_ticks;
    const double px = sx(fx), py = sy(fy);
    out += "  <line x1=\"" + coord(px) + "\" y1=\"" + coord(sy.out_lo) + "\" x2=\"" + coord(px) +
           "\" y2=\"" + coord(sy.out_lo + 4) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out += "  <text x=\"" + coord(px) + "\" y=\"" + coord(sy.out_lo + 18) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + format_double(fx) + "</text>\n";
    out += "  <line x1=\"" + coord(sx.out_lo - 4) + "\" y1=\"" + coord(py) + "\" x2=\"" +
           coord(sx.out_lo) + "\" y2=\"" + coord(py) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out += "  <text x=\"" + coord(sx.out_lo - 8) + "\" y=\"" + coord(py + 4) +
           "\" font-size=\"11\" text-anchor=\"end\">" + format_double(fy) + "</text>\n";
  }
  out += "  <text x=\"" + coord((sx.out_lo + sx.out_hi) / 2) + "\" y=\"" +
         coord(kHeight - 10) + "\" font-size=\"13\" text-anchor=\"middle\">" + x_label +
         "</text>\n";
  out += "  <text x=\"16\" y=\"" + coord((sy.out_lo + sy.out_hi) / 2) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         coord((sy.out_lo + sy.out_hi) / 2) + ")\">" + y_label + "</text>\n";
  return out;
}

std::string svg_open(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(w) +
         "\" height=\"" + format_double(h) + "\" viewBox=\"0 0 " + format_double(w) + " " +
         format_double(h) + "\">\n  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string sanitize(const std::string& name) {
  if (name.empty()) return "series";
  std::string out = name;
  for (auto& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::IoError, "cannot create '" + path.string() + "'");
  out << content;
  if (!out) raise(Errc::IoError, "write failed for '" + path.string() + "'");
}

}  // namespace

std::string power_plot_svg(const PowerGrid& grid) {
  double x_lo = 0.0, x_hi = 1.0;
  if (!grid.rows.empty()) {
    x_lo = grid.rows.front().effect;
    x_hi = grid.rows.back().effect;
    for (const auto& r : grid.rows) {
      x_lo = std::min(x_lo, r.effect);
      x_hi = std::max(x_hi, r.effect);
    }
  }
  const Scale sx{x_lo, x_hi, kLeft, kWidth - kRight};
  const Scale sy{0.0, 1.0, kHeight - kBottom, kTop};

  std::vector<std::pair<double, double>> t_curve, robust_curve;
  for (const auto& r : grid.rows) {
    t_curve.emplace_back(r.effect, r.power_t);
    robust_curve.emplace_back(r.effect, r.power_robust);
  }

  std::string out = svg_open(kWidth, kHeight);
  out += axes(sx, sy, "effect size (beta3)", "power");
  out += polyline(t_curve, sx, sy, "#1f6fb4");
  out += polyline(robust_curve, sx, sy, "#c23b22");
  for (const auto& [x, y] : t_curve)
    out += "  <circle cx=\"" + coord(sx(x)) + "\" cy=\"" + coord(sy(y)) +
           "\" r=\"2.4\" fill=\"#1f6fb4\"/>\n";
  for (const auto& [x, y] : robust_curve)
    out += "  <circle cx=\"" + coord(sx(x)) + "\" cy=\"" + coord(sy(y)) +
           "\" r=\"2.4\" fill=\"#c23b22\"/>\n";
  out += "  <text x=\"" + coord(kWidth - 180) + "\" y=\"" + coord(kTop + 16) +
         "\" font-size=\"12\" fill=\"#1f6fb4\">t-test</text>\n";
  out += "  <text x=\"" + coord(kWidth - 180) + "\" y=\"" + coord(kTop + 34) +
         "\" font-size=\"12\" fill=\"#c23b22\">robust median test</text>\n";
  out += "</svg>\n";
  return out;
}

namespace {

std::string series_plot_body(const std::string& title, const TimeSeries& series,
                             double intervention_time, double x0, double y0, double w, double h,
                             double font) {
  const double lo_t = series.times.minCoeff(), hi_t = series.times.maxCoeff();
  double lo_v = series.values.minCoeff(), hi_v = series.values.maxCoeff();
  if (lo_v == hi_v) {
    lo_v -= 1.0;
    hi_v += 1.0;
  }
  const double pad = 0.05 * (hi_v - lo_v);
  const Scale sx{lo_t, hi_t, x0 + 0.12 * w, x0 + 0.96 * w};
  const Scale sy{lo_v - pad, hi_v + pad, y0 + 0.88 * h, y0 + 0.16 * h};

  std::vector<std::pair<double, double>> pts;
  for (Eigen::Index i = 0; i < series.size(); ++i)
    pts.emplace_back(series.times[i], series.values[i]);

  std::string out;
  out += "  <text x=\"" + coord(x0 + 0.12 * w) + "\" y=\"" + coord(y0 + 0.10 * h) +
         "\" font-size=\"" + format_double(font) + "\">" + title + "</text>\n";
  out += polyline(pts, sx, sy, "#1f6fb4");
  if (intervention_time >= lo_t && intervention_time <= hi_t) {
    const double px = sx(intervention_time);
    out += "  <line x1=\"" + coord(px) + "\" y1=\"" + coord(sy.out_lo) + "\" x2=\"" + coord(px) +
           "\" y2=\"" + coord(sy.out_hi) +
           "\" stroke=\"#777777\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
  }
  out += "  <line x1=\"" + coord(sx.out_lo) + "\" y1=\"" + coord(sy.out_lo) + "\" x2=\"" +
         coord(sx.out_hi) + "\" y2=\"" + coord(sy.out_lo) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out += "  <line x1=\"" + coord(sx.out_lo) + "\" y1=\"" + coord(sy.out_lo) + "\" x2=\"" +
         coord(sx.out_lo) + "\" y2=\"" + coord(sy.out_hi) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  return out;
}

}  // namespace

std::string series_plot_svg(const std::string& title, const TimeSeries& series,
                            double intervention_time) {
  std::string out = svg_open(kWidth, kHeight);
  out += series_plot_body(title, series, intervention_time, 0, 0, kWidth, kHeight, 14);
  out += "</svg>\n";
  return out;
}

std::string panel_grid_svg(const PanelDataset& panel, double intervention_time) {
  const int cols = 4;
  const int rows =
      static_cast<int>((panel.groups.size() + cols - 1) / static_cast<std::size_t>(cols));
  const double cell_w = 260, cell_h = 180;
  std::string out = svg_open(cols * cell_w, std::max(1, rows) * cell_h);
  int i = 0;
  for (const auto& [id, series] : panel.groups) {
    const double x0 = (i % cols) * cell_w;
    const double y0 = (i / cols) * cell_h;
    out += series_plot_body(id.empty() ? "(series)" : id, series, intervention_time, x0, y0,
                            cell_w, cell_h, 11);
    ++i;
  }
  out += "</svg>\n";
  return out;
}

std::vector<std::string> emit_power_plot(const PowerGrid& grid, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / "power.svg";
  write_file(path, power_plot_svg(grid));
  return {path.string()};
}

std::vector<std::string> emit_panel_plots(const PanelDataset& panel, double intervention_time,
                                          const std::string& out_dir) {
  if (panel.groups.empty()) {
    std::cerr << "warning: no groups to plot\n";
    return {};
  }
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  for (const auto& [id, series] : panel.groups) {
    const auto path =
        std::filesystem::path(out_dir) / (sanitize(id) + ".svg");
    write_file(path, series_plot_svg(id.empty() ? "(series)" : id, series, intervention_time));
    written.push_back(path.string());
  }
  const auto grid_path = std::filesystem::path(out_dir) / "panel_grid.svg";
  write_file(grid_path, panel_grid_svg(panel, intervention_time));
  written.push_back(grid_path.string());
  return written;
}

}  // namespace itsa
