#include "itsa/panel.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "itsa/errors.hpp"
#include "itsa/format.hpp"

namespace itsa {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

double parse_cell(std::string_view cell, std::size_t row) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || cell.empty())
    raise(Errc::NonNumericCell,
          "row " + std::to_string(row) + ": cannot parse '" + std::string(cell) + "'");
  return value;
}

}  // namespace

PanelDataset parse_panel_csv(std::string_view text, const std::string& group_column) {
  if (text.substr(0, 3) == "\xef\xbb\xbf") text.remove_prefix(3);  // UTF-8 BOM

  std::size_t pos = 0, row = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    const std::size_t nl = text.find('\n', pos);
    line = nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++row;
    return true;
  };

  std::string_view header;
  if (!next_line(header)) raise(Errc::MalformedHeader, "empty input");
  const auto head = split_fields(header);
  bool grouped = false;
  if (head.size() == 2 && head[0] == "time" && head[1] == "value") {
    grouped = false;
  } else if (head.size() == 3 && head[0] == group_column && head[1] == "time" &&
             head[2] == "value") {
    grouped = true;
  } else {
    raise(Errc::MalformedHeader, "expected 'time,value' or '" + group_column +
                                     ",time,value', got '" + std::string(trim(header)) + "'");
  }

  std::map<std::string, std::vector<std::pair<double, double>>> raw;
  std::string_view line;
  while (next_line(line)) {
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    const std::size_t expected = grouped ? 3 : 2;
    if (fields.size() != expected)
      raise(Errc::NonNumericCell, "row " + std::to_string(row) + ": expected " +
                                      std::to_string(expected) + " fields, got " +
                                      std::to_string(fields.size()));
    const std::string group = grouped ? std::string(fields[0]) : std::string();
    const double t = parse_cell(fields[grouped ? 1 : 0], row);
    const double v = parse_cell(fields[grouped ? 2 : 1], row);
    raw[group].emplace_back(t, v);
  }
  if (raw.empty()) raise(Errc::EmptyInput, "no data rows");

  PanelDataset panel;
  for (auto& [group, points] : raw) {
    std::sort(points.begin(), points.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      if (points[i].first == points[i + 1].first)
        raise(Errc::DuplicateTime, "group '" + group + "', time " +
                                       format_double(points[i].first));
    }
    TimeSeries series;
    series.times.resize(static_cast<Eigen::Index>(points.size()));
    series.values.resize(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
      series.times[static_cast<Eigen::Index>(i)] = points[i].first;
      series.values[static_cast<Eigen::Index>(i)] = points[i].second;
    }
    panel.groups.emplace(group, std::move(series));
  }
  return panel;
}

PanelDataset load_panel_csv(const std::string& path, const std::string& group_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_panel_csv(buf.str(), group_column);
}

std::string panel_to_csv(const PanelDataset& panel, const std::string& group_column) {
  const bool grouped = panel.groups.size() != 1 || !panel.groups.begin()->first.empty();
  std::string out = grouped ? group_column + ",time,value\n" : "time,value\n";
  for (const auto& [group, series] : panel.groups) {
    for (Eigen::Index i = 0; i < series.size(); ++i) {
      if (grouped) out += group + ",";
      out += format_double(series.times[i]) + "," + format_double(series.values[i]) + "\n";
    }
  }
  return out;
}

}  // namespace itsa
