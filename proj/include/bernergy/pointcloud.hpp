#pragma once

// CSV point clouds: one point per row, comma separated, '.' decimal point.
// Lines starting with '#' and blank lines are skipped. A first row without
// any numeric cell is a header. A final column named "weight" (or any final
// column when weights are requested explicitly) carries atom weights.
// Hyperboloid files store the spatial coordinates followed by t.

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bernergy/energy.hpp"
#include "bernergy/error.hpp"
#include "bernergy/spaces.hpp"
#include "bernergy/stats.hpp"

namespace bernergy {

class io_error : public error {
 public:
  using error::error;
};

enum class parse_error_kind { empty_file, ragged_row, non_numeric };

inline std::string_view to_string(parse_error_kind k) {
  switch (k) {
    case parse_error_kind::empty_file: return "empty_file";
    case parse_error_kind::ragged_row: return "ragged_row";
    case parse_error_kind::non_numeric: return "non_numeric";
  }
  return "?";
}

class parse_error : public error {
 public:
  parse_error(parse_error_kind kind, std::size_t line, const std::string& what) : error(what), kind_(kind), line_(line) {}
  parse_error_kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  parse_error_kind kind_;
  std::size_t line_;
};

struct csv_options {
  space_kind space = space_kind::euclidean;
  bool weights = false;  // treat the last column as weights even without a header
};

struct point_cloud {
  std::vector<point> points;
  std::vector<double> weights;  // empty unless a weight column was read
  std::vector<std::string> header;

  bool weighted() const noexcept { return !weights.empty(); }
  std::size_t dim() const noexcept { return points.empty() ? 0 : points.front().dim(); }

  // Weighted clouds keep their weights; plain ones become (1/n) sum delta.
  signed_measure to_measure() const { return weighted() ? signed_measure(points, weights) : signed_measure::empirical(points); }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace detail

inline point_cloud parse_point_cloud(std::istream& in, const csv_options& opt = {}) {
  point_cloud pc;
  std::string line;
  std::size_t lineno = 0, width = 0;
  bool weight_col = opt.weights;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cells = detail::split_csv(body);
    if (first) {
      first = false;
      width = cells.size();
      bool any_numeric = false;
      for (auto c : cells) any_numeric = any_numeric || detail::parse_number(c).has_value();
      if (!any_numeric) {
        for (auto c : cells) pc.header.emplace_back(c);
        if (pc.header.back() == "weight") weight_col = true;
        continue;
      }
    }
    if (cells.size() != width)
      throw parse_error(parse_error_kind::ragged_row, lineno,
                        "line " + std::to_string(lineno) + ": expected " + std::to_string(width) + " columns, found " + std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto v = detail::parse_number(cells[i]);
      if (!v)
        throw parse_error(parse_error_kind::non_numeric, lineno,
                          "line " + std::to_string(lineno) + ", column " + std::to_string(i + 1) + ": '" + std::string(cells[i]) + "' is not a number");
      row.push_back(*v);
    }
    if (weight_col) {
      pc.weights.push_back(row.back());
      row.pop_back();
    }
    const std::size_t need = opt.space == space_kind::hyperboloid ? 2 : 1;
    if (row.size() < need)
      throw parse_error(parse_error_kind::ragged_row, lineno, "line " + std::to_string(lineno) + ": too few coordinate columns");
    switch (opt.space) {
      case space_kind::euclidean: pc.points.push_back(point::euclidean(std::move(row))); break;
      case space_kind::sphere: pc.points.push_back(point::sphere(std::move(row))); break;
      case space_kind::hyperboloid: {
        const double t = row.back();
        row.pop_back();
        pc.points.push_back(point::hyperboloid(std::move(row), t));
        break;
      }
    }
  }
  if (pc.points.empty()) throw parse_error(parse_error_kind::empty_file, lineno, "no data rows");
  return pc;
}

inline point_cloud parse_point_cloud_string(const std::string& text, const csv_options& opt = {}) {
  std::istringstream in(text);
  return parse_point_cloud(in, opt);
}

inline point_cloud load_point_cloud(const std::string& path, const csv_options& opt = {}) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  return parse_point_cloud(in, opt);
}

}  // namespace bernergy
