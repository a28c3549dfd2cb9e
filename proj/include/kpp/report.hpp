#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace kpp {

/// Shortest round-trip decimal form of a double; "nan"/"inf" for non-finite values.
std::string format_number(double value);

using CsvCell = std::variant<double, long long, std::string>;

/// A small in-memory table written with fixed formatting, so identical data
/// gives byte-identical files.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<CsvCell> row);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<CsvCell>> rows_;
};

/// Writes to `path.tmp` and renames over `path`.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Line plot with axes, ticks and a legend.
std::string line_plot_svg(const std::vector<PlotSeries>& series, const PlotLabels& labels,
                          int width = 800, int height = 500);

/// Heat map of values[i][j] at (t[i], x[j]) with time increasing upward.
std::string space_time_svg(const std::vector<double>& t, const std::vector<double>& x,
                           const std::vector<std::vector<double>>& values, const PlotLabels& labels,
                           int width = 800, int height = 500);

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::string version;
  std::string timestamp;  // UTC, ISO 8601
  std::vector<std::string> outputs;
  double wall_seconds = 0.0;
};

std::string utc_timestamp();

/**
 * Writes manifest.json into `dir` last, via atomic rename. Throws
 * std::runtime_error if a listed output file does not exist.
 */
std::filesystem::path write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);

}  // namespace kpp
