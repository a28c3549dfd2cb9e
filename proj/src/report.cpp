#include "kpp/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace kpp {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Round step of roughly span / target.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

struct Frame {
  double left = 70, right = 20, top = 40, bottom = 55;
  double width, height;
  double x0, x1, y0, y1;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
  double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

void widen(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
    lo -= pad;
    hi += pad;
  }
}

std::string axes(const Frame& f, const PlotLabels& labels) {
  std::string s;
  s += fmt::format(R"(<rect x="{:.1f}" y="{:.1f}" width="{:.1f}" height="{:.1f}" fill="none" stroke="#000"/>)"
                   "\n",
                   f.left, f.top, f.width - f.left - f.right, f.height - f.top - f.bottom);
  const double xs = nice_step(f.x1 - f.x0, 8);
  for (double v = std::ceil(f.x0 / xs) * xs; v <= f.x1 + 1e-9 * xs; v += xs) {
    const double p = f.px(v);
    s += fmt::format(R"(<line x1="{0:.1f}" y1="{1:.1f}" x2="{0:.1f}" y2="{2:.1f}" stroke="#000"/>)"
                     R"(<text x="{0:.1f}" y="{3:.1f}" font-size="12" text-anchor="middle">{4}</text>)"
                     "\n",
                     p, f.height - f.bottom, f.height - f.bottom + 5, f.height - f.bottom + 20,
                     format_number(std::abs(v) < 1e-12 * xs ? 0.0 : v));
  }
  const double ys = nice_step(f.y1 - f.y0, 6);
  for (double v = std::ceil(f.y0 / ys) * ys; v <= f.y1 + 1e-9 * ys; v += ys) {
    const double p = f.py(v);
    s += fmt::format(R"(<line x1="{0:.1f}" y1="{1:.1f}" x2="{2:.1f}" y2="{1:.1f}" stroke="#000"/>)"
                     R"(<text x="{3:.1f}" y="{4:.1f}" font-size="12" text-anchor="end">{5}</text>)"
                     "\n",
                     f.left - 5, p, f.left, f.left - 8, p + 4,
                     format_number(std::abs(v) < 1e-12 * ys ? 0.0 : v));
  }
  s += fmt::format(R"(<text x="{:.1f}" y="22" font-size="15" text-anchor="middle">{}</text>)"
                   "\n",
                   0.5 * f.width, escape_xml(labels.title));
  s += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" font-size="13" text-anchor="middle">{}</text>)"
                   "\n",
                   0.5 * (f.left + f.width - f.right), f.height - 12, escape_xml(labels.x_label));
  s += fmt::format(
      R"svg(<text x="16" y="{0:.1f}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {0:.1f})">{1}</text>)svg"
      "\n",
      0.5 * (f.top + f.height - f.bottom), escape_xml(labels.y_label));
  return s;
}

std::string svg_open(int width, int height) {
  return fmt::format(
      R"(<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{1}" viewBox="0 0 {0} {1}">)"
      "\n"
      R"(<rect width="100%" height="100%" fill="#fff"/>)"
      "\n",
      width, height);
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{}", value);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("CSV table needs at least one column");
}

void CsvTable::add_row(std::vector<CsvCell> row) {
  if (row.size() != header_.size()) {
    throw std::invalid_argument(
        fmt::format("CSV row has {} cells, header has {}", row.size(), header_.size()));
  }
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t j = 0; j < header_.size(); ++j) {
    if (j) out += ',';
    out += csv_field(header_[j]);
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      std::visit(
          [&](const auto& cell) {
            using T = std::decay_t<decltype(cell)>;
            if constexpr (std::is_same_v<T, double>) {
              out += format_number(cell);
            } else if constexpr (std::is_same_v<T, long long>) {
              out += std::to_string(cell);
            } else {
              out += csv_field(cell);
            }
          },
          row[j]);
    }
    out += '\n';
  }
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const { write_text_atomic(path, str()); }

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", tmp.string()));
    out << content;
    if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

std::string line_plot_svg(const std::vector<PlotSeries>& series, const PlotLabels& labels,
                          int width, int height) {
  Frame f;
  f.width = width;
  f.height = height;
  f.x0 = f.y0 = std::numeric_limits<double>::infinity();
  f.x1 = f.y1 = -f.x0;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("plot series x and y differ in length");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      f.x0 = std::min(f.x0, s.x[i]);
      f.x1 = std::max(f.x1, s.x[i]);
      f.y0 = std::min(f.y0, s.y[i]);
      f.y1 = std::max(f.y1, s.y[i]);
    }
  }
  if (!std::isfinite(f.x0)) f.x0 = 0, f.x1 = 1, f.y0 = 0, f.y1 = 1;
  widen(f.x0, f.x1);
  widen(f.y0, f.y1);
  const double pad = 0.05 * (f.y1 - f.y0);
  f.y0 -= pad;
  f.y1 += pad;

  std::string s = svg_open(width, height) + axes(f, labels);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto* color = kPalette[k % std::size(kPalette)];
    std::string points;
    for (std::size_t i = 0; i < series[k].x.size(); ++i) {
      if (!std::isfinite(series[k].y[i])) continue;
      points += fmt::format("{:.2f},{:.2f} ", f.px(series[k].x[i]), f.py(series[k].y[i]));
    }
    s += fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>)"
                     "\n",
                     color, points);
    if (!series[k].label.empty()) {
      const double ly = f.top + 18 + 18 * static_cast<double>(k);
      const double lx = f.width - f.right - 170;
      s += fmt::format(
          R"(<line x1="{0:.1f}" y1="{1:.1f}" x2="{2:.1f}" y2="{1:.1f}" stroke="{3}" stroke-width="2"/>)"
          R"(<text x="{4:.1f}" y="{5:.1f}" font-size="12">{6}</text>)"
          "\n",
          lx, ly, lx + 24, color, lx + 30, ly + 4, escape_xml(series[k].label));
    }
  }
  return s + "</svg>\n";
}

std::string space_time_svg(const std::vector<double>& t, const std::vector<double>& x,
                           const std::vector<std::vector<double>>& values, const PlotLabels& labels,
                           int width, int height) {
  if (t.empty() || x.empty() || values.size() != t.size()) {
    throw std::invalid_argument("space-time plot needs one row of values per time");
  }
  Frame f;
  f.width = width;
  f.height = height;
  f.right = 80;
  f.x0 = x.front();
  f.x1 = x.back();
  f.y0 = t.front();
  f.y1 = t.back();
  widen(f.x0, f.x1);
  widen(f.y0, f.y1);

  double vmax = 0.0;
  for (const auto& row : values) {
    if (row.size() != x.size()) throw std::invalid_argument("space-time row length differs from x");
    for (double v : row) vmax = std::max(vmax, v);
  }
  if (!(vmax > 0.0)) vmax = 1.0;

  auto color = [&](double v) {
    const double s = std::clamp(v / vmax, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(255 * s));
    const int g = static_cast<int>(std::lround(255 * (1.0 - std::abs(2.0 * s - 1.0)) * 0.8));
    const int b = static_cast<int>(std::lround(255 * (1.0 - s)));
    return fmt::format("#{:02x}{:02x}{:02x}", r, g, b);
  };

  std::string s = svg_open(width, height);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double ta = i == 0 ? t[0] : 0.5 * (t[i - 1] + t[i]);
    const double tb = i + 1 == t.size() ? t[i] : 0.5 * (t[i] + t[i + 1]);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double xa = j == 0 ? x[0] : 0.5 * (x[j - 1] + x[j]);
      const double xb = j + 1 == x.size() ? x[j] : 0.5 * (x[j] + x[j + 1]);
      s += fmt::format(R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="{}"/>)"
                       "\n",
                       f.px(xa), f.py(tb), f.px(xb) - f.px(xa) + 0.3, f.py(ta) - f.py(tb) + 0.3,
                       color(values[i][j]));
    }
  }
  s += axes(f, labels);
  const double bar_x = width - f.right + 20;
  for (int k = 0; k < 50; ++k) {
    const double frac = (k + 0.5) / 50.0;
    const double y = f.height - f.bottom - (k + 1) * (f.height - f.top - f.bottom) / 50.0;
    s += fmt::format(R"(<rect x="{:.1f}" y="{:.2f}" width="14" height="{:.2f}" fill="{}"/>)"
                     "\n",
                     bar_x, y, (f.height - f.top - f.bottom) / 50.0 + 0.3, color(frac * vmax));
  }
  s += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" font-size="11">{}</text>)"
                   "\n",
                   bar_x + 16, f.top + 10, format_number(vmax));
  s += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" font-size="11">0</text>)"
                   "\n",
                   bar_x + 16, f.height - f.bottom);
  return s + "</svg>\n";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

std::filesystem::path write_manifest(const std::filesystem::path& dir, const RunManifest& manifest) {
  for (const auto& output : manifest.outputs) {
    if (!std::filesystem::exists(dir / output)) {
      throw std::runtime_error(fmt::format("manifest lists '{}' but it was not written", output));
    }
  }
  const nlohmann::json doc{{"command", manifest.command},
                           {"config", manifest.config},
                           {"version", manifest.version},
                           {"timestamp", manifest.timestamp},
                           {"outputs", manifest.outputs},
                           {"wall_seconds", manifest.wall_seconds}};
  const auto path = dir / "manifest.json";
  write_text_atomic(path, doc.dump(2) + "\n");
  return path;
}

}  // namespace kpp
