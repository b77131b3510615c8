#include "neurodob/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "neurodob/errors.hpp"
#include "neurodob/text.hpp"

namespace ndob {

namespace {

constexpr int kWidth = 900;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 150;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#ff7f0e", "#9467bd", "#8c564b"};

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

void write_svg_lines(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series) {
  if (series.empty()) throw ConfigError("svg: no series");
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min, y_min = x_min, y_max = -x_min;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size() || s.x.empty()) {
      throw ConfigError("svg: series sizes bad for " + s.label);
    }
    for (const double v : s.x) {
      x_min = std::min(x_min, v);
      x_max = std::max(x_max, v);
    }
    for (const double v : s.y) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (x_max - x_min < 1e-12) x_max = x_min + 1.0;
  if (y_max - y_min < 1e-12) {
    y_min -= 1.0;
    y_max += 1.0;
  }
  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double x) {
    return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w;
  };
  auto py = [&](double y) {
    return kMarginTop + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(kWidth) + "\" height=\"" + std::to_string(kHeight) +
         "\" viewBox=\"0 0 " + std::to_string(kWidth) + " " +
         std::to_string(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(kWidth / 2) +
         "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" + title + "</text>\n";

  // axes with 5 ticks each
  svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 4.0;
    const double yv = y_min + (y_max - y_min) * i / 4.0;
    svg += "<line x1=\"" + coord(px(xv)) + "\" y1=\"" +
           coord(kMarginTop + plot_h) + "\" x2=\"" + coord(px(xv)) +
           "\" y2=\"" + coord(kMarginTop) +
           "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + coord(kMarginLeft) + "\" y1=\"" + coord(py(yv)) +
           "\" x2=\"" + coord(kMarginLeft + plot_w) + "\" y2=\"" +
           coord(py(yv)) + "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + coord(px(xv)) + "\" y=\"" +
           coord(kMarginTop + plot_h + 16) + "\" text-anchor=\"middle\">" +
           tick_label(xv) + "</text>\n";
    svg += "<text x=\"" + coord(kMarginLeft - 6) + "\" y=\"" +
           coord(py(yv) + 4) + "\" text-anchor=\"end\">" + tick_label(yv) +
           "</text>\n";
  }
  svg += "</g>\n";
  svg += "<rect x=\"" + std::to_string(kMarginLeft) + "\" y=\"" +
         std::to_string(kMarginTop) + "\" width=\"" + coord(plot_w) +
         "\" height=\"" + coord(plot_h) +
         "\" fill=\"none\" stroke=\"#333\"/>\n";
  svg += "<text x=\"" + coord(kMarginLeft + plot_w / 2) + "\" y=\"" +
         std::to_string(kHeight - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">" + x_label + "</text>\n";
  svg += "<text x=\"16\" y=\"" + coord(kMarginTop + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 " +
         coord(kMarginTop + plot_h / 2) + ")\">" + y_label + "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % 6];
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i > 0) points += ' ';
      points += coord(px(s.x[i])) + "," + coord(py(s.y[i]));
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.3\" points=\"" + points + "\"/>\n";
    const double ly = kMarginTop + 16.0 + 18.0 * static_cast<double>(si);
    svg += "<line x1=\"" + coord(kMarginLeft + plot_w + 10) + "\" y1=\"" +
           coord(ly - 4) + "\" x2=\"" + coord(kMarginLeft + plot_w + 34) +
           "\" y2=\"" + coord(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + coord(kMarginLeft + plot_w + 40) + "\" y=\"" +
           coord(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + s.label +
           "</text>\n";
  }
  svg += "</svg>\n";
  write_file(path, svg);
}

void write_series_csv(const std::string& path, const std::string& x_label,
                      const std::vector<Series>& series) {
  if (series.empty()) throw ConfigError("series csv: no series");
  const std::size_t n = series[0].x.size();
  for (const auto& s : series) {
    if (s.x.size() != n || s.y.size() != n) {
      throw LengthMismatch("series csv: all series must share x");
    }
  }
  std::string out = x_label;
  for (const auto& s : series) out += "," + s.label;
  out += '\n';
  for (std::size_t i = 0; i < n; ++i) {
    out += g17(series[0].x[i]);
    for (const auto& s : series) out += "," + g17(s.y[i]);
    out += '\n';
  }
  write_file(path, out);
}

namespace {

std::vector<double> times(const SimLog& log) {
  std::vector<double> t;
  t.reserve(log.rows.size());
  for (const auto& r : log.rows) t.push_back(r.t);
  return t;
}

template <typename F>
Series log_series(const std::string& label, const SimLog& log, F&& get) {
  Series s;
  s.label = label;
  s.x = times(log);
  s.y.reserve(log.rows.size());
  for (const auto& r : log.rows) s.y.push_back(get(r));
  return s;
}

}  // namespace

void emit_plots(const std::vector<std::pair<std::string, const SimLog*>>& logs,
                const std::vector<const RoadMap*>& maps,
                const std::string& out_dir) {
  if (!logs.empty()) {
    std::vector<Series> steer;
    std::vector<Series> ey;
    std::vector<Series> epsi;
    for (const auto& [name, log] : logs) {
      steer.push_back(log_series(name + " delta_lqr", *log,
                                 [](const SimRecord& r) { return r.delta_lqr; }));
      steer.push_back(log_series(name + " delta_f", *log,
                                 [](const SimRecord& r) { return r.delta_f; }));
      ey.push_back(log_series(name, *log,
                              [](const SimRecord& r) { return r.x.e_y; }));
      epsi.push_back(log_series(name, *log,
                                [](const SimRecord& r) { return r.x.e_psi; }));
    }
    write_svg_lines(out_dir + "/steering_comparison.svg",
                    "Steering commands", "t [s]", "steering [rad]", steer);
    write_series_csv(out_dir + "/steering_comparison.csv", "t_s", steer);
    write_svg_lines(out_dir + "/lateral_error.svg", "Lateral error", "t [s]",
                    "e_y [m]", ey);
    write_series_csv(out_dir + "/lateral_error.csv", "t_s", ey);
    write_svg_lines(out_dir + "/heading_error.svg", "Heading error", "t [s]",
                    "e_psi [rad]", epsi);
    write_series_csv(out_dir + "/heading_error.csv", "t_s", epsi);
  }

  if (!maps.empty()) {
    std::vector<Series> hist;
    for (const RoadMap* map : maps) {
      const CurvatureHistogram h = curvature_histogram(*map, 40);
      Series s;
      s.label = map->name;
      for (int i = 0; i < h.counts.size(); ++i) {
        s.x.push_back(0.5 * (h.bin_edges[i] + h.bin_edges[i + 1]));
        s.y.push_back(h.counts[i]);
      }
      hist.push_back(std::move(s));
    }
    write_svg_lines(out_dir + "/curvature_histogram.svg",
                    "Curvature distribution", "kappa [1/m]", "stations",
                    hist);
    // per-map CSVs: bin grids differ between maps
    for (std::size_t i = 0; i < maps.size(); ++i) {
      write_series_csv(out_dir + "/curvature_histogram_" + maps[i]->name +
                           ".csv",
                       "kappa_bin_center", {hist[i]});
    }

    std::vector<Series> paths;
    for (const RoadMap* map : maps) {
      const XyPath p = integrate_path(*map);
      paths.push_back({map->name, p.x, p.y});
    }
    write_svg_lines(out_dir + "/road_path.svg", "Road layout (integrated)",
                    "x [m]", "y [m]", paths);
    for (std::size_t i = 0; i < maps.size(); ++i) {
      write_series_csv(out_dir + "/road_path_" + maps[i]->name + ".csv", "x_m",
                       {paths[i]});
    }
  }
}

}  // namespace ndob
