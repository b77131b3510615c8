#pragma once

#include <string>
#include <vector>

#include "neurodob/road.hpp"
#include "neurodob/sim.hpp"

namespace ndob {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal line-chart SVG writer; output is byte-deterministic for identical
/// inputs.
void write_svg_lines(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series);

/// One CSV with the shared x column followed by one column per series
/// (all series must share x).
void write_series_csv(const std::string& path, const std::string& x_label,
                      const std::vector<Series>& series);

/// Emits the standard figure set into out_dir (an .svg and a .csv per
/// figure): steering comparison, tracking errors, curvature histogram(s),
/// and the Cartesian road trace. Logs are labeled by the given names.
void emit_plots(const std::vector<std::pair<std::string, const SimLog*>>& logs,
                const std::vector<const RoadMap*>& maps,
                const std::string& out_dir);

}  // namespace ndob
