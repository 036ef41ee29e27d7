#pragma once

#include <string>
#include <vector>

#include "fuzzyblock/geometry/fuzzy_geometry.hpp"
#include "fuzzyblock/kbt/tunnel.hpp"

namespace fuzzyblock::app {

struct RgbColor {
  int r = 0, g = 0, b = 0;
  std::string hex() const;
};

// Piecewise-linear red (0) -> yellow (cap / 2) -> blue (cap): low safety
// factors are hot.
RgbColor sf_color(double sf, double cap);

struct AngleValue {
  double angle_deg = 0.0;  // 0 at the crown, positive toward +horizontal
  double value = 0.0;
};

// Section polygon surrounded by a band of annular sectors, one per sample,
// each spanning halfway to its neighbours.
std::string damage_ring_svg(const std::vector<kbt::Vec2>& section, const std::vector<AngleValue>& series, double cap,
                            const std::string& title);

// Grayscale raster, darker = higher membership; y grows upward.
std::string heatmap_svg(const geom::Raster& raster, const std::string& title);

std::string scatter_svg(const std::vector<double>& x, const std::vector<double>& y, const std::string& x_label,
                        const std::string& y_label, const std::string& title);

}  // namespace fuzzyblock::app
