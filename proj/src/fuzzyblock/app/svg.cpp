#include "fuzzyblock/app/svg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "fuzzyblock/error.hpp"

namespace fuzzyblock::app {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

std::string header(double w, double h, const std::string& title) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" viewBox=\"0 0 {0:.0f} {1:.0f}\">\n"
      "<title>{2}</title>\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n",
      w, h, escape(title));
}

int lerp(int a, int b, double t) { return static_cast<int>(std::lround(a + (b - a) * t)); }

std::string label(double v) { return fmt::format("{:.3g}", v); }

}  // namespace

std::string RgbColor::hex() const { return fmt::format("#{:02x}{:02x}{:02x}", r, g, b); }

RgbColor sf_color(double sf, double cap) {
  require(cap > 0.0, "color cap must be positive");
  double t = std::isnan(sf) ? 1.0 : std::clamp(sf / cap, 0.0, 1.0);
  if (t <= 0.5) {
    t /= 0.5;
    return {255, lerp(0, 255, t), 0};
  }
  t = (t - 0.5) / 0.5;
  return {lerp(255, 0, t), lerp(255, 0, t), lerp(0, 255, t)};
}

std::string damage_ring_svg(const std::vector<kbt::Vec2>& section, const std::vector<AngleValue>& series, double cap,
                            const std::string& title) {
  require(!series.empty(), "damage map has no data");
  require(section.size() >= 3, "damage map needs a section polygon");
  kbt::Vec2 c = kbt::Vec2::Zero();
  for (const auto& p : section) c += p;
  c /= static_cast<double>(section.size());
  double rmax = 0.0;
  for (const auto& p : section) rmax = std::max(rmax, (p - c).norm());

  const double size = 480.0;
  const double scale = (size / 2.0 - 40.0) / (1.7 * rmax);
  const double cx = size / 2.0, cy = size / 2.0 - 10.0;
  const double r0 = 1.15 * rmax * scale, r1 = 1.6 * rmax * scale;
  auto screen = [&](double angle, double r) {
    return std::pair{cx + r * std::sin(angle * kDeg), cy - r * std::cos(angle * kDeg)};
  };

  std::vector<AngleValue> s = series;
  std::stable_sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.angle_deg < b.angle_deg; });
  std::string out = header(size, size + 40.0, title);
  out += "<g id=\"band\" stroke=\"none\">\n";
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    double lo, hi;
    if (n == 1) {
      lo = -180.0;
      hi = 180.0;
    } else {
      const double prev = i ? s[i - 1].angle_deg : s[n - 1].angle_deg - 360.0;
      const double next = i + 1 < n ? s[i + 1].angle_deg : s[0].angle_deg + 360.0;
      lo = 0.5 * (prev + s[i].angle_deg);
      hi = 0.5 * (s[i].angle_deg + next);
    }
    const std::string fill = sf_color(s[i].value, cap).hex();
    if (hi - lo >= 359.999) {
      out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.2f}\"/>\n",
                         cx, cy, 0.5 * (r0 + r1), fill, r1 - r0);
      continue;
    }
    const auto [ax, ay] = screen(lo, r1);
    const auto [bx, by] = screen(hi, r1);
    const auto [ex, ey] = screen(hi, r0);
    const auto [fx, fy] = screen(lo, r0);
    const int large = hi - lo > 180.0 ? 1 : 0;
    out += fmt::format(
        "<path data-angle=\"{:.2f}\" data-sf=\"{:.4f}\" fill=\"{}\" d=\"M {:.2f} {:.2f} A {:.2f} {:.2f} 0 {} 1 {:.2f} {:.2f} "
        "L {:.2f} {:.2f} A {:.2f} {:.2f} 0 {} 0 {:.2f} {:.2f} Z\"/>\n",
        s[i].angle_deg, s[i].value, fill, ax, ay, r1, r1, large, bx, by, ex, ey, r0, r0, large, fx, fy);
  }
  out += "</g>\n<polygon id=\"section\" fill=\"#dddddd\" stroke=\"#333333\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < section.size(); ++i) {
    const kbt::Vec2 d = (section[i] - c) * scale;
    out += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", cx + d.x(), cy - d.y());
  }
  out += "\"/>\n";

  // Legend: 0 .. cap ramp.
  const double lx = 40.0, ly = size + 5.0, lw = size - 80.0;
  const int steps = 40;
  for (int i = 0; i < steps; ++i) {
    const double v = cap * (i + 0.5) / steps;
    out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"12\" fill=\"{}\"/>\n",
                       lx + lw * i / steps, ly, lw / steps + 0.5, sf_color(v, cap).hex());
  }
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" font-family=\"sans-serif\">S.F 0</text>\n", lx,
                     ly + 26.0);
  out += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\">{}</text>\n",
      lx + lw, ly + 26.0, label(cap));
  out += "</svg>\n";
  return out;
}

std::string heatmap_svg(const geom::Raster& raster, const std::string& title) {
  require(raster.nx > 0 && raster.ny > 0 && !raster.values.empty(), "raster has no data");
  const double cell = std::max(2.0, std::floor(480.0 / std::max(raster.nx, raster.ny)));
  const double w = cell * raster.nx, h = cell * raster.ny;
  std::string out = header(w + 20.0, h + 40.0, title);
  out += "<g id=\"raster\" stroke=\"none\">\n";
  for (int j = 0; j < raster.ny; ++j) {
    for (int i = 0; i < raster.nx; ++i) {
      const int v = static_cast<int>(std::lround(255.0 * (1.0 - std::clamp(raster.at(i, j), 0.0, 1.0))));
      out += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"{}\"/>\n",
                         10.0 + i * cell, 10.0 + (raster.ny - 1 - j) * cell, cell, cell, RgbColor{v, v, v}.hex());
    }
  }
  out += "</g>\n";
  out += fmt::format(
      "<text x=\"10\" y=\"{:.1f}\" font-size=\"11\" font-family=\"sans-serif\">x [{}, {}]  y [{}, {}]</text>\n",
      h + 30.0, label(raster.bbox.xmin), label(raster.bbox.xmax), label(raster.bbox.ymin), label(raster.bbox.ymax));
  out += "</svg>\n";
  return out;
}

std::string scatter_svg(const std::vector<double>& x, const std::vector<double>& y, const std::string& x_label,
                        const std::string& y_label, const std::string& title) {
  require(!x.empty() && x.size() == y.size(), "plot has no data");
  auto finite_range = [](const std::vector<double>& v) {
    double lo = INFINITY, hi = -INFINITY;
    for (double d : v) {
      if (std::isfinite(d)) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
    }
    if (!std::isfinite(lo)) lo = hi = 0.0;
    if (hi == lo) {
      lo -= 0.5;
      hi += 0.5;
    }
    return std::pair{lo, hi};
  };
  const auto [x0, x1] = finite_range(x);
  const auto [y0, y1] = finite_range(y);
  const double W = 520.0, H = 380.0, m = 50.0;
  std::string out = header(W, H, title);
  out += fmt::format("<rect x=\"{0}\" y=\"{1}\" width=\"{2}\" height=\"{3}\" fill=\"none\" stroke=\"#333333\"/>\n", m,
                     20.0, W - m - 20.0, H - m - 20.0);
  out += "<g id=\"points\" fill=\"#1f4e9e\">\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) continue;
    const double yy = std::isfinite(y[i]) ? y[i] : y1;
    const double px = m + (x[i] - x0) / (x1 - x0) * (W - m - 20.0);
    const double py = H - m - (yy - y0) / (y1 - y0) * (H - m - 20.0);
    out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\"/>\n", px, py);
  }
  out += "</g>\n";
  const std::string font = "font-size=\"11\" font-family=\"sans-serif\"";
  out += fmt::format("<text x=\"{}\" y=\"{}\" {}>{}</text>\n", m, H - m + 15.0, font, label(x0));
  out += fmt::format("<text x=\"{}\" y=\"{}\" {} text-anchor=\"end\">{}</text>\n", W - 20.0, H - m + 15.0, font, label(x1));
  out += fmt::format("<text x=\"{}\" y=\"{}\" {} text-anchor=\"middle\">{}</text>\n", (W + m) / 2, H - 12.0, font,
                     escape(x_label));
  out += fmt::format("<text x=\"{}\" y=\"{}\" {} text-anchor=\"end\">{}</text>\n", m - 4.0, H - m, font, label(y0));
  out += fmt::format("<text x=\"{}\" y=\"{}\" {} text-anchor=\"end\">{}</text>\n", m - 4.0, 30.0, font, label(y1));
  out += fmt::format("<text x=\"12\" y=\"{}\" {} transform=\"rotate(-90 12 {})\" text-anchor=\"middle\">{}</text>\n",
                     H / 2, font, H / 2, escape(y_label));
  out += "</svg>\n";
  return out;
}

}  // namespace fuzzyblock::app
