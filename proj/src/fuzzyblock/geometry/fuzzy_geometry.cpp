#include "fuzzyblock/geometry/fuzzy_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "fuzzyblock/error.hpp"
#include "fuzzyblock/parallel.hpp"

namespace fuzzyblock::geom {

namespace {

struct Interval {
  double lo, hi;
};

Interval times(const AlphaInterval& iv, double s) {
  const double u = iv.lo * s;
  const double v = iv.hi * s;
  return {std::min(u, v), std::max(u, v)};
}

// Round-off allowance relative to the magnitudes involved.
double slack(std::initializer_list<double> mags) {
  double m = 1.0;
  for (double v : mags) m = std::max(m, std::abs(v));
  return 1e-12 * m;
}

bool intersects(Interval a, Interval b, double eps) { return a.lo <= b.hi + eps && b.lo <= a.hi + eps; }

// sup{alpha : feasible(alpha)} by bisection, relying on monotone feasibility.
template <class Feasible>
double sup_alpha(Feasible&& feasible, double tol) {
  require(tol > 0.0, "membership tolerance must be positive");
  if (!feasible(0.0)) return 0.0;
  if (feasible(1.0)) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < kBisectionIterations && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double cross(Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

double dist_to_segment(Point2 p, Point2 a, Point2 b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

}  // namespace

FuzzyLineImplicit::FuzzyLineImplicit(TrapezoidalNumber a, TrapezoidalNumber b, TrapezoidalNumber c)
    : a_(a), b_(b), c_(c) {
  const bool a_zero = a_.a2() == 0.0 && a_.a3() == 0.0;
  const bool b_zero = b_.a2() == 0.0 && b_.a3() == 0.0;
  require(!(a_zero && b_zero), "fuzzy line needs a core representative with (a, b) != (0, 0)");
}

bool FuzzySegment::cores_overlap() const {
  const Rect rp = p.cut(1.0);
  const Rect rq = q.cut(1.0);
  return rp.x.lo <= rq.x.hi && rq.x.lo <= rp.x.hi && rp.y.lo <= rq.y.hi && rq.y.lo <= rp.y.hi;
}

FuzzyPolygon::FuzzyPolygon(std::vector<FuzzyPoint> vertices) : vertices_(std::move(vertices)) {
  require(vertices_.size() >= 3, "a fuzzy polygon needs at least three vertices");
}

bool line_feasible(const FuzzyLineImplicit& line, double alpha, double px, double py) {
  const auto a = fuzzy::alpha_cut(line.a(), alpha);
  const auto b = fuzzy::alpha_cut(line.b(), alpha);
  const auto c = fuzzy::alpha_cut(line.c(), alpha);
  const Interval ax = times(a, px);
  const Interval by = times(b, py);
  const Interval lhs{ax.lo + by.lo, ax.hi + by.hi};
  return intersects(lhs, {c.lo, c.hi}, slack({lhs.lo, lhs.hi, c.lo, c.hi}));
}

bool slope_line_feasible(const FuzzyLineSlope& line, double alpha, double px, double py) {
  const auto m = fuzzy::alpha_cut(line.m, alpha);
  const auto b = fuzzy::alpha_cut(line.b, alpha);
  const Interval mx = times(m, px);
  const Interval rhs{mx.lo + b.lo, mx.hi + b.hi};
  return intersects(rhs, {py, py}, slack({rhs.lo, rhs.hi, py}));
}

// The union of segments joining two convex sets is the convex hull of their
// union, so feasibility reduces to a point-in-hull test on the 8 corners.
bool segment_feasible(const FuzzySegment& seg, double alpha, double px, double py) {
  const Rect rp = seg.p.cut(alpha);
  const Rect rq = seg.q.cut(alpha);
  std::vector<Point2> corners;
  corners.reserve(8);
  double mag = std::max(std::abs(px), std::abs(py));
  for (const Rect& r : {rp, rq}) {
    for (double x : {r.x.lo, r.x.hi}) {
      for (double y : {r.y.lo, r.y.hi}) {
        corners.push_back({x, y});
        mag = std::max({mag, std::abs(x), std::abs(y)});
      }
    }
  }
  return point_in_convex(convex_hull(std::move(corners)), {px, py}, 1e-12 * std::max(1.0, mag));
}

double line_membership(const FuzzyLineImplicit& line, double px, double py, double tol) {
  return sup_alpha([&](double a) { return line_feasible(line, a, px, py); }, tol);
}

double slope_line_membership(const FuzzyLineSlope& line, double px, double py, double tol) {
  return sup_alpha([&](double a) { return slope_line_feasible(line, a, px, py); }, tol);
}

double segment_membership(const FuzzySegment& seg, double px, double py, double tol) {
  return sup_alpha([&](double a) { return segment_feasible(seg, a, px, py); }, tol);
}

double polygon_membership(const FuzzyPolygon& poly, double px, double py, double tol) {
  double best = 0.0;
  for (std::size_t i = 0; i < poly.size() && best < 1.0; ++i) {
    best = std::max(best, segment_membership(poly.edge(i), px, py, tol));
  }
  return best;
}

SampledFuzzyNumber fuzzy_distance(const FuzzyPoint& p, const FuzzyPoint& q, int levels) {
  std::vector<AlphaInterval> cuts;
  for (double alpha : fuzzy::alpha_grid(levels)) {
    const Rect a = p.cut(alpha);
    const Rect b = q.cut(alpha);
    const double gx = std::max({0.0, b.x.lo - a.x.hi, a.x.lo - b.x.hi});
    const double gy = std::max({0.0, b.y.lo - a.y.hi, a.y.lo - b.y.hi});
    const double fx = std::max(std::abs(b.x.hi - a.x.lo), std::abs(a.x.hi - b.x.lo));
    const double fy = std::max(std::abs(b.y.hi - a.y.lo), std::abs(a.y.hi - b.y.lo));
    cuts.push_back({alpha, std::hypot(gx, gy), std::hypot(fx, fy)});
  }
  return SampledFuzzyNumber(std::move(cuts));
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0.0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

bool point_in_convex(const std::vector<Point2>& hull, Point2 p, double eps) {
  if (hull.empty()) return false;
  if (hull.size() == 1) return std::hypot(p.x - hull[0].x, p.y - hull[0].y) <= eps;
  if (hull.size() == 2) return dist_to_segment(p, hull[0], hull[1]) <= eps;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2 a = hull[i];
    const Point2 b = hull[(i + 1) % hull.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (cross(a, b, p) < -eps * len) return false;
  }
  return true;
}

double shape_membership(const Shape& shape, double px, double py, double tol) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FuzzyLineImplicit>) return line_membership(s, px, py, tol);
        if constexpr (std::is_same_v<T, FuzzyLineSlope>) return slope_line_membership(s, px, py, tol);
        if constexpr (std::is_same_v<T, FuzzySegment>) return segment_membership(s, px, py, tol);
        if constexpr (std::is_same_v<T, FuzzyPolygon>) return polygon_membership(s, px, py, tol);
      },
      shape);
}

Raster raster_membership(const Shape& shape, const BoundingRect& bbox, int nx, int ny, double tol) {
  require(nx >= 2 && ny >= 2, "raster needs at least 2 cells per axis");
  require(bbox.xmax > bbox.xmin && bbox.ymax > bbox.ymin, "degenerate raster bounding box");
  Raster r{bbox, nx, ny, std::vector<double>(static_cast<std::size_t>(nx) * ny, 0.0)};
  parallel_for(static_cast<std::size_t>(ny), [&](std::size_t j) {
    for (int i = 0; i < nx; ++i) {
      r.values[j * nx + i] = shape_membership(shape, r.cell_x(i), r.cell_y(static_cast<int>(j)), tol);
    }
  });
  return r;
}

}  // namespace fuzzyblock::geom
