#pragma once

#include <array>
#include <variant>
#include <vector>

#include "fuzzyblock/fuzzy/trapezoid.hpp"

namespace fuzzyblock::geom {

using fuzzy::AlphaInterval;
using fuzzy::SampledFuzzyNumber;
using fuzzy::TrapezoidalNumber;

inline constexpr double kDefaultTol = 1e-6;
inline constexpr int kBisectionIterations = 30;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned rectangle; the alpha-cut of a fuzzy point.
struct Rect {
  AlphaInterval x;
  AlphaInterval y;
};

struct FuzzyPoint {
  TrapezoidalNumber x;
  TrapezoidalNumber y;

  static FuzzyPoint crisp(double px, double py) {
    return {TrapezoidalNumber::crisp(px), TrapezoidalNumber::crisp(py)};
  }
  Rect cut(double alpha) const { return {fuzzy::alpha_cut(x, alpha), fuzzy::alpha_cut(y, alpha)}; }
};

// a x + b y = c with fuzzy coefficients.
class FuzzyLineImplicit {
 public:
  FuzzyLineImplicit(TrapezoidalNumber a, TrapezoidalNumber b, TrapezoidalNumber c);

  const TrapezoidalNumber& a() const { return a_; }
  const TrapezoidalNumber& b() const { return b_; }
  const TrapezoidalNumber& c() const { return c_; }

 private:
  TrapezoidalNumber a_, b_, c_;
};

// y = m x + b with fuzzy slope and intercept.
struct FuzzyLineSlope {
  TrapezoidalNumber m;
  TrapezoidalNumber b;
};

struct FuzzySegment {
  FuzzyPoint p;
  FuzzyPoint q;

  // True when the alpha = 1 rectangles of the endpoints intersect; such a
  // segment is legal but usually a modelling slip.
  bool cores_overlap() const;
};

class FuzzyPolygon {
 public:
  explicit FuzzyPolygon(std::vector<FuzzyPoint> vertices);

  const std::vector<FuzzyPoint>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  FuzzySegment edge(std::size_t i) const { return {vertices_[i], vertices_[(i + 1) % vertices_.size()]}; }

 private:
  std::vector<FuzzyPoint> vertices_;
};

// Feasibility of a point at a given alpha level. All of these are monotone:
// feasible at alpha implies feasible at every smaller alpha.
bool line_feasible(const FuzzyLineImplicit& line, double alpha, double px, double py);
bool slope_line_feasible(const FuzzyLineSlope& line, double alpha, double px, double py);
bool segment_feasible(const FuzzySegment& seg, double alpha, double px, double py);

double line_membership(const FuzzyLineImplicit& line, double px, double py, double tol = kDefaultTol);
double slope_line_membership(const FuzzyLineSlope& line, double px, double py, double tol = kDefaultTol);
double segment_membership(const FuzzySegment& seg, double px, double py, double tol = kDefaultTol);
double polygon_membership(const FuzzyPolygon& poly, double px, double py, double tol = kDefaultTol);

// Levelwise [min, max] Euclidean distance between the alpha-cut rectangles.
SampledFuzzyNumber fuzzy_distance(const FuzzyPoint& p, const FuzzyPoint& q,
                                  int levels = fuzzy::kDefaultAlphaLevels);

// Convex hull (counter-clockwise, collinear points dropped).
std::vector<Point2> convex_hull(std::vector<Point2> pts);
bool point_in_convex(const std::vector<Point2>& hull, Point2 p, double eps);

using Shape = std::variant<FuzzyLineImplicit, FuzzyLineSlope, FuzzySegment, FuzzyPolygon>;

double shape_membership(const Shape& shape, double px, double py, double tol = kDefaultTol);

struct BoundingRect {
  double xmin = 0.0, ymin = 0.0, xmax = 1.0, ymax = 1.0;
};

// Memberships at cell centers, row-major with rows running along y.
struct Raster {
  BoundingRect bbox;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;

  double cell_x(int i) const { return bbox.xmin + (i + 0.5) * (bbox.xmax - bbox.xmin) / nx; }
  double cell_y(int j) const { return bbox.ymin + (j + 0.5) * (bbox.ymax - bbox.ymin) / ny; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
};

Raster raster_membership(const Shape& shape, const BoundingRect& bbox, int nx, int ny, double tol = kDefaultTol);

}  // namespace fuzzyblock::geom
