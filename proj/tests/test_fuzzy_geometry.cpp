#include <doctest.h>

#include <cmath>
#include <random>

#include "fuzzyblock/error.hpp"
#include "fuzzyblock/geometry/fuzzy_geometry.hpp"
#include "support/oracles.hpp"

using namespace fuzzyblock;
using namespace fuzzyblock::geom;
using fuzzy::TrapezoidalNumber;

namespace {

TrapezoidalNumber fuzz(std::mt19937_64& gen, double center, double spread) {
  std::uniform_real_distribution<double> u(0, spread);
  const double a = u(gen), b = u(gen), c = u(gen), d = u(gen);
  return {center - a - b, center - a, center + c, center + c + d};
}

}  // namespace

TEST_CASE("line membership examples") {
  const auto one = TrapezoidalNumber::crisp(1), two = TrapezoidalNumber::crisp(2);
  const FuzzyLineImplicit crisp(one, one, two);
  CHECK(line_membership(crisp, 1, 1) == 1.0);
  CHECK(line_membership(crisp, 0, 0) == 0.0);

  const FuzzyLineImplicit fz({0.9, 1, 1, 1.1}, {0.9, 1, 1, 1.1}, {1.8, 2, 2, 2.2});
  CHECK(line_membership(fz, 1, 1) == doctest::Approx(1.0).epsilon(1e-6));
  const double expect = 0.31 / 0.41;
  CHECK(line_membership(fz, 1.05, 1.05) == doctest::Approx(expect).epsilon(1e-5));
  const double scan = oracle::alpha_scan([&](double a) {
    return oracle::line_feasible({0.9, 1, 1, 1.1}, {0.9, 1, 1, 1.1}, {1.8, 2, 2, 2.2}, a, 1.05, 1.05);
  });
  CHECK(std::abs(scan - line_membership(fz, 1.05, 1.05)) <= 2e-3);
  CHECK(scan == doctest::Approx(0.756).epsilon(1e-3));

  const auto zero = TrapezoidalNumber::crisp(0);
  CHECK_THROWS_AS(FuzzyLineImplicit(zero, zero, one), Error);
}

TEST_CASE("slope line membership examples") {
  const FuzzyLineSlope crisp{TrapezoidalNumber::crisp(1), TrapezoidalNumber::crisp(0)};
  CHECK(slope_line_membership(crisp, 2, 2) == 1.0);
  CHECK(slope_line_membership(crisp, 2, 2.1) == 0.0);
  const FuzzyLineSlope fz{{0, 1, 1, 2}, TrapezoidalNumber::crisp(0)};
  CHECK(slope_line_membership(fz, 1, 1) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(slope_line_membership(fz, 1, 1.5) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("segment membership examples") {
  const FuzzySegment crisp{FuzzyPoint::crisp(0, 0), FuzzyPoint::crisp(1, 0)};
  CHECK(segment_membership(crisp, 0.5, 0) == 1.0);
  CHECK(segment_membership(crisp, 0.5, 0.1) == 0.0);

  const TrapezoidalNumber wob(-0.1, 0, 0, 0.1);
  const FuzzySegment fz{{TrapezoidalNumber::crisp(0), wob}, {TrapezoidalNumber::crisp(1), wob}};
  CHECK(segment_membership(fz, 0.5, 0.05) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(segment_membership(fz, 0, -0.1) <= 1e-6);
  const double scan = oracle::alpha_scan([&](double a) {
    return oracle::segment_feasible({0, 0, 0, 0}, wob.values(), {1, 1, 1, 1}, wob.values(), a, 0.5, 0.05);
  });
  CHECK(scan == doctest::Approx(0.5).epsilon(2e-3));
  CHECK_FALSE(fz.cores_overlap());
  CHECK(FuzzySegment{FuzzyPoint::crisp(0, 0), FuzzyPoint::crisp(0, 0)}.cores_overlap());
}

TEST_CASE("polygon membership examples") {
  const FuzzyPolygon sq({FuzzyPoint::crisp(0, 0), FuzzyPoint::crisp(1, 0), FuzzyPoint::crisp(1, 1),
                         FuzzyPoint::crisp(0, 1)});
  CHECK(polygon_membership(sq, 0, 0.5) == 1.0);
  CHECK(polygon_membership(sq, 0.5, 0.5) == 0.0);
  for (const auto& v : sq.vertices()) CHECK(polygon_membership(sq, v.x.a2(), v.y.a2()) == 1.0);
  CHECK_THROWS_AS(FuzzyPolygon({FuzzyPoint::crisp(0, 0), FuzzyPoint::crisp(1, 0)}), Error);
}

TEST_CASE("fuzzy distance examples") {
  const auto d = fuzzy_distance(FuzzyPoint::crisp(0, 0), FuzzyPoint::crisp(3, 4));
  for (const auto& l : d.levels()) {
    CHECK(l.lo == doctest::Approx(5.0));
    CHECK(l.hi == doctest::Approx(5.0));
  }
  const FuzzyPoint p{{-1, 0, 0, 1}, TrapezoidalNumber::crisp(0)};
  const auto e = fuzzy_distance(p, FuzzyPoint::crisp(3, 4));
  CHECK(e.support().lo == doctest::Approx(std::sqrt(20.0)));
  CHECK(e.support().hi == doctest::Approx(std::sqrt(32.0)));
  CHECK(e.core().lo == doctest::Approx(5.0));
  CHECK(e.core().hi == doctest::Approx(5.0));

  // sampled rectangle points as oracle for the support cut
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1, 1);
  double mn = 1e9, mx = 0;
  for (int k = 0; k < 10000; ++k) {
    const double x = u(gen);
    const double r = std::hypot(3 - x, 4.0);
    mn = std::min(mn, r);
    mx = std::max(mx, r);
  }
  CHECK(e.support().lo <= mn + 1e-12);
  CHECK(e.support().hi >= mx - 1e-12);
  CHECK(e.support().hi - mx < 1e-3);

  const FuzzyPoint a{{0, 1, 1, 2}, {0, 1, 1, 2}}, b{{1.5, 3, 3, 4}, {1.5, 3, 3, 4}};
  CHECK(fuzzy_distance(a, b).support().lo == 0.0);
  CHECK_THROWS_AS(fuzzy_distance(a, b, 1), Error);
}

TEST_CASE("fuzzy distance is symmetric, nested and matches sampled rectangles") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> c(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const FuzzyPoint p{fuzz(gen, c(gen), 0.8), fuzz(gen, c(gen), 0.8)};
    const FuzzyPoint q{fuzz(gen, c(gen), 0.8), fuzz(gen, c(gen), 0.8)};
    const auto d1 = fuzzy_distance(p, q), d2 = fuzzy_distance(q, p);
    for (std::size_t k = 0; k < d1.levels().size(); ++k) {
      CHECK(d1.levels()[k].lo == doctest::Approx(d2.levels()[k].lo));
      CHECK(d1.levels()[k].hi == doctest::Approx(d2.levels()[k].hi));
      if (k) CHECK(d1.levels()[k - 1].contains(d1.levels()[k]));
    }
    // brute force over a corner-inclusive grid of both rectangles at alpha 0.5
    const auto& lv = d1.levels()[5];
    const auto rp = p.cut(0.5), rq = q.cut(0.5);
    double mn = 1e9, mx = 0;
    const int g = 24;
    for (int i = 0; i <= g; ++i)
      for (int j = 0; j <= g; ++j)
        for (int k = 0; k <= g; ++k)
          for (int l = 0; l <= g; ++l) {
            const double x1 = rp.x.lo + i * rp.x.width() / g, y1 = rp.y.lo + j * rp.y.width() / g;
            const double x2 = rq.x.lo + k * rq.x.width() / g, y2 = rq.y.lo + l * rq.y.width() / g;
            const double dd = std::hypot(x1 - x2, y1 - y2);
            mn = std::min(mn, dd);
            mx = std::max(mx, dd);
          }
    CHECK(lv.alpha == doctest::Approx(0.5));
    CHECK(lv.lo <= mn + 1e-9);
    CHECK(lv.lo >= mn - 0.1);
    CHECK(lv.hi == doctest::Approx(mx).epsilon(1e-9));
  }
}

TEST_CASE("bisection matches alpha-grid oracles on random shapes") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-1, 1), sp(0.05, 0.4);
  int lines = 0, slopes = 0, segs = 0, polys = 0;
  for (int trial = 0; trial < 150; ++trial) {
    // lines through a random point so memberships are spread over (0, 1)
    const auto a = fuzz(gen, u(gen) * 2, sp(gen)), b = fuzz(gen, 1 + u(gen), sp(gen));
    const double x = u(gen), y = u(gen);
    const double c0 = a.core_mid() * x + b.core_mid() * y + u(gen) * 0.3;
    const auto c = fuzz(gen, c0, sp(gen));
    const FuzzyLineImplicit line(a, b, c);
    const double got = line_membership(line, x, y);
    const double want = oracle::alpha_scan(
        [&](double al) { return oracle::line_feasible(a.values(), b.values(), c.values(), al, x, y); });
    CHECK(std::abs(got - want) <= 2e-3);
    ++lines;

    const auto m = fuzz(gen, u(gen), sp(gen)), bb = fuzz(gen, u(gen), sp(gen));
    const double sy = m.core_mid() * x + bb.core_mid() + u(gen) * 0.3;
    const double got2 = slope_line_membership({m, bb}, x, sy);
    const double want2 =
        oracle::alpha_scan([&](double al) { return oracle::slope_feasible(m.values(), bb.values(), al, x, sy); });
    CHECK(std::abs(got2 - want2) <= 2e-3);
    ++slopes;

    const FuzzyPoint p{fuzz(gen, u(gen), sp(gen)), fuzz(gen, u(gen), sp(gen))};
    const FuzzyPoint q{fuzz(gen, u(gen), sp(gen)), fuzz(gen, u(gen), sp(gen))};
    const double t = (u(gen) + 1) / 2;
    const double qx = (1 - t) * p.x.core_mid() + t * q.x.core_mid() + u(gen) * 0.2;
    const double qy = (1 - t) * p.y.core_mid() + t * q.y.core_mid() + u(gen) * 0.2;
    const double got3 = segment_membership({p, q}, qx, qy);
    const double want3 = oracle::alpha_scan([&](double al) {
      return oracle::segment_feasible(p.x.values(), p.y.values(), q.x.values(), q.y.values(), al, qx, qy);
    });
    CHECK(std::abs(got3 - want3) <= 2e-3);
    ++segs;

    std::vector<FuzzyPoint> verts;
    const int n = 3 + trial % 4;
    for (int k = 0; k < n; ++k) {
      const double ang = 2 * 3.14159265358979 * k / n;
      verts.push_back({fuzz(gen, std::cos(ang), sp(gen) * 0.5), fuzz(gen, std::sin(ang), sp(gen) * 0.5)});
    }
    const FuzzyPolygon poly(verts);
    const double px = u(gen) * 1.2, py = u(gen) * 1.2;
    const double got4 = polygon_membership(poly, px, py);
    double want4 = 0;
    for (int k = 0; k < n; ++k) {
      const auto& e0 = verts[k];
      const auto& e1 = verts[(k + 1) % n];
      want4 = std::max(want4, oracle::alpha_scan([&](double al) {
                         return oracle::segment_feasible(e0.x.values(), e0.y.values(), e1.x.values(),
                                                         e1.y.values(), al, px, py);
                       }));
      // max law
      CHECK(got4 >= segment_membership(poly.edge(k), px, py) - 1e-12);
    }
    CHECK(std::abs(got4 - want4) <= 2e-3);
    ++polys;
  }
  CHECK(lines + slopes + segs + polys >= 100);
}

TEST_CASE("feasibility is monotone in alpha") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(-1, 1), sp(0.05, 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    const FuzzyPoint p{fuzz(gen, u(gen), sp(gen)), fuzz(gen, u(gen), sp(gen))};
    const FuzzyPoint q{fuzz(gen, u(gen), sp(gen)), fuzz(gen, u(gen), sp(gen))};
    const FuzzyLineImplicit line(fuzz(gen, 1, sp(gen)), fuzz(gen, u(gen), sp(gen)), fuzz(gen, u(gen), sp(gen)));
    const double x = u(gen), y = u(gen);
    bool seg_prev = true, line_prev = true;
    for (int k = 0; k <= 100; ++k) {
      const double a = k / 100.0;
      const bool s = segment_feasible({p, q}, a, x, y), l = line_feasible(line, a, x, y);
      if (!seg_prev) CHECK_FALSE(s);
      if (!line_prev) CHECK_FALSE(l);
      seg_prev = s;
      line_prev = l;
    }
  }
}

TEST_CASE("crisp degeneration is an exact indicator") {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> g(-4, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const double ax = g(gen), ay = g(gen), bx = g(gen), by = g(gen);
    if (ax == bx && ay == by) continue;
    const FuzzySegment seg{FuzzyPoint::crisp(ax, ay), FuzzyPoint::crisp(bx, by)};
    // lattice points on the segment and off it
    for (int k = 0; k <= 4; ++k) {
      const double t = k / 4.0;
      CHECK(segment_membership(seg, ax + t * (bx - ax), ay + t * (by - ay)) == 1.0);
    }
    const double ox = 0.5 * (ax + bx) + 0.37 * (ay - by), oy = 0.5 * (ay + by) + 0.37 * (bx - ax);
    CHECK(segment_membership(seg, ox, oy) == 0.0);
    CHECK(segment_membership(seg, bx + (bx - ax), by + (by - ay)) == 0.0);
    const FuzzyLineImplicit line(TrapezoidalNumber::crisp(by - ay), TrapezoidalNumber::crisp(ax - bx),
                                 TrapezoidalNumber::crisp((by - ay) * ax + (ax - bx) * ay));
    CHECK(line_membership(line, bx + 2 * (bx - ax), by + 2 * (by - ay)) == 1.0);
    CHECK(line_membership(line, ox, oy) == 0.0);
  }
}

TEST_CASE("raster membership") {
  const auto one = TrapezoidalNumber::crisp(1), zero = TrapezoidalNumber::crisp(0);
  // vertical line x = 0 over a 3x3 grid centred on 0
  const Shape vline = FuzzyLineImplicit(one, zero, zero);
  const auto r = raster_membership(vline, {-1.5, -1.5, 1.5, 1.5}, 3, 3);
  REQUIRE(r.values.size() == 9);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) CHECK(r.at(i, j) == (i == 1 ? 1.0 : 0.0));
  CHECK_THROWS_AS(raster_membership(vline, {0, 0, 0, 1}, 3, 3), Error);
  CHECK_THROWS_AS(raster_membership(vline, {0, 0, 1, 1}, 1, 3), Error);

  // a fuzzy segment: codomain and refinement consistency. Cell centres of an
  // n grid coincide with every third centre of the 3n grid.
  const TrapezoidalNumber w(-0.2, -0.05, 0.05, 0.2);
  const Shape seg = FuzzySegment{{w, w}, {TrapezoidalNumber(0.7, 0.8, 0.9, 1.0), w}};
  const BoundingRect box{-1, -1, 1, 1};
  const auto coarse = raster_membership(seg, box, 12, 10);
  const auto fine = raster_membership(seg, box, 36, 30);
  for (double v : fine.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  for (int j = 0; j < 10; ++j)
    for (int i = 0; i < 12; ++i) {
      CHECK(fine.cell_x(3 * i + 1) == doctest::Approx(coarse.cell_x(i)).epsilon(1e-14));
      CHECK(fine.cell_y(3 * j + 1) == doctest::Approx(coarse.cell_y(j)).epsilon(1e-14));
      CHECK(fine.at(3 * i + 1, 3 * j + 1) == doctest::Approx(coarse.at(i, j)).epsilon(1e-12));
    }
  const auto again = raster_membership(seg, box, 12, 10);
  CHECK(again.values == coarse.values);
}
