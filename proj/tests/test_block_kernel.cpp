#include <doctest.h>

#include <cmath>
#include <random>

#include "fuzzyblock/error.hpp"
#include "fuzzyblock/kbt/block.hpp"
#include "fuzzyblock/kbt/polyhedron.hpp"
#include "fuzzyblock/kbt/simplex.hpp"
#include "fuzzyblock/kbt/tunnel.hpp"
#include "support/oracles.hpp"

using namespace fuzzyblock;
using namespace fuzzyblock::kbt;

namespace {

std::vector<JointPlane> roof_joints() {
  return {{"J1", {60, 0}, 20, {}}, {"J2", {60, 120}, 20, {}}, {"J3", {60, 240}, 20, {}}};
}

const Facet& facet_near(const TunnelSection& t, double angle) {
  for (const auto& f : t.facets())
    if (std::abs(f.angle_deg - angle) < 1e-6) return f;
  FAIL("no facet at angle " << angle);
  return t.facets().front();
}

const std::vector<oracle::V3>& dirs() {
  static const auto d = oracle::sphere_directions(100000, 77);
  return d;
}

Vec3 random_unit(std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  Vec3 v(g(gen), g(gen), g(gen));
  return v.normalized();
}

}  // namespace

TEST_CASE("orientation ranges") {
  CHECK_THROWS_AS(Orientation({95, 0}).validate(), Error);
  CHECK_THROWS_AS(Orientation({30, 360}).validate(), Error);
  CHECK_THROWS_AS((JointPlane{"J", {30, 10}, 90, {}}.validate()), Error);
  CHECK_NOTHROW((JointPlane{"J", {30, 10}, 20, {}}.validate()));
}

TEST_CASE("normal_from_orientation examples") {
  CHECK((normal_from_orientation({0, 0}) - Vec3(0, 0, 1)).norm() < 1e-15);
  CHECK((normal_from_orientation({90, 90}) - Vec3(1, 0, 0)).norm() < 1e-15);
  const Vec3 n = normal_from_orientation({45, 0});
  CHECK(n.y() == doctest::Approx(0.70711).epsilon(1e-5));
  CHECK(n.z() == doctest::Approx(0.70711).epsilon(1e-5));
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> dip(0, 90), dd(0, 360);
  for (int k = 0; k < 200; ++k) {
    const double a = dip(gen), b = dd(gen);
    const Vec3 v = normal_from_orientation({a, b});
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((v - oracle::plane_normal(a, b)).norm() < 1e-14);
    CHECK(v.z() >= -1e-15);
  }
}

TEST_CASE("simplex solves small LPs") {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6
  Eigen::MatrixXd A(2, 2);
  A << 1, 2, 3, 1;
  const auto r = solve_lp(A, Eigen::Vector2d(4, 6), Eigen::Vector2d(1, 1));
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(2.8));
  CHECK(r.x[0] == doctest::Approx(1.6));
  CHECK(r.x[1] == doctest::Approx(1.2));
  // infeasible: x <= -1 with x >= 0
  Eigen::MatrixXd B(1, 1);
  B << 1;
  CHECK(solve_lp(B, Eigen::VectorXd::Constant(1, -1), Eigen::VectorXd::Constant(1, 1)).status == LpStatus::Infeasible);
  // unbounded: max x with -x <= 1
  Eigen::MatrixXd C(1, 1);
  C << -1;
  CHECK(solve_lp(C, Eigen::VectorXd::Constant(1, 1), Eigen::VectorXd::Constant(1, 1)).status == LpStatus::Unbounded);
}

TEST_CASE("pyramid_nonempty examples") {
  const auto one = pyramid_nonempty(HalfSpaceSystem({Vec3(0, 0, 1)}));
  CHECK(one.nonempty);
  REQUIRE(one.witness);
  CHECK(one.witness->z() > 0.5);
  CHECK(one.witness->norm() == doctest::Approx(1.0));
  CHECK(one.margin == doctest::Approx(1.0));

  const auto box = pyramid_nonempty(HalfSpaceSystem({Vec3::UnitX(), -Vec3::UnitX(), Vec3::UnitY(), -Vec3::UnitY(),
                                                     Vec3::UnitZ(), -Vec3::UnitZ()}));
  CHECK_FALSE(box.nonempty);

  const double s = 1 / std::sqrt(3.0);
  const std::vector<Vec3> tet{Vec3(s, s, s), Vec3(s, -s, -s), Vec3(-s, s, -s), Vec3(-s, -s, s)};
  CHECK_FALSE(pyramid_nonempty(HalfSpaceSystem(tet)).nonempty);
  CHECK(oracle::best_margin(tet, dirs()) < 0);

  // two opposite half-spaces leave a plane: nonempty, boundary only
  const auto plane = pyramid_nonempty(HalfSpaceSystem({Vec3::UnitZ(), -Vec3::UnitZ()}));
  CHECK(plane.nonempty);
  CHECK(plane.boundary_only);
  REQUIRE(plane.witness);
  CHECK(std::abs(plane.witness->z()) < 1e-9);
  CHECK(plane.witness->norm() == doctest::Approx(1.0));

  CHECK_THROWS_AS(HalfSpaceSystem({Vec3(0, 0, 2)}), Error);
  CHECK(HalfSpaceSystem::from_directions({Vec3(0, 0, 2)}).normals()[0].z() == 1.0);
}

TEST_CASE("LP emptiness agrees with direction sampling on random systems") {
  std::mt19937_64 gen(31337);
  int compared = 0, disagreements = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 6;
    std::vector<Vec3> normals;
    for (int k = 0; k < n; ++k) normals.push_back(random_unit(gen));
    const auto res = pyramid_nonempty(HalfSpaceSystem(normals));
    if (res.witness) {
      for (const auto& m : normals) CHECK(m.dot(*res.witness) >= -1e-9);
    }
    const double margin = oracle::refined_margin(normals, dirs());
    if (std::abs(margin) <= 1e-3) continue;
    ++compared;
    if (res.nonempty != (margin > 0)) ++disagreements;
  }
  CHECK(compared > 500);
  CHECK(disagreements == 0);
}

TEST_CASE("block codes") {
  CHECK(BlockCode::from_index(0, 3).str() == "LLL");
  CHECK(BlockCode::from_index(1, 3).str() == "LLU");
  CHECK(BlockCode::from_index(7, 3).str() == "UUU");
  CHECK(BlockCode::parse("ULU").str() == "ULU");
  CHECK_THROWS_AS(BlockCode::parse("UXL"), Error);
  const auto jp = joint_pyramid(BlockCode::parse("UL"), std::vector<JointPlane>{{"a", {30, 0}, 20, {}}, {"b", {30, 90}, 20, {}}});
  CHECK((jp.normals()[0] - normal_from_orientation({30, 0})).norm() < 1e-15);
  CHECK((jp.normals()[1] + normal_from_orientation({30, 90})).norm() < 1e-15);
}

TEST_CASE("classify_block examples") {
  const auto joints = roof_joints();
  const Vec3 roof(0, 0, 1);
  CHECK(classify_block(BlockCode::parse("LLL"), joints, roof).block_class == BlockClass::Removable);
  CHECK(classify_block(BlockCode::parse("UUU"), joints, roof).block_class == BlockClass::Infinite);
  CHECK(classify_block(BlockCode(), std::vector<JointPlane>{}, roof).block_class == BlockClass::Infinite);

  // sampling oracle: JP of LLL contains the downward axis, BP has no direction
  std::vector<oracle::V3> jp, bp;
  for (const auto& j : joints) jp.push_back(-oracle::plane_normal(j.orientation.dip, j.orientation.dip_direction));
  bp = jp;
  bp.push_back(roof);
  CHECK(oracle::best_margin(jp, dirs()) > 1e-3);
  CHECK(oracle::best_margin(bp, dirs()) < -1e-3);
}

TEST_CASE("Shi classes are exhaustive and consistent with the pyramids") {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> dip(5, 85), dd(0, 360);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<JointPlane> joints;
    const int n = 1 + trial % 4;
    for (int k = 0; k < n; ++k) joints.push_back({"J" + std::to_string(k), {dip(gen), dd(gen)}, 20, {}});
    const Vec3 e = random_unit(gen);
    for (std::size_t c = 0; c < (1u << n); ++c) {
      const auto code = BlockCode::from_index(c, n);
      const auto cls = classify_block(code, joints, e);
      const bool bp = cls.bp.nonempty, jpn = cls.jp.nonempty;
      switch (cls.block_class) {
        case BlockClass::Infinite: CHECK(bp); break;
        case BlockClass::Removable: CHECK((!bp && jpn)); break;
        case BlockClass::Tapered: CHECK((!bp && !jpn)); break;
      }
    }
  }
}

TEST_CASE("sliding mode examples") {
  const auto joints = roof_joints();
  const auto jp = joint_pyramid(BlockCode::parse("LLL"), joints);
  const auto fall = sliding_mode(jp, Vec3(0, 0, -1));
  CHECK(fall.kind == ModeKind::Falling);
  CHECK((fall.direction - Vec3(0, 0, -1)).norm() < 1e-12);
  CHECK(fall.label() == "falling");
  CHECK(safety_factor(fall, jp, Vec3(0, 0, -27), std::vector<double>{20, 20, 20}) == 0.0);

  // downward cone with an upward force: nothing gains potential
  const auto safe = sliding_mode(jp, Vec3(0, 0, 1));
  CHECK(safe.kind == ModeKind::Safe);
  CHECK(std::isinf(safety_factor(safe, jp, Vec3(0, 0, 1), std::vector<double>{20, 20, 20})));

  // single joint dip 30 toward north, block above it
  const auto one = joint_pyramid(BlockCode::parse("U"), std::vector<JointPlane>{{"J", {30, 0}, 20, {}}});
  const auto plane = sliding_mode(one, Vec3(0, 0, -1));
  CHECK(plane.kind == ModeKind::Plane);
  CHECK(plane.label() == "plane(1)");
  // downdip of a plane dipping toward north descends northward
  const Vec3 downdip(0, std::cos(oracle::deg(30)), -std::sin(oracle::deg(30)));
  CHECK((plane.direction - downdip).norm() < 1e-12);
  const double sf = safety_factor(plane, one, Vec3(0, 0, -1), std::vector<double>{20});
  CHECK(std::abs(sf - std::tan(oracle::deg(20)) / std::tan(oracle::deg(30))) < 1e-9);
  CHECK(sf == doctest::Approx(0.6305).epsilon(1e-4));
}

TEST_CASE("wedge example") {
  const Vec3 m1 = Vec3(0.5, -0.1, 0.860).normalized(), m2 = Vec3(-0.5, -0.1, 0.860).normalized();
  const HalfSpaceSystem jp({m1, m2});
  const Vec3 r(0, 0, -1);
  const auto mode = sliding_mode(jp, r);
  CHECK(mode.kind == ModeKind::Wedge);
  CHECK(mode.label() == "wedge(1,2)");
  const auto w = oracle::wedge(m1, m2, 20, 20, r);
  CHECK(w.T == doctest::Approx(0.1155).epsilon(1e-3));
  CHECK(w.N1 == doctest::Approx(0.5736).epsilon(1e-3));
  CHECK(w.N2 == doctest::Approx(0.5736).epsilon(1e-3));
  CHECK((mode.direction - w.s).norm() < 1e-9);
  const double sf = safety_factor(mode, jp, r, std::vector<double>{20, 20});
  CHECK(std::abs(sf - w.sf) < 1e-9);
  CHECK(std::abs(sf - 3.62) < 1e-2);
  // scaling the force leaves the factor unchanged
  CHECK(safety_factor(mode, jp, 37.0 * r, std::vector<double>{20, 20}) == doctest::Approx(sf).epsilon(1e-12));
}

TEST_CASE("negative normal reaction is a mode inconsistency") {
  const HalfSpaceSystem jp({Vec3(0, 0.5, std::sqrt(0.75))});
  SlidingMode bogus;
  bogus.kind = ModeKind::Plane;
  bogus.i = 0;
  bogus.direction = Vec3(0, std::sqrt(0.75), -0.5);
  try {
    safety_factor(bogus, jp, Vec3(0, 0.3, 1), std::vector<double>{20});
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ModeInconsistency);
  }
  CHECK_THROWS_AS(sliding_mode(HalfSpaceSystem({Vec3::UnitZ(), -Vec3::UnitZ(), Vec3::UnitX(), -Vec3::UnitX(),
                                                Vec3::UnitY(), -Vec3::UnitY()}),
                               Vec3(0, 0, -1)),
                  Error);
}

TEST_CASE("sliding direction is optimal against sampled argmax") {
  std::mt19937_64 gen(5150);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    std::vector<Vec3> normals;
    for (int k = 0; k < n; ++k) normals.push_back(random_unit(gen));
    const HalfSpaceSystem jp(normals);
    if (!pyramid_nonempty(jp).nonempty) continue;
    const Vec3 r = random_unit(gen) * 10.0;
    const auto mode = sliding_mode(jp, r);
    double best = -2;
    for (const auto& v : dirs()) {
      bool in = true;
      for (const auto& m : normals)
        if (m.dot(v) < 0) {
          in = false;
          break;
        }
      if (in) best = std::max(best, v.dot(r.normalized()));
    }
    if (best < -1.5) continue;  // pyramid too thin to sample
    ++checked;
    if (mode.kind == ModeKind::Safe) {
      CHECK(best <= 1e-3);
    } else {
      CHECK(jp.contains(mode.direction, 1e-9));
      CHECK(mode.direction.dot(r.normalized()) >= best - 1e-3);
      std::vector<double> phi(n, 25.0);
      try {
        const double f1 = safety_factor(mode, jp, r, phi);
        const double f2 = safety_factor(mode, jp, 0.01 * r, phi);
        CHECK(f1 >= 0.0);
        CHECK(f1 == doctest::Approx(f2).epsilon(1e-9));
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ModeInconsistency);
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("polyhedron volumes") {
  std::vector<HalfSpace> cube;
  for (int a = 0; a < 3; ++a) {
    Vec3 e = Vec3::Zero();
    e[a] = 1;
    cube.push_back({e, 0.0});
    cube.push_back({-e, -1.0});
  }
  CHECK(halfspace_intersection(cube).volume == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(halfspace_intersection(cube).vertices.size() == 8);

  std::vector<HalfSpace> simplex{{Vec3::UnitX(), 0}, {Vec3::UnitY(), 0}, {Vec3::UnitZ(), 0}, {-Vec3::Ones(), -1}};
  CHECK(halfspace_intersection(simplex).volume == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

  // empty region
  std::vector<HalfSpace> none{{Vec3::UnitX(), 1}, {-Vec3::UnitX(), 0}, {Vec3::UnitY(), 0}, {-Vec3::UnitY(), -1},
                              {Vec3::UnitZ(), 0}, {-Vec3::UnitZ(), -1}};
  CHECK(halfspace_intersection(none).volume == 0.0);
}

TEST_CASE("random five-plane blocks match Monte-Carlo volume") {
  std::mt19937_64 gen(424242);
  std::normal_distribution<double> jitter(0, 0.15);
  std::uniform_real_distribution<double> off(0.6, 1.4);
  const double s = 1 / std::sqrt(3.0);
  const std::vector<Vec3> tet{Vec3(s, s, s), Vec3(s, -s, -s), Vec3(-s, s, -s), Vec3(-s, -s, s)};
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<HalfSpace> hs;
    std::vector<std::pair<oracle::V3, double>> ohs;
    // four perturbed tetrahedron faces n . x <= off, plus one random cut
    for (const auto& t : tet) {
      const Vec3 n = (t + Vec3(jitter(gen), jitter(gen), jitter(gen))).normalized();
      const double d = off(gen);
      hs.push_back({-n, -d});
    }
    const Vec3 cut = random_unit(gen);
    hs.push_back({cut, -0.3});
    for (const auto& h : hs) ohs.push_back({h.n, h.d});
    const auto poly = halfspace_intersection(hs);
    REQUIRE(poly.volume > 0);
    Vec3 lo = poly.vertices.front(), hi = lo;
    for (const auto& v : poly.vertices) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    const double mc = oracle::mc_volume(ohs, lo, hi, 1000000, 1000 + trial);
    CHECK(std::abs(poly.volume - mc) / mc < 0.01);
  }
}

TEST_CASE("block_volume with located joints") {
  // three orthogonal joints through the origin cut a unit corner out of a
  // cube-shaped box
  std::vector<JointPlane> joints{{"x", {90, 90}, 20, Vec3(0, 0, 0)},
                                 {"y", {90, 0}, 20, Vec3(0, 0, 0)},
                                 {"z", {0, 0}, 20, Vec3(0, 0, 0)}};
  const std::vector<HalfSpace> face{{-Vec3::Ones().normalized(), -1 / std::sqrt(3.0)}};
  OrientedBox box;
  box.half_extent = Vec3::Constant(5);
  CHECK(block_volume(BlockCode::parse("UUU"), joints, face, box) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  // without the face the corner runs into the box
  try {
    block_volume(BlockCode::parse("UUU"), joints, {}, box);
    FAIL("expected unbounded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unbounded);
  }
  joints[0].location.reset();
  CHECK_THROWS_AS(block_volume(BlockCode::parse("UUU"), joints, face, box), Error);
}

TEST_CASE("tunnel sections") {
  const auto t = TunnelSection::square(4.0);
  CHECK(t.facets().size() == 4);
  const auto& roof = facet_near(t, 0.0);
  CHECK((roof.inward_normal - Vec3(0, 0, 1)).norm() < 1e-12);
  CHECK(roof.width == doctest::Approx(4.0));
  CHECK(t.facet_at_angle(0.0) == roof.index);
  CHECK(t.facet_at_angle(179.0) == facet_near(t, 180.0).index);
  CHECK(t.axis().norm() == doctest::Approx(1.0));
  CHECK(std::abs(t.axis().dot(t.horizontal())) < 1e-12);
  CHECK(std::abs(t.axis().dot(t.vertical())) < 1e-12);
  for (const auto& f : t.facets()) {
    // free-face normal points from the opening into the rock
    const Vec3 c = t.to_world(t.centroid());
    CHECK(f.inward_normal.dot(f.midpoint - c) > 0);
  }
  CHECK_THROWS_AS(TunnelSection({{0, 0}, {1, 0}}, 0), Error);
  CHECK_THROWS_AS(TunnelSection({{0, 0}, {2, 0}, {1, 0.1}, {2, 2}, {0, 2}}, 0), Error);
  CHECK_THROWS_AS(TunnelSection({{0, 0}, {1, 0}, {0, 1}}, 0, 95), Error);
  const TunnelSection plunging({{-2, -2}, {2, -2}, {2, 2}, {-2, 2}}, 30, 20);
  CHECK(plunging.axis().z() == doctest::Approx(-std::sin(oracle::deg(20))));
}

TEST_CASE("tunnel enumeration") {
  const auto t = TunnelSection::square(4.0);
  const Vec3 g(0, 0, -27);
  const auto none = enumerate_tunnel_blocks(std::vector<JointPlane>{}, t, g);
  CHECK(none.size() == 4);
  for (const auto& r : none) CHECK(r.block_class == BlockClass::Infinite);

  const auto joints = roof_joints();
  const auto recs = enumerate_tunnel_blocks(joints, t, g);
  CHECK(recs.size() == 4 * 8);
  // facet-major, codes lexicographic
  for (std::size_t k = 0; k < recs.size(); ++k) {
    CHECK(recs[k].facet == static_cast<int>(k / 8));
    CHECK(recs[k].code.str() == BlockCode::from_index(k % 8, 3).str());
  }
  const int roof = facet_near(t, 0.0).index;
  bool found = false;
  for (const auto& r : recs) {
    if (r.facet == roof && r.code.str() == "LLL") {
      found = true;
      CHECK(r.block_class == BlockClass::Removable);
      REQUIRE(r.mode);
      CHECK(r.mode->kind == ModeKind::Falling);
      REQUIRE(r.safety_factor);
      CHECK(*r.safety_factor == 0.0);
      REQUIRE(r.volume);
      CHECK(*r.volume > 0.0);
    }
    // record invariants
    CHECK(r.safety_factor.has_value() == (r.block_class == BlockClass::Removable));
    if (r.mode && r.mode->kind == ModeKind::Falling) CHECK(*r.safety_factor == 0.0);
  }
  CHECK(found);
}

TEST_CASE("maximal key block fills the facet") {
  const auto t = TunnelSection::square(4.0);
  const auto& roof = facet_near(t, 0.0);
  const auto jp = joint_pyramid(BlockCode::parse("LLL"), roof_joints());
  const auto box = analysis_box(t, {});
  const auto kb = maximal_key_block(jp, roof, box);
  // rebuild the block from its apex and measure the trace on the facet
  std::vector<HalfSpace> hs;
  for (const auto& m : jp.normals()) hs.push_back(HalfSpace::through(m, kb.apex));
  hs.push_back(roof.halfspace());
  const auto poly = halfspace_intersection(hs);
  CHECK(poly.volume == doctest::Approx(kb.volume).epsilon(1e-9));
  double umin = 1e9, umax = -1e9;
  for (const auto& v : poly.vertices) {
    if (std::abs(roof.inward_normal.dot(v - roof.midpoint)) > 1e-7) continue;
    const double u = roof.along.dot(v - roof.midpoint);
    umin = std::min(umin, u);
    umax = std::max(umax, u);
  }
  CHECK(umax - umin == doctest::Approx(roof.width).epsilon(1e-9));
  CHECK(umin + umax == doctest::Approx(0.0).scale(1));
  // Monte-Carlo check of the same block
  std::vector<std::pair<oracle::V3, double>> ohs;
  for (const auto& h : hs) ohs.push_back({h.n, h.d});
  Vec3 lo = poly.vertices.front(), hi = lo;
  for (const auto& v : poly.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const double mc = oracle::mc_volume(ohs, lo, hi, 1000000, 5);
  CHECK(std::abs(kb.volume - mc) / mc < 0.01);
}
