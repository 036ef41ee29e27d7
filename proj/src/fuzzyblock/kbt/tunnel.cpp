#include "fuzzyblock/kbt/tunnel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "fuzzyblock/error.hpp"
#include "fuzzyblock/parallel.hpp"

namespace fuzzyblock::kbt {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

TunnelSection::TunnelSection(std::vector<Vec2> section, double axis_trend_deg, double axis_plunge_deg)
    : section_(std::move(section)), trend_(axis_trend_deg), plunge_(axis_plunge_deg) {
  if (section_.size() < 3) fail(ErrorCode::Semantic, "tunnel section needs at least 3 vertices");
  if (!(plunge_ >= 0.0 && plunge_ < 90.0)) fail(ErrorCode::Semantic, "tunnel axis plunge must lie in [0, 90)");

  double area2 = 0.0;
  for (std::size_t i = 0; i < section_.size(); ++i) area2 += cross2(section_[i], section_[(i + 1) % section_.size()]);
  if (std::abs(area2) < 1e-12) fail(ErrorCode::Semantic, "tunnel section has zero area");
  if (area2 < 0.0) std::reverse(section_.begin(), section_.end());
  const std::size_t n = section_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e1 = section_[(i + 1) % n] - section_[i];
    const Vec2 e2 = section_[(i + 2) % n] - section_[(i + 1) % n];
    if (e1.norm() < 1e-12) fail(ErrorCode::Semantic, "tunnel section has repeated vertices");
    if (cross2(e1, e2) <= 0.0) fail(ErrorCode::Semantic, "tunnel section must be strictly convex");
  }

  const double t = trend_ * kDeg;
  const double p = plunge_ * kDeg;
  axis_ = Vec3(std::sin(t) * std::cos(p), std::cos(t) * std::cos(p), -std::sin(p));
  horizontal_ = axis_.cross(Vec3::UnitZ()).normalized();
  vertical_ = horizontal_.cross(axis_).normalized();

  // Area centroid of the polygon.
  double a = 0.0;
  Vec2 c = Vec2::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = cross2(section_[i], section_[(i + 1) % n]);
    a += w;
    c += w * (section_[i] + section_[(i + 1) % n]);
  }
  centroid_ = c / (3.0 * a);

  for (std::size_t i = 0; i < n; ++i) {
    Facet f;
    f.index = static_cast<int>(i);
    f.from = section_[i];
    f.to = section_[(i + 1) % n];
    const Vec2 d = f.to - f.from;
    f.width = d.norm();
    const Vec2 out(d.y() / f.width, -d.x() / f.width);
    const Vec2 mid = 0.5 * (f.from + f.to);
    f.midpoint = to_world(mid);
    f.inward_normal = (out.x() * horizontal_ + out.y() * vertical_).normalized();
    f.along = to_world(d / f.width).normalized();
    f.angle_deg = angle_of(mid);
    facets_.push_back(f);
  }
}

TunnelSection TunnelSection::square(double side, double axis_trend_deg) {
  const double h = 0.5 * side;
  return TunnelSection({{-h, -h}, {h, -h}, {h, h}, {-h, h}}, axis_trend_deg, 0.0);
}

double TunnelSection::diameter() const {
  double d = 0.0;
  for (const auto& a : section_) {
    for (const auto& b : section_) d = std::max(d, (a - b).norm());
  }
  return d;
}

double TunnelSection::angle_of(const Vec2& p) const {
  const Vec2 d = p - centroid_;
  return std::atan2(d.x(), d.y()) / kDeg;
}

int TunnelSection::facet_at_angle(double angle_deg) const {
  const Vec2 dir(std::sin(angle_deg * kDeg), std::cos(angle_deg * kDeg));
  int best = 0;
  double best_t = std::numeric_limits<double>::infinity();
  for (const auto& f : facets_) {
    // centroid + t dir = from + u (to - from)
    const Vec2 e = f.to - f.from;
    const double den = cross2(dir, e);
    if (std::abs(den) < 1e-15) continue;
    const Vec2 w = f.from - centroid_;
    const double t = cross2(w, e) / den;
    const double u = cross2(w, dir) / den;
    if (t > 0.0 && u >= -1e-12 && u <= 1.0 + 1e-12 && t < best_t) {
      best_t = t;
      best = f.index;
    }
  }
  return best;
}

OrientedBox analysis_box(const TunnelSection& tunnel, const BlockAnalysisOptions& opts) {
  require(opts.box_scale > 0.0, "analysis box scale must be positive");
  const double half = opts.box_scale * tunnel.diameter();
  OrientedBox box;
  box.center = tunnel.to_world(tunnel.centroid());
  box.axes = {tunnel.horizontal(), tunnel.vertical(), tunnel.axis()};
  box.half_extent = Vec3::Constant(half);
  return box;
}

namespace {

std::vector<HalfSpace> block_halfspaces(const HalfSpaceSystem& jp, const Vec3& apex, const Facet& facet,
                                        const OrientedBox& box) {
  std::vector<HalfSpace> hs;
  for (const auto& m : jp.normals()) hs.push_back(HalfSpace::through(m, apex));
  hs.push_back(facet.halfspace());
  const auto bh = box.halfspaces();
  hs.insert(hs.end(), bh.begin(), bh.end());
  return hs;
}

bool touches_box(const ConvexPolyhedron& poly, std::size_t first_box) {
  for (std::size_t f = first_box; f < poly.incident.size(); ++f) {
    if (!poly.incident[f].empty()) return true;
  }
  return false;
}

}  // namespace

KeyBlock maximal_key_block(const HalfSpaceSystem& jp, const Facet& facet, const OrientedBox& box) {
  const std::size_t first_box = jp.size() + 1;
  const Vec3 trial_apex = facet.midpoint + facet.inward_normal;
  const auto trial = halfspace_intersection(block_halfspaces(jp, trial_apex, facet, box));
  if (trial.volume <= 0.0) fail(ErrorCode::Numeric, "joint pyramid does not close against the facet");
  if (touches_box(trial, first_box)) fail(ErrorCode::Unbounded, "block escapes the analysis box");

  const double tol = 1e-7;
  double umin = std::numeric_limits<double>::infinity();
  double umax = -umin;
  for (const auto& v : trial.vertices) {
    if (std::abs(facet.inward_normal.dot(v - facet.midpoint)) > tol) continue;
    const double u = facet.along.dot(v - facet.midpoint);
    umin = std::min(umin, u);
    umax = std::max(umax, u);
  }
  const double trace = umax - umin;
  if (!(trace > 1e-9)) fail(ErrorCode::Numeric, "block trace on the facet has no width");

  const double h = facet.width / trace;
  KeyBlock kb;
  kb.apex = facet.midpoint + h * facet.inward_normal - h * 0.5 * (umin + umax) * facet.along;
  const auto block = halfspace_intersection(block_halfspaces(jp, kb.apex, facet, box));
  if (touches_box(block, first_box)) fail(ErrorCode::Unbounded, "block escapes the analysis box");
  kb.volume = block.volume;
  return kb;
}

BlockRecord analyze_block(const BlockCode& code, std::span<const JointPlane> joints, const Facet& facet,
                          const Vec3& resultant, const OrientedBox& box) {
  BlockRecord rec;
  rec.facet = facet.index;
  rec.code = code;
  rec.angle_deg = facet.angle_deg;
  try {
    const Classification cls = classify_block(code, joints, facet.inward_normal);
    rec.block_class = cls.block_class;
    rec.degenerate = cls.degenerate();
    if (rec.degenerate) rec.note = "boundary-only pyramid";
  } catch (const Error& e) {
    rec.note = e.what();
    return rec;
  }
  if (rec.block_class != BlockClass::Removable) return rec;

  const HalfSpaceSystem jp = joint_pyramid(code, joints);
  std::vector<double> friction;
  for (const auto& j : joints) friction.push_back(j.friction_deg);
  std::vector<std::string> notes;
  if (!rec.note.empty()) notes.push_back(rec.note);
  try {
    rec.mode = sliding_mode(jp, resultant);
    rec.safety_factor = safety_factor(*rec.mode, jp, resultant, friction);
  } catch (const Error& e) {
    notes.push_back(fmt::format("mode: {}", e.what()));
  }
  try {
    rec.volume = maximal_key_block(jp, facet, box).volume;
  } catch (const Error& e) {
    notes.push_back(fmt::format("volume: {}", e.what()));
  }
  rec.note.clear();
  for (std::size_t i = 0; i < notes.size(); ++i) rec.note += (i ? "; " : "") + notes[i];
  return rec;
}

std::vector<BlockRecord> enumerate_tunnel_blocks(std::span<const JointPlane> joints, const TunnelSection& tunnel,
                                                 const Vec3& resultant, const BlockAnalysisOptions& opts) {
  require(joints.size() <= 8, "at most 8 joints can be enumerated");
  for (const auto& j : joints) j.validate();
  const OrientedBox box = analysis_box(tunnel, opts);
  const std::size_t codes = std::size_t{1} << joints.size();
  const auto& facets = tunnel.facets();
  std::vector<BlockRecord> out(facets.size() * codes);
  parallel_for(out.size(), [&](std::size_t k) {
    const auto& facet = facets[k / codes];
    out[k] = analyze_block(BlockCode::from_index(k % codes, joints.size()), joints, facet, resultant, box);
  });
  return out;
}

}  // namespace fuzzyblock::kbt
