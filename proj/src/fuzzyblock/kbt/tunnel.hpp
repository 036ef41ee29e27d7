#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fuzzyblock/kbt/block.hpp"
#include "fuzzyblock/kbt/polyhedron.hpp"

namespace fuzzyblock::kbt {

using Vec2 = Eigen::Vector2d;

struct Facet {
  int index = 0;
  Vec2 from, to;       // section coordinates
  Vec3 midpoint;       // world coordinates, axial position 0
  Vec3 inward_normal;  // free-face normal pointing into the rock
  Vec3 along;          // unit in-section direction of the edge
  double width = 0.0;
  double angle_deg = 0.0;  // of the midpoint, 0 at the crown, positive toward +horizontal

  HalfSpace halfspace() const { return HalfSpace::through(inward_normal, midpoint); }
};

// Infinite prismatic opening. Section coordinates (s, z) map to world as
// s * horizontal() + z * vertical(); the axis is perpendicular to both.
class TunnelSection {
 public:
  TunnelSection(std::vector<Vec2> section, double axis_trend_deg, double axis_plunge_deg = 0.0);

  static TunnelSection square(double side, double axis_trend_deg = 0.0);

  const std::vector<Vec2>& section() const { return section_; }
  double axis_trend_deg() const { return trend_; }
  double axis_plunge_deg() const { return plunge_; }
  Vec3 axis() const { return axis_; }
  Vec3 horizontal() const { return horizontal_; }
  Vec3 vertical() const { return vertical_; }
  Vec3 to_world(const Vec2& p) const { return p.x() * horizontal_ + p.y() * vertical_; }
  Vec2 centroid() const { return centroid_; }
  double diameter() const;

  const std::vector<Facet>& facets() const { return facets_; }
  // Facet hit by the ray from the centroid at the given position angle.
  int facet_at_angle(double angle_deg) const;
  double angle_of(const Vec2& p) const;

 private:
  std::vector<Vec2> section_;
  double trend_ = 0.0;
  double plunge_ = 0.0;
  Vec3 axis_, horizontal_, vertical_;
  Vec2 centroid_;
  std::vector<Facet> facets_;
};

struct BlockAnalysisOptions {
  // Half-size of the analysis box, in section diameters, around the centroid.
  double box_scale = 10.0;
};

struct BlockRecord {
  int facet = 0;
  BlockCode code;
  BlockClass block_class = BlockClass::Infinite;
  std::optional<SlidingMode> mode;
  std::optional<double> safety_factor;  // +infinity for a safe (stable) block
  std::optional<double> volume;
  double angle_deg = 0.0;
  bool degenerate = false;
  std::string note;
};

OrientedBox analysis_box(const TunnelSection& tunnel, const BlockAnalysisOptions& opts);

struct KeyBlock {
  double volume = 0.0;
  Vec3 apex;
};

// Largest block of the given joint pyramid whose trace on the facet fits the
// facet width: the joint planes pass through a common apex in the rock that
// is placed so the trace is centred on the facet midpoint.
KeyBlock maximal_key_block(const HalfSpaceSystem& jp, const Facet& facet, const OrientedBox& box);

BlockRecord analyze_block(const BlockCode& code, std::span<const JointPlane> joints, const Facet& facet,
                          const Vec3& resultant, const OrientedBox& box);

// Every facet against every code, facet-major, codes in lexicographic order.
std::vector<BlockRecord> enumerate_tunnel_blocks(std::span<const JointPlane> joints, const TunnelSection& tunnel,
                                                 const Vec3& resultant, const BlockAnalysisOptions& opts = {});

}  // namespace fuzzyblock::kbt
