#pragma once

#include <array>
#include <span>
#include <vector>

#include "fuzzyblock/kbt/block.hpp"

namespace fuzzyblock::kbt {

// Closed half-space n . x >= d.
struct HalfSpace {
  Vec3 n;
  double d = 0.0;

  static HalfSpace through(const Vec3& normal, const Vec3& point) { return {normal, normal.dot(point)}; }
  double eval(const Vec3& x) const { return n.dot(x) - d; }
};

struct OrientedBox {
  Vec3 center = Vec3::Zero();
  std::array<Vec3, 3> axes{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  Vec3 half_extent = Vec3::Ones();

  std::vector<HalfSpace> halfspaces() const;
};

struct ConvexPolyhedron {
  std::vector<Vec3> vertices;
  // Vertex indices lying on each input half-space boundary.
  std::vector<std::vector<int>> incident;
  double volume = 0.0;
};

// Vertex enumeration over all plane triples, feasibility filtering, and a
// signed-tetrahedra volume. Exact for bounded convex regions; an empty or
// lower-dimensional region has volume 0.
ConvexPolyhedron halfspace_intersection(std::span<const HalfSpace> hs, double tol = 1e-9);

// Volume of the block with the given code, bounded by located joint planes,
// the facet planes, and the box. Throws Error(Unbounded) when the region
// reaches the box.
double block_volume(const BlockCode& code, std::span<const JointPlane> joints, std::span<const HalfSpace> facets,
                    const OrientedBox& box);

}  // namespace fuzzyblock::kbt
