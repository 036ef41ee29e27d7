#include "fuzzyblock/kbt/polyhedron.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fuzzyblock/error.hpp"

namespace fuzzyblock::kbt {

std::vector<HalfSpace> OrientedBox::halfspaces() const {
  std::vector<HalfSpace> out;
  for (int k = 0; k < 3; ++k) {
    const Vec3 a = axes[k].normalized();
    out.push_back(HalfSpace::through(a, center - half_extent(k) * a));
    out.push_back(HalfSpace::through(-a, center + half_extent(k) * a));
  }
  return out;
}

ConvexPolyhedron halfspace_intersection(std::span<const HalfSpace> hs, double tol) {
  ConvexPolyhedron poly;
  const int n = static_cast<int>(hs.size());
  poly.incident.resize(hs.size());
  double scale = 1.0;
  for (const auto& h : hs) scale = std::max(scale, std::abs(h.d) / std::max(h.n.norm(), 1e-300));
  const double feas = std::max(tol, 1e-12 * scale);
  const double merge = std::max(10.0 * tol, 1e-10 * scale);

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        Eigen::Matrix3d M;
        M.row(0) = hs[i].n.transpose();
        M.row(1) = hs[j].n.transpose();
        M.row(2) = hs[k].n.transpose();
        if (std::abs(M.determinant()) < 1e-12) continue;
        const Vec3 x = M.partialPivLu().solve(Vec3(hs[i].d, hs[j].d, hs[k].d));
        bool ok = x.allFinite();
        for (int t = 0; ok && t < n; ++t) ok = hs[t].eval(x) >= -feas * hs[t].n.norm();
        if (!ok) continue;
        const bool dup = std::any_of(poly.vertices.begin(), poly.vertices.end(),
                                     [&](const Vec3& v) { return (v - x).norm() <= merge; });
        if (!dup) poly.vertices.push_back(x);
      }
    }
  }
  if (poly.vertices.size() < 4) return poly;

  const Vec3 centre =
      std::accumulate(poly.vertices.begin(), poly.vertices.end(), Vec3(Vec3::Zero())) / poly.vertices.size();
  for (int f = 0; f < n; ++f) {
    auto& idx = poly.incident[f];
    const Vec3 nf = hs[f].n.normalized();
    for (int v = 0; v < static_cast<int>(poly.vertices.size()); ++v) {
      if (std::abs(hs[f].eval(poly.vertices[v])) <= merge * hs[f].n.norm()) idx.push_back(v);
    }
    if (idx.size() < 3) continue;
    Vec3 fc = Vec3::Zero();
    for (int v : idx) fc += poly.vertices[v];
    fc /= static_cast<double>(idx.size());
    const Vec3 u = nf.unitOrthogonal();
    const Vec3 w = nf.cross(u);
    std::vector<int> ring = idx;
    std::sort(ring.begin(), ring.end(), [&](int a, int b) {
      const Vec3 da = poly.vertices[a] - fc;
      const Vec3 db = poly.vertices[b] - fc;
      return std::atan2(da.dot(w), da.dot(u)) < std::atan2(db.dot(w), db.dot(u));
    });
    for (std::size_t t = 1; t + 1 < ring.size(); ++t) {
      const Vec3 a = poly.vertices[ring[0]] - centre;
      const Vec3 b = poly.vertices[ring[t]] - centre;
      const Vec3 c = poly.vertices[ring[t + 1]] - centre;
      poly.volume += std::abs(a.dot(b.cross(c))) / 6.0;
    }
  }
  return poly;
}

double block_volume(const BlockCode& code, std::span<const JointPlane> joints, std::span<const HalfSpace> facets,
                    const OrientedBox& box) {
  require(code.size() == joints.size(), "block code length must equal the joint count");
  std::vector<HalfSpace> hs;
  for (std::size_t i = 0; i < joints.size(); ++i) {
    if (!joints[i].location) fail(ErrorCode::InvalidArgument, "joint '" + joints[i].id + "' has no location");
    const Vec3 n = normal_from_orientation(joints[i].orientation);
    const Vec3 m = code.digits()[i] == Side::Upper ? n : Vec3(-n);
    hs.push_back(HalfSpace::through(m, *joints[i].location));
  }
  hs.insert(hs.end(), facets.begin(), facets.end());
  const std::size_t first_box = hs.size();
  const auto bh = box.halfspaces();
  hs.insert(hs.end(), bh.begin(), bh.end());

  const ConvexPolyhedron poly = halfspace_intersection(hs);
  for (std::size_t f = first_box; f < hs.size(); ++f) {
    if (!poly.incident[f].empty() && poly.volume > 0.0) fail(ErrorCode::Unbounded, "block escapes the bounding box");
  }
  return poly.volume;
}

}  // namespace fuzzyblock::kbt
