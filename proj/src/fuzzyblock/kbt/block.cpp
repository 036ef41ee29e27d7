#include "fuzzyblock/kbt/block.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "fuzzyblock/error.hpp"
#include "fuzzyblock/kbt/simplex.hpp"

namespace fuzzyblock::kbt {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kMarginTol = 1e-10;
constexpr double kFeasTol = 1e-9;

}  // namespace

void Orientation::validate() const {
  if (!(dip >= 0.0 && dip <= 90.0)) fail(ErrorCode::Semantic, fmt::format("dip {} outside [0, 90]", dip));
  if (!(dip_direction >= 0.0 && dip_direction < 360.0)) {
    fail(ErrorCode::Semantic, fmt::format("dip direction {} outside [0, 360)", dip_direction));
  }
}

void JointPlane::validate() const {
  orientation.validate();
  if (!(friction_deg >= 0.0 && friction_deg < 90.0)) {
    fail(ErrorCode::Semantic, fmt::format("friction angle {} outside [0, 90)", friction_deg));
  }
}

Vec3 normal_from_orientation(const Orientation& o) {
  const double d = o.dip * kDeg;
  const double dd = o.dip_direction * kDeg;
  return {std::sin(d) * std::sin(dd), std::sin(d) * std::cos(dd), std::cos(d)};
}

HalfSpaceSystem::HalfSpaceSystem(std::vector<Vec3> normals) : normals_(std::move(normals)) {
  for (const auto& n : normals_) {
    require(std::abs(n.norm() - 1.0) <= 1e-9, "half-space normals must be unit length");
  }
}

HalfSpaceSystem HalfSpaceSystem::from_directions(std::vector<Vec3> directions) {
  for (auto& d : directions) {
    const double len = d.norm();
    require(len > 0.0 && std::isfinite(len), "half-space normal must be a nonzero finite vector");
    d /= len;
  }
  return HalfSpaceSystem(std::move(directions));
}

HalfSpaceSystem HalfSpaceSystem::with(const Vec3& extra) const {
  auto n = normals_;
  n.push_back(extra.normalized());
  return HalfSpaceSystem(std::move(n));
}

bool HalfSpaceSystem::contains(const Vec3& v, double tol) const {
  for (const auto& n : normals_) {
    if (n.dot(v) < -tol) return false;
  }
  return true;
}

PyramidResult pyramid_nonempty(const HalfSpaceSystem& sys) {
  PyramidResult out;
  if (sys.empty()) {
    out.nonempty = true;
    out.witness = Vec3(0.0, 0.0, 1.0);
    out.margin = 1.0;
    return out;
  }
  const int m = static_cast<int>(sys.size());

  // Variables u = v + 1 (in [0, 2]) and w = eps + 2, so the origin is feasible.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 4, 4);
  Eigen::VectorXd b(m + 4);
  for (int i = 0; i < m; ++i) {
    const Vec3& n = sys.normals()[i];
    A.row(i) << -n.x(), -n.y(), -n.z(), 1.0;
    b(i) = 2.0 - n.sum();
  }
  for (int k = 0; k < 3; ++k) {
    A(m + k, k) = 1.0;
    b(m + k) = 2.0;
  }
  A(m + 3, 3) = 1.0;
  b(m + 3) = 4.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(4);
  c(3) = 1.0;
  const LpResult lp = solve_lp(A, b, c);
  if (lp.status != LpStatus::Optimal) fail(ErrorCode::Numeric, "pyramid LP did not reach an optimum");
  out.margin = lp.objective - 2.0;
  if (out.margin > kMarginTol) {
    const Vec3 v = lp.x.head<3>() - Vec3::Ones();
    out.nonempty = true;
    out.witness = v.normalized();
    return out;
  }

  // No interior. Look for a nonzero boundary ray by pushing each coordinate
  // as far as it goes in both directions.
  Eigen::MatrixXd A2 = Eigen::MatrixXd::Zero(m + 3, 3);
  Eigen::VectorXd b2(m + 3);
  for (int i = 0; i < m; ++i) {
    const Vec3& n = sys.normals()[i];
    A2.row(i) = -n.transpose();
    b2(i) = -n.sum();
  }
  for (int k = 0; k < 3; ++k) {
    A2(m + k, k) = 1.0;
    b2(m + k) = 2.0;
  }
  for (int k = 0; k < 3; ++k) {
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd c2 = Eigen::VectorXd::Zero(3);
      c2(k) = sign;
      const LpResult r = solve_lp(A2, b2, c2);
      if (r.status != LpStatus::Optimal) fail(ErrorCode::Numeric, "pyramid boundary LP did not reach an optimum");
      const Vec3 v = r.x - Vec3::Ones();
      if (std::abs(v(k)) > 1e-9) {
        out.nonempty = true;
        out.boundary_only = true;
        out.witness = v.normalized();
        return out;
      }
    }
  }
  return out;
}

BlockCode BlockCode::parse(const std::string& s) {
  std::vector<Side> d;
  for (char ch : s) {
    if (ch == 'U' || ch == 'u') {
      d.push_back(Side::Upper);
    } else if (ch == 'L' || ch == 'l') {
      d.push_back(Side::Lower);
    } else {
      fail(ErrorCode::InvalidArgument, fmt::format("block code '{}' may only contain U and L", s));
    }
  }
  return BlockCode(std::move(d));
}

BlockCode BlockCode::from_index(std::size_t k, std::size_t n) {
  require(n < 63, "too many joints for code enumeration");
  std::vector<Side> d(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    d[pos] = ((k >> (n - 1 - pos)) & 1u) ? Side::Upper : Side::Lower;
  }
  return BlockCode(std::move(d));
}

std::string BlockCode::str() const {
  std::string s;
  for (Side d : digits_) s += d == Side::Upper ? 'U' : 'L';
  return s;
}

HalfSpaceSystem joint_pyramid(const BlockCode& code, std::span<const JointPlane> joints) {
  require(code.size() == joints.size(), "block code length must equal the joint count");
  std::vector<Vec3> normals;
  normals.reserve(joints.size());
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const Vec3 n = normal_from_orientation(joints[i].orientation);
    normals.push_back(code.digits()[i] == Side::Upper ? n : Vec3(-n));
  }
  return HalfSpaceSystem(std::move(normals));
}

const char* to_string(BlockClass c) {
  switch (c) {
    case BlockClass::Infinite:
      return "infinite";
    case BlockClass::Tapered:
      return "tapered";
    case BlockClass::Removable:
      return "removable";
  }
  return "?";
}

Classification classify_block(const BlockCode& code, std::span<const JointPlane> joints, const Vec3& free_face) {
  const HalfSpaceSystem jp = joint_pyramid(code, joints);
  Classification out;
  out.jp = pyramid_nonempty(jp);
  out.bp = pyramid_nonempty(jp.with(free_face));
  if (out.bp.nonempty) {
    out.block_class = BlockClass::Infinite;
  } else if (out.jp.nonempty) {
    out.block_class = BlockClass::Removable;
  } else {
    out.block_class = BlockClass::Tapered;
  }
  return out;
}

std::string SlidingMode::label() const {
  switch (kind) {
    case ModeKind::Safe:
      return "safe";
    case ModeKind::Falling:
      return "falling";
    case ModeKind::Plane:
      return fmt::format("plane({})", i + 1);
    case ModeKind::Wedge:
      return fmt::format("wedge({},{})", i + 1, j + 1);
  }
  return "?";
}

SlidingMode sliding_mode(const HalfSpaceSystem& jp, const Vec3& r) {
  const double rn = r.norm();
  require(rn > 0.0 && std::isfinite(rn), "resultant force must be nonzero");
  if (!pyramid_nonempty(jp).nonempty) fail(ErrorCode::InvalidArgument, "sliding mode of an empty joint pyramid");
  const Vec3 rh = r / rn;
  const auto& m = jp.normals();

  SlidingMode best;
  double best_val = -std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec3& s, ModeKind kind, int i, int j) {
    if (!jp.contains(s, kFeasTol)) return;
    const double val = s.dot(rh);
    if (val > best_val + 1e-12) {
      best_val = val;
      best = {kind, i, j, s};
    }
  };

  consider(rh, ModeKind::Falling, -1, -1);
  for (int i = 0; i < static_cast<int>(m.size()); ++i) {
    const Vec3 p = rh - rh.dot(m[i]) * m[i];
    if (p.norm() > 1e-12) consider(p.normalized(), ModeKind::Plane, i, -1);
  }
  for (int i = 0; i < static_cast<int>(m.size()); ++i) {
    for (int j = i + 1; j < static_cast<int>(m.size()); ++j) {
      const Vec3 e = m[i].cross(m[j]);
      if (e.norm() < 1e-12) continue;
      const Vec3 s = e.dot(rh) >= 0.0 ? Vec3(e.normalized()) : Vec3(-e.normalized());
      consider(s, ModeKind::Wedge, i, j);
      consider(-s, ModeKind::Wedge, i, j);
    }
  }
  if (best_val <= 1e-12) {
    best.kind = ModeKind::Safe;
    best.i = best.j = -1;
  }
  return best;
}

double safety_factor(const SlidingMode& mode, const HalfSpaceSystem& jp, const Vec3& r,
                     std::span<const double> friction_deg) {
  require(friction_deg.size() == jp.size(), "one friction angle per joint pyramid face is required");
  const double scale = r.norm();
  switch (mode.kind) {
    case ModeKind::Falling:
      return 0.0;
    case ModeKind::Safe:
      return std::numeric_limits<double>::infinity();
    case ModeKind::Plane: {
      const Vec3& m = jp.normals().at(mode.i);
      const double normal = -r.dot(m);
      if (normal < -1e-9 * scale) {
        fail(ErrorCode::ModeInconsistency, fmt::format("negative normal reaction {} on plane {}", normal, mode.i + 1));
      }
      const double shear = (r - r.dot(m) * m).norm();
      if (shear <= 1e-12 * scale) return std::numeric_limits<double>::infinity();
      return std::max(0.0, normal) * std::tan(friction_deg[mode.i] * kDeg) / shear;
    }
    case ModeKind::Wedge: {
      const Vec3& mi = jp.normals().at(mode.i);
      const Vec3& mj = jp.normals().at(mode.j);
      Eigen::Matrix3d M;
      M.col(0) = mode.direction;
      M.col(1) = -mi;
      M.col(2) = -mj;
      const Vec3 sol = M.colPivHouseholderQr().solve(r);
      const double shear = sol(0);
      const double n1 = sol(1);
      const double n2 = sol(2);
      if (n1 < -1e-9 * scale || n2 < -1e-9 * scale) {
        fail(ErrorCode::ModeInconsistency,
             fmt::format("negative normal reaction ({}, {}) on wedge {}", n1, n2, mode.label()));
      }
      if (shear <= 1e-12 * scale) return std::numeric_limits<double>::infinity();
      return (std::max(0.0, n1) * std::tan(friction_deg[mode.i] * kDeg) +
              std::max(0.0, n2) * std::tan(friction_deg[mode.j] * kDeg)) /
             shear;
    }
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace fuzzyblock::kbt
