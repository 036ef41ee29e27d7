#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fuzzyblock::kbt {

using Vec3 = Eigen::Vector3d;

// Axis convention throughout: x = east, y = north, z = up.
struct Orientation {
  double dip = 0.0;            // degrees, [0, 90]
  double dip_direction = 0.0;  // degrees, [0, 360)

  void validate() const;
};

struct JointPlane {
  std::string id;
  Orientation orientation;
  double friction_deg = 0.0;  // [0, 90)
  std::optional<Vec3> location;

  void validate() const;
};

// Upward unit normal of a plane with the given dip and dip direction.
Vec3 normal_from_orientation(const Orientation& o);

// Homogeneous system n_i . v >= 0 with unit inward normals.
class HalfSpaceSystem {
 public:
  HalfSpaceSystem() = default;
  explicit HalfSpaceSystem(std::vector<Vec3> normals);
  // Normalizes each vector first; zero vectors are rejected.
  static HalfSpaceSystem from_directions(std::vector<Vec3> directions);

  const std::vector<Vec3>& normals() const { return normals_; }
  std::size_t size() const { return normals_.size(); }
  bool empty() const { return normals_.empty(); }
  HalfSpaceSystem with(const Vec3& extra) const;
  bool contains(const Vec3& v, double tol = 1e-9) const;

 private:
  std::vector<Vec3> normals_;
};

struct PyramidResult {
  bool nonempty = false;
  std::optional<Vec3> witness;  // unit vector inside the pyramid
  bool boundary_only = false;   // nonempty but without interior
  double margin = 0.0;          // max over |v_k| <= 1 of min_i n_i . v
};

// Decides whether a nonzero v with n_i . v >= 0 for every i exists.
// Throws Error(Numeric) if the LP fails.
PyramidResult pyramid_nonempty(const HalfSpaceSystem& sys);

enum class Side { Upper, Lower };

class BlockCode {
 public:
  BlockCode() = default;
  explicit BlockCode(std::vector<Side> digits) : digits_(std::move(digits)) {}
  static BlockCode parse(const std::string& s);
  // Code number k in lexicographic order over {L, U}^n.
  static BlockCode from_index(std::size_t k, std::size_t n);

  const std::vector<Side>& digits() const { return digits_; }
  std::size_t size() const { return digits_.size(); }
  std::string str() const;

 private:
  std::vector<Side> digits_;
};

// Joint pyramid of a block code: +n_i for U, -n_i for L.
HalfSpaceSystem joint_pyramid(const BlockCode& code, std::span<const JointPlane> joints);

enum class BlockClass { Infinite, Tapered, Removable };
const char* to_string(BlockClass c);

struct Classification {
  BlockClass block_class = BlockClass::Infinite;
  PyramidResult jp;
  PyramidResult bp;
  // A pyramid decided nonempty only through boundary rays.
  bool degenerate() const { return jp.boundary_only || bp.boundary_only; }
};

// Shi's theorem: infinite iff BP nonempty; removable iff BP empty and JP
// nonempty; tapered iff both empty. `free_face` is the inward-to-rock normal.
Classification classify_block(const BlockCode& code, std::span<const JointPlane> joints, const Vec3& free_face);

enum class ModeKind { Safe, Falling, Plane, Wedge };

struct SlidingMode {
  ModeKind kind = ModeKind::Safe;
  int i = -1;  // constraint indices into the joint pyramid (0-based)
  int j = -1;
  Vec3 direction = Vec3::Zero();

  // "plane(1)" style label with 1-based joint numbers.
  std::string label() const;
};

// Sliding direction maximizing v . r over unit v in the joint pyramid, by
// exact candidate enumeration (r itself, its projection on each face, each
// pairwise edge).
SlidingMode sliding_mode(const HalfSpaceSystem& jp, const Vec3& r);

// Limit-equilibrium safety factor with friction only. Falling gives 0, safe
// gives +infinity. friction_deg is indexed like the joint pyramid.
double safety_factor(const SlidingMode& mode, const HalfSpaceSystem& jp, const Vec3& r,
                     std::span<const double> friction_deg);

}  // namespace fuzzyblock::kbt
