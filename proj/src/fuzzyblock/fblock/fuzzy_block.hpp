#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "fuzzyblock/fuzzy/trapezoid.hpp"
#include "fuzzyblock/geometry/fuzzy_geometry.hpp"
#include "fuzzyblock/kbt/block.hpp"

namespace fuzzyblock::fblock {

using fuzzy::DeltaVariant;
using fuzzy::SampledFuzzyNumber;
using fuzzy::TrapezoidalNumber;
using kbt::Vec3;

struct FuzzyOrientation {
  TrapezoidalNumber dip;            // degrees, support inside [0, 90]
  TrapezoidalNumber dip_direction;  // degrees, support narrower than 90

  static FuzzyOrientation crisp(const kbt::Orientation& o) {
    return {TrapezoidalNumber::crisp(o.dip), TrapezoidalNumber::crisp(o.dip_direction)};
  }
  void validate() const;
};

struct FuzzyJoint {
  std::string id;
  FuzzyOrientation orientation;
  TrapezoidalNumber friction_deg;
};

// Levelwise bounds of each component of the upward joint normal over the
// alpha-cut box of (dip, dip direction).
std::array<SampledFuzzyNumber, 3> fuzzy_normal(const FuzzyOrientation& fo, int levels = fuzzy::kDefaultAlphaLevels);

// sum_k coeffs[k] * v[k] >= rhs, with fuzzy coefficients and right-hand side.
class FuzzyHalfSpaceConstraint {
 public:
  FuzzyHalfSpaceConstraint(std::vector<TrapezoidalNumber> coeffs, TrapezoidalNumber rhs);

  // a x + b y >= c for the given fuzzy line.
  static FuzzyHalfSpaceConstraint half_plane(const geom::FuzzyLineImplicit& line);
  // a x + b y >= d.
  static FuzzyHalfSpaceConstraint half_plane(const geom::FuzzyLineImplicit& line, TrapezoidalNumber d);
  // n . v >= 0 with linearized fuzzy normal components.
  static FuzzyHalfSpaceConstraint homogeneous(const std::array<SampledFuzzyNumber, 3>& normal);
  static FuzzyHalfSpaceConstraint homogeneous(const std::array<TrapezoidalNumber, 3>& normal);
  static FuzzyHalfSpaceConstraint crisp(const Vec3& normal);

  const std::vector<TrapezoidalNumber>& coeffs() const { return coeffs_; }
  const TrapezoidalNumber& rhs() const { return rhs_; }
  std::size_t dimension() const { return coeffs_.size(); }
  bool is_homogeneous() const { return rhs_ == TrapezoidalNumber::crisp(0.0); }
  // Reverses the inequality side of a homogeneous constraint.
  FuzzyHalfSpaceConstraint flipped() const;
  // Same constraint with every coefficient widened by `extra` on both sides.
  FuzzyHalfSpaceConstraint widened(double extra) const;

  TrapezoidalNumber evaluate(std::span<const double> v) const;

 private:
  std::vector<TrapezoidalNumber> coeffs_;
  TrapezoidalNumber rhs_;
};

double constraint_poss(const FuzzyHalfSpaceConstraint& c, std::span<const double> v,
                       DeltaVariant variant = DeltaVariant::Paper);

enum class SystemKind { JointPyramid, BlockPyramid };

class FuzzySystem {
 public:
  FuzzySystem(std::vector<FuzzyHalfSpaceConstraint> constraints, SystemKind kind);

  const std::vector<FuzzyHalfSpaceConstraint>& constraints() const { return constraints_; }
  SystemKind kind() const { return kind_; }
  std::size_t dimension() const { return constraints_.front().dimension(); }
  bool is_homogeneous() const;
  // min over constraints of constraint_poss at v.
  double min_poss(std::span<const double> v, DeltaVariant variant) const;

 private:
  std::vector<FuzzyHalfSpaceConstraint> constraints_;
  SystemKind kind_;
};

// Possibility of joint block at a point or direction.
double pjb(const FuzzySystem& system, std::span<const double> eval, DeltaVariant variant = DeltaVariant::Paper);

inline constexpr int kDefaultResolution = 10000;
inline constexpr int kRefineSteps = 20;

struct DirectionSup {
  double value = 0.0;
  std::vector<double> direction;
};

// sup over unit directions of min_i Poss(L_i >= D_i) for a homogeneous system,
// estimated from below: Fibonacci lattice (circle in 2-D) plus directions
// derived from the core normals, then golden-section refinement around the
// best one.
DirectionSup direction_sup(const FuzzySystem& system, int resolution = kDefaultResolution,
                           DeltaVariant variant = DeltaVariant::Paper);

// Possibility that the (block) pyramid is nonempty.
double pbp(const FuzzySystem& system, int resolution = kDefaultResolution, DeltaVariant variant = DeltaVariant::Paper);

struct Removability {
  double pbp = 0.0;      // of the block pyramid
  double pjb_sup = 0.0;  // direction sup over the joint pyramid
  double pbr = 0.0;      // min(1 - pbp, pjb_sup)
};

Removability removability(const FuzzySystem& jp_system, const FuzzySystem& bp_system,
                          int resolution = kDefaultResolution, DeltaVariant variant = DeltaVariant::Paper);
double pbr(const FuzzySystem& jp_system, const FuzzySystem& bp_system, int resolution = kDefaultResolution,
           DeltaVariant variant = DeltaVariant::Paper);

struct LabelThresholds {
  double finite = 0.95;
  double quasi_finite = 0.7;
  double not_so_very_finite = 0.3;

  void validate() const;
};

// Linguistic finiteness from the block-pyramid possibility, graded on 1 - pbp.
std::string finiteness_label(double pbp_value, const LabelThresholds& t = {});

// Joint pyramid of fuzzy joints for a block code (+n for U, -n for L).
FuzzySystem fuzzy_joint_pyramid(const kbt::BlockCode& code, std::span<const FuzzyJoint> joints,
                                int levels = fuzzy::kDefaultAlphaLevels);
// JP plus the crisp free-face constraint.
FuzzySystem fuzzy_block_pyramid(const FuzzySystem& jp, const Vec3& free_face);

}  // namespace fuzzyblock::fblock
