#include "fuzzyblock/fblock/fuzzy_block.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "fuzzyblock/error.hpp"
#include "fuzzyblock/parallel.hpp"

namespace fuzzyblock::fblock {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Range {
  double lo, hi;
};

// True when target + 360 k lies in [lo, hi] for some integer k.
bool hits_angle(double lo, double hi, double target) {
  const double k = std::ceil((lo - target) / 360.0);
  return target + 360.0 * k <= hi;
}

Range sin_range(double lo, double hi) {
  Range r{std::min(std::sin(lo * kDeg), std::sin(hi * kDeg)), std::max(std::sin(lo * kDeg), std::sin(hi * kDeg))};
  if (hits_angle(lo, hi, 90.0)) r.hi = 1.0;
  if (hits_angle(lo, hi, 270.0)) r.lo = -1.0;
  return r;
}

Range cos_range(double lo, double hi) {
  Range r{std::min(std::cos(lo * kDeg), std::cos(hi * kDeg)), std::max(std::cos(lo * kDeg), std::cos(hi * kDeg))};
  if (hits_angle(lo, hi, 0.0)) r.hi = 1.0;
  if (hits_angle(lo, hi, 180.0)) r.lo = -1.0;
  return r;
}

Range product(Range a, Range b) {
  const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

std::array<double, 3> to_array(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

}  // namespace

void FuzzyOrientation::validate() const {
  if (dip.a1() < 0.0 || dip.a4() > 90.0) {
    fail(ErrorCode::Semantic, fmt::format("fuzzy dip support [{}, {}] must lie inside [0, 90]", dip.a1(), dip.a4()));
  }
  if (!(dip_direction.a4() - dip_direction.a1() < 90.0)) {
    fail(ErrorCode::Semantic, fmt::format("fuzzy dip direction support width {} must be below 90 degrees",
                                          dip_direction.a4() - dip_direction.a1()));
  }
}

std::array<SampledFuzzyNumber, 3> fuzzy_normal(const FuzzyOrientation& fo, int levels) {
  fo.validate();
  std::array<std::vector<fuzzy::AlphaInterval>, 3> cuts;
  for (double alpha : fuzzy::alpha_grid(levels)) {
    const auto d = fuzzy::alpha_cut(fo.dip, alpha);
    const auto t = fuzzy::alpha_cut(fo.dip_direction, alpha);
    // sin and cos are monotone on [0, 90] for the dip.
    const Range sd{std::sin(d.lo * kDeg), std::sin(d.hi * kDeg)};
    const Range cd{std::cos(d.hi * kDeg), std::cos(d.lo * kDeg)};
    const Range x = product(sd, sin_range(t.lo, t.hi));
    const Range y = product(sd, cos_range(t.lo, t.hi));
    cuts[0].push_back({alpha, x.lo, x.hi});
    cuts[1].push_back({alpha, y.lo, y.hi});
    cuts[2].push_back({alpha, cd.lo, cd.hi});
  }
  return {SampledFuzzyNumber(std::move(cuts[0])), SampledFuzzyNumber(std::move(cuts[1])),
          SampledFuzzyNumber(std::move(cuts[2]))};
}

FuzzyHalfSpaceConstraint::FuzzyHalfSpaceConstraint(std::vector<TrapezoidalNumber> coeffs, TrapezoidalNumber rhs)
    : coeffs_(std::move(coeffs)), rhs_(rhs) {
  require(coeffs_.size() == 2 || coeffs_.size() == 3, "fuzzy half-space constraints are 2-D or 3-D");
}

FuzzyHalfSpaceConstraint FuzzyHalfSpaceConstraint::half_plane(const geom::FuzzyLineImplicit& line) {
  return {{line.a(), line.b()}, line.c()};
}

FuzzyHalfSpaceConstraint FuzzyHalfSpaceConstraint::half_plane(const geom::FuzzyLineImplicit& line,
                                                              TrapezoidalNumber d) {
  return {{line.a(), line.b()}, d};
}

FuzzyHalfSpaceConstraint FuzzyHalfSpaceConstraint::homogeneous(const std::array<SampledFuzzyNumber, 3>& normal) {
  return {{fuzzy::fit_trapezoid(normal[0]), fuzzy::fit_trapezoid(normal[1]), fuzzy::fit_trapezoid(normal[2])},
          TrapezoidalNumber::crisp(0.0)};
}

FuzzyHalfSpaceConstraint FuzzyHalfSpaceConstraint::homogeneous(const std::array<TrapezoidalNumber, 3>& normal) {
  return {{normal[0], normal[1], normal[2]}, TrapezoidalNumber::crisp(0.0)};
}

FuzzyHalfSpaceConstraint FuzzyHalfSpaceConstraint::crisp(const Vec3& n) {
  return homogeneous(std::array<TrapezoidalNumber, 3>{TrapezoidalNumber::crisp(n.x()), TrapezoidalNumber::crisp(n.y()),
                                                      TrapezoidalNumber::crisp(n.z())});
}

FuzzyHalfSpaceConstraint FuzzyHalfSpaceConstraint::flipped() const {
  require(is_homogeneous(), "only homogeneous constraints can be flipped");
  std::vector<TrapezoidalNumber> c;
  for (const auto& t : coeffs_) c.push_back(fuzzy::scale(t, -1.0));
  return {std::move(c), rhs_};
}

FuzzyHalfSpaceConstraint FuzzyHalfSpaceConstraint::widened(double extra) const {
  require(extra >= 0.0, "widening must be nonnegative");
  std::vector<TrapezoidalNumber> c;
  for (const auto& t : coeffs_) c.emplace_back(t.a1() - extra, t.a2(), t.a3(), t.a4() + extra);
  return {std::move(c), rhs_};
}

TrapezoidalNumber FuzzyHalfSpaceConstraint::evaluate(std::span<const double> v) const {
  require(v.size() == coeffs_.size(), "evaluation argument dimension does not match the constraint");
  return fuzzy::linear_combine(v, coeffs_);
}

double constraint_poss(const FuzzyHalfSpaceConstraint& c, std::span<const double> v, DeltaVariant variant) {
  return fuzzy::exceedance_poss(c.evaluate(v), c.rhs(), variant);
}

FuzzySystem::FuzzySystem(std::vector<FuzzyHalfSpaceConstraint> constraints, SystemKind kind)
    : constraints_(std::move(constraints)), kind_(kind) {
  require(!constraints_.empty(), "a fuzzy system needs at least one constraint");
  for (const auto& c : constraints_) {
    require(c.dimension() == constraints_.front().dimension(), "fuzzy system mixes 2-D and 3-D constraints");
  }
  if (kind_ == SystemKind::BlockPyramid) require(is_homogeneous(), "a block pyramid must be homogeneous");
}

bool FuzzySystem::is_homogeneous() const {
  return std::all_of(constraints_.begin(), constraints_.end(), [](const auto& c) { return c.is_homogeneous(); });
}

double FuzzySystem::min_poss(std::span<const double> v, DeltaVariant variant) const {
  double m = 1.0;
  for (const auto& c : constraints_) {
    m = std::min(m, constraint_poss(c, v, variant));
    if (m <= 0.0) break;
  }
  return m;
}

double pjb(const FuzzySystem& system, std::span<const double> eval, DeltaVariant variant) {
  require(system.kind() == SystemKind::JointPyramid, "pjb expects a joint-pyramid system");
  return system.min_poss(eval, variant);
}

namespace {

struct Candidate {
  double value = -1.0;
  Vec3 dir = Vec3::Zero();
};

Vec3 lattice_point(std::size_t i, std::size_t n, std::size_t dim) {
  if (dim == 2) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    return {std::cos(t), std::sin(t), 0.0};
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = golden * static_cast<double>(i);
  return {r * std::cos(phi), r * std::sin(phi), z};
}

// Directions suggested by the core of the system: each core normal, their
// sum, and an interior witness of the crisp core pyramid when it has one.
std::vector<Vec3> core_seeds(const FuzzySystem& system, std::size_t dim) {
  std::vector<Vec3> normals;
  for (const auto& c : system.constraints()) {
    Vec3 n = Vec3::Zero();
    for (std::size_t k = 0; k < dim; ++k) n(static_cast<int>(k)) = c.coeffs()[k].core_mid();
    if (n.norm() > 1e-12) normals.push_back(n.normalized());
  }
  std::vector<Vec3> seeds = normals;
  Vec3 sum = Vec3::Zero();
  for (const auto& n : normals) sum += n;
  if (sum.norm() > 1e-12) seeds.push_back(sum.normalized());
  if (dim == 3 && !normals.empty()) {
    try {
      const auto res = kbt::pyramid_nonempty(kbt::HalfSpaceSystem(normals));
      if (res.witness) seeds.push_back(*res.witness);
    } catch (const Error&) {
    }
  }
  return seeds;
}

}  // namespace

DirectionSup direction_sup(const FuzzySystem& system, int resolution, DeltaVariant variant) {
  require(system.is_homogeneous(), "direction sup needs a homogeneous system");
  require(resolution >= 16, "direction sup resolution must be at least 16");
  const std::size_t dim = system.dimension();
  auto f = [&](const Vec3& v) {
    const auto a = to_array(v);
    return system.min_poss(std::span<const double>(a.data(), dim), variant);
  };

  // Lattice sweep: per-chunk maxima reduced in chunk order, first index wins ties.
  const std::size_t n = static_cast<std::size_t>(resolution);
  const std::size_t chunks = std::min<std::size_t>(64, n);
  std::vector<Candidate> chunk_best(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * n / chunks;
    const std::size_t end = (c + 1) * n / chunks;
    Candidate best;
    for (std::size_t i = begin; i < end; ++i) {
      const Vec3 v = lattice_point(i, n, dim);
      const double val = f(v);
      if (val > best.value) best = {val, v};
    }
    chunk_best[c] = best;
  });
  Candidate best;
  for (const auto& c : chunk_best) {
    if (c.value > best.value) best = c;
  }
  for (const auto& s : core_seeds(system, dim)) {
    const double val = f(s);
    if (val > best.value) best = {val, s};
  }

  // Golden-section refinement along each tangent direction of the best cell.
  const double spacing = dim == 2 ? 2.0 * std::numbers::pi / static_cast<double>(n)
                                  : std::sqrt(4.0 * std::numbers::pi / static_cast<double>(n));
  const double radius = 2.0 * spacing;
  std::vector<Vec3> tangents;
  if (dim == 2) {
    tangents.push_back(Vec3(-best.dir.y(), best.dir.x(), 0.0));
  } else {
    const Vec3 t1 = best.dir.unitOrthogonal();
    tangents.push_back(t1);
    tangents.push_back(best.dir.cross(t1));
  }
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (const Vec3& t : tangents) {
    const Vec3 base = best.dir;
    auto at = [&](double theta) { return Vec3((std::cos(theta) * base + std::sin(theta) * t).normalized()); };
    double lo = -radius;
    double hi = radius;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = f(at(x1));
    double f2 = f(at(x2));
    for (int step = 0; step < kRefineSteps; ++step) {
      if (f1 > best.value) best = {f1, at(x1)};
      if (f2 > best.value) best = {f2, at(x2)};
      if (f1 >= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - invphi * (hi - lo);
        f1 = f(at(x1));
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + invphi * (hi - lo);
        f2 = f(at(x2));
      }
    }
    if (f1 > best.value) best = {f1, at(x1)};
    if (f2 > best.value) best = {f2, at(x2)};
  }

  DirectionSup out;
  out.value = std::clamp(best.value, 0.0, 1.0);
  const auto a = to_array(best.dir);
  out.direction.assign(a.begin(), a.begin() + static_cast<long>(dim));
  return out;
}

double pbp(const FuzzySystem& system, int resolution, DeltaVariant variant) {
  require(resolution >= 1000, "pbp resolution must be at least 1000");
  return direction_sup(system, resolution, variant).value;
}

Removability removability(const FuzzySystem& jp_system, const FuzzySystem& bp_system, int resolution,
                          DeltaVariant variant) {
  require(jp_system.kind() == SystemKind::JointPyramid, "first operand of pbr must be a joint pyramid");
  require(bp_system.kind() == SystemKind::BlockPyramid, "second operand of pbr must be a block pyramid");
  Removability r;
  r.pbp = pbp(bp_system, resolution, variant);
  r.pjb_sup = pbp(jp_system, resolution, variant);
  r.pbr = std::min(1.0 - r.pbp, r.pjb_sup);
  return r;
}

double pbr(const FuzzySystem& jp_system, const FuzzySystem& bp_system, int resolution, DeltaVariant variant) {
  return removability(jp_system, bp_system, resolution, variant).pbr;
}

void LabelThresholds::validate() const {
  if (!(finite <= 1.0 && finite > quasi_finite && quasi_finite > not_so_very_finite && not_so_very_finite > 0.0)) {
    fail(ErrorCode::Semantic, "label thresholds must satisfy 1 >= finite > quasi_finite > not_so_very_finite > 0");
  }
}

std::string finiteness_label(double pbp_value, const LabelThresholds& t) {
  require(pbp_value >= 0.0 && pbp_value <= 1.0, "pbp must lie in [0, 1]");
  const double finiteness = 1.0 - pbp_value;
  if (finiteness >= t.finite) return "finite";
  if (finiteness >= t.quasi_finite) return "quasi finite";
  if (finiteness >= t.not_so_very_finite) return "not so very finite";
  return "infinite";
}

FuzzySystem fuzzy_joint_pyramid(const kbt::BlockCode& code, std::span<const FuzzyJoint> joints, int levels) {
  require(code.size() == joints.size(), "block code length must equal the joint count");
  std::vector<FuzzyHalfSpaceConstraint> cs;
  for (std::size_t i = 0; i < joints.size(); ++i) {
    auto c = FuzzyHalfSpaceConstraint::homogeneous(fuzzy_normal(joints[i].orientation, levels));
    cs.push_back(code.digits()[i] == kbt::Side::Upper ? c : c.flipped());
  }
  return FuzzySystem(std::move(cs), SystemKind::JointPyramid);
}

FuzzySystem fuzzy_block_pyramid(const FuzzySystem& jp, const Vec3& free_face) {
  auto cs = jp.constraints();
  cs.push_back(FuzzyHalfSpaceConstraint::crisp(free_face.normalized()));
  return FuzzySystem(std::move(cs), SystemKind::BlockPyramid);
}

}  // namespace fuzzyblock::fblock
