#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fuzzyblock/kbt/tunnel.hpp"

namespace fuzzyblock::anfis {

// Column order shared by the dataset file, the normalization record and the
// surrogate inputs.
inline const std::vector<std::string> kInputNames = {"dip_deg", "dipdir_deg", "phi_deg", "angle_deg", "volume_m3"};
inline const std::string kTargetName = "sf";
inline constexpr int kAngleInput = 3;

struct VarRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct DatasetSpec {
  kbt::TunnelSection tunnel = kbt::TunnelSection::square(4.0);
  double unit_weight = 27.0;  // kN/m3
  // Joint set template. Joint 0 is the changeable joint whose dip and dip
  // direction are sampled; the sampled friction applies to every joint.
  std::vector<kbt::JointPlane> joints;
  VarRange dip{50.0, 70.0};
  VarRange dip_direction{0.0, 40.0};
  VarRange friction{15.0, 25.0};
  VarRange position_angle{-180.0, 180.0};
  int sample_count = 283;
  std::uint64_t seed = 1;
  kbt::BlockAnalysisOptions analysis;
  // Stable and safe blocks have their safety factor capped here.
  double sf_cap = 5.0;
  int max_retries = 16;

  void validate() const;
};

struct Sample {
  std::vector<double> inputs;  // kInputNames order
  double target = 0.0;
};

// The safety-factor pipeline for one configuration: the critical (lowest
// S.F) removable block of the facet at `angle_deg`. Throws on a kernel
// failure of any removable block.
struct CriticalBlock {
  double safety_factor = 0.0;  // capped
  double volume = 0.0;         // 0 when nothing is removable
  std::string code;
};
CriticalBlock critical_block(std::span<const kbt::JointPlane> joints, const kbt::TunnelSection& tunnel,
                             double unit_weight, double angle_deg, const kbt::BlockAnalysisOptions& analysis,
                             double sf_cap);

// Joint set for one draw of the changeable parameters.
std::vector<kbt::JointPlane> sampled_joints(const DatasetSpec& spec, double dip, double dip_direction,
                                            double friction);

std::vector<Sample> generate_dataset(const DatasetSpec& spec);

// Uniform double in [0, 1) keyed by (seed, index, attempt, draw); order- and
// schedule-independent.
double keyed_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t attempt, std::uint64_t draw);

struct ColumnRange {
  std::string name;
  double min = 0.0;
  double max = 1.0;
};

// Affine maps of every input column and the target onto [lo, hi].
struct NormalizationRecord {
  double lo = -1.0;
  double hi = 1.0;
  std::vector<ColumnRange> inputs;
  ColumnRange target{kTargetName, 0.0, 1.0};

  double forward(const ColumnRange& c, double x) const { return lo + (x - c.min) * (hi - lo) / (c.max - c.min); }
  double inverse(const ColumnRange& c, double y) const { return c.min + (y - lo) * (c.max - c.min) / (hi - lo); }
  std::vector<double> normalize_inputs(std::span<const double> raw) const;
  double normalize_target(double y) const { return forward(target, y); }
  double denormalize_target(double y) const { return inverse(target, y); }
};

struct NormalizedData {
  std::vector<Sample> samples;
  NormalizationRecord record;
};

NormalizedData normalize(std::span<const Sample> samples, double lo = -1.0, double hi = 1.0,
                         const std::vector<std::string>& names = kInputNames);

std::vector<double> column_medians(std::span<const Sample> samples);

// Seeded permutation split: the first round(train_fraction * n) shuffled
// indices train, the rest are held out.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
Split holdout_split(std::size_t n, double train_fraction, std::uint64_t seed);

}  // namespace fuzzyblock::anfis
