#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fuzzyblock/anfis/dataset.hpp"
#include "fuzzyblock/fblock/fuzzy_block.hpp"
#include "fuzzyblock/geometry/fuzzy_geometry.hpp"
#include "fuzzyblock/kbt/tunnel.hpp"

namespace fuzzyblock::app {

inline constexpr int kProjectSchemaVersion = 1;

struct AnfisConfig {
  std::vector<int> mfs_per_input = {3, 3, 3, 3, 3};
  int epochs = 100;
  double learn_rate = 0.01;
  double range_lo = -1.0;
  double range_hi = 1.0;
  int angular_bins = 72;
  // Fraction of rows held out (seeded split) when reporting accuracy; 0 trains on all.
  double holdout = 0.0;
};

struct FuzzyConfig {
  int resolution = fblock::kDefaultResolution;
  int levels = fuzzy::kDefaultAlphaLevels;
};

struct GeometryConfig {
  std::optional<geom::Shape> shape;
  geom::BoundingRect bbox{-1.0, -1.0, 1.0, 1.0};
  int nx = 64;
  int ny = 64;
  double tol = geom::kDefaultTol;
};

struct ProjectConfig {
  int schema_version = kProjectSchemaVersion;
  std::optional<kbt::TunnelSection> tunnel;
  double unit_weight = 27.0;
  std::vector<kbt::JointPlane> joints;
  std::vector<fblock::FuzzyJoint> fuzzy_joints;
  kbt::BlockAnalysisOptions analysis;
  std::uint64_t seed = 1;
  anfis::DatasetSpec dataset;  // tunnel, joints and unit weight mirror the fields above
  AnfisConfig anfis;
  FuzzyConfig fuzzy;
  fuzzy::DeltaVariant delta_variant = fuzzy::DeltaVariant::Paper;
  fblock::LabelThresholds labels;
  GeometryConfig geometry;

  const kbt::TunnelSection& require_tunnel() const;
  kbt::Vec3 gravity() const { return {0.0, 0.0, -unit_weight}; }
  // Fuzzy joints if given, else the crisp joints as degenerate fuzzy numbers.
  std::vector<fblock::FuzzyJoint> effective_fuzzy_joints() const;
};

// Strict: unknown keys and wrong types are schema errors naming the key path;
// range violations are semantic errors naming the key path.
ProjectConfig parse_project_text(const std::string& text, const std::string& label = "project");
ProjectConfig load_project(const std::string& path);

}  // namespace fuzzyblock::app
