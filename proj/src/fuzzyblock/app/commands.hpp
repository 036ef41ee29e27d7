#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzyblock/anfis/tsk.hpp"
#include "fuzzyblock/app/project.hpp"

namespace fuzzyblock::app {

// Command-line overrides of project settings.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs;
  std::optional<int> resolution;
  std::optional<fuzzy::DeltaVariant> delta_variant;
  std::optional<std::pair<double, double>> range;
  std::optional<int> bins;
};

ProjectConfig with_overrides(ProjectConfig p, const RunOverrides& o);

enum class Format { Csv, Table, Svg };

std::string kbt_analyze(const ProjectConfig& p);
std::string kbt_volume(const ProjectConfig& p);

struct PbrRow {
  int facet = 0;
  std::string code;
  double angle_deg = 0.0;
  fblock::Removability r;
  std::string label;
};
std::vector<PbrRow> fuzzy_pbr_rows(const ProjectConfig& p);
std::string fuzzy_pbr(const ProjectConfig& p, Format f);

std::string geom_eval(const ProjectConfig& p, Format f);

std::string surrogate_gen(const ProjectConfig& p);
std::vector<anfis::Sample> parse_dataset_csv(const std::string& text);
std::string dataset_csv(const std::vector<anfis::Sample>& samples, double sf_cap);

struct TrainOutput {
  anfis::TskModel model;
  std::vector<double> rmse_history;
  std::optional<double> holdout_rmse;  // normalized units
  std::string report;
};
// Normalizes, initializes and trains on the dataset. With a holdout fraction,
// the seeded split's training part is used and the held-out RMSE reported.
TrainOutput surrogate_train(const std::vector<anfis::Sample>& samples, const AnfisConfig& cfg, std::uint64_t seed);

std::string surrogate_predict(const anfis::TskModel& model, const std::string& data_csv);
// Damage map as CSV (angle_deg, sf) or SVG ring around `section`.
std::string surrogate_map(const anfis::TskModel& model, int bins, Format f, const std::vector<kbt::Vec2>& section,
                          double cap);

// SVG from any CSV product: blocks and damage-map files become rings, rasters
// heatmaps, everything else a scatter of the first two numeric columns.
std::string plot(const std::string& csv_text, const ProjectConfig* project);

}  // namespace fuzzyblock::app
